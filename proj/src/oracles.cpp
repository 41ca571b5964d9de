#include "mfq/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mfq/errors.hpp"

namespace mfq {

std::size_t tensor_dim(int d, int n) {
  std::size_t r = 1;
  for (int k = 0; k < n; ++k) {
    r *= static_cast<std::size_t>(d);
    if (r > kOracleCap) throw CapacityError("full tensor oracle exceeds its size cap");
  }
  return r;
}

namespace {

std::vector<int> word_letters(std::size_t w, int d, int n) {
  std::vector<int> letters(n);
  for (int k = n - 1; k >= 0; --k) {
    letters[k] = static_cast<int>(w % static_cast<std::size_t>(d));
    w /= static_cast<std::size_t>(d);
  }
  return letters;
}

std::size_t letters_word(const std::vector<int>& letters, int d) {
  std::size_t w = 0;
  for (int l : letters) w = w * static_cast<std::size_t>(d) + static_cast<std::size_t>(l);
  return w;
}

}  // namespace

MultiIndex word_type(std::size_t word, int d, int n) {
  MultiIndex a = MultiIndex::zero(d);
  for (int l : word_letters(word, d, n)) a[l] += 1;
  return a;
}

Vec tensor_power(const Vec& z, int n) {
  Vec t = Vec::Ones(1);
  for (int k = 0; k < n; ++k) {
    Vec next(t.size() * z.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) next.segment(i * z.size(), z.size()) = t(i) * z;
    t = next;
  }
  return t;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

Mat tensor_symmetrizer(int d, int n) {
  const auto D = static_cast<Eigen::Index>(tensor_dim(d, n));
  Mat S = Mat::Zero(D, D);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double count = 0.0;
  do {
    for (Eigen::Index w = 0; w < D; ++w) {
      const auto letters = word_letters(static_cast<std::size_t>(w), d, n);
      std::vector<int> permuted(n);
      for (int k = 0; k < n; ++k) permuted[k] = letters[perm[k]];
      S(static_cast<Eigen::Index>(letters_word(permuted, d)), w) += 1.0;
    }
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return S / count;
}

Mat tensor_isometry(int d, int n) {
  const auto D = static_cast<Eigen::Index>(tensor_dim(d, n));
  const auto basis = level_basis(d, n);
  Mat J = Mat::Zero(D, static_cast<Eigen::Index>(basis.size()));
  // e^{v alpha} = sqrt(n!/alpha!) S(e^{(x) alpha}); build it literally.
  const Mat S = tensor_symmetrizer(d, n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    std::vector<int> letters;
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < basis[k][j]; ++r) letters.push_back(j);
    Vec e = Vec::Zero(D);
    e(static_cast<Eigen::Index>(letters_word(letters, d))) = 1.0;
    J.col(static_cast<Eigen::Index>(k)) = std::sqrt(factorial(n) / basis[k].factorial()) * (S * e);
  }
  return J;
}

FockVector symmetrizer_oracle(const Vec& tensor, int n, const SpacePtr& space) {
  const int d = space->d();
  if (n > space->n_max()) throw DomainError("tensor rank exceeds n_max");
  if (static_cast<std::size_t>(tensor.size()) != tensor_dim(d, n)) throw DomainError("tensor size mismatch");
  const Mat S = tensor_symmetrizer(d, n);
  const Mat J = tensor_isometry(d, n);
  const Vec sym = S * tensor;
  FockVector out{space, Vec::Zero(static_cast<Eigen::Index>(space->dim()))};
  out.coeffs.segment(static_cast<Eigen::Index>(space->level_offset(n)), J.cols()) = J.adjoint() * sym;
  return out;
}

}  // namespace mfq
