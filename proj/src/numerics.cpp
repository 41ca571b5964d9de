#include "mfq/numerics.hpp"

#include <cmath>
#include <limits>

#include "mfq/errors.hpp"

namespace mfq {

double factorial(int n) {
  if (n < 0) throw DomainError("factorial of negative integer");
  return std::tgamma(static_cast<double>(n) + 1.0);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num)
      throw CapacityError("binomial coefficient overflows 64 bits");
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix.
Quadrature golub_welsch(const RVec& diag, const RVec& off, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = diag(i);
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = off(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  for (int i = 0; i < n; ++i) {
    q.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    q.weights.push_back(mu0 * v * v);
  }
  return q;
}

}  // namespace

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("quadrature order must be >= 1");
  RVec diag = RVec::Zero(n), off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  Quadrature q = golub_welsch(diag, off, 2.0);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * q.nodes[i];
    q.weights[i] *= half;
  }
  return q;
}

Quadrature gauss_laguerre(int n) {
  if (n < 1) throw DomainError("quadrature order must be >= 1");
  RVec diag(n), off(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) off(k - 1) = k;
  return golub_welsch(diag, off, 1.0);
}

Mat hermitian_expi(const Mat& H, double s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const RVec& lam = es.eigenvalues();
  Vec ph(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) ph(i) = std::exp(I_unit * (s * lam(i)));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double operator_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

double trace_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues().sum();
}

double hermiticity_defect(const Mat& M) {
  if (M.size() == 0) return 0.0;
  return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

Vec random_complex_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

Vec random_unit_vector(std::mt19937_64& rng, int n) {
  Vec v = random_complex_vector(rng, n);
  return v / v.norm();
}

Mat random_complex_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

Mat random_hermitian(std::mt19937_64& rng, int n) {
  Mat m = random_complex_matrix(rng, n, n);
  return 0.5 * (m + m.adjoint());
}

Mat random_psd(std::mt19937_64& rng, int n, int rank) {
  Mat b = random_complex_matrix(rng, n, rank);
  return b * b.adjoint();
}

}  // namespace mfq
