#pragma once

#include <cmath>
#include <random>

#include "mfq/errors.hpp"
#include "mfq/oracles.hpp"
#include "mfq/wick_calculus.hpp"

namespace testsupport {

using namespace mfq;

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline PolynomialSymbol random_symbol(std::mt19937_64& rng, int p, int q, int d) {
  const auto rows = static_cast<int>(level_size(d, q)), cols = static_cast<int>(level_size(d, p));
  return {p, q, d, random_complex_matrix(rng, rows, cols)};
}

inline PolynomialSymbol random_hermitian_symbol(std::mt19937_64& rng, int p, int d) {
  return {p, p, d, random_hermitian(rng, static_cast<int>(level_size(d, p)))};
}

// Block n -> n+q-p of the Wick operator written literally on full tensors:
// sqrt(n!(n+q-p)!)/(n-p)! eps^{(p+q)/2} (b_full (x) I) restricted to the symmetric powers.
inline Mat definitional_wick_block(const PolynomialSymbol& b, int n, double eps) {
  const int d = b.d, p = b.p, q = b.q, m = n + q - p;
  const Mat Jp = tensor_isometry(d, p), Jq = tensor_isometry(d, q);
  const Mat bfull = Jq * b.kernel * Jp.adjoint();
  const Mat rest = Mat::Identity(static_cast<Eigen::Index>(tensor_dim(d, n - p)),
                                 static_cast<Eigen::Index>(tensor_dim(d, n - p)));
  const Mat big = kron(bfull, rest);
  const double pref = std::sqrt(factorial(n) * factorial(m)) / factorial(n - p) * std::pow(eps, 0.5 * (p + q));
  return pref * tensor_isometry(d, m).adjoint() * big * tensor_isometry(d, n);
}

}  // namespace testsupport
