#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mfq {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

double factorial(int n);
// Binomial coefficient as an exact integer (throws on overflow).
std::uint64_t binomial(int n, int k);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b] (b < a allowed: weights become negative).
Quadrature gauss_legendre(int n, double a = -1.0, double b = 1.0);
// Gauss-Laguerre rule for integrals of f(s) e^{-s} over [0, inf).
Quadrature gauss_laguerre(int n);

// exp(i s H) for Hermitian H.
Mat hermitian_expi(const Mat& H, double s);
// Largest singular value.
double operator_norm(const Mat& M);
// Sum of singular values.
double trace_norm(const Mat& M);
double hermiticity_defect(const Mat& M);

// Seeded Gaussian ensembles.
Vec random_complex_vector(std::mt19937_64& rng, int n);
Vec random_unit_vector(std::mt19937_64& rng, int n);
Mat random_complex_matrix(std::mt19937_64& rng, int rows, int cols);
Mat random_hermitian(std::mt19937_64& rng, int n);
Mat random_psd(std::mt19937_64& rng, int n, int rank);

}  // namespace mfq
