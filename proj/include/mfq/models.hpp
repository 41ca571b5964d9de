#pragma once

#include <cstdint>
#include <map>

#include "mfq/classical_flow.hpp"

namespace mfq {

// dGamma(A) + (Q2)^Wick with Q2 in P_{2,2}.
struct TwoBodyModel {
  Mat A;
  Mat Q2;
  std::uint64_t seed = 0;

  // A Hermitian Gaussian, Q2 Hermitian Gaussian scaled to operator norm q_norm.
  static TwoBodyModel random(int d, double q_norm, std::uint64_t seed);
  int d() const { return static_cast<int>(A.rows()); }
  ClassicalHamiltonian hamiltonian() const;
};

// Kernel of Q_p(f) = int |f|^{2p} e^{-p|zeta|^2/h} L(dzeta) on the level-p basis built from
// e_k = zeta^k / sqrt(h^k k!), k < M.
Mat lll_kernel(int p, double h, int M);

struct LLLModel {
  double h = 1.0;
  int M = 4;
  std::map<int, double> alphas;  // p -> alpha_p

  ClassicalHamiltonian hamiltonian() const;
  // A = h k on e_k
  Mat kinetic() const;
  // Q(f) by polar quadrature in zeta.
  double energy_quadrature(const Vec& z) const;
  // A z + dQ/dzbar by the same quadrature.
  Vec galerkin_rhs(const Vec& z) const;
};

// Hartree-von Neumann on an m-point periodic grid, phase space m x m matrices flattened by k = x m + y.
struct HvNModel {
  int m = 0;
  Mat A;
  Eigen::MatrixXd V;  // V(x_i - x_j), symmetric
  double dx = 1.0;

  // V depends on periodic distance only; values drawn in [-v_scale, v_scale].
  static HvNModel random(int m, double v_scale, std::uint64_t seed, double dx = 1.0);
  int d() const { return m * m; }
};

Vec hvn_flatten(const Mat& omega);
Mat hvn_unflatten(const Vec& z, int m);
// [A, omega] + (V*n1) omega - omega (V*n2)
Mat hvn_flow_rhs(const HvNModel& model, const Mat& omega);
// Liouvillian A (x) I - I (x) A^T and Q = sum W z1bar z2bar z1 z2, W = (V(x1-x2) - V(y1-y2)) dx / 2.
ClassicalHamiltonian hvn_bosonize(const HvNModel& model);
// b_B(omega) = Tr[B (omega omega*)^{(x)k}], B acting on k grid particles.
PolynomialSymbol hvn_observable(const Mat& B, int k, int m);
Mat hvn_evolve(const HvNModel& model, const Mat& omega0, double t, const FlowConfig& cfg = {});
// max |i d/dt rho - [A + V*n_rho, rho]| for rho(t) = omega(t)^2, derivative by a five-point stencil.
double hvn_residual(const HvNModel& model, const Mat& omega0, double t, double step = 1e-2, const FlowConfig& cfg = {});

}  // namespace mfq
