#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <numbers>

#include "mfq/models.hpp"
#include "support.hpp"

using namespace mfq;
using testsupport::max_abs;

namespace {
const FlowConfig kTight{8, 1e-12, 1e-12, 0.05, 1e-3};
}

TEST_CASE("two-body model") {
  const TwoBodyModel a = TwoBodyModel::random(3, 1.0, 42), b = TwoBodyModel::random(3, 1.0, 42);
  CHECK(max_abs(a.A - b.A) == 0.0);
  CHECK(max_abs(a.Q2 - b.Q2) == 0.0);
  CHECK(hermiticity_defect(a.A) == 0.0);
  CHECK(hermiticity_defect(a.Q2) < 1e-15);
  CHECK(std::abs(a.hamiltonian().norm_Q() - 1.0) < 1e-12);
  CHECK(max_abs(TwoBodyModel::random(3, 1.0, 43).A - a.A) > 0.0);
  CHECK(TwoBodyModel::random(2, 0.0, 1).hamiltonian().Q_terms().empty());
}

TEST_CASE("LLL kernels") {
  const double h = 0.7;
  CHECK(std::abs(lll_kernel(2, h, 3)(0, 0) - std::numbers::pi * h / 2.0) < 1e-14);
  for (int p = 2; p <= 3; ++p) {
    const int M = 4;
    const Mat K = lll_kernel(p, h, M);
    CHECK(hermiticity_defect(K) < 1e-14);
    Eigen::SelfAdjointEigenSolver<Mat> es(K);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    // angular momentum selection rule
    const auto basis = level_basis(M, p);
    auto ang = [](const MultiIndex& a) {
      int s = 0;
      for (int j = 0; j < a.size(); ++j) s += j * a[j];
      return s;
    };
    for (std::size_t g = 0; g < basis.size(); ++g)
      for (std::size_t b = 0; b < basis.size(); ++b)
        if (ang(basis[g]) != ang(basis[b])) CHECK(K(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(b)) == cplx(0.0));
  }

  LLLModel model{0.5, 5, {{2, 1.0}, {3, 0.4}}};
  const ClassicalHamiltonian H = model.hamiltonian();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec z = random_complex_vector(rng, 5);
    // closed-form kernels against direct quadrature of the energy
    const double qz = H.energy(z) - (z.adjoint() * model.kinetic() * z)(0).real();
    CHECK(std::abs(qz - model.energy_quadrature(z)) < 1e-10 * std::max(1.0, qz));
    CHECK((model.galerkin_rhs(z) - (model.kinetic() * z + H.grad_Q(z))).norm() < 1e-10 * std::max(1.0, z.norm()));
  }
  CHECK_THROWS_AS(lll_kernel(2, -1.0, 3), DomainError);
  CHECK_THROWS_AS(lll_kernel(8, 1.0, 30), CapacityError);
}

TEST_CASE("Hartree-von Neumann bosonization") {
  std::mt19937_64 rng(9);
  const int m = 3;
  HvNModel model = HvNModel::random(m, 1.0, 5);
  CHECK((model.V - model.V.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const ClassicalHamiltonian h = hvn_bosonize(model);
  for (const auto& q : h.Q_terms()) CHECK(hermiticity_defect(q.kernel) < 1e-14);

  const Mat omega = random_complex_matrix(rng, m, m);
  // i dz/dt = A z + grad Q matches the matrix form
  const Vec lhs = h.A() * hvn_flatten(omega) + h.grad_Q(hvn_flatten(omega));
  CHECK((lhs - hvn_flatten(hvn_flow_rhs(model, omega))).norm() < 1e-12);

  HvNModel free = model;
  free.V.setZero();
  CHECK(max_abs(hvn_flow_rhs(free, omega) - (model.A * omega - omega * model.A)) < 1e-14);

  // grid weight dx scales the interaction consistently
  HvNModel scaled = model;
  scaled.dx = 0.25;
  const ClassicalHamiltonian hs = hvn_bosonize(scaled);
  const Vec ls = hs.A() * hvn_flatten(omega) + hs.grad_Q(hvn_flatten(omega));
  CHECK((ls - hvn_flatten(hvn_flow_rhs(scaled, omega))).norm() < 1e-12);
}

TEST_CASE("Hartree-von Neumann observables") {
  std::mt19937_64 rng(10);
  const int m = 3;
  const Mat omega = random_complex_matrix(rng, m, m);
  const Vec z = hvn_flatten(omega);
  const Mat G = omega * omega.adjoint();
  for (int k = 1; k <= 2; ++k) {
    const int mk = k == 1 ? m : m * m;
    CHECK(std::abs(evaluate(CompoundSymbol(hvn_observable(Mat::Identity(mk, mk), k, m)), z) - std::pow(z.squaredNorm(), k)) <
          1e-10);
  }
  const Vec u = random_complex_vector(rng, m), v = random_complex_vector(rng, m);
  const Mat B1 = u * v.adjoint();
  CHECK(std::abs(evaluate(CompoundSymbol(hvn_observable(B1, 1, m)), z) - (B1 * G).trace()) < 1e-12);
  const Mat B2 = random_complex_matrix(rng, m * m, m * m);
  CHECK(std::abs(evaluate(CompoundSymbol(hvn_observable(B2, 2, m)), z) - (B2 * kron(G, G)).trace()) < 1e-10);
}

TEST_CASE("Hartree-von Neumann flow") {
  std::mt19937_64 rng(11);
  const int m = 3;
  const HvNModel model = HvNModel::random(m, 1.0, 6);
  const Mat w0 = random_complex_matrix(rng, m, m) / 3.0;
  const Mat wt = hvn_evolve(model, w0, 0.5, kTight);
  CHECK(std::abs(wt.norm() - w0.norm()) < 1e-10);
  CHECK(max_abs(hvn_evolve(model, w0.adjoint(), 0.5, kTight) - wt.adjoint()) < 1e-9);

  Mat r = random_hermitian(rng, m);
  Eigen::SelfAdjointEigenSolver<Mat> es(r * r.adjoint());
  const Mat sq = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  CHECK(hvn_residual(model, sq / sq.norm(), 0.5, 1e-2, kTight) < 1e-6);
}
