#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mfq/classical_flow.hpp"
#include "support.hpp"

using namespace mfq;
using testsupport::max_abs;

namespace {

ClassicalHamiltonian random_two_body(std::mt19937_64& rng, int d, double qnorm) {
  Mat Q = random_hermitian(rng, static_cast<int>(level_size(d, 2)));
  Q *= qnorm / operator_norm(Q);
  return {random_hermitian(rng, d), {PolynomialSymbol(2, 2, d, Q)}};
}

}  // namespace

TEST_CASE("gradient of the interaction") {
  const int d = 3;
  const ClassicalHamiltonian h(Mat::Zero(d, d), {PolynomialSymbol::norm_power(2, d)});
  std::mt19937_64 rng(1);
  const Vec z = random_complex_vector(rng, d);
  CHECK((h.grad_Q(z) - 2.0 * z.squaredNorm() * z).norm() < 1e-12);
  CHECK(h.grad_Q(Vec::Zero(d)).norm() == 0.0);

  const ClassicalHamiltonian g = random_two_body(rng, d, 1.0);
  const double step = 1e-6;
  Vec fd(d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e(i) = 1.0;
    const cplx fx = (evaluate(g.Q(), z + step * e) - evaluate(g.Q(), z - step * e)) / (2 * step);
    const cplx fy = (evaluate(g.Q(), z + I_unit * step * e) - evaluate(g.Q(), z - I_unit * step * e)) / (2 * step);
    fd(i) = 0.5 * (fx + I_unit * fy);
  }
  CHECK((g.grad_Q(z) - fd).norm() < 1e-7 * (1 + fd.norm()));
}

TEST_CASE("flow invariants") {
  std::mt19937_64 rng(2);
  const ClassicalHamiltonian h = random_two_body(rng, 2, 1.0);
  const ClassicalHamiltonian free(h.A(), {});
  const Vec z0 = random_unit_vector(rng, 2);
  const auto f = flow(free, z0, 0.8);
  CHECK((f.z - hermitian_expi(h.A(), -0.8) * z0).norm() < 1e-13);

  for (double t : {0.25, 0.5, 1.0}) {
    const Vec zt = flow(h, z0, t).z;
    CHECK(std::abs(zt.norm() - 1.0) < 1e-8);
    CHECK(std::abs(h.energy(zt) - h.energy(z0)) < 1e-8 * (1 + std::abs(h.energy(z0))));
    const double th = 1.3;
    CHECK((flow(h, std::exp(I_unit * th) * z0, t).z - std::exp(I_unit * th) * zt).norm() < 1e-8);
  }
  const double t = 0.3, s = 0.45;
  const Vec a = flow(h, z0, t + s).z;
  const Vec b = flow(h, flow(h, z0, s).z, t).z;
  CHECK((a - b).norm() < 1e-7);
  // backward integration inverts forward
  CHECK((flow(h, flow(h, z0, 0.6).z, -0.6).z - z0).norm() < 1e-8);

  FlowConfig c8;
  c8.order = 8;
  CHECK((flow(h, z0, 1.0, c8).z - flow(h, z0, 1.0).z).norm() < 1e-8);
  FlowConfig bad;
  bad.order = 3;
  CHECK_THROWS_AS(flow(h, z0, 1.0, bad), DomainError);
}

TEST_CASE("Duhamel identity along a trajectory") {
  std::mt19937_64 rng(3);
  const ClassicalHamiltonian h = random_two_body(rng, 2, 1.0);
  const PolynomialSymbol b(1, 1, 2, random_hermitian(rng, 2));
  const Vec z = random_unit_vector(rng, 2);
  const double t = 0.7;
  const CompoundSymbol bt = conjugate_free(CompoundSymbol(b), h.A(), t);
  const Quadrature q = gauss_legendre(24, 0.0, t);
  cplx integral = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double s = q.nodes[i];
    const Vec ws = gauge_flow(h, z, 0.0, s);
    integral += q.weights[i] * evaluate(poisson_bracket(conjugate_free(h.Q(), h.A(), s), bt, 1), ws);
  }
  const cplx lhs = evaluate(b, flow(h, z, t).z);
  const cplx rhs = evaluate(bt, z) + I_unit * integral;
  CHECK(std::abs(lhs - rhs) <= 1e-6 * std::abs(lhs));
}

TEST_CASE("polynomial approximants") {
  std::mt19937_64 rng(4);
  const ClassicalHamiltonian h = random_two_body(rng, 2, 1.0);
  const CompoundSymbol b = PolynomialSymbol(1, 1, 2, random_hermitian(rng, 2));
  const Vec z = random_unit_vector(rng, 2);
  const double t = 0.01;
  CHECK(std::abs(evaluate(approx_polynomial(b, h, t, 1), z) - evaluate(conjugate_free(b, h.A(), t), z)) < 1e-15);

  const ClassicalHamiltonian static_h(Mat::Zero(2, 2), h.Q_terms());
  const auto terms = approx_terms(b, static_h, 0.3, 2);
  const Vec x = random_complex_vector(rng, 2);
  CHECK(std::abs(evaluate(terms[1], x) - I_unit * 0.3 * evaluate(poisson_bracket(h.Q(), b, 1), x)) < 1e-12);

  const auto tk = approx_terms(b, h, t, 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(evaluate(tk[k], z)) <= approx_term_bound(b, h, t, k, 1.0));

  const double exact = evaluate(b, flow(h, z, t).z).real();
  for (int K = 1; K <= 4; ++K) {
    const double err = std::abs(exact - evaluate(approx_polynomial(b, h, t, K), z));
    CHECK(err <= remainder_bound(b, h, 1.0, t, K));
  }
  const double T = small_time(h, 1.0, 0.5);
  CHECK(remainder_bound(b, h, 1.0, 0.5 * T, 30) < 1e-10);
  CHECK(remainder_bound(CompoundSymbol(PolynomialSymbol::constant(2.0, 2)), h, 1.0, t, 2) == 0.0);
  CHECK_THROWS_AS(approx_polynomial(b, h, t, 7), CapacityError);
  CHECK_THROWS_AS(approx_polynomial(b, h, t, 0), DomainError);
}
