#include "mfq/cli/checks.hpp"

#include <cmath>
#include <random>

#include "mfq/classical_flow.hpp"
#include "mfq/errors.hpp"
#include "mfq/models.hpp"
#include "mfq/quantum_dynamics.hpp"
#include "mfq/states.hpp"
#include "mfq/wick_calculus.hpp"

namespace mfq::cli {

namespace {

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

PolynomialSymbol random_symbol(std::mt19937_64& rng, int p, int q, int d) {
  return {p, q, d, random_complex_matrix(rng, static_cast<int>(level_size(d, q)), static_cast<int>(level_size(d, p)))};
}

std::vector<CheckResult> ccr_suite(double eps, double ae, std::mt19937_64& rng) {
  auto s = build_space(3, 8, eps);
  const int L = 6;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  const Mat I = Mat::Identity(static_cast<Eigen::Index>(s->dim_up_to(L)), static_cast<Eigen::Index>(s->dim_up_to(L)));
  const FockOperator N = number_operator(s);
  for (int k = 0; k < 20; ++k) {
    const Vec x1 = random_complex_vector(rng, 3), x2 = random_complex_vector(rng, 3);
    const FockOperator a1 = a_general(x1, s), c2 = a_dag_general(x2, s), a2 = a_general(x2, s);
    r1 = std::max(r1, max_abs((a1 * c2 - c2 * a1).guarded(L) - ae * inner(x1, x2) * I));
    r2 = std::max(r2, max_abs((a1 * a2 - a2 * a1).matrix()));
    r3 = std::max(r3, max_abs((N * c2 - c2 * N).guarded(L) - ae * c2.guarded(L)));
  }
  return {{"ccr.a_adag", r1, 1e-12}, {"ccr.a_a", r2, 1e-12}, {"ccr.number_adag", r3, 1e-12}};
}

std::vector<CheckResult> wick_suite(double eps, double ae, std::mt19937_64& rng) {
  auto s = build_space(2, 10, eps);
  double rc = 0.0;
  std::uniform_int_distribution<int> deg(0, 3);
  for (int k = 0; k < 20; ++k) {
    const auto b1 = random_symbol(rng, deg(rng), deg(rng), 2), b2 = random_symbol(rng, deg(rng), deg(rng), 2);
    const int G = s->n_max() - b1.q - b2.q;
    const Mat lhs = wick_quantize(compose(b1, b2, ae), s).guarded(G);
    const Mat rhs = (wick_quantize(b1, s) * wick_quantize(b2, s)).guarded(G);
    rc = std::max(rc, max_abs(lhs - rhs) / (1.0 + max_abs(rhs)));
  }
  double rf = 0.0;
  const Mat N = number_operator(s).matrix();
  const Mat I = Mat::Identity(N.rows(), N.cols());
  Mat prod = I;
  for (int k = 1; k <= 4; ++k) {
    prod = prod * (N - (k - 1) * ae * I);
    rf = std::max(rf, max_abs(wick_quantize(PolynomialSymbol::norm_power(k, 2), s).matrix() - prod) / (1.0 + max_abs(prod)));
  }
  return {{"wick.composition", rc, 1e-12}, {"wick.factorial_identity", rf, 1e-13}};
}

std::vector<CheckResult> weyl_suite(double eps, double ae, std::mt19937_64& rng) {
  auto s = build_space(2, 40, eps);
  double ru = 0.0, rw = 0.0;
  const Mat I = Mat::Identity(static_cast<Eigen::Index>(s->dim()), static_cast<Eigen::Index>(s->dim()));
  for (int k = 0; k < 5; ++k) {
    const Vec x1 = 0.3 * random_unit_vector(rng, 2), x2 = 0.3 * random_unit_vector(rng, 2);
    const Mat W1 = weyl(x1, s).matrix(), W2 = weyl(x2, s).matrix(), W12 = weyl(x1 + x2, s).matrix();
    ru = std::max(ru, max_abs(W1.adjoint() * W1 - I));
    // relation on the vacuum column, far from the truncation edge
    const cplx ph = std::exp(-I_unit * ae / 2.0 * sigma_form(x1, x2));
    rw = std::max(rw, (W1 * W2.col(0) - ph * W12.col(0)).cwiseAbs().maxCoeff());
  }
  auto sg = build_space(3, 5, eps);
  const CompoundSymbol n1(PolynomialSymbol::norm_power(1, 3));
  const Mat gap = weyl_quantize_quadratic(n1, sg).matrix() - wick_quantize(n1, sg).matrix();
  const double rg = max_abs(gap - 1.5 * ae * Mat::Identity(gap.rows(), gap.cols()));
  return {{"weyl.unitarity", ru, 1e-12}, {"weyl.relation", rw, 1e-9}, {"weyl.wick_gap", rg, 1e-10}};
}

std::vector<CheckResult> flow_suite(std::mt19937_64& rng, std::uint64_t seed) {
  const ClassicalHamiltonian h = TwoBodyModel::random(2, 1.0, seed).hamiltonian();
  const FlowConfig cfg{8, 1e-12, 1e-12, 0.05, 1e-3};
  double rn = 0.0, re = 0.0, rs = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Vec z0 = random_unit_vector(rng, 2);
    const double e0 = h.energy(z0);
    for (double t : {0.25, 0.5, 1.0}) {
      const Vec zt = flow(h, z0, t, cfg).z;
      rn = std::max(rn, std::abs(zt.norm() - 1.0));
      re = std::max(re, std::abs(h.energy(zt) - e0));
    }
    const Vec half = flow(h, z0, 0.4, cfg).z;
    rs = std::max(rs, (flow(h, half, 0.6, cfg).z - flow(h, z0, 1.0, cfg).z).norm());
  }
  return {{"flow.norm_drift", rn, 1e-8}, {"flow.energy_drift", re, 1e-8}, {"flow.semigroup", rs, 1e-7}};
}

std::vector<CheckResult> states_suite(double eps, double ae, std::mt19937_64& rng) {
  const Vec xi = 0.6 * random_unit_vector(rng, 2);
  auto s = build_space(2, coherent_required_n_max(xi, eps, 1e-12), eps);
  const DensityMatrix coh = coherent_state(xi, s, 1e-12);
  const RVec lw = coh.level_weights();
  const double lam = xi.squaredNorm() / ae;
  double rp = 0.0;
  for (Eigen::Index n = 0; n < lw.size(); ++n)
    rp = std::max(rp, std::abs(lw(n) - std::exp(-lam + n * std::log(lam) - std::lgamma(n + 1.0))));
  const double rn = std::abs(number_moment(coh, 1) - xi.squaredNorm());

  const RVec nu = (RVec(2) << 0.5, 0.25).finished();
  const RVec g = gibbs_level_weights(nu, eps, 30);
  const double s0 = nu(0) / (nu(0) + ae), s1 = nu(1) / (nu(1) + ae);
  double rg = 0.0;
  for (int n = 0; n <= 30; ++n) {
    double o = 0.0;
    for (int a = 0; a <= n; ++a) o += (1 - s0) * std::pow(s0, a) * (1 - s1) * std::pow(s1, n - a);
    rg = std::max(rg, std::abs(g(n) - o));
  }

  // Tr[rho (a*)^b a^g] = delta_{bg} eps^p N!/(N-p)! lambda^b
  const RVec lambda = (RVec(3) << 0.5, 0.3, 0.2).finished();
  const int Nn = 4;
  auto st = build_space(3, Nn, eps);
  const DensityMatrix ts = tensor_state(lambda, Nn, st);
  double rt = 0.0;
  for (int p = 0; p <= 2; ++p)
    for (const auto& gm : level_basis(3, p))
      for (const auto& bt : level_basis(3, p)) {
        MonomialMap mono{{{gm, bt}, 1.0}};
        const cplx v = wick_expectation(ts, from_monomials(mono, 3));
        double expect = 0.0;
        if (gm == bt) {
          expect = std::pow(ae, p) * factorial(Nn) / factorial(Nn - p);
          for (int j = 0; j < 3; ++j) expect *= std::pow(lambda(j), gm[j]);
        }
        rt = std::max(rt, std::abs(v - expect));
      }
  return {{"states.coherent_poisson", rp, 1e-12},
          {"states.coherent_number", rn, 1e-10},
          {"states.gibbs_geometric", rg, 1e-13},
          {"states.tensor_moments", rt, 1e-12}};
}

}  // namespace

const std::vector<std::string>& check_suites() {
  static const std::vector<std::string> s{"ccr", "wick", "weyl", "flow", "states"};
  return s;
}

std::vector<CheckResult> run_suite(const std::string& suite, double eps, double assumed_eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (suite == "ccr") return ccr_suite(eps, assumed_eps, rng);
  if (suite == "wick") return wick_suite(eps, assumed_eps, rng);
  if (suite == "weyl") return weyl_suite(eps, assumed_eps, rng);
  if (suite == "flow") return flow_suite(rng, seed);
  if (suite == "states") return states_suite(eps, assumed_eps, rng);
  throw DomainError("unknown check suite '" + suite + "'");
}

}  // namespace mfq::cli
