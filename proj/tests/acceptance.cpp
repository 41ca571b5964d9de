// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mfq/classical_flow.hpp"
#include "mfq/convergence.hpp"
#include "mfq/errors.hpp"
#include "mfq/fock_core.hpp"
#include "mfq/models.hpp"
#include "mfq/quantum_dynamics.hpp"
#include "mfq/reduced_density.hpp"
#include "mfq/states.hpp"
#include "mfq/wick_calculus.hpp"
#include "mfq/wigner_measures.hpp"
#include "support.hpp"

using namespace mfq;
using testsupport::definitional_wick_block;
using testsupport::max_abs;
using testsupport::random_hermitian_symbol;
using testsupport::random_symbol;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double runtime_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome ccr() {
  std::mt19937_64 rng(101);
  const double eps = 0.1;
  auto s = build_space(3, 8, eps);
  const int L = 6;
  const auto dim = static_cast<Eigen::Index>(s->dim_up_to(L));
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Vec x1 = random_complex_vector(rng, 3), x2 = random_complex_vector(rng, 3);
    const FockOperator a1 = a_general(x1, s), c2 = a_dag_general(x2, s);
    const Mat defect = (a1 * c2 - c2 * a1).guarded(L) - eps * inner(x1, x2) * Mat::Identity(dim, dim);
    worst = std::max(worst, operator_norm(defect));
  }
  return {worst <= 1e-12, "max ||[a,a*] - eps<x1,x2>|| = " + fmt(worst)};
}

Outcome wick_composition() {
  std::mt19937_64 rng(102);
  const double eps = 0.1;
  auto s = build_space(2, 10, eps);
  std::uniform_int_distribution<int> deg(0, 3);
  double worst_abs = 0.0, worst_rel = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto b1 = random_symbol(rng, deg(rng), deg(rng), 2), b2 = random_symbol(rng, deg(rng), deg(rng), 2);
    const int G = s->n_max() - b1.q - b2.q;
    const Mat lhs = wick_quantize(compose(b1, b2, eps), s).guarded(G);
    const Mat rhs = (wick_quantize(b1, s) * wick_quantize(b2, s)).guarded(G);
    const double r = max_abs(lhs - rhs);
    worst_abs = std::max(worst_abs, r);
    worst_rel = std::max(worst_rel, r / std::max(1.0, max_abs(rhs)));
  }
  return {worst_rel <= 1e-12, "max entrywise residual " + fmt(worst_abs) + " (relative to max(1,|entries|): " + fmt(worst_rel) + ")"};
}

Outcome factorial_identity() {
  double worst_abs = 0.0, worst_rel = 0.0;
  for (double eps : {0.5, 0.1}) {
    auto s = build_space(2, 10, eps);
    const Mat N = number_operator(s).matrix();
    const Mat I = Mat::Identity(N.rows(), N.cols());
    Mat prod = I;
    for (int k = 1; k <= 4; ++k) {
      prod = prod * (N - (k - 1) * eps * I);
      const double r = max_abs(wick_quantize(PolynomialSymbol::norm_power(k, 2), s).matrix() - prod);
      worst_abs = std::max(worst_abs, r);
      worst_rel = std::max(worst_rel, r / std::max(1.0, max_abs(prod)));
    }
  }
  return {worst_rel <= 1e-13, "max |(|z|^2k)^Wick - prod (N - j eps)| = " + fmt(worst_abs) +
                                  " (relative to max(1,|entries|): " + fmt(worst_rel) + ")"};
}

Outcome number_estimate() {
  std::mt19937_64 rng(104);
  auto s = build_space(2, 8, 0.2);
  std::uniform_int_distribution<int> deg(0, 3);
  double worst = -1e300;
  for (int k = 0; k < 50; ++k) {
    const auto b = random_symbol(rng, deg(rng), deg(rng), 2);
    worst = std::max(worst, number_estimate_check(b, s) - b.norm());
  }
  return {worst <= 1e-10, "max (computed norm - |b|) = " + fmt(worst)};
}

Outcome weyl_wick_gap() {
  double worst = 0.0;
  for (int d : {1, 2, 3})
    for (double eps : {0.5, 0.1}) {
      auto s = build_space(d, 5, eps);
      const CompoundSymbol n1(PolynomialSymbol::norm_power(1, d));
      const Mat gap = weyl_quantize_quadratic(n1, s).matrix() - wick_quantize(n1, s).matrix();
      worst = std::max(worst, max_abs(gap - 0.5 * d * eps * Mat::Identity(gap.rows(), gap.cols())));
    }
  return {worst <= 1e-10, "max |Weyl - Wick - (d/2) eps I| = " + fmt(worst)};
}

Outcome tensor_moments() {
  const RVec lambda = (RVec(3) << 0.5, 0.3, 0.2).finished();
  double worst = 0.0;
  for (int N : {4, 6, 8}) {
    const double eps = 1.0 / N;
    const DensityMatrix rho = tensor_state(lambda, N, build_space(3, N, eps));
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; q <= 2; ++q)
        for (const auto& g : level_basis(3, q))
          for (const auto& b : level_basis(3, p)) {
            const cplx v = wick_expectation(rho, from_monomials(MonomialMap{{{g, b}, 1.0}}, 3));
            double expect = 0.0;
            if (g == b) {
              expect = std::pow(eps, p) * factorial(N) / factorial(N - p);
              for (int j = 0; j < 3; ++j) expect *= std::pow(lambda(j), b[j]);
            }
            worst = std::max(worst, std::abs(v - expect));
          }
  }
  return {worst <= 1e-12, "max |Tr[rho (a*)^g a^b] - formula| = " + fmt(worst)};
}

Outcome gibbs_generating_function() {
  const RVec nu = (RVec(3) << 0.5, 0.25, 0.125).finished();
  const StateFamily fam = gibbs_family(nu, 1e-10);
  double worst_gf = 0.0, n2_rel = 0.0, n2 = 0.0;
  std::ostringstream rows;
  for (double eps : {0.2, 0.1, 0.05}) {
    const DensityMatrix rho = fam.generate(eps);
    for (double x : {-0.2, 0.2}) {
      const double q = number_function_expectation(rho, [eps, x](double en) { return std::pow(1.0 + eps * x, std::round(en / eps)); });
      double lim = 1.0;
      for (int i = 0; i < 3; ++i) lim /= 1.0 - nu(i) * x;
      worst_gf = std::max(worst_gf, std::abs(q - lim));
    }
    if (eps == 0.05) n2 = number_moment(rho, 2);
  }
  double h2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) h2 += nu(i) * nu(j);
  const double limit = 2.0 * h2;
  n2_rel = std::abs(n2 - limit) / limit;
  // Closed form at finite eps: eps N_i is eps times a geometric variable with mean nu_i, so
  // Tr[rho N^2] = Var + mean^2 with mean = sum nu_i and Var = sum nu_i (nu_i + eps).
  const double mean = nu.sum();
  double var = 0.0;
  for (int i = 0; i < 3; ++i) var += nu(i) * (nu(i) + 0.05);
  const double exact = var + mean * mean;
  char buf[256];
  std::snprintf(buf, sizeof buf, "max genfun error %.3g; Tr[rho N^2] at eps=0.05 = %.10f (closed form %.10f), limit %.10f, relative gap %.4f vs 0.02",
                worst_gf, n2, exact, limit, n2_rel);
  rows << buf;
  return {worst_gf <= 1e-6 && n2_rel <= 0.02, rows.str()};
}

Outcome classical_flow() {
  const ClassicalHamiltonian h = TwoBodyModel::random(2, 1.0, 108).hamiltonian();
  std::mt19937_64 rng(108);
  double rn = 0.0, re = 0.0, rs = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Vec z0 = random_unit_vector(rng, 2);
    const double e0 = h.energy(z0);
    for (int i = 1; i <= 10; ++i) {
      const double t = 0.1 * i;
      const Vec zt = flow(h, z0, t).z;
      rn = std::max(rn, std::abs(zt.norm() - 1.0));
      re = std::max(re, std::abs(h.energy(zt) - e0));
      const Vec split = flow(h, flow(h, z0, 0.5 * t).z, 0.5 * t).z;
      rs = std::max(rs, (split - zt).norm());
    }
  }
  return {rn <= 1e-8 && re <= 1e-8 && rs <= 1e-7,
          "norm drift " + fmt(rn) + ", energy drift " + fmt(re) + ", semigroup defect " + fmt(rs)};
}

Outcome approximant_bound() {
  const ClassicalHamiltonian h = TwoBodyModel::random(2, 1.0, 108).hamiltonian();
  std::mt19937_64 rng(109);
  const CompoundSymbol b(random_hermitian_symbol(rng, 1, 2));
  const double R = 1.0, t = 0.5 * small_time(h, R, 0.5);
  std::vector<Vec> z0s, zts;
  for (int k = 0; k < 20; ++k) {
    z0s.push_back(R * random_unit_vector(rng, 2));
    zts.push_back(flow(h, z0s.back(), t, FlowConfig{8, 1e-13, 1e-13, 0.05, 1e-4}).z);
  }
  std::vector<double> emp(5, 0.0);
  bool within = true;
  std::ostringstream out;
  out << "t=" << fmt(t);
  for (int K = 1; K <= 4; ++K) {
    const CompoundSymbol bK = approx_polynomial(b, h, t, K);
    for (std::size_t i = 0; i < z0s.size(); ++i)
      emp[static_cast<std::size_t>(K)] = std::max(emp[static_cast<std::size_t>(K)], std::abs(evaluate(b, zts[i]) - evaluate(bK, z0s[i])));
    const double bound = remainder_bound(b, h, R, t, K);
    within = within && emp[static_cast<std::size_t>(K)] <= bound;
    out << "; K=" << K << " err " << fmt(emp[static_cast<std::size_t>(K)]) << " <= " << fmt(bound);
  }
  return {within && emp[4] <= 0.1 * emp[1], out.str()};
}

// Shared setup of criteria 10 and 11.
struct HermiteRun {
  ClassicalHamiltonian h = TwoBodyModel::random(2, 1.0, 110).hamiltonian();
  Vec phi;
  double t = 0.5;
  std::vector<int> Ns{4, 8, 16};
  HermiteRun() {
    std::mt19937_64 rng(110);
    phi = random_unit_vector(rng, 2);
  }
};

Outcome hermite_propagation() {
  HermiteRun run;
  std::mt19937_64 rng(111);
  std::vector<Observable> obs;
  for (int k = 0; k < 5; ++k) obs.push_back({"b" + std::to_string(k), CompoundSymbol(random_hermitian_symbol(rng, 1, 2))});
  std::vector<double> eps;
  for (int N : run.Ns) eps.push_back(1.0 / N);
  const auto rows = convergence_study(hermite_family(run.phi), run.h, obs, {run.t}, eps);
  // independent classical reference: b in P_{1,1} is gauge invariant, so the circle average is b(F_t phi)
  const Vec phit = flow(run.h, run.phi, run.t, FlowConfig{8, 1e-13, 1e-13, 0.05, 1e-4}).z;
  bool ok = true;
  std::ostringstream out;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    double e[3];
    for (std::size_t i = 0; i < 3; ++i) e[i] = std::abs(rows[i * obs.size() + k].quantum - evaluate(obs[k].b, phit));
    const bool okk = e[2] < e[1] && e[1] < e[0] && e[2] <= 0.5 * e[0];
    ok = ok && okk;
    out << (k ? "; " : "") << obs[k].id << " e(4,8,16)=" << fmt(e[0]) << "," << fmt(e[1]) << "," << fmt(e[2]) << (okk ? "" : " (not monotone)");
  }
  return {ok, out.str()};
}

Outcome bbgky() {
  HermiteRun run;
  const Vec phit = flow(run.h, run.phi, run.t, FlowConfig{8, 1e-13, 1e-13, 0.05, 1e-4}).z;
  const Mat target = phit * phit.adjoint();
  std::vector<double> dist;
  for (int N : run.Ns) {
    const double eps = 1.0 / N;
    auto s = build_space(2, N, eps);
    const QuantumHamiltonian H(run.h, s);
    const DensityMatrix rho_t = evolve(hermite_state(run.phi, N, s), H, run.t);
    dist.push_back(trace_distance(reduced_matrix(rho_t, 1).matrix, target));
  }
  const bool ok = dist[1] < dist[0] && dist[2] < dist[1] && dist[2] <= 0.15;
  return {ok, "trace distance N=4,8,16: " + fmt(dist[0]) + ", " + fmt(dist[1]) + ", " + fmt(dist[2])};
}

Outcome coherent_propagation() {
  const ClassicalHamiltonian h = TwoBodyModel::random(2, 1.0, 112).hamiltonian();
  std::mt19937_64 rng(112);
  const Vec xi = 0.6 * random_unit_vector(rng, 2);
  std::vector<Observable> obs;
  for (int k = 0; k < 3; ++k) obs.push_back({"b" + std::to_string(k), CompoundSymbol(random_hermitian_symbol(rng, 1, 2))});
  const double t = 0.5;
  StudyOptions opt;
  opt.workers = 3;
  const auto rows = convergence_study(coherent_family(xi, 1e-8), h, obs, {t}, {0.25, 0.125, 0.0625}, opt);
  const Vec xit = flow(h, xi, t, FlowConfig{8, 1e-13, 1e-13, 0.05, 1e-4}).z;
  bool ok = true;
  std::ostringstream out;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    double e[3];
    for (std::size_t i = 0; i < 3; ++i) e[i] = std::abs(rows[i * obs.size() + k].quantum - evaluate(obs[k].b, xit));
    const bool okk = e[2] < e[1] && e[1] < e[0] && e[2] <= e[0] / 3.0;
    ok = ok && okk;
    out << (k ? "; " : "") << obs[k].id << " e=" << fmt(e[0]) << "," << fmt(e[1]) << "," << fmt(e[2]);
  }
  out << "; n_max " << rows.back().n_max_used << ", deficit " << fmt(rows.back().deficit);
  return {ok, out.str()};
}

Outcome pushforward_consistency() {
  const ClassicalHamiltonian h = TwoBodyModel::random(3, 1.0, 113).hamiltonian();
  std::mt19937_64 rng(113);
  const double t = 0.7;
  const std::vector<WignerMeasure> mus{
      WignerMeasure::dirac(0.8 * random_unit_vector(rng, 3)),
      WignerMeasure::circle_dirac(random_unit_vector(rng, 3)),
      tensor_family((RVec(3) << 0.5, 0.3, 0.2).finished()).predicted_measure,
  };
  double rm = 0.0, rg = 0.0;
  for (const auto& mu : mus) {
    const WignerMeasure pt = pushforward(mu, h, t);
    for (int a = 1; a <= 3; ++a) rm = std::max(rm, std::abs(moment(pt, a) - moment(mu, a)) / std::max(1.0, moment(mu, a)));
    for (int p = 1; p <= 2; ++p)
      rg = std::max(rg, max_abs(asymptotic_reduced(pt, p).matrix - asymptotic_reduced_direct(mu, h, t, p).matrix));
  }
  return {rm <= 1e-8 && rg <= 1e-8, "moment defect " + fmt(rm) + ", pushforward vs direct reduced matrices " + fmt(rg)};
}

Outcome hartree_von_neumann() {
  const HvNModel model = HvNModel::random(4, 1.0, 114);
  std::mt19937_64 rng(114);
  double rs = 0.0, rr = 0.0;
  for (int k = 0; k < 10; ++k) {
    Mat w0 = random_hermitian(rng, 4);
    w0 /= w0.norm();
    const double t = 0.5;
    rs = std::max(rs, (hvn_evolve(model, w0.adjoint(), t) - hvn_evolve(model, w0, t).adjoint()).norm());
    rr = std::max(rr, hvn_residual(model, w0, t));
  }
  return {rs <= 1e-8 && rr <= 1e-6, "adjoint defect " + fmt(rs) + ", residual of omega^2 " + fmt(rr)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(115);
  const double eps = 0.25;
  auto s = build_space(2, 6, eps);
  double worst = 0.0;
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      const auto b = random_symbol(rng, p, q, 2);
      const FockOperator W = wick_quantize(b, s);
      for (int n = p; n <= 4; ++n) worst = std::max(worst, max_abs(W.block(n + q - p, n) - definitional_wick_block(b, n, eps)));
    }
  return {worst <= 1e-12, "max entrywise difference " + fmt(worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "CCR exactness", 1.0, ccr},
      {2, "Wick composition", 10.0, wick_composition},
      {3, "factorial identity", 0.0, factorial_identity},
      {4, "number estimate", 0.0, number_estimate},
      {5, "Weyl/Wick gap", 0.0, weyl_wick_gap},
      {6, "tensor-state moments", 0.0, tensor_moments},
      {7, "Gibbs generating function and N^2 moment", 0.0, gibbs_generating_function},
      {8, "classical flow invariants", 5.0, classical_flow},
      {9, "polynomial approximant bound", 0.0, approximant_bound},
      {10, "Hermite mean-field propagation", 60.0, hermite_propagation},
      {11, "BBGKY convergence", 0.0, bbgky},
      {12, "coherent-state propagation", 120.0, coherent_propagation},
      {13, "measure pushforward consistency", 0.0, pushforward_consistency},
      {14, "Hartree-von Neumann", 0.0, hartree_von_neumann},
      {15, "Wick oracle equivalence", 0.0, oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.runtime_limit > 0.0 && secs > c.runtime_limit) {
      o.pass = false;
      o.detail += "; runtime limit " + fmt(c.runtime_limit) + " s exceeded";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
