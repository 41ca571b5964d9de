#include "mfq/classical_flow.hpp"

#include <cmath>
#include <functional>

#include <boost/numeric/odeint.hpp>

#include "mfq/errors.hpp"

namespace mfq {

ClassicalHamiltonian::ClassicalHamiltonian(Mat A, std::vector<PolynomialSymbol> Q)
    : A_(std::move(A)), Q_(std::move(Q)), Qsym_(static_cast<int>(A_.rows())) {
  if (A_.rows() != A_.cols() || A_.rows() < 1) throw DomainError("A must be a square matrix");
  if (hermiticity_defect(A_) > 1e-12) throw DomainError("A must be Hermitian");
  for (const auto& q : Q_) {
    if (q.d != d()) throw DomainError("interaction kernel dimension mismatch");
    if (q.p != q.q || q.p < 2) throw DomainError("interaction terms must lie in P_{j,j} with j >= 2");
    if (hermiticity_defect(q.kernel) > 1e-12) throw DomainError("interaction kernel is not Hermitian");
    Qsym_.add(q);
  }
  for (const auto& [key, c] : to_monomials(Qsym_)) monomials_.push_back({key.gamma.entries, key.beta.entries, c});
  Eigen::SelfAdjointEigenSolver<Mat> es(A_);
  evecs_ = es.eigenvectors();
  evals_ = es.eigenvalues();
}

int ClassicalHamiltonian::r() const {
  int r = 2;
  for (const auto& q : Q_) r = std::max(r, q.p);
  return r;
}

double ClassicalHamiltonian::norm_Q() const {
  double n = 0.0;
  for (const auto& [key, t] : Qsym_.terms()) n = std::max(n, t.norm());
  return n;
}

double ClassicalHamiltonian::energy(const Vec& z) const { return (z.dot(A_ * z) + evaluate(Qsym_, z)).real(); }

Vec ClassicalHamiltonian::grad_Q(const Vec& z) const {
  if (z.size() != d()) throw DomainError("grad_Q: dimension mismatch");
  const int dd = d();
  Vec g = Vec::Zero(dd);
  const Vec zb = z.conjugate();
  for (const auto& m : monomials_) {
    cplx zpart = m.c;
    for (int j = 0; j < dd; ++j)
      for (int r = 0; r < m.beta[j]; ++r) zpart *= z(j);
    for (int i = 0; i < dd; ++i) {
      if (m.gamma[i] == 0) continue;
      cplx v = zpart * double(m.gamma[i]);
      for (int j = 0; j < dd; ++j) {
        const int e = m.gamma[j] - (j == i ? 1 : 0);
        for (int r = 0; r < e; ++r) v *= zb(j);
      }
      g(i) += v;
    }
  }
  return g;
}

Vec ClassicalHamiltonian::free_propagate(const Vec& z, double t) const {
  Vec c = evecs_.adjoint() * z;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-I_unit * (t * evals_(i)));
  return evecs_ * c;
}

namespace {

using State = std::vector<cplx>;

template <class Stepper>
void run_adaptive(Stepper stepper, const std::function<void(const State&, State&, double)>& rhs, State& x, double t0,
                  double t1, const FlowConfig& cfg) {
  namespace ode = boost::numeric::odeint;
  // Integrate in s = |tau - t0| so that steps are always positive.
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  auto forward = [&](const State& y, State& dy, double s) {
    rhs(y, dy, t0 + dir * s);
    if (dir < 0)
      for (auto& v : dy) v = -v;
  };
  const double span = std::abs(t1 - t0);
  auto controlled = ode::make_controlled(cfg.abs_tol, cfg.rel_tol, cfg.max_step, stepper);
  try {
    ode::integrate_adaptive(controlled, forward, x, 0.0, span, std::min(cfg.initial_step, span));
  } catch (const ode::odeint_error& e) {
    throw NumericalError(std::string("flow integration failed (step-size underflow): ") + e.what());
  }
}

}  // namespace

Vec gauge_flow(const ClassicalHamiltonian& h, const Vec& w0, double t0, double t1, const FlowConfig& cfg) {
  if (w0.size() != h.d()) throw DomainError("flow: dimension mismatch");
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || !(cfg.max_step > 0.0)) throw DomainError("flow tolerances must be positive");
  if (!w0.allFinite() || !std::isfinite(t0) || !std::isfinite(t1)) throw DomainError("flow: non-finite input");
  if (t0 == t1 || h.Q_terms().empty()) return w0;
  const int d = h.d();
  auto rhs = [&h, d](const State& x, State& dx, double t) {
    const Vec w = Eigen::Map<const Vec>(x.data(), d);
    const Vec z = h.free_propagate(w, t);
    const Vec g = h.free_propagate(h.grad_Q(z), -t);
    for (int i = 0; i < d; ++i) dx[i] = -I_unit * g(i);
  };
  State x(w0.data(), w0.data() + d);
  namespace ode = boost::numeric::odeint;
  if (cfg.order == 5) {
    run_adaptive(ode::runge_kutta_dopri5<State>(), rhs, x, t0, t1, cfg);
  } else if (cfg.order == 8) {
    run_adaptive(ode::runge_kutta_fehlberg78<State>(), rhs, x, t0, t1, cfg);
  } else {
    throw DomainError("integrator order must be 5 or 8");
  }
  return Eigen::Map<const Vec>(x.data(), d);
}

TrajectoryPoint flow(const ClassicalHamiltonian& h, const Vec& z0, double t, const FlowConfig& cfg) {
  const Vec w = gauge_flow(h, z0, 0.0, t, cfg);
  return {t, h.free_propagate(w, t)};
}

namespace {

struct ApproxState {
  const ClassicalHamiltonian& h;
  int K;
  const ApproxConfig& cfg;
  std::vector<CompoundSymbol>& out;
};

void nest(ApproxState& st, int level, double upper, const CompoundSymbol& S, double weight) {
  cplx ik = 1.0;
  for (int j = 0; j < level; ++j) ik *= I_unit;
  st.out[level].add(S, ik * weight);
  if (level + 1 >= st.K) return;
  const Quadrature q = gauss_legendre(st.cfg.quadrature_order, 0.0, upper);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const CompoundSymbol Qs = conjugate_free(st.h.Q(), st.h.A(), q.nodes[i]);
    const CompoundSymbol next = poisson_bracket(Qs, S, 1);
    if (next.max_p() > st.cfg.max_degree || next.max_q() > st.cfg.max_degree)
      throw CapacityError("approximant symbol degree exceeds the configured cap");
    nest(st, level + 1, q.nodes[i], next, weight * q.weights[i]);
  }
}

}  // namespace

std::vector<CompoundSymbol> approx_terms(const CompoundSymbol& b, const ClassicalHamiltonian& h, double t, int K,
                                         const ApproxConfig& cfg) {
  if (K < 1) throw DomainError("approximant order K must be >= 1");
  if (K > cfg.max_K) throw CapacityError("approximant order K exceeds the configured cap");
  if (b.d() != 0 && b.d() != h.d()) throw DomainError("approx_polynomial: dimension mismatch");
  std::vector<CompoundSymbol> out(K, CompoundSymbol(h.d()));
  ApproxState st{h, K, cfg, out};
  nest(st, 0, t, conjugate_free(b, h.A(), t), 1.0);
  return out;
}

CompoundSymbol approx_polynomial(const CompoundSymbol& b, const ClassicalHamiltonian& h, double t, int K,
                                 const ApproxConfig& cfg) {
  CompoundSymbol sum(h.d());
  for (const auto& bk : approx_terms(b, h, t, K, cfg)) sum.add(bk);
  return sum;
}

namespace {

double bracket_R(double R) { return std::sqrt(1.0 + R * R); }

}  // namespace

double approx_term_bound(const CompoundSymbol& b, const ClassicalHamiltonian& h, double t, int k, double znorm) {
  const int r = h.r();
  const double zb = bracket_R(znorm);
  double total = 0.0;
  for (const auto& [key, term] : b.terms()) {
    const int pq = key.first + key.second;
    if (pq == 0) continue;
    total += std::pow(2.0, pq / (2.0 * (r - 1))) * pq * std::pow(4.0 * r * r * r * h.norm_Q() * std::abs(t), k) *
             term.norm() * std::pow(zb, 2.0 * k * (r - 1) + pq);
  }
  return total;
}

double remainder_bound(const CompoundSymbol& b, const ClassicalHamiltonian& h, double R, double t, int K) {
  const int r = h.r();
  const double Rb = bracket_R(R);
  const double x = 4.0 * r * r * r * h.norm_Q() * std::pow(Rb, 2.0 * (r - 1)) * std::abs(t);
  double total = 0.0;
  for (const auto& [key, term] : b.terms()) {
    const int pq = key.first + key.second;
    if (pq == 0) continue;
    total += std::pow(Rb, pq) * std::pow(2.0, pq / (2.0 * (r - 1))) * pq * term.norm() * std::pow(x, K);
  }
  return total;
}

double small_time(const ClassicalHamiltonian& h, double R, double delta) {
  const int r = h.r();
  return delta / (4.0 * r * r * r * h.norm_Q() * std::pow(bracket_R(R), r - 1));
}

}  // namespace mfq
