#include "mfq/models.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mfq/errors.hpp"

namespace mfq {

TwoBodyModel TwoBodyModel::random(int d, double q_norm, std::uint64_t seed) {
  if (d < 1) throw DomainError("two-body model: d must be positive");
  if (!(q_norm >= 0.0)) throw DomainError("two-body model: q_norm must be non-negative");
  std::mt19937_64 rng(seed);
  TwoBodyModel m;
  m.A = random_hermitian(rng, d);
  m.Q2 = random_hermitian(rng, static_cast<int>(level_size(d, 2)));
  const double nq = operator_norm(m.Q2);
  m.Q2 *= nq > 0.0 ? q_norm / nq : 0.0;
  m.seed = seed;
  return m;
}

ClassicalHamiltonian TwoBodyModel::hamiltonian() const {
  if (Q2.size() == 0 || operator_norm(Q2) == 0.0) return {A, {}};
  return {A, {PolynomialSymbol(2, 2, d(), Q2)}};
}

Mat lll_kernel(int p, double h, int M) {
  if (p < 1 || M < 1 || !(h > 0.0)) throw DomainError("lll_kernel: need p >= 1, M >= 1, h > 0");
  if (level_size(M, p) > 20000) throw CapacityError("lll_kernel: level " + std::to_string(p) + " of " + std::to_string(M) + " modes is too large");
  const auto basis = level_basis(M, p);
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<int> K(basis.size());
  std::vector<double> lnorm(basis.size());  // log sqrt(beta! prod (k!)^beta_k)
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int k = 0;
    double l = 0.0;
    for (int j = 0; j < M; ++j) {
      k += j * basis[i][j];
      l += std::lgamma(basis[i][j] + 1.0) + basis[i][j] * std::lgamma(j + 1.0);
    }
    K[i] = k;
    lnorm[i] = 0.5 * l;
  }
  // pi h K!/p^{K+1} p! / sqrt(g! b! prod (k!)^{g_k + b_k}) when K(g) = K(b)
  Mat out = Mat::Zero(n, n);
  for (std::size_t g = 0; g < basis.size(); ++g)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (K[g] != K[b]) continue;
      const double l = std::lgamma(K[g] + 1.0) - (K[g] + 1.0) * std::log(static_cast<double>(p)) + std::lgamma(p + 1.0) - lnorm[g] - lnorm[b];
      out(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(b)) = std::numbers::pi * h * std::exp(l);
    }
  return out;
}

Mat LLLModel::kinetic() const {
  Mat A = Mat::Zero(M, M);
  for (int k = 0; k < M; ++k) A(k, k) = h * k;
  return A;
}

ClassicalHamiltonian LLLModel::hamiltonian() const {
  std::vector<PolynomialSymbol> Q;
  for (const auto& [p, a] : alphas) {
    if (p < 2) throw DomainError("LLL model: interaction orders start at 2");
    if (!(a >= 0.0)) throw DomainError("LLL model: alpha_p must be non-negative");
    if (a > 0.0) Q.emplace_back(p, p, M, a * lll_kernel(p, h, M));
  }
  return {kinetic(), std::move(Q)};
}

namespace {

// Polar rule for int g(zeta) e^{-p|zeta|^2/h} dL with s = p r^2/h; exact for polynomial g of the given degree.
struct PolarRule {
  std::vector<cplx> zeta;
  std::vector<double> w;
};

PolarRule polar_rule(int p, double h, int degree) {
  const Quadrature gl = gauss_laguerre(degree / 2 + 2);
  const int nth = degree + 2;
  PolarRule r;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double rad = std::sqrt(gl.nodes[i] * h / p);
    for (int k = 0; k < nth; ++k) {
      r.zeta.push_back(std::polar(rad, 2.0 * std::numbers::pi * k / nth));
      r.w.push_back(gl.weights[i] * (h / (2.0 * p)) * (2.0 * std::numbers::pi / nth));
    }
  }
  return r;
}

Vec lll_basis_at(cplx zeta, double h, int M) {
  Vec e(M);
  for (int k = 0; k < M; ++k) e(k) = std::pow(zeta, k) / std::sqrt(std::pow(h, k) * factorial(k));
  return e;
}

}  // namespace

double LLLModel::energy_quadrature(const Vec& z) const {
  if (z.size() != M) throw DomainError("LLL model: state dimension mismatch");
  double total = 0.0;
  for (const auto& [p, a] : alphas) {
    const PolarRule rule = polar_rule(p, h, 2 * p * (M - 1));
    double s = 0.0;
    for (std::size_t i = 0; i < rule.zeta.size(); ++i) {
      const cplx f = lll_basis_at(rule.zeta[i], h, M).transpose() * z;
      s += rule.w[i] * std::pow(std::norm(f), p);
    }
    total += a * s;
  }
  return total;
}

Vec LLLModel::galerkin_rhs(const Vec& z) const {
  if (z.size() != M) throw DomainError("LLL model: state dimension mismatch");
  Vec out = kinetic() * z;
  for (const auto& [p, a] : alphas) {
    // p int |f|^{2(p-1)} f conj(e_k) e^{-p|zeta|^2/h}
    const PolarRule rule = polar_rule(p, h, 2 * p * (M - 1));
    for (std::size_t i = 0; i < rule.zeta.size(); ++i) {
      const Vec e = lll_basis_at(rule.zeta[i], h, M);
      const cplx f = e.transpose() * z;
      out += (a * p * rule.w[i] * std::pow(std::norm(f), p - 1)) * f * e.conjugate();
    }
  }
  return out;
}

HvNModel HvNModel::random(int m, double v_scale, std::uint64_t seed, double dx) {
  if (m < 1) throw DomainError("HvN model: grid size must be positive");
  if (!(dx > 0.0)) throw DomainError("HvN model: dx must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-v_scale, v_scale);
  std::vector<double> v(static_cast<std::size_t>(m / 2 + 1));
  for (auto& x : v) x = u(rng);
  HvNModel model;
  model.m = m;
  model.A = random_hermitian(rng, m);
  model.V.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int dist = std::min(std::abs(i - j), m - std::abs(i - j));
      model.V(i, j) = v[static_cast<std::size_t>(dist)];
    }
  model.dx = dx;
  return model;
}

Vec hvn_flatten(const Mat& omega) {
  const auto m = omega.rows();
  Vec z(m * m);
  for (Eigen::Index x = 0; x < m; ++x)
    for (Eigen::Index y = 0; y < m; ++y) z(x * m + y) = omega(x, y);
  return z;
}

Mat hvn_unflatten(const Vec& z, int m) {
  if (z.size() != m * m) throw DomainError("hvn_unflatten: size mismatch");
  Mat omega(m, m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) omega(x, y) = z(x * m + y);
  return omega;
}

Mat hvn_flow_rhs(const HvNModel& model, const Mat& omega) {
  const Eigen::VectorXd n1 = (omega * omega.adjoint()).diagonal().real();
  const Eigen::VectorXd n2 = (omega.adjoint() * omega).diagonal().real();
  const Eigen::VectorXd v1 = model.dx * (model.V * n1), v2 = model.dx * (model.V * n2);
  return model.A * omega - omega * model.A + v1.cast<cplx>().asDiagonal() * omega - omega * v2.cast<cplx>().asDiagonal();
}

ClassicalHamiltonian hvn_bosonize(const HvNModel& model) {
  const int m = model.m, d = model.d();
  if (model.A.rows() != m || model.V.rows() != m || model.V.cols() != m) throw DomainError("HvN model: inconsistent sizes");
  if ((model.V - model.V.transpose()).cwiseAbs().maxCoeff() > 0.0) throw DomainError("HvN model: V must be symmetric");
  const Mat I = Mat::Identity(m, m);
  Mat L(d, d);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int x2 = 0; x2 < m; ++x2)
        for (int y2 = 0; y2 < m; ++y2) L(x * m + y, x2 * m + y2) = model.A(x, x2) * I(y, y2) - I(x, x2) * model.A(y2, y);
  MonomialMap mono;
  for (int k1 = 0; k1 < d; ++k1)
    for (int k2 = 0; k2 < d; ++k2) {
      const double W = 0.5 * (model.V(k1 / m, k2 / m) - model.V(k1 % m, k2 % m)) * model.dx;
      if (W == 0.0) continue;
      MultiIndex a = MultiIndex::unit(d, k1) + MultiIndex::unit(d, k2);
      mono[{a, a}] += W;
    }
  std::vector<PolynomialSymbol> Q;
  const CompoundSymbol qs = from_monomials(mono, d);
  for (const auto& [pq, term] : qs.terms()) Q.push_back(term);
  return {L, std::move(Q)};
}

PolynomialSymbol hvn_observable(const Mat& B, int k, int m) {
  if (k < 1) throw DomainError("hvn_observable: k must be positive");
  long mk = 1;
  for (int i = 0; i < k; ++i) mk *= m;
  if (B.rows() != mk || B.cols() != mk) throw DomainError("hvn_observable: B must act on m^k grid states");
  const int d = m * m;
  MonomialMap mono;
  std::vector<int> xs(static_cast<std::size_t>(k)), xps(static_cast<std::size_t>(k)), ys(static_cast<std::size_t>(k));
  auto digits = [m, k](long v, std::vector<int>& out) {
    for (int i = k - 1; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = static_cast<int>(v % m);
      v /= m;
    }
  };
  long ny = mk;
  // Tr[B X] = sum B_{x x'} prod_i omega_{x'_i y_i} conj(omega_{x_i y_i})
  for (long x = 0; x < mk; ++x)
    for (long xp = 0; xp < mk; ++xp) {
      const cplx c = B(x, xp);
      if (c == 0.0) continue;
      digits(x, xs);
      digits(xp, xps);
      for (long y = 0; y < ny; ++y) {
        digits(y, ys);
        MultiIndex g = MultiIndex::zero(d), b = MultiIndex::zero(d);
        for (int i = 0; i < k; ++i) {
          g[xs[static_cast<std::size_t>(i)] * m + ys[static_cast<std::size_t>(i)]] += 1;
          b[xps[static_cast<std::size_t>(i)] * m + ys[static_cast<std::size_t>(i)]] += 1;
        }
        mono[{g, b}] += c;
      }
    }
  const CompoundSymbol s = from_monomials(mono, d);
  if (s.terms().empty()) return PolynomialSymbol::zero(k, k, d);
  return s.terms().begin()->second;
}

Mat hvn_evolve(const HvNModel& model, const Mat& omega0, double t, const FlowConfig& cfg) {
  const ClassicalHamiltonian h = hvn_bosonize(model);
  return hvn_unflatten(flow(h, hvn_flatten(omega0), t, cfg).z, model.m);
}

double hvn_residual(const HvNModel& model, const Mat& omega0, double t, double step, const FlowConfig& cfg) {
  const ClassicalHamiltonian h = hvn_bosonize(model);
  auto rho_at = [&](double s) {
    const Mat w = hvn_unflatten(flow(h, hvn_flatten(omega0), s, cfg).z, model.m);
    return Mat(w * w);
  };
  const Mat rho = rho_at(t);
  const Mat drho = (rho_at(t - 2 * step) - 8.0 * rho_at(t - step) + 8.0 * rho_at(t + step) - rho_at(t + 2 * step)) / (12.0 * step);
  const Eigen::VectorXd n = rho.diagonal().real();
  const Mat Heff = model.A + (model.dx * (model.V * n)).cast<cplx>().asDiagonal().toDenseMatrix();
  return (I_unit * drho - (Heff * rho - rho * Heff)).cwiseAbs().maxCoeff();
}

}  // namespace mfq
