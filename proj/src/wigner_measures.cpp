#include "mfq/wigner_measures.hpp"

#include <cmath>
#include <set>

#include "mfq/errors.hpp"

namespace mfq {

WignerMeasure WignerMeasure::dirac(Vec xi) { return WignerMeasure(DiracMeasure{std::move(xi)}); }

WignerMeasure WignerMeasure::circle_dirac(Vec phi) { return WignerMeasure(CircleDiracMeasure{std::move(phi)}); }

WignerMeasure WignerMeasure::product(int d, const std::vector<std::pair<WignerMeasure, std::vector<int>>>& parts) {
  ProductOrthogonalMeasure m{d, {}};
  std::set<int> used;
  for (const auto& [mu, modes] : parts) {
    if (static_cast<int>(modes.size()) != mu.dim()) throw DomainError("product part: mode subset size differs from measure dimension");
    for (int j : modes) {
      if (j < 0 || j >= d) throw DomainError("product part: mode index out of range");
      if (!used.insert(j).second) throw DomainError("product parts must act on disjoint mode subsets");
    }
    m.parts.push_back({std::make_shared<const WignerMeasure>(mu), modes});
  }
  return WignerMeasure(std::move(m));
}

WignerMeasure WignerMeasure::diagonal_gaussian(RVec ell) {
  for (Eigen::Index i = 0; i < ell.size(); ++i)
    if (!(ell(i) > 0.0) || !std::isfinite(ell(i))) throw DomainError("Gaussian rates must be positive and finite");
  return WignerMeasure(DiagonalGaussianMeasure{std::move(ell)});
}

int WignerMeasure::dim() const {
  struct V {
    int operator()(const DiracMeasure& m) const { return static_cast<int>(m.xi.size()); }
    int operator()(const CircleDiracMeasure& m) const { return static_cast<int>(m.phi.size()); }
    int operator()(const ProductOrthogonalMeasure& m) const { return m.d; }
    int operator()(const DiagonalGaussianMeasure& m) const { return static_cast<int>(m.ell.size()); }
    int operator()(const PushforwardMeasure& m) const { return m.base->dim(); }
  };
  return std::visit(V{}, v_);
}

namespace {

Vec rotate(const Vec& z, double theta) { return std::exp(I_unit * theta) * z; }

cplx monomial_value(const Vec& z, const MultiIndex& gamma, const MultiIndex& beta) {
  cplx v = 1.0;
  for (int j = 0; j < gamma.size(); ++j) {
    for (int r = 0; r < gamma[j]; ++r) v *= std::conj(z(j));
    for (int r = 0; r < beta[j]; ++r) v *= z(j);
  }
  return v;
}

MultiIndex restrict_to(const MultiIndex& a, const std::vector<int>& modes) {
  MultiIndex r = MultiIndex::zero(static_cast<int>(modes.size()));
  for (std::size_t k = 0; k < modes.size(); ++k) r[static_cast<int>(k)] = a[modes[k]];
  return r;
}

Vec restrict_to(const Vec& x, const std::vector<int>& modes) {
  Vec r(static_cast<Eigen::Index>(modes.size()));
  for (std::size_t k = 0; k < modes.size(); ++k) r(static_cast<Eigen::Index>(k)) = x(modes[k]);
  return r;
}

// Average of e^{2 pi i Re(e^{-i theta} c)} over theta by the trapezoid rule, refined until converged.
cplx circle_average_exp(cplx c, double tol) {
  auto rule = [c](int M) {
    cplx s = 0.0;
    for (int k = 0; k < M; ++k) {
      const double th = 2.0 * M_PI * k / M;
      s += std::exp(I_unit * (2.0 * M_PI * (std::exp(-I_unit * th) * c).real()));
    }
    return s / double(M);
  };
  int M = 16;
  cplx prev = rule(M);
  while (M < (1 << 20)) {
    M *= 2;
    const cplx cur = rule(M);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  throw NumericalError("circle quadrature for the characteristic function did not converge");
}

cplx orbit_average(const CompoundSymbol& b, const Vec& z) {
  const int M = b.max_degree() + 2;
  cplx s = 0.0;
  for (int k = 0; k < M; ++k) s += evaluate(b, rotate(z, 2.0 * M_PI * k / M));
  return s / double(M);
}

bool has_pushforward(const WignerMeasure& mu) {
  if (std::holds_alternative<PushforwardMeasure>(mu.variant())) return true;
  if (const auto* p = std::get_if<ProductOrthogonalMeasure>(&mu.variant()))
    for (const auto& part : p->parts)
      if (has_pushforward(*part.measure)) return true;
  return false;
}

cplx integrate_nodes(const std::vector<PhaseNode>& nodes, const CompoundSymbol& b) {
  cplx s = 0.0;
  for (const auto& n : nodes) s += n.weight * (n.orbit ? orbit_average(b, n.z) : evaluate(b, n.z));
  return s;
}

}  // namespace

std::vector<PhaseNode> expand_orbits(const std::vector<PhaseNode>& nodes, int points) {
  std::vector<PhaseNode> out;
  for (const auto& n : nodes) {
    if (!n.orbit) {
      out.push_back(n);
      continue;
    }
    for (int k = 0; k < points; ++k) out.push_back({n.weight / points, rotate(n.z, 2.0 * M_PI * k / points), false});
  }
  return out;
}

std::vector<PhaseNode> phase_nodes(const WignerMeasure& mu, const MeasureOptions& opt) {
  struct V {
    const MeasureOptions& opt;
    std::vector<PhaseNode> operator()(const DiracMeasure& m) const { return {{1.0, m.xi, false}}; }
    std::vector<PhaseNode> operator()(const CircleDiracMeasure& m) const { return {{1.0, m.phi, true}}; }
    std::vector<PhaseNode> operator()(const DiagonalGaussianMeasure&) const {
      throw UnsupportedError("Gaussian measures have no finite node representation (pushforward of a Gaussian is unsupported)");
    }
    std::vector<PhaseNode> operator()(const PushforwardMeasure& m) const {
      auto nodes = phase_nodes(*m.base, opt);
      for (auto& n : nodes) n.z = flow(*m.h, n.z, m.t, m.cfg).z;
      return nodes;
    }
    std::vector<PhaseNode> operator()(const ProductOrthogonalMeasure& m) const {
      const int P = opt.relative_phase_points;
      std::vector<std::vector<PhaseNode>> per_part;
      for (const auto& part : m.parts) per_part.push_back(phase_nodes(*part.measure, opt));
      std::vector<PhaseNode> out;
      std::vector<std::size_t> idx(per_part.size(), 0);
      while (true) {
        bool all_orbit = !per_part.empty();
        for (std::size_t k = 0; k < per_part.size(); ++k) all_orbit = all_orbit && per_part[k][idx[k]].orbit;
        // Partial combinations: (weight, z) pairs built part by part.
        std::vector<std::pair<double, Vec>> partial{{1.0, Vec::Zero(m.d)}};
        bool carrier_used = false;
        for (std::size_t k = 0; k < per_part.size(); ++k) {
          const PhaseNode& n = per_part[k][idx[k]];
          std::vector<double> phases{0.0};
          if (n.orbit && !(all_orbit && !carrier_used)) {
            phases.clear();
            for (int r = 0; r < P; ++r) phases.push_back(2.0 * M_PI * r / P);
          }
          if (n.orbit && all_orbit) carrier_used = true;
          std::vector<std::pair<double, Vec>> next;
          for (const auto& [w, z] : partial)
            for (double th : phases) {
              Vec y = z;
              const Vec local = rotate(n.z, th);
              for (std::size_t c = 0; c < m.parts[k].modes.size(); ++c) y(m.parts[k].modes[c]) = local(static_cast<Eigen::Index>(c));
              next.emplace_back(w * n.weight / phases.size(), y);
            }
          partial.swap(next);
        }
        for (auto& [w, z] : partial) out.push_back({w, z, all_orbit});
        std::size_t k = 0;
        while (k < per_part.size() && ++idx[k] == per_part[k].size()) idx[k++] = 0;
        if (k == per_part.size()) break;
      }
      if (per_part.empty()) out.push_back({1.0, Vec::Zero(m.d), false});
      return out;
    }
  };
  return std::visit(V{opt}, mu.variant());
}

cplx integrate_monomial(const WignerMeasure& mu, const MultiIndex& gamma, const MultiIndex& beta, const MeasureOptions& opt) {
  if (gamma.size() != mu.dim() || beta.size() != mu.dim()) throw DomainError("integrate_monomial: dimension mismatch");
  struct V {
    const MultiIndex& g;
    const MultiIndex& b;
    const MeasureOptions& opt;
    const WignerMeasure& mu;
    cplx operator()(const DiracMeasure& m) const { return monomial_value(m.xi, g, b); }
    cplx operator()(const CircleDiracMeasure& m) const { return g.total() == b.total() ? monomial_value(m.phi, g, b) : 0.0; }
    cplx operator()(const DiagonalGaussianMeasure& m) const {
      if (!(g == b)) return 0.0;
      double v = 1.0;
      for (int i = 0; i < g.size(); ++i) v *= factorial(g[i]) / std::pow(m.ell(i), g[i]);
      return v;
    }
    cplx operator()(const ProductOrthogonalMeasure& m) const {
      std::vector<bool> covered(m.d, false);
      for (const auto& part : m.parts)
        for (int j : part.modes) covered[j] = true;
      for (int j = 0; j < m.d; ++j)
        if (!covered[j] && (g[j] != 0 || b[j] != 0)) return 0.0;
      if (has_pushforward(mu)) return (*this)(phase_nodes(mu, opt));
      cplx v = 1.0;
      for (const auto& part : m.parts)
        v *= integrate_monomial(*part.measure, restrict_to(g, part.modes), restrict_to(b, part.modes), opt);
      return v;
    }
    cplx operator()(const PushforwardMeasure&) const { return (*this)(phase_nodes(mu, opt)); }
    cplx operator()(const std::vector<PhaseNode>& nodes) const {
      cplx s = 0.0;
      for (const auto& n : nodes)
        if (!n.orbit || g.total() == b.total()) s += n.weight * monomial_value(n.z, g, b);
      return s;
    }
  };
  V v{gamma, beta, opt, mu};
  return std::visit([&](const auto& m) { return v(m); }, mu.variant());
}

cplx integrate_symbol(const WignerMeasure& mu, const CompoundSymbol& b, const MeasureOptions& opt) {
  if (b.d() != 0 && b.d() != mu.dim()) throw DomainError("integrate_symbol: dimension mismatch");
  if (const auto* m = std::get_if<DiracMeasure>(&mu.variant())) return evaluate(b, m->xi);
  if (const auto* m = std::get_if<CircleDiracMeasure>(&mu.variant())) return orbit_average(b, m->phi);
  if (has_pushforward(mu)) return integrate_nodes(phase_nodes(mu, opt), b);
  cplx s = 0.0;
  for (const auto& [key, c] : to_monomials(b)) s += c * integrate_monomial(mu, key.gamma, key.beta, opt);
  return s;
}

double moment(const WignerMeasure& mu, int alpha, const MeasureOptions& opt) {
  if (alpha < 0) throw DomainError("moment order must be >= 0");
  return integrate_symbol(mu, PolynomialSymbol::norm_power(alpha, mu.dim()), opt).real();
}

cplx characteristic(const WignerMeasure& mu, const Vec& xi, const MeasureOptions& opt) {
  if (xi.size() != mu.dim()) throw DomainError("characteristic: dimension mismatch");
  if (const auto* m = std::get_if<DiracMeasure>(&mu.variant()))
    return std::exp(I_unit * (2.0 * M_PI * s_form(m->xi, xi)));
  if (const auto* m = std::get_if<CircleDiracMeasure>(&mu.variant()))
    return circle_average_exp(inner(m->phi, xi), opt.characteristic_tol);
  if (const auto* m = std::get_if<DiagonalGaussianMeasure>(&mu.variant())) {
    double e = 0.0;
    for (Eigen::Index i = 0; i < xi.size(); ++i) e += std::norm(xi(i)) / m->ell(i);
    return std::exp(-M_PI * M_PI * e);
  }
  if (has_pushforward(mu)) {
    cplx s = 0.0;
    for (const auto& n : phase_nodes(mu, opt))
      s += n.weight * (n.orbit ? circle_average_exp(inner(n.z, xi), opt.characteristic_tol)
                               : std::exp(I_unit * (2.0 * M_PI * s_form(n.z, xi))));
    return s;
  }
  const auto& m = std::get<ProductOrthogonalMeasure>(mu.variant());
  cplx v = 1.0;
  for (const auto& part : m.parts) v *= characteristic(*part.measure, restrict_to(xi, part.modes), opt);
  return v;
}

WignerMeasure pushforward(const WignerMeasure& mu, const ClassicalHamiltonian& h, double t, const FlowConfig& cfg) {
  if (mu.dim() != h.d()) throw DomainError("pushforward: dimension mismatch");
  if (t == 0.0) return mu;
  if (const auto* m = std::get_if<DiracMeasure>(&mu.variant())) return WignerMeasure::dirac(flow(h, m->xi, t, cfg).z);
  if (const auto* m = std::get_if<CircleDiracMeasure>(&mu.variant()))
    return WignerMeasure::circle_dirac(flow(h, m->phi, t, cfg).z);
  return WignerMeasure(PushforwardMeasure{std::make_shared<const WignerMeasure>(mu),
                                          std::make_shared<const ClassicalHamiltonian>(h), t, cfg});
}

}  // namespace mfq
