#include "mfq/reduced_density.hpp"

#include "mfq/errors.hpp"
#include "mfq/quantum_dynamics.hpp"

namespace mfq {

double factorial_moment(const DensityMatrix& rho, int p) {
  if (p < 0) throw DomainError("factorial_moment: negative order");
  const double eps = rho.space()->eps();
  return number_function_expectation(rho, [p, eps](double x) {
    double v = 1.0;
    for (int j = 0; j < p; ++j) v *= x - j * eps;
    return v;
  });
}

ReducedMatrix reduced_matrix(const DensityMatrix& rho, int p) {
  const auto& s = *rho.space();
  if (p < 0 || p > s.n_max()) throw DomainError("reduced_matrix: need 0 <= p <= n_max");
  const int d = s.d();
  const auto k = static_cast<Eigen::Index>(level_size(d, p));
  ReducedMatrix out{p, Mat::Zero(k, k), false};
  const double den = factorial_moment(rho, p);
  if (den == 0.0) {
    out.zero = true;
    return out;
  }
  const std::vector<MultiIndex> basis = level_basis(d, p);
  for (Eigen::Index g = 0; g < k; ++g)
    for (Eigen::Index b = g; b < k; ++b) {
      // matrix unit |e^b><e^g| as a kernel in P_{p,p}
      PolynomialSymbol unit = PolynomialSymbol::zero(p, p, d);
      unit.kernel(b, g) = 1.0;
      const cplx v = wick_expectation(rho, CompoundSymbol(unit)) / den;
      out.matrix(g, b) = v;
      out.matrix(b, g) = std::conj(v);
    }
  return out;
}

namespace {

ReducedMatrix normalize(int p, Mat m, double mass) {
  ReducedMatrix out{p, std::move(m), false};
  if (mass <= 0.0) {
    out.zero = true;
    out.matrix.setZero();
  } else {
    out.matrix /= mass;
  }
  return out;
}

ReducedMatrix from_nodes(const std::vector<PhaseNode>& nodes, int p, int d) {
  // |z^p><z^p| is gauge invariant, so orbit nodes need no expansion
  const auto k = static_cast<Eigen::Index>(level_size(d, p));
  Mat m = Mat::Zero(k, k);
  double mass = 0.0;
  for (const auto& nd : nodes) {
    const Vec v = symmetric_power_coords(nd.z, p);
    m += nd.weight * v * v.adjoint();
    mass += nd.weight * std::pow(nd.z.squaredNorm(), p);
  }
  return normalize(p, m, mass);
}

}  // namespace

ReducedMatrix asymptotic_reduced(const WignerMeasure& mu, int p, const MeasureOptions& opt) {
  if (p < 0) throw DomainError("asymptotic_reduced: p must be non-negative");
  const int d = mu.dim();
  std::vector<PhaseNode> nodes;
  bool have_nodes = true;
  try {
    nodes = phase_nodes(mu, opt);
  } catch (const UnsupportedError&) {
    have_nodes = false;
  }
  if (have_nodes) return from_nodes(nodes, p, d);

  const std::vector<MultiIndex> basis = level_basis(d, p);
  const auto k = static_cast<Eigen::Index>(basis.size());
  Mat m(k, k);
  const double fp = factorial(p);
  for (Eigen::Index g = 0; g < k; ++g)
    for (Eigen::Index b = g; b < k; ++b) {
      const double c = fp / std::sqrt(basis[static_cast<std::size_t>(g)].factorial() * basis[static_cast<std::size_t>(b)].factorial());
      // <e^g, z^p> <z^p, e^b> = c z^g zbar^b
      const cplx v = c * integrate_monomial(mu, basis[static_cast<std::size_t>(b)], basis[static_cast<std::size_t>(g)], opt);
      m(g, b) = v;
      m(b, g) = std::conj(v);
    }
  return normalize(p, m, moment(mu, p, opt));
}

ReducedMatrix asymptotic_reduced_direct(const WignerMeasure& mu0, const ClassicalHamiltonian& h, double t, int p,
                                        const MeasureOptions& opt, const FlowConfig& cfg) {
  if (p < 0) throw DomainError("asymptotic_reduced_direct: p must be non-negative");
  std::vector<PhaseNode> nodes = expand_orbits(phase_nodes(mu0, opt), opt.relative_phase_points);
  for (auto& nd : nodes) nd.z = flow(h, nd.z, t, cfg).z;
  return from_nodes(nodes, p, mu0.dim());
}

double trace_distance(const Mat& g1, const Mat& g2) {
  if (g1.rows() != g2.rows() || g1.cols() != g2.cols()) throw DomainError("trace_distance: size mismatch");
  return trace_norm(g1 - g2);
}

double trace_distance(const ReducedMatrix& g1, const ReducedMatrix& g2) {
  if (g1.p != g2.p) throw DomainError("trace_distance: different orders");
  return trace_distance(g1.matrix, g2.matrix);
}

}  // namespace mfq
