#pragma once

#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "mfq/classical_flow.hpp"

namespace mfq {

class WignerMeasure;
using MeasurePtr = std::shared_ptr<const WignerMeasure>;

struct DiracMeasure {
  Vec xi;
};
// Uniform average of delta_{e^{i theta} phi} over theta.
struct CircleDiracMeasure {
  Vec phi;
};
struct ProductPart {
  MeasurePtr measure;
  std::vector<int> modes;
};
// Independent components on disjoint coordinate subsets; uncovered coordinates are fixed at 0.
struct ProductOrthogonalMeasure {
  int d;
  std::vector<ProductPart> parts;
};
// prod_i (ell_i / pi) e^{-ell_i |z_i|^2} L(dz_i)
struct DiagonalGaussianMeasure {
  RVec ell;
};
struct PushforwardMeasure {
  MeasurePtr base;
  std::shared_ptr<const ClassicalHamiltonian> h;
  double t;
  FlowConfig cfg;
};

class WignerMeasure {
 public:
  using Variant =
      std::variant<DiracMeasure, CircleDiracMeasure, ProductOrthogonalMeasure, DiagonalGaussianMeasure, PushforwardMeasure>;

  static WignerMeasure dirac(Vec xi);
  static WignerMeasure circle_dirac(Vec phi);
  static WignerMeasure product(int d, const std::vector<std::pair<WignerMeasure, std::vector<int>>>& parts);
  static WignerMeasure diagonal_gaussian(RVec ell);

  int dim() const;
  const Variant& variant() const { return v_; }

 private:
  explicit WignerMeasure(Variant v) : v_(std::move(v)) {}
  Variant v_;
  friend WignerMeasure pushforward(const WignerMeasure&, const ClassicalHamiltonian&, double, const FlowConfig&);
};

struct MeasureOptions {
  // Quadrature points per circle for phases that are not removed by gauge equivariance.
  int relative_phase_points = 32;
  double characteristic_tol = 1e-13;
};

// A point z with weight; when orbit is set the point stands for the uniform average over e^{i theta} z.
struct PhaseNode {
  double weight;
  Vec z;
  bool orbit;
};

std::vector<PhaseNode> phase_nodes(const WignerMeasure& mu, const MeasureOptions& opt = {});
// All orbits replaced by `points` explicit phases.
std::vector<PhaseNode> expand_orbits(const std::vector<PhaseNode>& nodes, int points);

cplx integrate_symbol(const WignerMeasure& mu, const CompoundSymbol& b, const MeasureOptions& opt = {});
// integral of zbar^gamma z^beta
cplx integrate_monomial(const WignerMeasure& mu, const MultiIndex& gamma, const MultiIndex& beta,
                        const MeasureOptions& opt = {});
double moment(const WignerMeasure& mu, int alpha, const MeasureOptions& opt = {});
// integral of e^{2 pi i S(z, xi)}; the sign matches Tr[rho W(sqrt(2) pi xi)] for coherent states.
cplx characteristic(const WignerMeasure& mu, const Vec& xi, const MeasureOptions& opt = {});
WignerMeasure pushforward(const WignerMeasure& mu, const ClassicalHamiltonian& h, double t, const FlowConfig& cfg = {});

}  // namespace mfq
