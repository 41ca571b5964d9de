#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfq/fock_core.hpp"
#include "mfq/wigner_measures.hpp"

namespace mfq {

inline constexpr double kDefaultTailBudget = 1e-10;

// Normal state on a truncated Fock space. Diagonal storage is used for states that are
// diagonal in the occupation basis (tensor and Gibbs states), which keeps large truncations cheap.
class DensityMatrix {
 public:
  static DensityMatrix dense(SpacePtr space, Mat m, double deficit = 0.0);
  static DensityMatrix diagonal(SpacePtr space, RVec weights, double deficit = 0.0);
  static DensityMatrix pure(const FockVector& v, double deficit = 0.0);

  const SpacePtr& space() const { return space_; }
  bool is_diagonal() const { return diagonal_; }
  // Throws CapacityError when a diagonal state is too large to densify.
  Mat to_dense() const;
  const Mat& dense_matrix() const;
  const RVec& diagonal_weights() const;
  cplx entry(std::size_t i, std::size_t j) const;
  double trace() const;
  // Probability of each level n = 0..n_max.
  RVec level_weights() const;
  // Weight lost to truncation relative to the untruncated state.
  double deficit() const { return deficit_; }

 private:
  SpacePtr space_;
  bool diagonal_ = false;
  Mat m_;
  RVec w_;
  double deficit_ = 0.0;
};

// Smallest n_max with Poisson(|xi|^2/eps) tail beyond n_max below the budget.
int coherent_required_n_max(const Vec& xi, double eps, double budget = kDefaultTailBudget);
double coherent_tail(const Vec& xi, double eps, int n_max);
FockVector coherent_vector(const Vec& xi, const SpacePtr& space);
DensityMatrix coherent_state(const Vec& xi, const SpacePtr& space, double budget = kDefaultTailBudget);

FockVector hermite_vector(const Vec& phi, int N, const SpacePtr& space);
DensityMatrix hermite_state(const Vec& phi, int N, const SpacePtr& space);

// sum_{|alpha| = N} (N!/alpha!) lambda^alpha |e^alpha><e^alpha|
DensityMatrix tensor_state(const RVec& lambda, int N, const SpacePtr& space);
// |e^{(N_1, ..., N_k)}><e^{(N_1, ..., N_k)}|
DensityMatrix tensor_state(const std::vector<int>& occupations, const SpacePtr& space);

// sigma_i = nu_i / (nu_i + eps); level-n weight of the untruncated state.
RVec gibbs_level_weights(const RVec& nu, double eps, int n_max);
double gibbs_tail(const RVec& nu, double eps, int n_max);
int gibbs_required_n_max(const RVec& nu, double eps, double budget = kDefaultTailBudget);
DensityMatrix gibbs_state(const RVec& nu, const SpacePtr& space, double budget = kDefaultTailBudget);

// Smooth step: 1 on [0, 1/2], 0 on [1, inf), cubic in between.
double default_cutoff(double x);
DensityMatrix localize(const DensityMatrix& rho, const std::function<double(double)>& chi, double R);
inline DensityMatrix localize(const DensityMatrix& rho, double R) { return localize(rho, default_cutoff, R); }
// C / ((R/2)^{2 delta} - C) with C a bound on Tr[rho N^delta]; infinite when the denominator is not positive.
double cutoff_error_bound(double C_delta, double delta, double R);

struct StateFamily {
  std::string kind;
  // Builds the space (with its own truncation policy) and the state at the given eps.
  std::function<DensityMatrix(double eps)> generate;
  WignerMeasure predicted_measure;
};

StateFamily coherent_family(const Vec& xi, double budget = kDefaultTailBudget);
// eps must equal 1/N for an integer N.
StateFamily hermite_family(const Vec& phi);
StateFamily tensor_family(const RVec& lambda);
StateFamily gibbs_family(const RVec& nu, double budget = kDefaultTailBudget);
StateFamily localized_family(const StateFamily& base, double R);

// Integer N with N * eps = 1, or DomainError.
int particle_number(double eps);

}  // namespace mfq
