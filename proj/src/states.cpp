#include "mfq/states.hpp"

#include <cmath>
#include <string>

#include "mfq/errors.hpp"

namespace mfq {

DensityMatrix DensityMatrix::dense(SpacePtr space, Mat m, double deficit) {
  const auto n = static_cast<Eigen::Index>(space->dim());
  if (m.rows() != n || m.cols() != n) throw DomainError("density matrix does not match space");
  DensityMatrix r;
  r.space_ = std::move(space);
  r.m_ = std::move(m);
  r.deficit_ = deficit;
  return r;
}

DensityMatrix DensityMatrix::diagonal(SpacePtr space, RVec weights, double deficit) {
  if (weights.size() != static_cast<Eigen::Index>(space->dim())) throw DomainError("density weights do not match space");
  DensityMatrix r;
  r.space_ = std::move(space);
  r.diagonal_ = true;
  r.w_ = std::move(weights);
  r.deficit_ = deficit;
  return r;
}

DensityMatrix DensityMatrix::pure(const FockVector& v, double deficit) {
  return dense(v.space, v.coeffs * v.coeffs.adjoint(), deficit);
}

Mat DensityMatrix::to_dense() const {
  if (!diagonal_) return m_;
  check_dense_capacity(*space_);
  return w_.cast<cplx>().asDiagonal();
}

const Mat& DensityMatrix::dense_matrix() const {
  if (diagonal_) throw DomainError("state is stored diagonally; use to_dense()");
  return m_;
}

const RVec& DensityMatrix::diagonal_weights() const {
  if (!diagonal_) throw DomainError("state is stored densely");
  return w_;
}

cplx DensityMatrix::entry(std::size_t i, std::size_t j) const {
  if (diagonal_) return i == j ? cplx(w_(static_cast<Eigen::Index>(i))) : cplx(0.0);
  return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double DensityMatrix::trace() const { return diagonal_ ? w_.sum() : m_.trace().real(); }

RVec DensityMatrix::level_weights() const {
  RVec lw = RVec::Zero(space_->n_max() + 1);
  for (std::size_t i = 0; i < space_->dim(); ++i) lw(space_->level_of(i)) += entry(i, i).real();
  return lw;
}

double coherent_tail(const Vec& xi, double eps, int n_max) {
  const double lam = xi.squaredNorm() / eps;
  if (lam == 0.0) return 0.0;
  double tail = 0.0;
  for (int n = n_max + 1;; ++n) {
    const double term = std::exp(-lam + n * std::log(lam) - std::lgamma(n + 1.0));
    tail += term;
    if (n > lam && term < 1e-30 * std::max(tail, 1e-300)) break;
    if (n > n_max + 100000) break;
  }
  return tail;
}

int coherent_required_n_max(const Vec& xi, double eps, double budget) {
  if (!(budget > 0.0)) throw DomainError("tail budget must be positive");
  int n = 0;
  while (coherent_tail(xi, eps, n) >= budget) ++n;
  return n;
}

FockVector coherent_vector(const Vec& xi, const SpacePtr& space) {
  if (xi.size() != space->d()) throw DomainError("coherent_vector: dimension mismatch");
  const double eps = space->eps();
  const int d = space->d();
  // exp(-|xi|^2/2eps) xi^alpha / sqrt(eps^|alpha| alpha!) in log-modulus / phase form
  FockVector v{space, Vec::Zero(static_cast<Eigen::Index>(space->dim()))};
  for (std::size_t i = 0; i < space->dim(); ++i) {
    const int* a = space->occ(i);
    double lm = -xi.squaredNorm() / (2.0 * eps);
    double ph = 0.0;
    bool zero = false;
    for (int j = 0; j < d; ++j) {
      if (a[j] == 0) continue;
      const double r = std::abs(xi(j));
      if (r == 0.0) {
        zero = true;
        break;
      }
      lm += a[j] * std::log(r) - 0.5 * (a[j] * std::log(eps) + std::lgamma(a[j] + 1.0));
      ph += a[j] * std::arg(xi(j));
    }
    if (!zero) v.coeffs(static_cast<Eigen::Index>(i)) = std::polar(std::exp(lm), ph);
  }
  return v;
}

DensityMatrix coherent_state(const Vec& xi, const SpacePtr& space, double budget) {
  const double tail = coherent_tail(xi, space->eps(), space->n_max());
  if (tail >= budget)
    throw CapacityError("coherent state tail " + std::to_string(tail) + " exceeds budget; requires n_max >= " +
                        std::to_string(coherent_required_n_max(xi, space->eps(), budget)));
  return DensityMatrix::pure(coherent_vector(xi, space), tail);
}

int particle_number(double eps) {
  const long N = std::lround(1.0 / eps);
  if (N < 1 || std::abs(N * eps - 1.0) > 1e-12) throw DomainError("eps must equal 1/N for an integer N");
  return static_cast<int>(N);
}

FockVector hermite_vector(const Vec& phi, int N, const SpacePtr& space) {
  if (phi.size() != space->d()) throw DomainError("hermite_state: dimension mismatch");
  if (std::abs(phi.norm() - 1.0) > 1e-12) throw DomainError("hermite_state: phi must be a unit vector");
  if (N < 0 || N > space->n_max()) throw DomainError("hermite_state: N exceeds n_max");
  if (std::abs(N * space->eps() - 1.0) > 1e-12) throw DomainError("hermite_state: eps must equal 1/N");
  FockVector v{space, Vec::Zero(static_cast<Eigen::Index>(space->dim()))};
  const Vec c = symmetric_power_coords(phi, N);
  v.coeffs.segment(static_cast<Eigen::Index>(space->level_offset(N)), c.size()) = c;
  return v;
}

DensityMatrix hermite_state(const Vec& phi, int N, const SpacePtr& space) {
  return DensityMatrix::pure(hermite_vector(phi, N, space));
}

DensityMatrix tensor_state(const RVec& lambda, int N, const SpacePtr& space) {
  const int d = space->d();
  if (lambda.size() > d || lambda.size() < 1) throw DomainError("tensor_state: more weights than modes");
  if ((lambda.array() < 0.0).any() || std::abs(lambda.sum() - 1.0) > 1e-12)
    throw DomainError("tensor_state: weights must be non-negative and sum to 1");
  if (N < 0 || N > space->n_max()) throw DomainError("tensor_state: N exceeds n_max");
  RVec w = RVec::Zero(static_cast<Eigen::Index>(space->dim()));
  for (std::size_t i = space->level_offset(N); i < space->level_offset(N) + space->level_dim(N); ++i) {
    const int* a = space->occ(i);
    double lw = std::lgamma(N + 1.0);
    bool zero = false;
    for (int j = 0; j < d; ++j) {
      if (a[j] == 0) continue;
      const double lam = j < lambda.size() ? lambda(j) : 0.0;
      if (lam == 0.0) {
        zero = true;
        break;
      }
      lw += a[j] * std::log(lam) - std::lgamma(a[j] + 1.0);
    }
    if (!zero) w(static_cast<Eigen::Index>(i)) = std::exp(lw);
  }
  return DensityMatrix::diagonal(space, w);
}

DensityMatrix tensor_state(const std::vector<int>& occupations, const SpacePtr& space) {
  if (static_cast<int>(occupations.size()) > space->d()) throw DomainError("tensor_state: more occupations than modes");
  MultiIndex a = MultiIndex::zero(space->d());
  for (std::size_t j = 0; j < occupations.size(); ++j) {
    if (occupations[j] < 0) throw DomainError("tensor_state: negative occupation");
    a[static_cast<int>(j)] = occupations[j];
  }
  if (a.total() > space->n_max()) throw DomainError("tensor_state: total occupation exceeds n_max");
  RVec w = RVec::Zero(static_cast<Eigen::Index>(space->dim()));
  w(static_cast<Eigen::Index>(space->index_of(a))) = 1.0;
  return DensityMatrix::diagonal(space, w);
}

namespace {

RVec gibbs_sigma(const RVec& nu, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  RVec s(nu.size());
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (!(nu(i) >= 0.0) || !std::isfinite(nu(i))) throw DomainError("gibbs: nu must be non-negative and finite");
    s(i) = nu(i) / (nu(i) + eps);
  }
  return s;
}

// Level weights prod(1 - sigma) h_n(sigma) for n = 0..n_last.
RVec level_weights_upto(const RVec& sigma, int n_last) {
  RVec h = RVec::Zero(n_last + 1);
  h(0) = 1.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    for (int n = 1; n <= n_last; ++n) h(n) += sigma(i) * h(n - 1);
  double norm = 1.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) norm *= 1.0 - sigma(i);
  return norm * h;
}

}  // namespace

RVec gibbs_level_weights(const RVec& nu, double eps, int n_max) { return level_weights_upto(gibbs_sigma(nu, eps), n_max); }

double gibbs_tail(const RVec& nu, double eps, int n_max) {
  const RVec sigma = gibbs_sigma(nu, eps);
  const double smax = sigma.size() ? sigma.maxCoeff() : 0.0;
  if (smax == 0.0) return 0.0;
  // extend far enough that the remaining geometric tail is negligible
  int n_last = n_max + 64;
  while (true) {
    const RVec w = level_weights_upto(sigma, n_last);
    const double last = w(n_last);
    if (last < 1e-30 || n_last > n_max + 200000) {
      double tail = 0.0;
      for (int n = n_last; n > n_max; --n) tail += w(n);
      return tail;
    }
    n_last *= 2;
  }
}

int gibbs_required_n_max(const RVec& nu, double eps, double budget) {
  if (!(budget > 0.0)) throw DomainError("tail budget must be positive");
  const RVec sigma = gibbs_sigma(nu, eps);
  for (int n_last = 64;; n_last *= 2) {
    const RVec w = level_weights_upto(sigma, n_last);
    double tail = gibbs_tail(nu, eps, n_last);
    if (tail >= budget) continue;
    // tail holds the mass beyond n
    for (int n = n_last; n > 0; --n) {
      if (tail + w(n) >= budget) return n;
      tail += w(n);
    }
    return 0;
  }
}

DensityMatrix gibbs_state(const RVec& nu, const SpacePtr& space, double budget) {
  const int d = space->d();
  if (nu.size() != d) throw DomainError("gibbs_state: need one nu per mode");
  const RVec sigma = gibbs_sigma(nu, space->eps());
  const double tail = gibbs_tail(nu, space->eps(), space->n_max());
  if (tail >= budget)
    throw CapacityError("Gibbs state tail " + std::to_string(tail) + " exceeds budget; requires n_max >= " +
                        std::to_string(gibbs_required_n_max(nu, space->eps(), budget)));
  RVec w(static_cast<Eigen::Index>(space->dim()));
  for (std::size_t i = 0; i < space->dim(); ++i) {
    const int* a = space->occ(i);
    double v = 1.0;
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < a[j]; ++r) v *= sigma(j);
    w(static_cast<Eigen::Index>(i)) = v;
  }
  w /= w.sum();
  return DensityMatrix::diagonal(space, w, tail);
}

double default_cutoff(double x) {
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  const double s = 2.0 * (x - 0.5);
  return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

DensityMatrix localize(const DensityMatrix& rho, const std::function<double(double)>& chi, double R) {
  if (!(R > 0.0)) throw DomainError("localize: R must be positive");
  const auto& s = *rho.space();
  RVec c(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double x = s.eps() * s.level_of(i) / (R * R);
    const double v = x >= 1.0 ? 0.0 : chi(x);
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("localize: cutoff must take values in [0, 1]");
    c(static_cast<Eigen::Index>(i)) = v;
  }
  if (rho.is_diagonal()) {
    RVec w = rho.diagonal_weights().cwiseProduct(c.cwiseProduct(c));
    const double tr = w.sum();
    if (!(tr > 0.0)) throw DomainError("localize: state lies entirely outside the ball");
    return DensityMatrix::diagonal(rho.space(), w / tr, rho.deficit());
  }
  Mat m = c.asDiagonal() * rho.dense_matrix() * c.asDiagonal();
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw DomainError("localize: state lies entirely outside the ball");
  return DensityMatrix::dense(rho.space(), m / tr, rho.deficit());
}

double cutoff_error_bound(double C_delta, double delta, double R) {
  const double den = std::pow(R / 2.0, 2.0 * delta) - C_delta;
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return C_delta / den;
}

StateFamily coherent_family(const Vec& xi, double budget) {
  return {"coherent",
          [xi, budget](double eps) {
            auto s = build_space(static_cast<int>(xi.size()), coherent_required_n_max(xi, eps, budget), eps);
            return coherent_state(xi, s, budget);
          },
          WignerMeasure::dirac(xi)};
}

StateFamily hermite_family(const Vec& phi) {
  return {"hermite",
          [phi](double eps) {
            const int N = particle_number(eps);
            return hermite_state(phi, N, build_space(static_cast<int>(phi.size()), N, eps));
          },
          WignerMeasure::circle_dirac(phi)};
}

StateFamily tensor_family(const RVec& lambda) {
  std::vector<std::pair<WignerMeasure, std::vector<int>>> parts;
  for (Eigen::Index j = 0; j < lambda.size(); ++j)
    if (lambda(j) > 0.0) parts.push_back({WignerMeasure::circle_dirac(Vec::Constant(1, std::sqrt(lambda(j)))), {static_cast<int>(j)}});
  const int d = static_cast<int>(lambda.size());
  return {"tensor",
          [lambda](double eps) {
            const int N = particle_number(eps);
            return tensor_state(lambda, N, build_space(static_cast<int>(lambda.size()), N, eps));
          },
          WignerMeasure::product(d, parts)};
}

StateFamily gibbs_family(const RVec& nu, double budget) {
  const int d = static_cast<int>(nu.size());
  std::vector<std::pair<WignerMeasure, std::vector<int>>> parts;
  for (int j = 0; j < d; ++j)
    if (nu(j) > 0.0) parts.push_back({WignerMeasure::diagonal_gaussian(RVec::Constant(1, 1.0 / nu(j))), {j}});
  return {"gibbs",
          [nu, budget](double eps) {
            auto s = build_space(static_cast<int>(nu.size()), gibbs_required_n_max(nu, eps, budget), eps);
            return gibbs_state(nu, s, budget);
          },
          WignerMeasure::product(d, parts)};
}

namespace {

// Largest |z|^2 on the support, for measures with compact support.
double support_radius2(const WignerMeasure& mu) {
  if (const auto* m = std::get_if<DiracMeasure>(&mu.variant())) return m->xi.squaredNorm();
  if (const auto* m = std::get_if<CircleDiracMeasure>(&mu.variant())) return m->phi.squaredNorm();
  if (const auto* m = std::get_if<ProductOrthogonalMeasure>(&mu.variant())) {
    double r = 0.0;
    for (const auto& part : m->parts) r += support_radius2(*part.measure);
    return r;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

StateFamily localized_family(const StateFamily& base, double R) {
  if (support_radius2(base.predicted_measure) > 0.5 * R * R)
    throw UnsupportedError("localized family: predicted measure is only known when the base measure lives where the cutoff is 1");
  auto gen = base.generate;
  return {"localized(" + base.kind + ")", [gen, R](double eps) { return localize(gen(eps), R); }, base.predicted_measure};
}

}  // namespace mfq
