#include "mfq/wick_calculus.hpp"

#include <algorithm>
#include <cmath>

#include "mfq/errors.hpp"

namespace mfq {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_multi_factorial(const int* a, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += log_factorial(a[j]);
  return s;
}

Eigen::Index level_count(int d, int n) { return static_cast<Eigen::Index>(level_size(d, n)); }

}  // namespace

PolynomialSymbol::PolynomialSymbol(int p_, int q_, int d_, Mat k) : p(p_), q(q_), d(d_), kernel(std::move(k)) {
  if (p < 0 || q < 0 || d < 1) throw DomainError("symbol degrees must be >= 0 and d >= 1");
  if (kernel.rows() != level_count(d, q) || kernel.cols() != level_count(d, p))
    throw DomainError("symbol kernel has wrong dimensions for (p, q, d)");
}

PolynomialSymbol PolynomialSymbol::zero(int p, int q, int d) {
  return {p, q, d, Mat::Zero(level_count(d, q), level_count(d, p))};
}

PolynomialSymbol PolynomialSymbol::constant(cplx c, int d) {
  Mat k(1, 1);
  k(0, 0) = c;
  return {0, 0, d, k};
}

PolynomialSymbol PolynomialSymbol::norm_power(int k, int d) {
  const auto n = level_count(d, k);
  return {k, k, d, Mat::Identity(n, n)};
}

PolynomialSymbol PolynomialSymbol::linear(const Vec& xi) {
  // <xi, z> = sum conj(xi_j) z_j; row vector over level 1.
  return {1, 0, static_cast<int>(xi.size()), xi.adjoint()};
}

PolynomialSymbol PolynomialSymbol::antilinear(const Vec& eta) {
  return {0, 1, static_cast<int>(eta.size()), eta};
}

PolynomialSymbol PolynomialSymbol::quadratic(const Mat& B) {
  return {1, 1, static_cast<int>(B.rows()), B};
}

CompoundSymbol::CompoundSymbol(const PolynomialSymbol& b) : d_(b.d) { terms_.emplace(std::make_pair(b.p, b.q), b); }

int CompoundSymbol::max_p() const {
  int m = 0;
  for (const auto& [k, v] : terms_) m = std::max(m, k.first);
  return m;
}

int CompoundSymbol::max_q() const {
  int m = 0;
  for (const auto& [k, v] : terms_) m = std::max(m, k.second);
  return m;
}

int CompoundSymbol::max_degree() const {
  int m = 0;
  for (const auto& [k, v] : terms_) m = std::max(m, k.first + k.second);
  return m;
}

void CompoundSymbol::add(const PolynomialSymbol& b, cplx scale) {
  if (d_ == 0) d_ = b.d;
  if (b.d != d_) throw DomainError("adding symbols over different dimensions");
  auto key = std::make_pair(b.p, b.q);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    PolynomialSymbol t = b;
    t.kernel *= scale;
    terms_.emplace(key, std::move(t));
  } else {
    it->second.kernel += scale * b.kernel;
  }
}

void CompoundSymbol::add(const CompoundSymbol& b, cplx scale) {
  if (d_ == 0) d_ = b.d_;
  for (const auto& [k, v] : b.terms_) add(v, scale);
}

CompoundSymbol CompoundSymbol::operator+(const CompoundSymbol& o) const {
  CompoundSymbol r = *this;
  r.add(o);
  return r;
}

CompoundSymbol CompoundSymbol::operator-(const CompoundSymbol& o) const {
  CompoundSymbol r = *this;
  r.add(o, -1.0);
  return r;
}

CompoundSymbol CompoundSymbol::operator*(cplx s) const {
  CompoundSymbol r = *this;
  for (auto& [k, v] : r.terms_) v.kernel *= s;
  return r;
}

CompoundSymbol CompoundSymbol::pruned() const {
  CompoundSymbol r(d_);
  for (const auto& [k, v] : terms_)
    if (!v.kernel.isZero(0.0)) r.add(v);
  return r;
}

double kernel_to_monomial_factor(const MultiIndex& gamma, const MultiIndex& beta) {
  const int q = gamma.total(), p = beta.total();
  return std::exp(0.5 * (log_factorial(p) + log_factorial(q) - log_multi_factorial(gamma.entries.data(), gamma.size()) -
                         log_multi_factorial(beta.entries.data(), beta.size())));
}

MonomialMap to_monomials(const PolynomialSymbol& b) {
  MonomialMap m;
  const auto rows = level_basis(b.d, b.q);
  const auto cols = level_basis(b.d, b.p);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const cplx k = b.kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (k != 0.0) m[{rows[i], cols[j]}] += kernel_to_monomial_factor(rows[i], cols[j]) * k;
    }
  return m;
}

MonomialMap to_monomials(const CompoundSymbol& b) {
  MonomialMap m;
  for (const auto& [key, t] : b.terms())
    for (const auto& [mk, c] : to_monomials(t)) m[mk] += c;
  return m;
}

CompoundSymbol from_monomials(const MonomialMap& m, int d) {
  CompoundSymbol out(d);
  std::map<std::pair<int, int>, PolynomialSymbol> acc;
  for (const auto& [key, c] : m) {
    const int p = key.beta.total(), q = key.gamma.total();
    auto it = acc.find({p, q});
    if (it == acc.end()) it = acc.emplace(std::make_pair(p, q), PolynomialSymbol::zero(p, q, d)).first;
    it->second.kernel(static_cast<Eigen::Index>(colex_rank(key.gamma)), static_cast<Eigen::Index>(colex_rank(key.beta))) +=
        c / kernel_to_monomial_factor(key.gamma, key.beta);
  }
  for (const auto& [k, v] : acc) out.add(v);
  return out;
}

cplx evaluate(const CompoundSymbol& b, const Vec& z) {
  if (b.d() != 0 && z.size() != b.d()) throw DomainError("evaluate: dimension mismatch");
  cplx s = 0.0;
  for (const auto& [key, t] : b.terms()) {
    const Vec zp = symmetric_power_coords(z, t.p);
    const Vec zq = symmetric_power_coords(z, t.q);
    s += zq.dot(t.kernel * zp);
  }
  return s;
}

PolynomialSymbol conjugate(const PolynomialSymbol& b) { return {b.q, b.p, b.d, b.kernel.adjoint()}; }

CompoundSymbol conjugate(const CompoundSymbol& b) {
  CompoundSymbol r(b.d());
  for (const auto& [k, t] : b.terms()) r.add(conjugate(t));
  return r;
}

FockOperator wick_quantize(const CompoundSymbol& b, const SpacePtr& space) {
  const auto& s = *space;
  if (b.d() != 0 && b.d() != s.d()) throw DomainError("wick_quantize: dimension mismatch");
  if (b.max_p() > s.n_max() || b.max_q() > s.n_max()) throw DomainError("wick_quantize: degree exceeds truncation");
  FockOperator op = FockOperator::zero(space);
  const int d = s.d();
  const double leps = std::log(s.eps());
  std::vector<int> low(d), tgt(d);
  for (const auto& [key, c] : to_monomials(b)) {
    const int p = key.beta.total(), q = key.gamma.total();
    const double eps_pow = std::exp(0.5 * (p + q) * leps);
    for (std::size_t col = p == 0 ? 0 : s.level_offset(p); col < s.dim(); ++col) {
      const int n = s.level_of(col);
      if (n + q - p > s.n_max()) break;
      const int* a = s.occ(col);
      bool ok = true;
      for (int j = 0; j < d && ok; ++j) {
        low[j] = a[j] - key.beta[j];
        ok = low[j] >= 0;
        tgt[j] = low[j] + key.gamma[j];
      }
      if (!ok) continue;
      const double coef = std::exp(0.5 * (log_multi_factorial(a, d) + log_multi_factorial(tgt.data(), d)) -
                                   log_multi_factorial(low.data(), d));
      op.matrix()(static_cast<Eigen::Index>(s.index_of(tgt.data(), n + q - p)), static_cast<Eigen::Index>(col)) +=
          c * eps_pow * coef;
    }
  }
  return op;
}

PolynomialSymbol contract(const PolynomialSymbol& b1, const PolynomialSymbol& b2, int k) {
  if (b1.d != b2.d) throw DomainError("contract: dimension mismatch");
  if (k < 0 || k > std::min(b1.p, b2.q)) throw DomainError("contract: k out of range");
  const int d = b1.d;
  const auto m1 = to_monomials(b1);
  const auto m2 = to_monomials(b2);
  const auto kappas = level_basis(d, k);
  const double kf = factorial(k);
  PolynomialSymbol out = PolynomialSymbol::zero(b1.p + b2.p - k, b1.q + b2.q - k, d);
  MonomialMap acc;
  for (const auto& [k1, c1] : m1)
    for (const auto& kappa : kappas) {
      if (!k1.beta.dominates(kappa)) continue;
      const MultiIndex beta1 = k1.beta - kappa;
      const double f1 = k1.beta.factorial() / beta1.factorial();
      for (const auto& [k2, c2] : m2) {
        if (!k2.gamma.dominates(kappa)) continue;
        const MultiIndex gamma2 = k2.gamma - kappa;
        const double f2 = k2.gamma.factorial() / gamma2.factorial();
        acc[{k1.gamma + gamma2, beta1 + k2.beta}] += c1 * c2 * (kf / kappa.factorial()) * f1 * f2;
      }
    }
  for (const auto& [key, c] : acc)
    out.kernel(static_cast<Eigen::Index>(colex_rank(key.gamma)), static_cast<Eigen::Index>(colex_rank(key.beta))) +=
        c / kernel_to_monomial_factor(key.gamma, key.beta);
  return out;
}

CompoundSymbol contract(const CompoundSymbol& b1, const CompoundSymbol& b2, int k) {
  CompoundSymbol out(std::max(b1.d(), b2.d()));
  for (const auto& [k1, t1] : b1.terms())
    for (const auto& [k2, t2] : b2.terms())
      if (k <= std::min(t1.p, t2.q)) out.add(contract(t1, t2, k));
  return out;
}

CompoundSymbol poisson_bracket(const CompoundSymbol& b1, const CompoundSymbol& b2, int k) {
  return contract(b1, b2, k) - contract(b2, b1, k);
}

CompoundSymbol compose(const CompoundSymbol& b1, const CompoundSymbol& b2, double eps) {
  CompoundSymbol out(std::max(b1.d(), b2.d()));
  const int kmax = std::min(b1.max_p(), b2.max_q());
  double w = 1.0;
  for (int k = 0; k <= kmax; ++k) {
    out.add(contract(b1, b2, k), w);
    w *= eps / (k + 1);
  }
  return out;
}

CompoundSymbol commutator_symbol(const CompoundSymbol& b1, const CompoundSymbol& b2, double eps) {
  CompoundSymbol out(std::max(b1.d(), b2.d()));
  const int kmax = std::max(std::min(b1.max_p(), b2.max_q()), std::min(b2.max_p(), b1.max_q()));
  double w = eps;
  for (int k = 1; k <= kmax; ++k) {
    out.add(poisson_bracket(b1, b2, k), w);
    w *= eps / (k + 1);
  }
  return out;
}

double number_estimate_check(const PolynomialSymbol& b, const SpacePtr& space) {
  const auto& s = *space;
  const Mat W = wick_quantize(CompoundSymbol(b), space).matrix();
  RVec left(static_cast<Eigen::Index>(s.dim())), right(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double en = s.eps() * s.level_of(i);
    const double bracket = std::sqrt(1.0 + en * en);
    left(static_cast<Eigen::Index>(i)) = std::pow(bracket, -0.5 * b.q);
    right(static_cast<Eigen::Index>(i)) = std::pow(bracket, -0.5 * b.p);
  }
  return operator_norm(left.asDiagonal() * W * right.asDiagonal());
}

PolynomialSymbol conjugate_free(const PolynomialSymbol& b, const Mat& A, double t) {
  if (A.rows() != b.d || A.cols() != b.d) throw DomainError("conjugate_free: dimension mismatch");
  if (t == 0.0) return b;
  const Mat U = hermitian_expi(A, t);
  return {b.p, b.q, b.d, sym_power(U, b.q) * b.kernel * sym_power(U.adjoint(), b.p)};
}

CompoundSymbol conjugate_free(const CompoundSymbol& b, const Mat& A, double t) {
  CompoundSymbol r(b.d());
  for (const auto& [k, v] : b.terms()) r.add(conjugate_free(v, A, t));
  return r;
}

FockOperator weyl_quantize_fourier(const std::vector<FourierTerm>& terms, const SpacePtr& space) {
  FockOperator op = FockOperator::zero(space);
  for (const auto& t : terms) op.matrix() += t.coefficient * weyl(std::sqrt(2.0) * M_PI * t.xi, space).matrix();
  return op;
}

FockOperator weyl_quantize_quadratic(const CompoundSymbol& b, const SpacePtr& space) {
  if (b.max_degree() > 2)
    throw UnsupportedError("Weyl quantization is implemented for finite Fourier sums and symbols of degree <= 2 only");
  CompoundSymbol shifted = b;
  const auto it = b.terms().find({1, 1});
  if (it != b.terms().end())
    shifted.add(PolynomialSymbol::constant(0.5 * space->eps() * it->second.kernel.trace(), space->d()));
  return wick_quantize(shifted, space);
}

}  // namespace mfq
