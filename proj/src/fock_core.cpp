#include "mfq/fock_core.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mfq/errors.hpp"

namespace mfq {

MultiIndex MultiIndex::unit(int d, int j) {
  MultiIndex a = zero(d);
  a.entries.at(j) = 1;
  return a;
}

int MultiIndex::total() const { return std::accumulate(entries.begin(), entries.end(), 0); }

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int e : entries) f *= mfq::factorial(e);
  return f;
}

bool MultiIndex::dominates(const MultiIndex& o) const {
  for (int j = 0; j < size(); ++j)
    if (entries[j] < o.entries[j]) return false;
  return true;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r = a;
  for (int j = 0; j < r.size(); ++j) r.entries[j] += b.entries[j];
  return r;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r = a;
  for (int j = 0; j < r.size(); ++j) r.entries[j] -= b.entries[j];
  return r;
}

std::size_t level_size(int d, int n) {
  if (n < 0) return 0;
  return binomial(n + d - 1, d - 1);
}

namespace {

void enumerate_level(int k, int m, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (k == 1) {
    cur[0] = m;
    out.emplace_back(cur);
    return;
  }
  for (int last = 0; last <= m; ++last) {
    cur[k - 1] = last;
    enumerate_level(k - 1, m - last, cur, out);
  }
  cur[k - 1] = 0;
}

}  // namespace

std::vector<MultiIndex> level_basis(int d, int n) {
  if (d < 1) throw DomainError("dimension d must be >= 1");
  std::vector<MultiIndex> out;
  out.reserve(level_size(d, n));
  std::vector<int> cur(d, 0);
  enumerate_level(d, n, cur, out);
  return out;
}

std::size_t colex_rank(const int* a, int d) {
  int n = 0;
  for (int j = 0; j < d; ++j) n += a[j];
  std::size_t r = 0;
  for (int k = d - 1; k >= 1; --k) {
    // prefixes of length k with larger remaining sum come first
    r += binomial(n + k, k) - binomial(n - a[k] + k, k);
    n -= a[k];
  }
  return r;
}

FockSpace::FockSpace(int d, int n_max, double eps, std::size_t cap)
    : d_(d), n_max_(n_max), eps_(eps) {
  if (d < 1) throw DomainError("dimension d must be >= 1");
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive and finite");
  offsets_.assign(1, 0);
  for (int n = 0; n <= n_max; ++n) {
    offsets_.push_back(offsets_.back() + level_size(d, n));
    if (offsets_.back() > cap) {
      const std::size_t total = binomial(n_max + d, d);
      const double mib = static_cast<double>(total) * (d * sizeof(int) + 8 * sizeof(double)) / (1 << 20);
      throw CapacityError("Fock space dimension " + std::to_string(total) + " exceeds cap " +
                          std::to_string(cap) + " (about " + std::to_string(static_cast<long>(mib)) +
                          " MiB required)");
    }
  }
  basis_.reserve(dim() * d);
  levels_.reserve(dim());
  for (int n = 0; n <= n_max; ++n) {
    for (const auto& a : level_basis(d, n)) {
      basis_.insert(basis_.end(), a.entries.begin(), a.entries.end());
      levels_.push_back(n);
    }
  }
}

MultiIndex FockSpace::multi_index(std::size_t i) const {
  return MultiIndex(std::vector<int>(occ(i), occ(i) + d_));
}

std::size_t FockSpace::index_of(const MultiIndex& a) const {
  if (a.size() != d_) throw DomainError("multi-index length does not match d");
  return index_of(a.entries.data(), a.total());
}

std::size_t FockSpace::index_of(const int* a, int total) const {
  if (total > n_max_ || total < 0) throw DomainError("multi-index outside the truncated space");
  return offsets_[total] + colex_rank(a, d_);
}

SpacePtr build_space(int d, int n_max, double eps, std::size_t cap) {
  return std::make_shared<const FockSpace>(d, n_max, eps, cap);
}

FockVector FockVector::vacuum(SpacePtr s) {
  Vec c = Vec::Zero(static_cast<Eigen::Index>(s->dim()));
  c(0) = 1.0;
  return {std::move(s), std::move(c)};
}

FockVector FockVector::basis_state(SpacePtr s, const MultiIndex& a) {
  Vec c = Vec::Zero(static_cast<Eigen::Index>(s->dim()));
  c(static_cast<Eigen::Index>(s->index_of(a))) = 1.0;
  return {std::move(s), std::move(c)};
}

void check_dense_capacity(const FockSpace& s) {
  if (s.dim() > FockOperator::kDenseCap)
    throw CapacityError("dense operator of dimension " + std::to_string(s.dim()) +
                        " exceeds cap " + std::to_string(FockOperator::kDenseCap));
}

FockOperator::FockOperator(SpacePtr space, Mat m) : space_(std::move(space)), m_(std::move(m)) {
  const auto n = static_cast<Eigen::Index>(space_->dim());
  if (m_.rows() != n || m_.cols() != n) throw DomainError("operator matrix does not match space");
}

FockOperator FockOperator::zero(SpacePtr space) {
  check_dense_capacity(*space);
  const auto n = static_cast<Eigen::Index>(space->dim());
  return {std::move(space), Mat::Zero(n, n)};
}

FockOperator FockOperator::identity(SpacePtr space) {
  check_dense_capacity(*space);
  const auto n = static_cast<Eigen::Index>(space->dim());
  return {std::move(space), Mat::Identity(n, n)};
}

FockVector FockOperator::apply(const FockVector& v) const { return {space_, m_ * v.coeffs}; }

Mat FockOperator::guarded(int L) const {
  if (L < 0) return Mat(0, 0);
  const auto n = static_cast<Eigen::Index>(space_->dim_up_to(L));
  return m_.topLeftCorner(n, n);
}

Mat FockOperator::block(int n_row, int n_col) const {
  const auto& s = *space_;
  return m_.block(static_cast<Eigen::Index>(s.level_offset(n_row)),
                  static_cast<Eigen::Index>(s.level_offset(n_col)),
                  static_cast<Eigen::Index>(s.level_dim(n_row)),
                  static_cast<Eigen::Index>(s.level_dim(n_col)));
}

namespace {

void same_space(const FockOperator& a, const FockOperator& b) {
  if (a.space() != b.space() && a.space()->dim() != b.space()->dim())
    throw DomainError("operators act on different spaces");
}

void check_mode(int j, const FockSpace& s) {
  if (j < 0 || j >= s.d()) throw DomainError("mode index out of range");
}

void check_vector(const Vec& xi, const FockSpace& s) {
  if (xi.size() != s.d()) throw DomainError("vector dimension does not match d");
}

}  // namespace

FockOperator FockOperator::operator*(const FockOperator& o) const {
  same_space(*this, o);
  return {space_, m_ * o.m_};
}

FockOperator FockOperator::operator+(const FockOperator& o) const {
  same_space(*this, o);
  return {space_, m_ + o.m_};
}

FockOperator FockOperator::operator-(const FockOperator& o) const {
  same_space(*this, o);
  return {space_, m_ - o.m_};
}

FockOperator create(int j, const SpacePtr& space) {
  const auto& s = *space;
  check_mode(j, s);
  FockOperator op = FockOperator::zero(space);
  std::vector<int> a(s.d());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const int n = s.level_of(i);
    if (n == s.n_max()) break;
    std::copy(s.occ(i), s.occ(i) + s.d(), a.begin());
    const double c = std::sqrt(s.eps() * (a[j] + 1));
    a[j] += 1;
    op.matrix()(static_cast<Eigen::Index>(s.index_of(a.data(), n + 1)), static_cast<Eigen::Index>(i)) = c;
  }
  return op;
}

FockOperator annihilate(int j, const SpacePtr& space) { return create(j, space).adjoint(); }

FockOperator a_dag_general(const Vec& xi, const SpacePtr& space) {
  check_vector(xi, *space);
  FockOperator op = FockOperator::zero(space);
  for (int j = 0; j < space->d(); ++j)
    if (xi(j) != 0.0) op.matrix() += xi(j) * create(j, space).matrix();
  return op;
}

FockOperator a_general(const Vec& xi, const SpacePtr& space) { return a_dag_general(xi, space).adjoint(); }

FockOperator field_phi(const Vec& xi, const SpacePtr& space) {
  const FockOperator ad = a_dag_general(xi, space);
  return {space, (ad.matrix() + ad.matrix().adjoint()) / std::sqrt(2.0)};
}

FockOperator field_pi(const Vec& xi, const SpacePtr& space) { return field_phi(I_unit * xi, space); }

FockOperator weyl(const Vec& xi, const SpacePtr& space) {
  const FockOperator phi = field_phi(xi, space);
  return {space, hermitian_expi(phi.matrix(), 1.0)};
}

FockOperator number_operator(const SpacePtr& space) {
  FockOperator op = FockOperator::zero(space);
  for (std::size_t i = 0; i < space->dim(); ++i)
    op.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = space->eps() * space->level_of(i);
  return op;
}

FockOperator dGamma(const Mat& A, const SpacePtr& space) {
  const auto& s = *space;
  if (A.rows() != s.d() || A.cols() != s.d()) throw DomainError("dGamma: matrix dimension mismatch");
  if (hermiticity_defect(A) > 1e-12) throw DomainError("dGamma: matrix is not Hermitian");
  FockOperator op = FockOperator::zero(space);
  std::vector<int> a(s.d());
  for (std::size_t col = 0; col < s.dim(); ++col) {
    const int n = s.level_of(col);
    for (int j = 0; j < s.d(); ++j) {
      std::copy(s.occ(col), s.occ(col) + s.d(), a.begin());
      if (a[j] == 0) continue;
      const double cj = std::sqrt(static_cast<double>(a[j]));
      a[j] -= 1;
      for (int i = 0; i < s.d(); ++i) {
        if (A(i, j) == 0.0) continue;
        const double ci = std::sqrt(static_cast<double>(a[i] + 1));
        a[i] += 1;
        op.matrix()(static_cast<Eigen::Index>(s.index_of(a.data(), n)), static_cast<Eigen::Index>(col)) +=
            s.eps() * ci * cj * A(i, j);
        a[i] -= 1;
      }
    }
  }
  return op;
}

Mat sym_power(const Mat& S, int p) {
  const int d = static_cast<int>(S.rows());
  if (S.cols() != d) throw DomainError("sym_power: matrix must be square");
  const auto basis = level_basis(d, p);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Mat out = Mat::Zero(dim, dim);
  std::vector<int> a(d);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const MultiIndex& beta = basis[col];
    // Expand prod_j (sum_i S_ij x_i)^{beta_j} in unnormalized monomials x^alpha.
    std::vector<cplx> poly(1, 1.0);
    int m = 0;
    for (int j = 0; j < d; ++j) {
      for (int rep = 0; rep < beta[j]; ++rep) {
        std::vector<cplx> next(level_size(d, m + 1), 0.0);
        const auto lvl = level_basis(d, m);
        for (std::size_t k = 0; k < lvl.size(); ++k) {
          if (poly[k] == 0.0) continue;
          a = lvl[k].entries;
          for (int i = 0; i < d; ++i) {
            if (S(i, j) == 0.0) continue;
            a[i] += 1;
            next[colex_rank(a.data(), d)] += poly[k] * S(i, j);
            a[i] -= 1;
          }
        }
        poly.swap(next);
        ++m;
      }
    }
    const double bf = beta.factorial();
    for (Eigen::Index row = 0; row < dim; ++row)
      out(row, col) = poly[static_cast<std::size_t>(row)] * std::sqrt(basis[row].factorial() / bf);
  }
  return out;
}

FockOperator Gamma(const Mat& S, const SpacePtr& space) {
  const auto& s = *space;
  if (S.rows() != s.d() || S.cols() != s.d()) throw DomainError("Gamma: matrix dimension mismatch");
  FockOperator op = FockOperator::zero(space);
  for (int n = 0; n <= s.n_max(); ++n) {
    const auto off = static_cast<Eigen::Index>(s.level_offset(n));
    const auto dn = static_cast<Eigen::Index>(s.level_dim(n));
    op.matrix().block(off, off, dn, dn) = sym_power(S, n);
  }
  return op;
}

Vec symmetric_power_coords(const Vec& z, int p) {
  const int d = static_cast<int>(z.size());
  const auto basis = level_basis(d, p);
  Vec out(static_cast<Eigen::Index>(basis.size()));
  const double pf = factorial(p);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    cplx mono = 1.0;
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < basis[k][j]; ++r) mono *= z(j);
    out(static_cast<Eigen::Index>(k)) = std::sqrt(pf / basis[k].factorial()) * mono;
  }
  return out;
}

}  // namespace mfq
