#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <vector>

#include "mfq/numerics.hpp"

namespace mfq {

// Occupation numbers (alpha_1, ..., alpha_d). Mode indices are 0-based throughout.
struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {}
  static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(d, 0)); }
  static MultiIndex unit(int d, int j);

  int size() const { return static_cast<int>(entries.size()); }
  int total() const;
  int operator[](int j) const { return entries[j]; }
  int& operator[](int j) { return entries[j]; }
  // alpha! = prod alpha_j!
  double factorial() const;
  bool dominates(const MultiIndex& other) const;  // entrywise >=

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

// Number of multi-indices of length d with total n: C(n+d-1, d-1).
std::size_t level_size(int d, int n);
// All |alpha| = n in colexicographic order (last entry varies slowest).
std::vector<MultiIndex> level_basis(int d, int n);
// Position of alpha inside level_basis(d, |alpha|).
std::size_t colex_rank(const int* alpha, int d);
inline std::size_t colex_rank(const MultiIndex& a) { return colex_rank(a.entries.data(), a.size()); }

class FockSpace {
 public:
  static constexpr std::size_t kDefaultCap = 20'000'000;

  FockSpace(int d, int n_max, double eps, std::size_t cap = kDefaultCap);

  int d() const { return d_; }
  int n_max() const { return n_max_; }
  double eps() const { return eps_; }
  std::size_t dim() const { return offsets_.back(); }
  std::size_t level_offset(int n) const { return offsets_[n]; }
  std::size_t level_dim(int n) const { return offsets_[n + 1] - offsets_[n]; }
  int level_of(std::size_t i) const { return levels_[i]; }
  const int* occ(std::size_t i) const { return basis_.data() + i * static_cast<std::size_t>(d_); }
  MultiIndex multi_index(std::size_t i) const;
  std::size_t index_of(const MultiIndex& a) const;
  // Index of the state at the same position; total must be <= n_max.
  std::size_t index_of(const int* a, int total) const;
  // Dimension of the first levels 0..L.
  std::size_t dim_up_to(int L) const { return offsets_[std::min(L, n_max_) + 1]; }

 private:
  int d_;
  int n_max_;
  double eps_;
  std::vector<std::size_t> offsets_;
  std::vector<int> basis_;
  std::vector<int> levels_;
};

using SpacePtr = std::shared_ptr<const FockSpace>;

SpacePtr build_space(int d, int n_max, double eps, std::size_t cap = FockSpace::kDefaultCap);

struct FockVector {
  SpacePtr space;
  Vec coeffs;

  static FockVector vacuum(SpacePtr s);
  static FockVector basis_state(SpacePtr s, const MultiIndex& a);
  double norm() const { return coeffs.norm(); }
};

class FockOperator {
 public:
  static constexpr std::size_t kDenseCap = 8000;

  FockOperator(SpacePtr space, Mat m);
  static FockOperator zero(SpacePtr space);
  static FockOperator identity(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const Mat& matrix() const { return m_; }
  Mat& matrix() { return m_; }

  FockOperator adjoint() const { return {space_, m_.adjoint()}; }
  FockVector apply(const FockVector& v) const;
  // Rows and columns restricted to levels 0..L.
  Mat guarded(int L) const;
  // The block mapping level n_col to level n_row.
  Mat block(int n_row, int n_col) const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect(m_) <= tol; }

  FockOperator operator*(const FockOperator& o) const;
  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator-(const FockOperator& o) const;
  FockOperator operator*(cplx s) const { return {space_, s * m_}; }
  friend FockOperator operator*(cplx s, const FockOperator& o) { return o * s; }

 private:
  SpacePtr space_;
  Mat m_;
};

void check_dense_capacity(const FockSpace& s);

// a*(e_j) and a(e_j).
FockOperator create(int j, const SpacePtr& space);
FockOperator annihilate(int j, const SpacePtr& space);
// a(xi) is antilinear in xi, a*(xi) is linear.
FockOperator a_general(const Vec& xi, const SpacePtr& space);
FockOperator a_dag_general(const Vec& xi, const SpacePtr& space);
FockOperator field_phi(const Vec& xi, const SpacePtr& space);
FockOperator field_pi(const Vec& xi, const SpacePtr& space);
FockOperator weyl(const Vec& xi, const SpacePtr& space);
FockOperator number_operator(const SpacePtr& space);
FockOperator dGamma(const Mat& A, const SpacePtr& space);
FockOperator Gamma(const Mat& S, const SpacePtr& space);

// Matrix of S^{(x)p} restricted to the symmetric power, in the occupation basis of level p.
Mat sym_power(const Mat& S, int p);
// Coordinates of z^{(x)p} in the occupation basis of level p: sqrt(p!/beta!) z^beta.
Vec symmetric_power_coords(const Vec& z, int p);

// Inner products, antilinear in the left argument.
inline cplx inner(const Vec& a, const Vec& b) { return a.dot(b); }
inline double sigma_form(const Vec& a, const Vec& b) { return inner(a, b).imag(); }
inline double s_form(const Vec& a, const Vec& b) { return inner(a, b).real(); }

}  // namespace mfq
