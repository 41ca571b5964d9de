#include "mfq/quantum_dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <cmath>
#include <numbers>

#include "mfq/errors.hpp"

namespace mfq {

namespace {

FockOperator assemble(const ClassicalHamiltonian& h, const SpacePtr& space) {
  if (h.d() != space->d()) throw DomainError("hamiltonian and space dimensions differ");
  if (h.r() > space->n_max()) throw DomainError("interaction degree exceeds n_max");
  FockOperator H = dGamma(h.A(), space);
  if (!h.Q().empty()) H = H + wick_quantize(h.Q(), space);
  return H;
}

// sum over levels of B_n X_{nm} C_m^* for block-diagonal B, C
Mat conjugate_blocks(const Mat& X, const FockSpace& s, const std::vector<Mat>& U) {
  Mat out(X.rows(), X.cols());
  for (int n = 0; n <= s.n_max(); ++n) {
    const auto on = static_cast<Eigen::Index>(s.level_offset(n)), dn = static_cast<Eigen::Index>(s.level_dim(n));
    for (int m = 0; m <= s.n_max(); ++m) {
      const auto om = static_cast<Eigen::Index>(s.level_offset(m)), dm = static_cast<Eigen::Index>(s.level_dim(m));
      out.block(on, om, dn, dm) = U[static_cast<std::size_t>(n)] * X.block(on, om, dn, dm) * U[static_cast<std::size_t>(m)].adjoint();
    }
  }
  return out;
}

std::vector<Mat> free_blocks(const Mat& A, const FockSpace& s, double t) {
  const Mat u = hermitian_expi(A, t);
  std::vector<Mat> U;
  for (int n = 0; n <= s.n_max(); ++n) U.push_back(sym_power(u, n));
  return U;
}

}  // namespace

QuantumHamiltonian::QuantumHamiltonian(const ClassicalHamiltonian& h, SpacePtr space)
    : space_(space), A_(h.A()), Q_(h.Q()), H_(assemble(h, space)), Qw_(FockOperator::zero(space)) {
  if (!Q_.empty()) Qw_ = wick_quantize(Q_, space_);
  if (!H_.is_hermitian(1e-12 * std::max(1.0, operator_norm(H_.matrix())))) throw DomainError("hamiltonian is not Hermitian");
  for (int n = 0; n <= space_->n_max(); ++n) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H_.block(n, n));
    evals_.push_back(es.eigenvalues());
    evecs_.push_back(es.eigenvectors());
  }
}

Mat QuantumHamiltonian::propagator(double s) const {
  const auto dim = static_cast<Eigen::Index>(space_->dim());
  Mat U = Mat::Zero(dim, dim);
  for (int n = 0; n <= space_->n_max(); ++n) {
    const auto o = static_cast<Eigen::Index>(space_->level_offset(n)), k = static_cast<Eigen::Index>(space_->level_dim(n));
    const Vec ph = (I_unit * (s / space_->eps()) * evals_[static_cast<std::size_t>(n)].cast<cplx>()).array().exp();
    const Mat& V = evecs_[static_cast<std::size_t>(n)];
    U.block(o, o, k, k) = V * ph.asDiagonal() * V.adjoint();
  }
  return U;
}

QuantumHamiltonian build_hamiltonian(const Mat& A, const std::vector<PolynomialSymbol>& Q, const SpacePtr& space) {
  return {ClassicalHamiltonian(A, Q), space};
}

DensityMatrix evolve(const DensityMatrix& rho, const QuantumHamiltonian& H, double t) {
  if (rho.space().get() != H.space().get() && rho.space()->dim() != H.space()->dim())
    throw DomainError("state and hamiltonian live on different spaces");
  const auto& s = *H.space();
  std::vector<Mat> U;
  for (int n = 0; n <= s.n_max(); ++n) {
    const Vec ph = (-I_unit * (t / s.eps()) * H.level_eigenvalues(n).cast<cplx>()).array().exp();
    const Mat& V = H.level_eigenvectors(n);
    U.push_back(V * ph.asDiagonal() * V.adjoint());
  }
  return DensityMatrix::dense(rho.space(), conjugate_blocks(rho.to_dense(), s, U), rho.deficit());
}

FockOperator free_heisenberg(const FockOperator& O, const Mat& A, double t) {
  return {O.space(), conjugate_blocks(O.matrix(), *O.space(), free_blocks(A, *O.space(), t))};
}

DensityMatrix interaction_picture(const DensityMatrix& rho, const QuantumHamiltonian& H, double t) {
  const DensityMatrix rt = evolve(rho, H, t);
  const auto& s = *H.space();
  return DensityMatrix::dense(rho.space(), conjugate_blocks(rt.dense_matrix(), s, free_blocks(H.A(), s, t)), rho.deficit());
}

cplx expectation(const DensityMatrix& rho, const FockOperator& O) {
  if (O.space()->dim() != rho.space()->dim()) throw DomainError("operator and state live on different spaces");
  if (rho.is_diagonal()) return (rho.diagonal_weights().cast<cplx>().array() * O.matrix().diagonal().array()).sum();
  return (rho.dense_matrix().array() * O.matrix().transpose().array()).sum();
}

cplx wick_expectation(const DensityMatrix& rho, const CompoundSymbol& b) {
  const auto& s = *rho.space();
  if (b.d() != s.d()) throw DomainError("symbol and state dimensions differ");
  const int d = s.d();
  const double leps = std::log(s.eps());
  cplx total = 0.0;
  std::vector<int> target(static_cast<std::size_t>(d));
  for (const auto& [key, c] : to_monomials(b)) {
    const int p = key.beta.total(), q = key.gamma.total();
    if (rho.is_diagonal() && !(key.gamma == key.beta)) continue;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
      const int* a = s.occ(i);
      bool ok = true;
      int lvl = 0;
      double lc = 0.5 * (p + q) * leps;
      for (int j = 0; j < d && ok; ++j) {
        const int rem = a[j] - key.beta[j];
        if (rem < 0) {
          ok = false;
          break;
        }
        target[static_cast<std::size_t>(j)] = rem + key.gamma[j];
        lvl += target[static_cast<std::size_t>(j)];
        lc += 0.5 * (std::lgamma(a[j] + 1.0) + std::lgamma(target[static_cast<std::size_t>(j)] + 1.0)) - std::lgamma(rem + 1.0);
      }
      if (!ok || lvl > s.n_max()) continue;
      const std::size_t k = s.level_offset(lvl) + colex_rank(target.data(), d);
      acc += std::exp(lc) * rho.entry(i, k);
    }
    total += c * acc;
  }
  return total;
}

double number_moment(const DensityMatrix& rho, int k) {
  if (k < 0) throw DomainError("number_moment: negative power");
  return number_function_expectation(rho, [k](double x) { return std::pow(x, k); });
}

double number_function_expectation(const DensityMatrix& rho, const std::function<double(double)>& f) {
  const RVec lw = rho.level_weights();
  double sum = 0.0;
  for (Eigen::Index n = 0; n < lw.size(); ++n)
    if (lw(n) != 0.0) sum += lw(n) * f(rho.space()->eps() * static_cast<double>(n));
  return sum;
}

namespace {

// exp(i a(c) / sqrt(2)) as a dense matrix; a(c) lowers the level so the series terminates.
Mat lowering_exponential(const Vec& c, const FockSpace& s) {
  const auto dim = static_cast<Eigen::Index>(s.dim());
  std::vector<Eigen::Triplet<cplx>> trip;
  std::vector<int> a(static_cast<std::size_t>(s.d()));
  for (std::size_t col = 0; col < s.dim(); ++col) {
    const int n = s.level_of(col);
    if (n == 0) continue;
    std::copy(s.occ(col), s.occ(col) + s.d(), a.begin());
    for (int j = 0; j < s.d(); ++j) {
      if (a[static_cast<std::size_t>(j)] == 0 || c(j) == 0.0) continue;
      const double amp = std::sqrt(s.eps() * a[static_cast<std::size_t>(j)]);
      a[static_cast<std::size_t>(j)] -= 1;
      const std::size_t row = s.level_offset(n - 1) + colex_rank(a.data(), s.d());
      a[static_cast<std::size_t>(j)] += 1;
      trip.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), std::conj(c(j)) * amp);
    }
  }
  Eigen::SparseMatrix<cplx> L(dim, dim);
  L.setFromTriplets(trip.begin(), trip.end());
  Mat term = Mat::Identity(dim, dim), U = term;
  for (int k = 1; k <= s.n_max(); ++k) {
    term = (I_unit / (std::sqrt(2.0) * k)) * (L * term);
    U += term;
  }
  return U;
}

}  // namespace

cplx characteristic_fn(const DensityMatrix& rho, const Vec& xi) {
  const auto& s = *rho.space();
  if (xi.size() != s.d()) throw DomainError("characteristic_fn: dimension mismatch");
  check_dense_capacity(s);
  // W(c) = exp(i a*(c)/sqrt2) exp(i a(c)/sqrt2) exp(-eps |c|^2 / 4), compressed to the retained levels
  const Vec c = std::sqrt(2.0) * std::numbers::pi * xi;
  const double gauss = std::exp(-s.eps() * c.squaredNorm() / 4.0);
  const Mat U = lowering_exponential(c, s);
  if (rho.is_diagonal()) {
    // <e|exp(i a*/sqrt2) exp(i a/sqrt2)|e> = sum_b (-1)^{|e|-|b|} |U_{b e}|^2
    double total = 0.0;
    const RVec& w = rho.diagonal_weights();
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (w(static_cast<Eigen::Index>(i)) == 0.0) continue;
      const int n = s.level_of(i);
      double acc = 0.0;
      for (int m = 0; m <= n; ++m) {
        const double sq = U.col(static_cast<Eigen::Index>(i))
                              .segment(static_cast<Eigen::Index>(s.level_offset(m)), static_cast<Eigen::Index>(s.level_dim(m)))
                              .squaredNorm();
        acc += ((n - m) % 2 == 0 ? 1.0 : -1.0) * sq;
      }
      total += w(static_cast<Eigen::Index>(i)) * acc;
    }
    return gauss * total;
  }
  // V = exp(-i a(c)/sqrt2) differs from U by the sign (-1)^{level difference}
  Mat V = U;
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j)
      if ((s.level_of(i) + s.level_of(j)) % 2 == 1) V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *= -1.0;
  const Mat G = V.adjoint() * U;
  return gauss * (rho.dense_matrix().array() * G.transpose().array()).sum();
}

cplx function_of_wick(const DensityMatrix& rho, const PolynomialSymbol& b, const std::function<cplx(double)>& f) {
  if (b.p != b.q) throw DomainError("function_of_wick: symbol must be in P_{p,p}");
  if (hermiticity_defect(b.kernel) > 1e-12 * std::max(1.0, b.kernel.norm())) throw DomainError("function_of_wick: kernel must be Hermitian");
  const auto& s = *rho.space();
  const FockOperator B = wick_quantize(CompoundSymbol(b), rho.space());
  cplx total = 0.0;
  for (int n = 0; n <= s.n_max(); ++n) {
    const auto o = static_cast<Eigen::Index>(s.level_offset(n)), k = static_cast<Eigen::Index>(s.level_dim(n));
    Eigen::SelfAdjointEigenSolver<Mat> es(B.block(n, n));
    Mat r(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) r(i, j) = rho.entry(static_cast<std::size_t>(o + i), static_cast<std::size_t>(o + j));
    const Mat rr = es.eigenvectors().adjoint() * r * es.eigenvectors();
    for (Eigen::Index i = 0; i < k; ++i) total += f(es.eigenvalues()(i)) * rr(i, i);
  }
  return total;
}

}  // namespace mfq
