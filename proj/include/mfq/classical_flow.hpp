#pragma once

#include <vector>

#include "mfq/wick_calculus.hpp"

namespace mfq {

// h(z) = <z, A z> + sum_j <z^{(x)j}, Q_j z^{(x)j}>, j = 2..r.
class ClassicalHamiltonian {
 public:
  ClassicalHamiltonian(Mat A, std::vector<PolynomialSymbol> Q);

  int d() const { return static_cast<int>(A_.rows()); }
  // Largest interaction degree; 2 when there is no interaction.
  int r() const;
  const Mat& A() const { return A_; }
  const std::vector<PolynomialSymbol>& Q_terms() const { return Q_; }
  const CompoundSymbol& Q() const { return Qsym_; }
  // max_j |Q_j|
  double norm_Q() const;
  double energy(const Vec& z) const;
  Vec grad_Q(const Vec& z) const;
  // e^{-itA} z
  Vec free_propagate(const Vec& z, double t) const;

 private:
  struct Monomial {
    std::vector<int> gamma;
    std::vector<int> beta;
    cplx c;
  };
  Mat A_;
  std::vector<PolynomialSymbol> Q_;
  CompoundSymbol Qsym_;
  std::vector<Monomial> monomials_;
  Mat evecs_;
  RVec evals_;
};

// d/d zbar of Q at z.
inline Vec grad_Q(const ClassicalHamiltonian& h, const Vec& z) { return h.grad_Q(z); }

struct FlowConfig {
  int order = 5;  // 5: Dormand-Prince 5(4), 8: Runge-Kutta-Fehlberg 7(8)
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 0.05;
  double initial_step = 1e-3;
};

struct TrajectoryPoint {
  double t;
  Vec z;
};

TrajectoryPoint flow(const ClassicalHamiltonian& h, const Vec& z0, double t, const FlowConfig& cfg = {});
// Solution of the gauge-rotated equation dw/dt = -i d_zbar Q_t(w), Q_t(z) = Q(e^{-itA} z).
Vec gauge_flow(const ClassicalHamiltonian& h, const Vec& w0, double t0, double t1, const FlowConfig& cfg = {});

struct ApproxConfig {
  int quadrature_order = 8;
  int max_K = 6;
  int max_degree = 24;  // cap on p and q of intermediate symbols
};

// b_0(t), ..., b_{K-1}(t); b_k is the k-fold nested bracket integrated over the ordered simplex.
std::vector<CompoundSymbol> approx_terms(const CompoundSymbol& b, const ClassicalHamiltonian& h, double t, int K,
                                         const ApproxConfig& cfg = {});
CompoundSymbol approx_polynomial(const CompoundSymbol& b, const ClassicalHamiltonian& h, double t, int K,
                                 const ApproxConfig& cfg = {});
// Pointwise bound for |b_k(t, z)| at |z| = znorm.
double approx_term_bound(const CompoundSymbol& b, const ClassicalHamiltonian& h, double t, int k, double znorm);
// Bound on |b(F_t(z)) - b^K(t, z)| for |z| <= R.
double remainder_bound(const CompoundSymbol& b, const ClassicalHamiltonian& h, double R, double t, int K);
// delta / (4 r^3 |Q| <R>^{r-1})
double small_time(const ClassicalHamiltonian& h, double R, double delta);

}  // namespace mfq
