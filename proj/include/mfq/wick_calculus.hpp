#pragma once

#include <map>
#include <utility>
#include <vector>

#include "mfq/fock_core.hpp"

namespace mfq {

// b(z) = <z^{(x)q}, kernel z^{(x)p}>, kernel in the occupation bases of levels p (columns) and q (rows).
struct PolynomialSymbol {
  int p = 0;
  int q = 0;
  int d = 1;
  Mat kernel;

  PolynomialSymbol() = default;
  PolynomialSymbol(int p, int q, int d, Mat kernel);
  static PolynomialSymbol zero(int p, int q, int d);
  static PolynomialSymbol constant(cplx c, int d);
  // |z|^{2k}
  static PolynomialSymbol norm_power(int k, int d);
  // <xi, z>  (p=1, q=0)
  static PolynomialSymbol linear(const Vec& xi);
  // <z, eta>  (p=0, q=1)
  static PolynomialSymbol antilinear(const Vec& eta);
  // <z, B z> for a d x d matrix B
  static PolynomialSymbol quadratic(const Mat& B);

  double norm() const { return operator_norm(kernel); }
};

class CompoundSymbol {
 public:
  CompoundSymbol() = default;
  explicit CompoundSymbol(int d) : d_(d) {}
  CompoundSymbol(const PolynomialSymbol& b);  // NOLINT: implicit promotion is intended

  int d() const { return d_; }
  const std::map<std::pair<int, int>, PolynomialSymbol>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int max_p() const;
  int max_q() const;
  int max_degree() const;  // max p+q

  void add(const PolynomialSymbol& b, cplx scale = 1.0);
  void add(const CompoundSymbol& b, cplx scale = 1.0);
  CompoundSymbol operator+(const CompoundSymbol& o) const;
  CompoundSymbol operator-(const CompoundSymbol& o) const;
  CompoundSymbol operator*(cplx s) const;
  // Drops terms whose kernels are exactly zero.
  CompoundSymbol pruned() const;

 private:
  int d_ = 0;
  std::map<std::pair<int, int>, PolynomialSymbol> terms_;
};

// Monomial expansion b(z) = sum c_{gamma beta} zbar^gamma z^beta with |gamma| = q, |beta| = p.
struct MonomialKey {
  MultiIndex gamma;  // powers of zbar
  MultiIndex beta;   // powers of z
  friend auto operator<=>(const MonomialKey&, const MonomialKey&) = default;
  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
};
using MonomialMap = std::map<MonomialKey, cplx>;

// The single conversion factor between kernel entries and monomial coefficients:
// c_{gamma beta} = sqrt(p! q! / (gamma! beta!)) * kernel(rank gamma, rank beta).
double kernel_to_monomial_factor(const MultiIndex& gamma, const MultiIndex& beta);
MonomialMap to_monomials(const PolynomialSymbol& b);
MonomialMap to_monomials(const CompoundSymbol& b);
CompoundSymbol from_monomials(const MonomialMap& m, int d);

cplx evaluate(const CompoundSymbol& b, const Vec& z);
// Complex conjugate symbol: kernel adjoint, (p, q) swapped.
PolynomialSymbol conjugate(const PolynomialSymbol& b);
CompoundSymbol conjugate(const CompoundSymbol& b);

FockOperator wick_quantize(const CompoundSymbol& b, const SpacePtr& space);

PolynomialSymbol contract(const PolynomialSymbol& b1, const PolynomialSymbol& b2, int k);
// Sum of contract over all term pairs where k is admissible.
CompoundSymbol contract(const CompoundSymbol& b1, const CompoundSymbol& b2, int k);
CompoundSymbol poisson_bracket(const CompoundSymbol& b1, const CompoundSymbol& b2, int k);
CompoundSymbol compose(const CompoundSymbol& b1, const CompoundSymbol& b2, double eps);
CompoundSymbol commutator_symbol(const CompoundSymbol& b1, const CompoundSymbol& b2, double eps);

// || <N>^{-q/2} b^Wick <N>^{-p/2} || on the given space, <N> = (1 + N^2)^{1/2}.
double number_estimate_check(const PolynomialSymbol& b, const SpacePtr& space);

// Symbol of z -> b(e^{-itA} z).
PolynomialSymbol conjugate_free(const PolynomialSymbol& b, const Mat& A, double t);
CompoundSymbol conjugate_free(const CompoundSymbol& b, const Mat& A, double t);

struct FourierTerm {
  cplx coefficient;
  Vec xi;
};
// sum_k c_k W(sqrt(2) pi xi_k): Weyl quantization of sum_k c_k e^{2 pi i S(z, xi_k)}.
FockOperator weyl_quantize_fourier(const std::vector<FourierTerm>& terms, const SpacePtr& space);
// Symmetric-ordering quantization of a symbol of total degree <= 2.
FockOperator weyl_quantize_quadratic(const CompoundSymbol& b, const SpacePtr& space);

}  // namespace mfq
