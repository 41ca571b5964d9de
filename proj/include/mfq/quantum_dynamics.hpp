#pragma once

#include <functional>
#include <vector>

#include "mfq/classical_flow.hpp"
#include "mfq/states.hpp"
#include "mfq/wick_calculus.hpp"

namespace mfq {

// H = dGamma(A) + Q^Wick, stored together with its per-level spectral data.
class QuantumHamiltonian {
 public:
  QuantumHamiltonian(const ClassicalHamiltonian& h, SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const Mat& A() const { return A_; }
  const CompoundSymbol& Q() const { return Q_; }
  const FockOperator& H() const { return H_; }
  const FockOperator& Q_wick() const { return Qw_; }
  const RVec& level_eigenvalues(int n) const { return evals_[static_cast<std::size_t>(n)]; }
  const Mat& level_eigenvectors(int n) const { return evecs_[static_cast<std::size_t>(n)]; }
  // Block-diagonal unitary exp(i s H / eps).
  Mat propagator(double s) const;

 private:
  SpacePtr space_;
  Mat A_;
  CompoundSymbol Q_;
  FockOperator H_;
  FockOperator Qw_;
  std::vector<RVec> evals_;
  std::vector<Mat> evecs_;
};

QuantumHamiltonian build_hamiltonian(const Mat& A, const std::vector<PolynomialSymbol>& Q, const SpacePtr& space);

// exp(-itH/eps) rho exp(itH/eps)
DensityMatrix evolve(const DensityMatrix& rho, const QuantumHamiltonian& H, double t);
// exp(it dGamma(A)/eps) rho(t) exp(-it dGamma(A)/eps)
DensityMatrix interaction_picture(const DensityMatrix& rho, const QuantumHamiltonian& H, double t);
// exp(it dGamma(A)/eps) O exp(-it dGamma(A)/eps)
FockOperator free_heisenberg(const FockOperator& O, const Mat& A, double t);

cplx expectation(const DensityMatrix& rho, const FockOperator& O);
// Tr[rho b^Wick] summed over the basis without assembling b^Wick.
cplx wick_expectation(const DensityMatrix& rho, const CompoundSymbol& b);
// Tr[rho N^k]
double number_moment(const DensityMatrix& rho, int k);
// Tr[rho f(N)]
double number_function_expectation(const DensityMatrix& rho, const std::function<double(double)>& f);
// Tr[rho W(sqrt(2) pi xi)]
cplx characteristic_fn(const DensityMatrix& rho, const Vec& xi);
// Tr[rho f(b^Wick)] for b in P_{p,p} with Hermitian kernel.
cplx function_of_wick(const DensityMatrix& rho, const PolynomialSymbol& b, const std::function<cplx(double)>& f);

}  // namespace mfq
