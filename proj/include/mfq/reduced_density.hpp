#pragma once

#include "mfq/states.hpp"
#include "mfq/wigner_measures.hpp"

namespace mfq {

// p-particle reduced density matrix on the level-p occupation basis.
// zero is set when the state carries no weight on levels >= p; matrix is then 0.
struct ReducedMatrix {
  int p = 0;
  Mat matrix;
  bool zero = false;
};

// Tr[rho prod_{j<p} (N - j eps)]
double factorial_moment(const DensityMatrix& rho, int p);

// <e^g, gamma e^b> = p!/sqrt(g! b!) Tr[rho (a*)^b a^g] / Tr[rho prod_{j<p}(N - j eps)]
ReducedMatrix reduced_matrix(const DensityMatrix& rho, int p);

// (int |z^p><z^p| dmu) / (int |z|^{2p} dmu)
ReducedMatrix asymptotic_reduced(const WignerMeasure& mu, int p, const MeasureOptions& opt = {});
// Same quantity for the pushforward of mu0, with every phase expanded and flowed point by point.
ReducedMatrix asymptotic_reduced_direct(const WignerMeasure& mu0, const ClassicalHamiltonian& h, double t, int p,
                                        const MeasureOptions& opt = {}, const FlowConfig& cfg = {});

double trace_distance(const ReducedMatrix& g1, const ReducedMatrix& g2);
double trace_distance(const Mat& g1, const Mat& g2);

}  // namespace mfq
