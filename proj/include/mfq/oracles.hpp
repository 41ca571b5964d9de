#pragma once

// Reference constructions on full tensor powers (C^d)^{(x)n}. Index of a word
// (i_1, ..., i_n) is sum_k i_k d^{n-k}, so kron(A, B) has A acting on factor 1.

#include "mfq/fock_core.hpp"

namespace mfq {

inline constexpr std::size_t kOracleCap = std::size_t{1} << 16;

std::size_t tensor_dim(int d, int n);
// Occupation type of a word.
MultiIndex word_type(std::size_t word, int d, int n);
Vec tensor_power(const Vec& z, int n);
Mat kron(const Mat& a, const Mat& b);
// Orthogonal projector onto the symmetric subspace: average over permutations.
Mat tensor_symmetrizer(int d, int n);
// Columns are the normalized symmetric basis vectors e^{v alpha} written as tensors.
Mat tensor_isometry(int d, int n);
// Projects a rank-n tensor onto the symmetric power and returns it in the occupation basis.
FockVector symmetrizer_oracle(const Vec& tensor, int n, const SpacePtr& space);

}  // namespace mfq
