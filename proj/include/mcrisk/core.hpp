#ifndef MCRISK_CORE_HPP
#define MCRISK_CORE_HPP

#include "mcrisk/types.hpp"

namespace mcrisk {

// Growth factor of the certificate complexity terms in the component count.
// Four regimes:
//   p = inf      -> C                      (independent components, linear)
//   1 < p < inf  -> p/(p-1) * C^(1-1/p)
//   p = 1        -> 1 + ln C
//   0 < p < 1    -> 1/(1-p)                (constant in C)
// Natural logarithm throughout.
double alpha(int component_count, double p);

// sum_{k=1}^{C} k^(-1/p); equals C for p = inf. Always <= alpha(C, p) for
// C >= 2 (the integral comparison behind the certificates).
double harmonic_p_sum(int component_count, double p);

// lp norm for p >= 1, quasi-norm for 0 < p < 1, max for p = inf.
// Entries must be nonnegative.
double lp_norm(const ComplexityVector& omega, double p);
double lp_norm(const std::vector<double>& values, double p);

// Per-component complexity measure:
//   CenterModel   -> Euclidean norm of each center
//   KernelModel   -> cached RKHS norm of each component
//   SubspaceModel -> sqrt of each subspace dimension
ComplexityVector complexity_vector(const MultiComponentModel& model);

// Permutation of [0, C) placing components in decreasing complexity order.
// Stable: ties keep their original relative order.
std::vector<std::size_t> decreasing_complexity_order(const ComplexityVector& omega);

// Components permuted into decreasing complexity order. The direction is
// forced by the embedding argument: k * w_k^p <= sum of the first k powers
// only when the first k components dominate the k-th.
MultiComponentModel order_components(const MultiComponentModel& model);

// True iff, after decreasing-order sorting, w_k <= k^(-1/p) * lambda for
// every component k. Every model satisfying the lp constraint passes; a
// model violating the constraint returns false outright.
bool check_embedding(const MultiComponentModel& model, const LpConstraint& constraint);

// Same check on a bare complexity vector.
bool check_embedding(const ComplexityVector& omega, const LpConstraint& constraint);

}  // namespace mcrisk

#endif
