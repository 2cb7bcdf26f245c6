#ifndef MCRISK_LOSSES_HPP
#define MCRISK_LOSSES_HPP

#include <span>

#include "mcrisk/types.hpp"

namespace mcrisk {

// Pointwise loss together with the uniform bound M applicable to the
// loss/class pair it was evaluated under.
struct LossValue {
    double value;
    double bound_m;
};

// Uniform bound on the clustering loss over the constrained class.
// `additive` is the certificate's stated lambda_x^2 + lambda^2;
// `expanded` is the conservative (lambda_x + lambda)^2, which dominates the
// loss unconditionally. The additive form can be exceeded when the nearest
// center points away from x (see the certificate notes); it is kept as the
// default deliberately rather than silently corrected.
enum class ClusteringBoundPolicy { additive, expanded };

double clustering_bound_m(double lambda_x, double lambda,
                          ClusteringBoundPolicy policy = ClusteringBoundPolicy::additive);

// clamp to the output range [-1/2, 1/2]
double clip_output(double t);

// min_k (y - clip(f_k(x)))^2, bounded by 1. y must lie in [-1/2, 1/2].
LossValue switching_loss(const KernelModel& model, const Vector& x, double y);

// min_k ||x - f_k||^2. bound_m is supplied by the caller (it depends on the
// class constraint, not on the model/point pair).
LossValue clustering_loss(const CenterModel& model, const Vector& x, double bound_m);
double clustering_loss_value(const CenterModel& model, const Vector& x);

// min_k ||B_k B_k^T x - x||^2, bounded by lambda_x^2.
LossValue subspace_loss(const SubspaceModel& model, const Vector& x, double lambda_x);
double subspace_loss_value(const SubspaceModel& model, const Vector& x);

// index attaining the pointwise min; ties go to the lowest index
std::size_t clustering_argmin(const CenterModel& model, const Vector& x);
std::size_t subspace_argmin(const SubspaceModel& model, const Vector& x);

// Deterministic pairwise (tree) summation. Fixed reduction order makes batch
// risks identical no matter how evaluation work is distributed.
double pairwise_sum(std::span<const double> values);

// Mean pointwise loss over the dataset. Outputs must be present exactly when
// the model is a kernel-expansion model.
double empirical_risk(const MultiComponentModel& model, const Dataset& data);
double empirical_risk(const CenterModel& model, const Dataset& data);
double empirical_risk(const SubspaceModel& model, const Dataset& data);
double empirical_risk(const KernelModel& model, const Dataset& data);

}  // namespace mcrisk

#endif
