#ifndef MCRISK_RADEMACHER_HPP
#define MCRISK_RADEMACHER_HPP

#include <cstdint>
#include <vector>

#include "mcrisk/types.hpp"

namespace mcrisk {

// Monte-Carlo estimate of an empirical Rademacher complexity, with the
// matching closed-form upper bound.
struct RademacherEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int draws = 0;
    double closed_form_bound = 0.0;
};

// Sign vector for one draw. Counter-based: the stream depends only on
// (seed, draw_index), so draws can be evaluated in any order or in parallel
// and the estimate does not change.
std::vector<int> rademacher_signs(std::uint64_t seed, int draw_index, std::size_t n);

// --- exact per-draw suprema -------------------------------------------------

// sup over the RKHS ball {||f|| <= radius} of (1/n) sum_i sigma_i f(x_i),
// which the reproducing property turns into (radius/n) sqrt(sigma^T K sigma).
double rkhs_ball_draw_sup(const Matrix& gram, double radius, const std::vector<int>& sigma);

// sup over {||f|| <= radius} of (1/n) sum_i sigma_i (2<x_i, f> - ||f||^2).
// With v = sum_i sigma_i x_i and s = sum_i sigma_i, the optimum lies along v
// at magnitude r* = radius when s <= 0, else min(radius, ||v||/s).
double cluster_component_draw_sup(const std::vector<Vector>& points, double radius,
                                  const std::vector<int>& sigma);

// sup over rank-`dim` orthogonal projections P of (1/n) Tr(P M) with
// M = sum_i sigma_i x_i x_i^T: the sum of the dim largest eigenvalues of M,
// divided by n.
double subspace_draw_sup(const std::vector<Vector>& points, int dim,
                         const std::vector<int>& sigma);

// --- Monte-Carlo estimators ---------------------------------------------

// closed_form_bound = radius * sqrt(Tr K) / n. The Gram matrix must be
// symmetric PSD (smallest eigenvalue >= -1e-8).
RademacherEstimate mc_rademacher_rkhs_ball(const Matrix& gram, double radius, int draws,
                                           std::uint64_t seed);

// closed_form_bound = 2 radius sqrt(sum ||x_i||^2)/n + radius^2/sqrt(n).
RademacherEstimate mc_rademacher_cluster_component(const Dataset& points, double radius,
                                                   int draws, std::uint64_t seed);

// closed_form_bound = sqrt(dim) ||X||_F / n.
RademacherEstimate mc_rademacher_subspace(const Dataset& points, int dim, int draws,
                                          std::uint64_t seed);

// --- per-component closed-form bounds ----------------------------------

enum class ComplexitySetting { rkhs, cluster, subspace };

struct ComponentBound {
    int component;  // 1-based index k
    double radius;  // k^(-1/p) * lambda
    double bound;   // closed-form complexity bound of that component class
};

// The k-indexed radii k^(-1/p) lambda and per-component complexity bounds.
// `data_summary` is setting-specific: sum_i K(x_i,x_i) for rkhs,
// sum_i ||x_i||^2 for cluster, ||X||_F for subspace.
std::vector<ComponentBound> component_bound_table(const LpConstraint& constraint,
                                                  int component_count,
                                                  ComplexitySetting setting,
                                                  double data_summary, std::size_t n);

// --- whole-loss-class Monte-Carlo estimate ------------------------------

// Estimate of the decomposition upper bound on the loss-class complexity:
// per draw, the per-component suprema at radii k^(-1/p) lambda are summed
// under one shared sign vector, times the decomposition constant of the
// setting (2 for rkhs-based switching losses, 1 otherwise).
// closed_form_bound is half the matching certificate complexity term.
struct LossClassSpec {
    ComplexitySetting setting;
    LpConstraint constraint;
    int component_count;
    std::vector<int> dims;  // subspace only: dims of the ordered model
};

RademacherEstimate mc_loss_class_bound(const Dataset& data, const Matrix* gram,
                                       const LossClassSpec& spec, int draws,
                                       std::uint64_t seed);

}  // namespace mcrisk

#endif
