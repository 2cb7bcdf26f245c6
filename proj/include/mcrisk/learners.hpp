#ifndef MCRISK_LEARNERS_HPP
#define MCRISK_LEARNERS_HPP

#include <cstdint>
#include <vector>

#include "mcrisk/types.hpp"

namespace mcrisk {

struct FitConfig {
    int components;
    LpConstraint constraint;
    int max_iterations = 100;
    std::uint64_t seed = 0;
    int restarts = 1;
    double tolerance = 1e-9;  // relative empirical-risk improvement threshold
    double ridge = 1e-6;      // kernel regression regularizer
    std::vector<int> dims;    // subspace dimensions, explicit per component
    int dims_budget = 0;      // or a total dimension budget split evenly

    FitConfig(int components_, LpConstraint constraint_)
        : components(components_), constraint(constraint_) {}

    void validate() const;
};

// Per-fit record: the risk trace of the winning restart (one entry per
// alternation, starting at the initial model) and which restart won.
struct FitDiagnostics {
    std::vector<double> risk_trace;
    int best_restart = -1;
    double best_risk = 0.0;
};

// Resolves the subspace dimension policy against the ambient dimension:
// either the explicit list or an even split of dims_budget (every component
// gets at least 1).
std::vector<int> resolve_subspace_dims(const FitConfig& cfg, int ambient_dim);

// Lloyd iterations with farthest-point seeding. After every center update
// the model is radially rescaled back into the constraint set if needed.
// Deterministic in (data, cfg); restarts use sub-seeds split from cfg.seed.
CenterModel fit_kmeans(const Dataset& data, const FitConfig& cfg,
                       FitDiagnostics* diagnostics = nullptr);

// Alternating assignment / per-cluster PCA refit. Dimensions are fixed up
// front and validated against the constraint (no rescaling exists for
// discrete dimensions).
SubspaceModel fit_ksubspaces(const Dataset& data, const FitConfig& cfg,
                             FitDiagnostics* diagnostics = nullptr);

// Alternating assignment by clipped squared residual / ridge-regularized
// kernel regression per component, with radial rescaling into the
// constraint set after each refit.
KernelModel fit_switching_regression(const Dataset& data, const KernelSpec& kernel,
                                     const FitConfig& cfg,
                                     FitDiagnostics* diagnostics = nullptr);

}  // namespace mcrisk

#endif
