#include "mcrisk/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcrisk {

namespace {

// relative slack for floating-point comparisons of norm chains
constexpr double kEmbeddingSlack = 1e-12;

}  // namespace

double alpha(int component_count, double p) {
    if (component_count < 2)
        throw std::domain_error("alpha: component count must be >= 2");
    if (std::isinf(p)) return static_cast<double>(component_count);
    if (!(p > 0.0)) throw std::domain_error("alpha: p must be positive");
    const double c = static_cast<double>(component_count);
    if (p == 1.0) return 1.0 + std::log(c);
    if (p > 1.0) return p / (p - 1.0) * std::pow(c, 1.0 - 1.0 / p);
    return 1.0 / (1.0 - p);
}

double harmonic_p_sum(int component_count, double p) {
    if (component_count < 1)
        throw std::domain_error("harmonic_p_sum: component count must be >= 1");
    if (std::isinf(p)) return static_cast<double>(component_count);
    if (!(p > 0.0)) throw std::domain_error("harmonic_p_sum: p must be positive");
    const double exponent = -1.0 / p;
    double sum = 0.0;
    for (int k = 1; k <= component_count; ++k)
        sum += std::pow(static_cast<double>(k), exponent);
    return sum;
}

double lp_norm(const std::vector<double>& values, double p) {
    for (double v : values)
        if (!(v >= 0.0)) throw std::domain_error("lp_norm: entries must be nonnegative");
    if (std::isinf(p)) {
        double mx = 0.0;
        for (double v : values) mx = std::max(mx, v);
        return mx;
    }
    if (!(p > 0.0)) throw std::domain_error("lp_norm: p must be positive");
    double sum = 0.0;
    for (double v : values) sum += std::pow(v, p);
    return std::pow(sum, 1.0 / p);
}

double lp_norm(const ComplexityVector& omega, double p) { return lp_norm(omega.values, p); }

ComplexityVector complexity_vector(const MultiComponentModel& model) {
    std::vector<double> values;
    if (const auto* centers = std::get_if<CenterModel>(&model)) {
        values.reserve(centers->centers.size());
        for (const auto& c : centers->centers) values.push_back(c.norm());
    } else if (const auto* subspaces = std::get_if<SubspaceModel>(&model)) {
        values.reserve(subspaces->bases.size());
        for (const auto& basis : subspaces->bases)
            values.push_back(std::sqrt(static_cast<double>(basis.cols())));
    } else {
        const auto& kernel = std::get<KernelModel>(model);
        values = kernel.norms;
    }
    return ComplexityVector(std::move(values));
}

std::vector<std::size_t> decreasing_complexity_order(const ComplexityVector& omega) {
    std::vector<std::size_t> idx(omega.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return omega[a] > omega[b]; });
    return idx;
}

MultiComponentModel order_components(const MultiComponentModel& model) {
    const auto order = decreasing_complexity_order(complexity_vector(model));
    if (const auto* centers = std::get_if<CenterModel>(&model)) {
        std::vector<Vector> permuted;
        permuted.reserve(order.size());
        for (std::size_t k : order) permuted.push_back(centers->centers[k]);
        return CenterModel(std::move(permuted));
    }
    if (const auto* subspaces = std::get_if<SubspaceModel>(&model)) {
        std::vector<Matrix> permuted;
        permuted.reserve(order.size());
        for (std::size_t k : order) permuted.push_back(subspaces->bases[k]);
        return SubspaceModel(std::move(permuted));
    }
    const auto& kernel = std::get<KernelModel>(model);
    KernelModel permuted = kernel;
    for (std::size_t row = 0; row < order.size(); ++row) {
        permuted.coefficients.row(static_cast<Eigen::Index>(row)) =
            kernel.coefficients.row(static_cast<Eigen::Index>(order[row]));
        permuted.norms[row] = kernel.norms[order[row]];
    }
    return permuted;
}

bool check_embedding(const ComplexityVector& omega, const LpConstraint& constraint) {
    const double total = lp_norm(omega, constraint.p);
    if (total > constraint.lambda * (1.0 + kEmbeddingSlack)) return false;
    std::vector<double> sorted = omega.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const double cap = constraint.is_inf()
                               ? constraint.lambda
                               : std::pow(static_cast<double>(k + 1), -1.0 / constraint.p) *
                                     constraint.lambda;
        if (sorted[k] > cap * (1.0 + kEmbeddingSlack)) return false;
    }
    return true;
}

bool check_embedding(const MultiComponentModel& model, const LpConstraint& constraint) {
    return check_embedding(complexity_vector(model), constraint);
}

}  // namespace mcrisk
