#include "mcrisk/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcrisk {

double clustering_bound_m(double lambda_x, double lambda, ClusteringBoundPolicy policy) {
    if (!(lambda_x >= 0.0) || !(lambda >= 0.0))
        throw std::invalid_argument("clustering_bound_m: negative bound inputs");
    if (policy == ClusteringBoundPolicy::additive) return lambda_x * lambda_x + lambda * lambda;
    const double s = lambda_x + lambda;
    return s * s;
}

double clip_output(double t) { return std::min(0.5, std::max(-0.5, t)); }

LossValue switching_loss(const KernelModel& model, const Vector& x, double y) {
    if (!(y >= -0.5 && y <= 0.5))
        throw std::domain_error("switching_loss: y outside [-1/2, 1/2]");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < model.component_count(); ++k) {
        const double e = y - clip_output(model.evaluate(k, x));
        best = std::min(best, e * e);
    }
    return LossValue{best, 1.0};
}

double clustering_loss_value(const CenterModel& model, const Vector& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& center : model.centers) {
        if (center.size() != x.size())
            throw std::invalid_argument("clustering_loss: dimension mismatch");
        best = std::min(best, (x - center).squaredNorm());
    }
    return best;
}

LossValue clustering_loss(const CenterModel& model, const Vector& x, double bound_m) {
    return LossValue{clustering_loss_value(model, x), bound_m};
}

double subspace_loss_value(const SubspaceModel& model, const Vector& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& basis : model.bases) {
        if (basis.rows() != x.size())
            throw std::invalid_argument("subspace_loss: dimension mismatch");
        const Vector residual = basis * (basis.transpose() * x) - x;
        best = std::min(best, residual.squaredNorm());
    }
    return best;
}

LossValue subspace_loss(const SubspaceModel& model, const Vector& x, double lambda_x) {
    return LossValue{subspace_loss_value(model, x), lambda_x * lambda_x};
}

std::size_t clustering_argmin(const CenterModel& model, const Vector& x) {
    std::size_t best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < model.centers.size(); ++k) {
        const double v = (x - model.centers[k]).squaredNorm();
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    return best_k;
}

std::size_t subspace_argmin(const SubspaceModel& model, const Vector& x) {
    std::size_t best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < model.bases.size(); ++k) {
        const Matrix& basis = model.bases[k];
        const double v = (basis * (basis.transpose() * x) - x).squaredNorm();
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    return best_k;
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

namespace {

template <typename PointLoss>
double mean_loss(const Dataset& data, PointLoss&& loss) {
    std::vector<double> values(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) values[i] = loss(i);
    return pairwise_sum(values) / static_cast<double>(data.size());
}

}  // namespace

double empirical_risk(const CenterModel& model, const Dataset& data) {
    if (data.has_outputs())
        throw std::invalid_argument("empirical_risk: center model expects a dataset without outputs");
    return mean_loss(data, [&](std::size_t i) { return clustering_loss_value(model, data.point(i)); });
}

double empirical_risk(const SubspaceModel& model, const Dataset& data) {
    if (data.has_outputs())
        throw std::invalid_argument("empirical_risk: subspace model expects a dataset without outputs");
    return mean_loss(data, [&](std::size_t i) { return subspace_loss_value(model, data.point(i)); });
}

double empirical_risk(const KernelModel& model, const Dataset& data) {
    if (!data.has_outputs())
        throw std::invalid_argument("empirical_risk: kernel model requires dataset outputs");
    const std::size_t c = model.component_count();
    return mean_loss(data, [&](std::size_t i) {
        const Vector& x = data.point(i);
        const double y = data.output(i);
        // one kernel row shared across components
        Vector row(static_cast<Eigen::Index>(model.anchors.size()));
        for (std::size_t j = 0; j < model.anchors.size(); ++j)
            row(static_cast<Eigen::Index>(j)) = model.kernel(model.anchors[j], x);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < c; ++k) {
            const double fk = model.coefficients.row(static_cast<Eigen::Index>(k)).dot(row);
            const double e = y - clip_output(fk);
            best = std::min(best, e * e);
        }
        return best;
    });
}

double empirical_risk(const MultiComponentModel& model, const Dataset& data) {
    return std::visit([&](const auto& m) { return empirical_risk(m, data); }, model);
}

}  // namespace mcrisk
