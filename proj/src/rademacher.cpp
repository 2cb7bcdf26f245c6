#include "mcrisk/rademacher.hpp"

#include <algorithm>
#include <cmath>

#include "mcrisk/core.hpp"
#include "mcrisk/rng.hpp"

namespace mcrisk {

namespace {

RademacherEstimate summarize(const std::vector<double>& values, double closed_form_bound) {
    RademacherEstimate est;
    est.draws = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    est.mean = sum / est.draws;
    if (est.draws > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(ss / (est.draws - 1)) / std::sqrt(static_cast<double>(est.draws));
    }
    est.closed_form_bound = closed_form_bound;
    return est;
}

void require_draws(int draws) {
    if (draws < 1) throw std::invalid_argument("rademacher: draws must be >= 1");
}

double component_radius(const LpConstraint& constraint, int k) {
    if (constraint.is_inf()) return constraint.lambda;
    return std::pow(static_cast<double>(k), -1.0 / constraint.p) * constraint.lambda;
}

}  // namespace

std::vector<int> rademacher_signs(std::uint64_t seed, int draw_index, std::size_t n) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(draw_index)));
    std::vector<int> sigma(n);
    for (auto& s : sigma) s = rng.sign();
    return sigma;
}

double rkhs_ball_draw_sup(const Matrix& gram, double radius, const std::vector<int>& sigma) {
    const auto n = gram.rows();
    Vector s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = static_cast<double>(sigma[i]);
    const double quad = s.dot(gram * s);
    return radius * std::sqrt(std::max(0.0, quad)) / static_cast<double>(n);
}

double cluster_component_draw_sup(const std::vector<Vector>& points, double radius,
                                  const std::vector<int>& sigma) {
    const std::size_t n = points.size();
    Vector v = Vector::Zero(points.front().size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v += static_cast<double>(sigma[i]) * points[i];
        s += static_cast<double>(sigma[i]);
    }
    const double vn = v.norm();
    const double r = (s <= 0.0) ? radius : std::min(radius, vn / s);
    return (2.0 * r * vn - s * r * r) / static_cast<double>(n);
}

double subspace_draw_sup(const std::vector<Vector>& points, int dim,
                         const std::vector<int>& sigma) {
    const auto d = points.front().size();
    if (dim < 1 || dim > d) throw std::invalid_argument("subspace_draw_sup: dim out of range");
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < points.size(); ++i)
        m += static_cast<double>(sigma[i]) * points[i] * points[i].transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    double top = 0.0;
    for (int j = 0; j < dim; ++j) top += eig.eigenvalues()(d - 1 - j);
    return top / static_cast<double>(points.size());
}

RademacherEstimate mc_rademacher_rkhs_ball(const Matrix& gram, double radius, int draws,
                                           std::uint64_t seed) {
    require_draws(draws);
    if (radius < 0.0) throw std::invalid_argument("rkhs ball: radius must be >= 0");
    if (gram.rows() != gram.cols()) throw std::invalid_argument("rkhs ball: gram not square");
    if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("rkhs ball: gram not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues()(0) < -1e-8)
        throw std::invalid_argument("rkhs ball: gram not positive semidefinite");

    const auto n = static_cast<std::size_t>(gram.rows());
    std::vector<double> values(draws);
    for (int j = 0; j < draws; ++j)
        values[j] = rkhs_ball_draw_sup(gram, radius, rademacher_signs(seed, j, n));
    const double bound = radius * std::sqrt(gram.trace()) / static_cast<double>(n);
    return summarize(values, bound);
}

RademacherEstimate mc_rademacher_cluster_component(const Dataset& points, double radius,
                                                   int draws, std::uint64_t seed) {
    require_draws(draws);
    if (radius < 0.0) throw std::invalid_argument("cluster component: radius must be >= 0");
    const std::size_t n = points.size();
    std::vector<double> values(draws);
    for (int j = 0; j < draws; ++j)
        values[j] = cluster_component_draw_sup(points.points(), radius,
                                               rademacher_signs(seed, j, n));
    const double bound = 2.0 * radius * std::sqrt(points.sum_sq_norms()) / static_cast<double>(n) +
                         radius * radius / std::sqrt(static_cast<double>(n));
    return summarize(values, bound);
}

RademacherEstimate mc_rademacher_subspace(const Dataset& points, int dim, int draws,
                                          std::uint64_t seed) {
    require_draws(draws);
    if (dim < 1 || dim > points.dim())
        throw std::invalid_argument("subspace: dim out of range [1, d]");
    const std::size_t n = points.size();
    std::vector<double> values(draws);
    for (int j = 0; j < draws; ++j)
        values[j] = subspace_draw_sup(points.points(), dim, rademacher_signs(seed, j, n));
    const double bound =
        std::sqrt(static_cast<double>(dim)) * points.frobenius() / static_cast<double>(n);
    return summarize(values, bound);
}

std::vector<ComponentBound> component_bound_table(const LpConstraint& constraint,
                                                  int component_count,
                                                  ComplexitySetting setting,
                                                  double data_summary, std::size_t n) {
    if (component_count < 1)
        throw std::invalid_argument("component_bound_table: component count must be >= 1");
    if (data_summary < 0.0)
        throw std::invalid_argument("component_bound_table: negative data summary");
    const double nn = static_cast<double>(n);
    std::vector<ComponentBound> table;
    table.reserve(component_count);
    for (int k = 1; k <= component_count; ++k) {
        const double r = component_radius(constraint, k);
        double bound = 0.0;
        switch (setting) {
            case ComplexitySetting::rkhs:
                bound = r * std::sqrt(data_summary) / nn;
                break;
            case ComplexitySetting::cluster:
                bound = 2.0 * r * std::sqrt(data_summary) / nn + r * r / std::sqrt(nn);
                break;
            case ComplexitySetting::subspace:
                bound = r * data_summary / nn;
                break;
        }
        table.push_back(ComponentBound{k, r, bound});
    }
    return table;
}

RademacherEstimate mc_loss_class_bound(const Dataset& data, const Matrix* gram,
                                       const LossClassSpec& spec, int draws,
                                       std::uint64_t seed) {
    require_draws(draws);
    const int c = spec.component_count;
    if (c < 1) throw std::invalid_argument("mc_loss_class_bound: component count must be >= 1");
    const std::size_t n = data.size();
    const double nn = static_cast<double>(n);

    std::vector<double> radii(c);
    for (int k = 1; k <= c; ++k) radii[k - 1] = component_radius(spec.constraint, k);

    double factor = 1.0;
    double closed_form = 0.0;
    const double growth = alpha(std::max(2, c), spec.constraint.p);
    switch (spec.setting) {
        case ComplexitySetting::rkhs: {
            if (gram == nullptr)
                throw std::invalid_argument("mc_loss_class_bound: rkhs setting needs a gram matrix");
            factor = 2.0;  // decomposition constant for the clipped switching loss
            closed_form = 2.0 * growth * spec.constraint.lambda * std::sqrt(gram->trace()) / nn;
            break;
        }
        case ComplexitySetting::cluster:
            closed_form = growth * (2.0 * spec.constraint.lambda * std::sqrt(data.sum_sq_norms()) / nn +
                                    spec.constraint.lambda * spec.constraint.lambda / std::sqrt(nn));
            break;
        case ComplexitySetting::subspace: {
            if (static_cast<int>(spec.dims.size()) != c)
                throw std::invalid_argument("mc_loss_class_bound: dims must match component count");
            closed_form = growth * spec.constraint.lambda * data.frobenius() / nn;
            break;
        }
    }

    std::vector<double> values(draws);
    for (int j = 0; j < draws; ++j) {
        const std::vector<int> sigma = rademacher_signs(seed, j, n);
        double total = 0.0;
        switch (spec.setting) {
            case ComplexitySetting::rkhs: {
                // shared sqrt(sigma^T K sigma) across component radii
                const double base = rkhs_ball_draw_sup(*gram, 1.0, sigma);
                for (int k = 0; k < c; ++k) total += radii[k] * base;
                break;
            }
            case ComplexitySetting::cluster:
                for (int k = 0; k < c; ++k)
                    total += cluster_component_draw_sup(data.points(), radii[k], sigma);
                break;
            case ComplexitySetting::subspace: {
                // one eigendecomposition serves every component dimension
                const auto d = data.dim();
                Matrix m = Matrix::Zero(d, d);
                for (std::size_t i = 0; i < n; ++i)
                    m += static_cast<double>(sigma[i]) * data.point(i) * data.point(i).transpose();
                Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
                for (int k = 0; k < c; ++k) {
                    double top = 0.0;
                    for (int j2 = 0; j2 < spec.dims[k]; ++j2)
                        top += eig.eigenvalues()(d - 1 - j2);
                    total += top / nn;
                }
                break;
            }
        }
        values[j] = factor * total;
    }
    return summarize(values, closed_form);
}

}  // namespace mcrisk
