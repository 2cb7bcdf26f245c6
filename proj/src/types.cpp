#include "mcrisk/types.hpp"

#include <cmath>

namespace mcrisk {

Dataset::Dataset(std::vector<Vector> points, std::optional<std::vector<double>> outputs,
                 double lambda_x)
    : points_(std::move(points)), outputs_(std::move(outputs)), lambda_x_(lambda_x) {
    if (points_.empty()) throw std::invalid_argument("Dataset: no points");
    if (!(lambda_x_ >= 0.0) || !std::isfinite(lambda_x_))
        throw std::invalid_argument("Dataset: lambda_x must be finite and nonnegative");
    const auto d = points_.front().size();
    sum_sq_norms_ = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != d)
            throw std::invalid_argument("Dataset: inconsistent dimension at point " +
                                        std::to_string(i));
        const double nrm = points_[i].norm();
        if (nrm > lambda_x_)
            throw std::invalid_argument("Dataset: ||x_" + std::to_string(i) + "|| = " +
                                        std::to_string(nrm) + " exceeds lambda_x = " +
                                        std::to_string(lambda_x_));
        sum_sq_norms_ += points_[i].squaredNorm();
    }
    if (outputs_) {
        if (outputs_->size() != points_.size())
            throw std::invalid_argument("Dataset: outputs length differs from point count");
        for (std::size_t i = 0; i < outputs_->size(); ++i) {
            const double y = (*outputs_)[i];
            if (!(y >= -0.5 && y <= 0.5))
                throw std::invalid_argument("Dataset: output y_" + std::to_string(i) +
                                            " outside [-1/2, 1/2]");
        }
    }
}

KernelSpec KernelSpec::gaussian(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("KernelSpec: gamma must be positive");
    KernelSpec k;
    k.family = Family::gaussian_rbf;
    k.gamma = gamma;
    return k;
}

KernelSpec KernelSpec::linear() {
    KernelSpec k;
    k.family = Family::linear;
    return k;
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
    if (degree < 1) throw std::invalid_argument("KernelSpec: degree must be >= 1");
    if (offset < 0.0) throw std::invalid_argument("KernelSpec: offset must be >= 0");
    KernelSpec k;
    k.family = Family::polynomial;
    k.degree = degree;
    k.offset = offset;
    return k;
}

double KernelSpec::operator()(const Vector& a, const Vector& b) const {
    switch (family) {
        case Family::gaussian_rbf:
            return std::exp(-gamma * (a - b).squaredNorm());
        case Family::linear:
            return a.dot(b);
        case Family::polynomial:
            return std::pow(a.dot(b) + offset, degree);
    }
    throw std::logic_error("KernelSpec: unknown family");
}

std::string KernelSpec::family_name() const {
    switch (family) {
        case Family::gaussian_rbf: return "gaussian-rbf";
        case Family::linear: return "linear";
        case Family::polynomial: return "polynomial";
    }
    throw std::logic_error("KernelSpec: unknown family");
}

KernelSpec KernelSpec::from_family_name(const std::string& name, double gamma, int degree,
                                        double offset) {
    if (name == "gaussian-rbf") return gaussian(gamma);
    if (name == "linear") return linear();
    if (name == "polynomial") return polynomial(degree, offset);
    throw std::invalid_argument("KernelSpec: unknown kernel family '" + name + "'");
}

Matrix gram_matrix(const KernelSpec& kernel, const std::vector<Vector>& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = kernel(points[i], points[j]);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

CenterModel::CenterModel(std::vector<Vector> c) : centers(std::move(c)) {
    if (centers.empty()) throw std::invalid_argument("CenterModel: no components");
    const auto d = centers.front().size();
    for (const auto& center : centers)
        if (center.size() != d)
            throw std::invalid_argument("CenterModel: inconsistent center dimensions");
}

SubspaceModel::SubspaceModel(std::vector<Matrix> b) : bases(std::move(b)) {
    if (bases.empty()) throw std::invalid_argument("SubspaceModel: no components");
    const auto d = bases.front().rows();
    for (const auto& basis : bases) {
        if (basis.rows() != d)
            throw std::invalid_argument("SubspaceModel: inconsistent ambient dimensions");
        if (basis.cols() < 1 || basis.cols() > basis.rows())
            throw std::invalid_argument("SubspaceModel: subspace dimension out of range");
    }
    validate();
}

std::vector<int> SubspaceModel::dims() const {
    std::vector<int> d;
    d.reserve(bases.size());
    for (const auto& basis : bases) d.push_back(static_cast<int>(basis.cols()));
    return d;
}

void SubspaceModel::validate() const {
    for (std::size_t k = 0; k < bases.size(); ++k) {
        const Matrix& basis = bases[k];
        const Matrix gram = basis.transpose() * basis;
        const Matrix eye = Matrix::Identity(basis.cols(), basis.cols());
        const double err = (gram - eye).cwiseAbs().maxCoeff();
        if (err > kStructuralTol)
            throw std::invalid_argument("SubspaceModel: basis " + std::to_string(k) +
                                        " is not orthonormal (deviation " +
                                        std::to_string(err) + ")");
    }
}

KernelModel KernelModel::build(KernelSpec kernel, std::vector<Vector> anchors,
                               Matrix coefficients) {
    if (anchors.empty()) throw std::invalid_argument("KernelModel: no anchors");
    if (coefficients.cols() != static_cast<Eigen::Index>(anchors.size()))
        throw std::invalid_argument("KernelModel: coefficient columns must match anchor count");
    if (coefficients.rows() < 1) throw std::invalid_argument("KernelModel: no components");
    KernelModel m;
    m.kernel = kernel;
    m.anchors = std::move(anchors);
    m.coefficients = std::move(coefficients);
    const Matrix k = gram_matrix(m.kernel, m.anchors);
    m.norms.resize(m.component_count());
    for (std::size_t c = 0; c < m.component_count(); ++c) {
        const Vector a = m.coefficients.row(static_cast<Eigen::Index>(c)).transpose();
        const double sq = a.dot(k * a);
        m.norms[c] = std::sqrt(std::max(0.0, sq));
    }
    return m;
}

double KernelModel::evaluate(std::size_t component, const Vector& x) const {
    double out = 0.0;
    for (std::size_t j = 0; j < anchors.size(); ++j)
        out += coefficients(static_cast<Eigen::Index>(component), static_cast<Eigen::Index>(j)) *
               kernel(anchors[j], x);
    return out;
}

void KernelModel::validate() const {
    const Matrix k = gram_matrix(kernel, anchors);
    for (std::size_t c = 0; c < component_count(); ++c) {
        const Vector a = coefficients.row(static_cast<Eigen::Index>(c)).transpose();
        const double fresh = std::sqrt(std::max(0.0, a.dot(k * a)));
        if (std::abs(fresh - norms[c]) > kStructuralTol * std::max(1.0, fresh))
            throw std::invalid_argument("KernelModel: cached norm of component " +
                                        std::to_string(c) + " is stale");
    }
}

void KernelModel::rescale(double factor) {
    if (!(factor >= 0.0)) throw std::invalid_argument("KernelModel: negative rescale factor");
    coefficients *= factor;
    for (double& nrm : norms) nrm *= factor;
}

std::size_t component_count(const MultiComponentModel& model) {
    return std::visit([](const auto& m) { return m.component_count(); }, model);
}

}  // namespace mcrisk
