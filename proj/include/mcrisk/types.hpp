#ifndef MCRISK_TYPES_HPP
#define MCRISK_TYPES_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace mcrisk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error raised by file ingestion and other external-data paths. The CLI maps
// it to exit code 2, while domain errors (invalid arguments) map to 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Tolerance used for the structural model invariants (orthonormal bases,
// cached kernel-expansion norms).
inline constexpr double kStructuralTol = 1e-10;

// Exponent/budget pair defining the model-class constraint
// ||(w(f_1),...,w(f_C))||_p <= lambda. p = infinity is represented by the
// IEEE infinity sentinel, never by a large finite value.
struct LpConstraint {
    double p;
    double lambda;

    LpConstraint(double p_, double lambda_) : p(p_), lambda(lambda_) {
        if (!(p > 0.0))
            throw std::invalid_argument("LpConstraint: p must be positive or infinite");
        if (!std::isfinite(lambda) || !(lambda > 0.0))
            throw std::invalid_argument("LpConstraint: lambda must be finite and positive");
    }

    bool is_inf() const { return std::isinf(p); }

    static double infinity() { return std::numeric_limits<double>::infinity(); }
};

// Nonnegative per-component complexity values, one entry per component.
struct ComplexityVector {
    std::vector<double> values;

    ComplexityVector() = default;
    explicit ComplexityVector(std::vector<double> v) : values(std::move(v)) {
        for (double x : values)
            if (!(x >= 0.0))
                throw std::invalid_argument("ComplexityVector: entries must be nonnegative");
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
};

// Sample of n points in R^d with an enforced norm bound and optional scalar
// outputs in [-1/2, 1/2].
class Dataset {
public:
    Dataset(std::vector<Vector> points, double lambda_x)
        : Dataset(std::move(points), std::nullopt, lambda_x) {}

    Dataset(std::vector<Vector> points, std::optional<std::vector<double>> outputs,
            double lambda_x);

    std::size_t size() const { return points_.size(); }
    int dim() const { return static_cast<int>(points_.front().size()); }
    const Vector& point(std::size_t i) const { return points_[i]; }
    const std::vector<Vector>& points() const { return points_; }

    bool has_outputs() const { return outputs_.has_value(); }
    double output(std::size_t i) const { return (*outputs_)[i]; }
    const std::vector<double>& outputs() const { return *outputs_; }

    double lambda_x() const { return lambda_x_; }

    // sum_i ||x_i||^2; also the squared Frobenius norm of the data matrix
    double sum_sq_norms() const { return sum_sq_norms_; }
    double frobenius() const { return std::sqrt(sum_sq_norms_); }

private:
    std::vector<Vector> points_;
    std::optional<std::vector<double>> outputs_;
    double lambda_x_;
    double sum_sq_norms_;
};

// Positive-definite kernel on R^d.
struct KernelSpec {
    enum class Family { gaussian_rbf, linear, polynomial };

    Family family = Family::gaussian_rbf;
    double gamma = 1.0;   // gaussian_rbf bandwidth
    int degree = 2;       // polynomial degree
    double offset = 1.0;  // polynomial offset

    static KernelSpec gaussian(double gamma);
    static KernelSpec linear();
    static KernelSpec polynomial(int degree, double offset);

    double operator()(const Vector& a, const Vector& b) const;

    std::string family_name() const;
    static KernelSpec from_family_name(const std::string& name, double gamma, int degree,
                                       double offset);
};

// Gram matrix K(a_i, a_j) of a point set.
Matrix gram_matrix(const KernelSpec& kernel, const std::vector<Vector>& points);

// C points in R^d acting as codebook centers.
struct CenterModel {
    std::vector<Vector> centers;

    CenterModel() = default;
    explicit CenterModel(std::vector<Vector> c);

    std::size_t component_count() const { return centers.size(); }
    int dim() const { return static_cast<int>(centers.front().size()); }
};

// C linear subspaces given by d x d_k matrices with orthonormal columns.
struct SubspaceModel {
    std::vector<Matrix> bases;

    SubspaceModel() = default;
    explicit SubspaceModel(std::vector<Matrix> b);

    std::size_t component_count() const { return bases.size(); }
    int dim() const { return static_cast<int>(bases.front().rows()); }
    std::vector<int> dims() const;

    // verifies B^T B = I per component within kStructuralTol
    void validate() const;
};

// C kernel-expansion components sharing one anchor set:
// f_k(x) = sum_j coefficients(k, j) K(anchor_j, x).
struct KernelModel {
    KernelSpec kernel;
    std::vector<Vector> anchors;
    Matrix coefficients;        // C x n_anchors
    std::vector<double> norms;  // cached RKHS norms, sqrt(a^T K_a a)

    KernelModel() = default;

    // computes and caches the RKHS norms from the anchor Gram matrix
    static KernelModel build(KernelSpec kernel, std::vector<Vector> anchors,
                             Matrix coefficients);

    std::size_t component_count() const { return static_cast<std::size_t>(coefficients.rows()); }

    double evaluate(std::size_t component, const Vector& x) const;

    // recomputes the norms and checks them against the cache within kStructuralTol
    void validate() const;

    // scales every component by the same factor; RKHS norms are homogeneous
    void rescale(double factor);
};

using MultiComponentModel = std::variant<CenterModel, SubspaceModel, KernelModel>;

std::size_t component_count(const MultiComponentModel& model);

}  // namespace mcrisk

#endif
