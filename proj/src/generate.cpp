#include <cmath>

#include "mcrisk/core.hpp"
#include "mcrisk/harness.hpp"

namespace mcrisk {

namespace {

constexpr int kMaxResampleAttempts = 100000;

// gaussian truncated at +-3 standard deviations
double truncated_noise(Rng& rng, double sigma) {
    if (sigma == 0.0) return 0.0;
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        const double e = sigma * rng.gaussian();
        if (std::abs(e) <= 3.0 * sigma) return e;
    }
    return 0.0;
}

}  // namespace

std::string to_string(Problem problem) {
    switch (problem) {
        case Problem::switching: return "switching";
        case Problem::clustering: return "clustering";
        case Problem::subspace: return "subspace";
    }
    throw std::logic_error("unknown problem");
}

Problem problem_from_string(const std::string& name) {
    if (name == "switching") return Problem::switching;
    if (name == "clustering") return Problem::clustering;
    if (name == "subspace") return Problem::subspace;
    throw std::invalid_argument("unknown problem '" + name + "'");
}

void GeneratorSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("generator: dim must be >= 1");
    if (components < 1) throw std::invalid_argument("generator: components must be >= 1");
    if (!(lambda_x > 0.0)) throw std::invalid_argument("generator: lambda_x must be positive");
    if (noise < 0.0) throw std::invalid_argument("generator: noise must be >= 0");
    if (!(output_scale > 0.0 && output_scale <= 1.0))
        throw std::invalid_argument("generator: output_scale must lie in (0,1]");
    if (problem == Problem::subspace) {
        if (!dims.empty() && static_cast<int>(dims.size()) != components)
            throw std::invalid_argument("generator: dims must have one entry per component");
        for (int dk : dims)
            if (dk < 1 || dk > dim)
                throw std::invalid_argument("generator: subspace dimension out of range [1, d]");
    }
}

SyntheticSample generate_synthetic_with_truth(const GeneratorSpec& spec, int n,
                                              std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw std::invalid_argument("generator: n must be >= 1");
    Rng rng(seed);
    const int d = spec.dim;
    const int c = spec.components;

    switch (spec.problem) {
        case Problem::switching: {
            // ground truth: c linear maps with outputs inside the usable range
            const double weight_cap = spec.output_scale / (2.0 * spec.lambda_x);
            std::vector<Vector> weights(c);
            for (int k = 0; k < c; ++k) {
                Vector dir = rng.gaussian_vector(d);
                if (dir.norm() == 0.0) dir = Vector::Unit(d, 0);
                weights[k] = dir * (rng.uniform(0.3, 1.0) * weight_cap / dir.norm());
            }
            std::vector<Vector> points;
            std::vector<double> outputs;
            points.reserve(n);
            outputs.reserve(n);
            for (int i = 0; i < n; ++i) {
                const Vector x = rng.uniform_ball(d, spec.lambda_x);
                const int k = rng.uniform_int(0, c - 1);
                const double y = clip_output(weights[k].dot(x) + truncated_noise(rng, spec.noise));
                points.push_back(x);
                outputs.push_back(y);
            }
            // truth as a linear-kernel expansion anchored at the basis vectors
            std::vector<Vector> anchors(d);
            Matrix coeff(c, d);
            for (int j = 0; j < d; ++j) anchors[j] = Vector::Unit(d, j);
            for (int k = 0; k < c; ++k) coeff.row(k) = weights[k].transpose();
            KernelModel truth = KernelModel::build(KernelSpec::linear(), anchors, coeff);
            return SyntheticSample{
                Dataset(std::move(points), std::move(outputs), spec.lambda_x), truth};
        }
        case Problem::clustering: {
            std::vector<Vector> centers(c);
            for (int k = 0; k < c; ++k) centers[k] = rng.uniform_ball(d, 0.7 * spec.lambda_x);
            std::vector<Vector> points;
            points.reserve(n);
            for (int i = 0; i < n; ++i) {
                const int k = rng.uniform_int(0, c - 1);
                Vector x;
                int attempt = 0;
                do {
                    x = centers[k] + spec.noise * rng.gaussian_vector(d);
                    if (++attempt > kMaxResampleAttempts)
                        throw std::invalid_argument(
                            "generator: cannot keep clustering samples inside the ball");
                } while (x.norm() > spec.lambda_x);
                points.push_back(x);
            }
            return SyntheticSample{Dataset(std::move(points), spec.lambda_x),
                                   CenterModel(std::move(centers))};
        }
        case Problem::subspace: {
            std::vector<int> dims = spec.dims;
            if (dims.empty()) dims.assign(c, 1);
            std::vector<Matrix> bases(c);
            for (int k = 0; k < c; ++k) bases[k] = random_orthonormal(d, dims[k], rng);
            std::vector<Vector> points;
            points.reserve(n);
            for (int i = 0; i < n; ++i) {
                const int k = rng.uniform_int(0, c - 1);
                const Vector coeff = rng.uniform_ball(dims[k], 0.9 * spec.lambda_x);
                Vector x;
                int attempt = 0;
                do {
                    x = bases[k] * coeff;
                    if (spec.noise > 0.0) x += spec.noise * rng.gaussian_vector(d);
                    if (++attempt > kMaxResampleAttempts)
                        throw std::invalid_argument(
                            "generator: cannot keep subspace samples inside the ball");
                } while (x.norm() > spec.lambda_x);
                points.push_back(x);
            }
            return SyntheticSample{Dataset(std::move(points), spec.lambda_x),
                                   SubspaceModel(std::move(bases))};
        }
    }
    throw std::logic_error("unknown problem");
}

Dataset generate_synthetic(const GeneratorSpec& spec, int n, std::uint64_t seed) {
    return generate_synthetic_with_truth(spec, n, seed).data;
}

CenterModel random_center_model(int components, int dim, const LpConstraint& constraint,
                                double fill, Rng& rng) {
    if (!(fill > 0.0 && fill <= 1.0))
        throw std::invalid_argument("random_center_model: fill must lie in (0,1]");
    std::vector<Vector> centers(components);
    std::vector<double> omega(components);
    for (int k = 0; k < components; ++k) {
        centers[k] = rng.gaussian_vector(dim);
        omega[k] = centers[k].norm();
    }
    const double nrm = lp_norm(omega, constraint.p);
    if (nrm > 0.0) {
        const double factor = fill * constraint.lambda / nrm;
        for (auto& f : centers) f *= factor;
    }
    return CenterModel(std::move(centers));
}

SubspaceModel random_subspace_model(int dim, const std::vector<int>& dims, Rng& rng) {
    std::vector<Matrix> bases;
    bases.reserve(dims.size());
    for (int dk : dims) bases.push_back(random_orthonormal(dim, dk, rng));
    return SubspaceModel(std::move(bases));
}

KernelModel random_kernel_model(const KernelSpec& kernel, const std::vector<Vector>& anchors,
                                int components, const LpConstraint& constraint, double fill,
                                Rng& rng) {
    if (!(fill > 0.0 && fill <= 1.0))
        throw std::invalid_argument("random_kernel_model: fill must lie in (0,1]");
    const auto n = static_cast<Eigen::Index>(anchors.size());
    Matrix coeff(components, n);
    for (int k = 0; k < components; ++k)
        coeff.row(k) = rng.gaussian_vector(static_cast<int>(n)).transpose() /
                       static_cast<double>(n);
    KernelModel model = KernelModel::build(kernel, anchors, std::move(coeff));
    const double nrm = lp_norm(model.norms, constraint.p);
    if (nrm > 0.0) model.rescale(fill * constraint.lambda / nrm);
    return model;
}

}  // namespace mcrisk
