#include "mcrisk/learners.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "mcrisk/core.hpp"
#include "mcrisk/losses.hpp"
#include "mcrisk/rng.hpp"

namespace mcrisk {

namespace {

constexpr double kConstraintSlack = 1e-12;

// Risk from precomputed pointwise losses; pairwise order matches empirical_risk.
double mean_of(std::vector<double>& values) {
    return pairwise_sum(values) / static_cast<double>(values.size());
}

// stop when the relative improvement drops below tolerance
bool converged(double previous, double current, double tolerance) {
    return previous - current < tolerance * std::max(previous, 1e-300);
}

// orthonormal basis whose span contains x (first column along x)
Matrix basis_through_point(const Vector& x, int cols, Rng& rng) {
    const int rows = static_cast<int>(x.size());
    if (x.norm() == 0.0) return random_orthonormal(rows, cols, rng);
    Matrix g(rows, cols);
    g.col(0) = x;
    for (int j = 1; j < cols; ++j) g.col(j) = rng.gaussian_vector(rows);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(rows, cols);
}

// Runs `restarts` independent seeded attempts of `run` and keeps the lowest
// final risk, breaking ties by restart index. Restarts execute concurrently;
// the reduction is by index, so the winner does not depend on scheduling.
template <typename Model, typename RunFn>
Model best_of_restarts(int restarts, std::uint64_t seed, RunFn&& run,
                       FitDiagnostics* diagnostics) {
    struct Attempt {
        Model model;
        double risk;
        std::vector<double> trace;
    };
    std::vector<Attempt> attempts(restarts);
    if (restarts == 1) {
        attempts[0] = [&] {
            Attempt a;
            a.risk = run(derive_seed(seed, 0), a.model, a.trace);
            return a;
        }();
    } else {
        std::vector<std::future<Attempt>> futures;
        futures.reserve(restarts);
        for (int r = 0; r < restarts; ++r) {
            futures.push_back(std::async(std::launch::async, [&run, seed, r] {
                Attempt a;
                a.risk = run(derive_seed(seed, static_cast<std::uint64_t>(r)), a.model, a.trace);
                return a;
            }));
        }
        for (int r = 0; r < restarts; ++r) attempts[r] = futures[r].get();
    }
    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (attempts[r].risk < attempts[best].risk) best = r;
    if (diagnostics) {
        diagnostics->risk_trace = attempts[best].trace;
        diagnostics->best_restart = best;
        diagnostics->best_risk = attempts[best].risk;
    }
    return std::move(attempts[best].model);
}

// index of the point with the largest pointwise loss (ties to lowest index),
// skipping already-claimed points
std::size_t worst_point(const std::vector<double>& losses, const std::vector<bool>& claimed) {
    std::size_t arg = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        if (claimed[i]) continue;
        if (losses[i] > worst) {
            worst = losses[i];
            arg = i;
        }
    }
    return arg;
}

}  // namespace

void FitConfig::validate() const {
    if (components < 1) throw std::invalid_argument("FitConfig: components must be >= 1");
    if (max_iterations < 1) throw std::invalid_argument("FitConfig: max_iterations must be >= 1");
    if (restarts < 1) throw std::invalid_argument("FitConfig: restarts must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("FitConfig: tolerance must be positive");
    if (ridge < 0.0) throw std::invalid_argument("FitConfig: ridge must be >= 0");
}

std::vector<int> resolve_subspace_dims(const FitConfig& cfg, int ambient_dim) {
    std::vector<int> dims;
    if (!cfg.dims.empty()) {
        if (static_cast<int>(cfg.dims.size()) != cfg.components)
            throw std::invalid_argument("subspace dims list must have one entry per component");
        dims = cfg.dims;
    } else if (cfg.dims_budget > 0) {
        if (cfg.dims_budget < cfg.components)
            throw std::invalid_argument("dims budget smaller than component count");
        dims.assign(cfg.components, cfg.dims_budget / cfg.components);
        for (int k = 0; k < cfg.dims_budget % cfg.components; ++k) dims[k] += 1;
    } else {
        throw std::invalid_argument("subspace fit requires dims or dims_budget");
    }
    std::vector<double> roots;
    for (int dk : dims) {
        if (dk < 1 || dk > ambient_dim)
            throw std::invalid_argument("subspace dimension out of range [1, d]");
        roots.push_back(std::sqrt(static_cast<double>(dk)));
    }
    if (lp_norm(roots, cfg.constraint.p) > cfg.constraint.lambda * (1.0 + kConstraintSlack))
        throw std::invalid_argument("subspace dims allocation infeasible for the constraint");
    return dims;
}

CenterModel fit_kmeans(const Dataset& data, const FitConfig& cfg, FitDiagnostics* diagnostics) {
    cfg.validate();
    if (data.has_outputs())
        throw std::invalid_argument("fit_kmeans: dataset must not carry outputs");
    const int n = static_cast<int>(data.size());
    const int c = cfg.components;
    if (c > n) throw std::invalid_argument("fit_kmeans: more components than points");

    auto run = [&](std::uint64_t restart_seed, CenterModel& out, std::vector<double>& trace) {
        Rng rng(restart_seed);

        // farthest-point seeding
        std::vector<Vector> centers;
        centers.push_back(data.point(static_cast<std::size_t>(rng.uniform_int(0, n - 1))));
        std::vector<double> dist2(n);
        for (int i = 0; i < n; ++i) dist2[i] = (data.point(i) - centers[0]).squaredNorm();
        while (static_cast<int>(centers.size()) < c) {
            int far = static_cast<int>(std::max_element(dist2.begin(), dist2.end()) -
                                       dist2.begin());
            centers.push_back(data.point(far));
            for (int i = 0; i < n; ++i)
                dist2[i] = std::min(dist2[i], (data.point(i) - centers.back()).squaredNorm());
        }

        auto enforce_constraint = [&](CenterModel& m) {
            std::vector<double> omega;
            omega.reserve(m.centers.size());
            for (const auto& f : m.centers) omega.push_back(f.norm());
            const double nrm = lp_norm(omega, cfg.constraint.p);
            if (nrm > cfg.constraint.lambda) {
                const double factor = cfg.constraint.lambda / nrm;
                for (auto& f : m.centers) f *= factor;
            }
        };

        std::vector<double> losses(n);
        auto model_risk = [&](const CenterModel& m) {
            for (int i = 0; i < n; ++i) losses[i] = clustering_loss_value(m, data.point(i));
            return mean_of(losses);
        };

        CenterModel model(std::move(centers));
        enforce_constraint(model);

        double risk = model_risk(model);
        trace.push_back(risk);
        CenterModel best = model;
        double best_risk = risk;

        for (int iter = 0; iter < cfg.max_iterations; ++iter) {
            // assignment
            std::vector<int> assign(n);
            for (int i = 0; i < n; ++i)
                assign[i] = static_cast<int>(clustering_argmin(model, data.point(i)));

            // reseed empty clusters at the worst-served points
            std::vector<int> counts(c, 0);
            for (int a : assign) counts[a] += 1;
            std::vector<bool> claimed(n, false);
            for (int k = 0; k < c; ++k) {
                if (counts[k] > 0) continue;
                for (int i = 0; i < n; ++i)
                    losses[i] = clustering_loss_value(model, data.point(i));
                const std::size_t w = worst_point(losses, claimed);
                claimed[w] = true;
                counts[assign[w]] -= 1;
                assign[w] = k;
                counts[k] += 1;
                model.centers[k] = data.point(w);
            }

            // mean update
            std::vector<Vector> sums(c, Vector::Zero(data.dim()));
            for (int i = 0; i < n; ++i) sums[assign[i]] += data.point(i);
            for (int k = 0; k < c; ++k)
                if (counts[k] > 0) model.centers[k] = sums[k] / static_cast<double>(counts[k]);

            enforce_constraint(model);

            const double next = model_risk(model);
            trace.push_back(next);
            if (next < best_risk) {
                best_risk = next;
                best = model;
            }
            if (converged(risk, next, cfg.tolerance)) break;
            risk = next;
        }
        out = best;
        return best_risk;
    };

    return best_of_restarts<CenterModel>(cfg.restarts, cfg.seed, run, diagnostics);
}

SubspaceModel fit_ksubspaces(const Dataset& data, const FitConfig& cfg,
                             FitDiagnostics* diagnostics) {
    cfg.validate();
    if (data.has_outputs())
        throw std::invalid_argument("fit_ksubspaces: dataset must not carry outputs");
    const int n = static_cast<int>(data.size());
    const int d = data.dim();
    const int c = cfg.components;
    const std::vector<int> dims = resolve_subspace_dims(cfg, d);

    auto run = [&](std::uint64_t restart_seed, SubspaceModel& out, std::vector<double>& trace) {
        Rng rng(restart_seed);
        std::vector<Matrix> bases;
        bases.reserve(c);
        for (int k = 0; k < c; ++k) bases.push_back(random_orthonormal(d, dims[k], rng));
        SubspaceModel model(std::move(bases));

        std::vector<double> losses(n);
        auto model_risk = [&](const SubspaceModel& m) {
            for (int i = 0; i < n; ++i) losses[i] = subspace_loss_value(m, data.point(i));
            return mean_of(losses);
        };

        double risk = model_risk(model);
        trace.push_back(risk);
        SubspaceModel best = model;
        double best_risk = risk;

        for (int iter = 0; iter < cfg.max_iterations; ++iter) {
            std::vector<int> assign(n);
            for (int i = 0; i < n; ++i)
                assign[i] = static_cast<int>(subspace_argmin(model, data.point(i)));

            std::vector<int> counts(c, 0);
            for (int a : assign) counts[a] += 1;
            std::vector<bool> claimed(n, false);
            for (int k = 0; k < c; ++k) {
                if (counts[k] > 0) continue;
                for (int i = 0; i < n; ++i)
                    losses[i] = subspace_loss_value(model, data.point(i));
                const std::size_t w = worst_point(losses, claimed);
                claimed[w] = true;
                counts[assign[w]] -= 1;
                assign[w] = static_cast<int>(k);
                counts[k] += 1;
                model.bases[k] = basis_through_point(data.point(w), dims[k], rng);
            }

            // per-cluster PCA refit: top-d_k eigenvectors of the scatter matrix
            for (int k = 0; k < c; ++k) {
                if (counts[k] == 0) continue;
                Matrix scatter = Matrix::Zero(d, d);
                for (int i = 0; i < n; ++i)
                    if (assign[i] == k) scatter += data.point(i) * data.point(i).transpose();
                Eigen::SelfAdjointEigenSolver<Matrix> eig(scatter);
                Matrix basis(d, dims[k]);
                for (int j = 0; j < dims[k]; ++j) basis.col(j) = eig.eigenvectors().col(d - 1 - j);
                model.bases[k] = basis;
            }

            const double next = model_risk(model);
            trace.push_back(next);
            if (next < best_risk) {
                best_risk = next;
                best = model;
            }
            if (converged(risk, next, cfg.tolerance)) break;
            risk = next;
        }
        out = best;
        return best_risk;
    };

    return best_of_restarts<SubspaceModel>(cfg.restarts, cfg.seed, run, diagnostics);
}

KernelModel fit_switching_regression(const Dataset& data, const KernelSpec& kernel,
                                     const FitConfig& cfg, FitDiagnostics* diagnostics) {
    cfg.validate();
    if (!data.has_outputs())
        throw std::invalid_argument("fit_switching_regression: dataset outputs missing");
    const int n = static_cast<int>(data.size());
    const int c = cfg.components;
    const Matrix k_full = gram_matrix(kernel, data.points());
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = data.output(i);

    auto run = [&](std::uint64_t restart_seed, KernelModel& out, std::vector<double>& trace) {
        Rng rng(restart_seed);

        // random balanced assignment
        std::vector<int> assign(n);
        const std::vector<int> perm = rng.permutation(n);
        for (int i = 0; i < n; ++i) assign[perm[i]] = i % c;

        KernelModel model;
        model.kernel = kernel;
        model.anchors = data.points();
        model.coefficients = Matrix::Zero(c, n);
        model.norms.assign(c, 0.0);

        // scores(k, i) = f_k(x_i); maintained incrementally from the Gram matrix
        Matrix scores = Matrix::Zero(c, n);
        std::vector<double> losses(n);

        auto refit_component = [&](int k, const std::vector<int>& members) {
            Vector row = Vector::Zero(n);
            double norm_sq = 0.0;
            if (!members.empty()) {
                const auto m = static_cast<Eigen::Index>(members.size());
                Matrix k_sub(m, m);
                Vector y_sub(m);
                for (Eigen::Index a = 0; a < m; ++a) {
                    y_sub(a) = y(members[a]);
                    for (Eigen::Index b = 0; b < m; ++b)
                        k_sub(a, b) = k_full(members[a], members[b]);
                }
                Matrix regularized = k_sub;
                regularized.diagonal().array() += cfg.ridge;
                const Vector coeff = regularized.ldlt().solve(y_sub);
                for (Eigen::Index a = 0; a < m; ++a) row(members[a]) = coeff(a);
                norm_sq = coeff.dot(k_sub * coeff);
            }
            model.coefficients.row(k) = row.transpose();
            model.norms[k] = std::sqrt(std::max(0.0, norm_sq));
            scores.row(k) = row.transpose() * k_full;
        };

        double risk = std::numeric_limits<double>::infinity();
        KernelModel best_model = model;
        double best_risk = risk;

        for (int iter = 0; iter < cfg.max_iterations; ++iter) {
            // refit on current assignment
            std::vector<std::vector<int>> members(c);
            for (int i = 0; i < n; ++i) members[assign[i]].push_back(i);
            for (int k = 0; k < c; ++k) refit_component(k, members[k]);

            // radial rescaling into the constraint set (RKHS norms are homogeneous)
            const double total = lp_norm(model.norms, cfg.constraint.p);
            if (total > cfg.constraint.lambda) {
                const double factor = cfg.constraint.lambda / total;
                model.rescale(factor);
                scores *= factor;
            }

            // assignment by clipped squared residual, ties to the lowest index
            for (int i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::infinity();
                int best_k = 0;
                for (int k = 0; k < c; ++k) {
                    const double e = y(i) - clip_output(scores(k, i));
                    const double v = e * e;
                    if (v < best) {
                        best = v;
                        best_k = k;
                    }
                }
                assign[i] = best_k;
                losses[i] = best;
            }

            // reseed empty components at the worst-served points
            std::vector<int> counts(c, 0);
            for (int a : assign) counts[a] += 1;
            std::vector<bool> claimed(n, false);
            for (int k = 0; k < c; ++k) {
                if (counts[k] > 0) continue;
                const std::size_t w = worst_point(losses, claimed);
                claimed[w] = true;
                counts[assign[w]] -= 1;
                assign[w] = k;
                counts[k] += 1;
            }

            const double next = mean_of(losses);
            trace.push_back(next);
            if (next < best_risk) {
                best_risk = next;
                best_model = model;
            }
            if (iter > 0 && converged(risk, next, cfg.tolerance)) break;
            risk = next;
        }
        out = best_model;
        return best_risk;
    };

    return best_of_restarts<KernelModel>(cfg.restarts, cfg.seed, run, diagnostics);
}

}  // namespace mcrisk
