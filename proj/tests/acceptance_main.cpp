// Acceptance suite: every release-gating property in one binary, one
// pass/fail line per criterion, with the stated tolerances and time budgets
// enforced. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mcrisk/core.hpp"
#include "mcrisk/harness.hpp"
#include "test_support.hpp"

using namespace mcrisk;

namespace {

const double kInf = LpConstraint::infinity();

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition && pass) {
            pass = false;
            detail = message;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion_alpha_exactness() {
    Outcome out;
    const double ps[] = {0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 5.0, kInf};
    for (double p : ps) {
        double harmonic = 1.0;  // k = 1 term
        for (int c = 2; c <= 1000; ++c) {
            harmonic += std::isinf(p) ? 1.0 : std::pow(static_cast<double>(c), -1.0 / p);
            const double got = alpha(c, p);
            const double want = oracle::alpha_reference(c, p);
            out.require(oracle::close_rel(got, want, 1e-12),
                        "alpha(" + std::to_string(c) + ", " + fmt(p) + ") = " + fmt(got) +
                            " vs reference " + fmt(want));
            out.require(harmonic <= got * (1.0 + 1e-12),
                        "harmonic sum exceeds alpha at C = " + std::to_string(c) +
                            ", p = " + fmt(p));
        }
    }
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion_embedding() {
    Outcome out;
    Rng rng(20240202);
    const double ps[] = {0.5, 1.0, 2.0, kInf};
    for (double p : ps) {
        for (int trial = 0; trial < 10000 && out.pass; ++trial) {
            // centers
            {
                const int c = rng.uniform_int(2, 6);
                const double lambda = rng.uniform(0.5, 4.0);
                const LpConstraint constraint(p, lambda);
                const auto model =
                    random_center_model(c, rng.uniform_int(2, 5), constraint,
                                        rng.uniform(1e-6, 1.0), rng);
                out.require(check_embedding(MultiComponentModel{model}, constraint),
                            "center model escaped the product embedding at p = " + fmt(p));
            }
            // kernel expansions
            {
                const int c = rng.uniform_int(2, 4);
                const double lambda = rng.uniform(0.5, 4.0);
                const LpConstraint constraint(p, lambda);
                std::vector<Vector> anchors{rng.uniform_ball(2, 1.0), rng.uniform_ball(2, 1.0),
                                            rng.uniform_ball(2, 1.0)};
                const auto model =
                    random_kernel_model(KernelSpec::gaussian(1.0), anchors, c, constraint,
                                        rng.uniform(1e-6, 1.0), rng);
                out.require(check_embedding(MultiComponentModel{model}, constraint),
                            "kernel model escaped the product embedding at p = " + fmt(p));
            }
            // subspaces: dims drawn first, budget set at or above their norm
            {
                const int c = rng.uniform_int(2, 4);
                const int d = rng.uniform_int(2, 6);
                std::vector<int> dims(c);
                std::vector<double> roots(c);
                for (int k = 0; k < c; ++k) {
                    dims[k] = rng.uniform_int(1, d);
                    roots[k] = std::sqrt(static_cast<double>(dims[k]));
                }
                const double lambda = lp_norm(roots, p) * (1.0 + rng.uniform(0.0, 1.0));
                const auto model = random_subspace_model(d, dims, rng);
                out.require(
                    check_embedding(MultiComponentModel{model}, LpConstraint(p, lambda)),
                    "subspace model escaped the product embedding at p = " + fmt(p));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion_permutation_invariance() {
    Outcome out;
    Rng rng(831);
    for (int trial = 0; trial < 1000 && out.pass; ++trial) {
        const int c = rng.uniform_int(2, 5);
        const int d = rng.uniform_int(2, 5);
        const auto perm = rng.permutation(c);
        const Vector x = rng.uniform_ball(d, 1.0);

        std::vector<Vector> centers;
        for (int k = 0; k < c; ++k) centers.push_back(rng.gaussian_vector(d));
        const CenterModel cm(centers);
        std::vector<Vector> cperm;
        for (int k : perm) cperm.push_back(centers[k]);
        out.require(oracle::close_rel(clustering_loss_value(cm, x),
                                      clustering_loss_value(CenterModel(cperm), x), 1e-12),
                    "clustering loss changed under permutation");

        std::vector<Matrix> bases;
        for (int k = 0; k < c; ++k)
            bases.push_back(random_orthonormal(d, rng.uniform_int(1, d), rng));
        const SubspaceModel sm(bases);
        std::vector<Matrix> bperm;
        for (int k : perm) bperm.push_back(bases[k]);
        out.require(oracle::close_rel(subspace_loss_value(sm, x),
                                      subspace_loss_value(SubspaceModel(bperm), x), 1e-12),
                    "subspace loss changed under permutation");

        std::vector<Vector> anchors{rng.uniform_ball(d, 1.0), rng.uniform_ball(d, 1.0),
                                    rng.uniform_ball(d, 1.0)};
        Matrix coeff(c, 3);
        for (int k = 0; k < c; ++k) coeff.row(k) = rng.gaussian_vector(3).transpose() * 0.4;
        const auto km = KernelModel::build(KernelSpec::gaussian(0.8), anchors, coeff);
        KernelModel kperm = km;
        for (int row = 0; row < c; ++row) {
            kperm.coefficients.row(row) = km.coefficients.row(perm[row]);
            kperm.norms[row] = km.norms[perm[row]];
        }
        const double y = rng.uniform(-0.5, 0.5);
        out.require(oracle::close_rel(switching_loss(km, x, y).value,
                                      switching_loss(kperm, x, y).value, 1e-12),
                    "switching loss changed under permutation");
    }
    return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion_subspace_algebra() {
    Outcome out;
    Rng rng(404);
    for (int trial = 0; trial < 1000 && out.pass; ++trial) {
        const int d = rng.uniform_int(2, 20);
        const int dk = rng.uniform_int(1, d);
        const Matrix basis = random_orthonormal(d, dk, rng);
        const Vector x = rng.gaussian_vector(d) * rng.uniform(0.1, 2.0);
        const double direct = (basis * (basis.transpose() * x) - x).squaredNorm();
        const double identity = x.squaredNorm() - (basis.transpose() * x).squaredNorm();
        out.require(oracle::close_rel(direct, identity, 1e-9),
                    "projection identity off: " + fmt(direct) + " vs " + fmt(identity));
        const double frob = (basis * basis.transpose()).norm();
        out.require(oracle::close_rel(frob, std::sqrt(static_cast<double>(dk)), 1e-9),
                    "projection Frobenius norm off at dim " + std::to_string(dk));
    }
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion_rademacher_oracles() {
    Outcome out;
    Rng rng(505);

    // (a) analytic cluster supremum vs 10^6-point grid, 100 random draws
    for (int trial = 0; trial < 100 && out.pass; ++trial) {
        const int n = rng.uniform_int(1, 25);
        std::vector<Vector> points;
        for (int i = 0; i < n; ++i) points.push_back(rng.uniform_ball(3, 1.0));
        const double radius = rng.uniform(0.05, 2.0);
        const auto sigma = rademacher_signs(900 + trial, trial, points.size());
        Vector v = Vector::Zero(3);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            v += static_cast<double>(sigma[i]) * points[i];
            s += sigma[i];
        }
        const double exact = cluster_component_draw_sup(points, radius, sigma);
        const double grid = oracle::cluster_sup_grid(v.norm(), s, radius, n, 1000000);
        out.require(std::abs(exact - grid) <= 1e-5,
                    "cluster supremum vs grid oracle: " + fmt(exact) + " vs " + fmt(grid));
    }

    // (b) eigenvalue supremum dominates 1,000 random feasible bases per draw
    {
        std::vector<Vector> points;
        for (int i = 0; i < 12; ++i) points.push_back(rng.uniform_ball(8, 1.0));
        for (int draw = 0; draw < 10 && out.pass; ++draw) {
            const auto sigma = rademacher_signs(707, draw, points.size());
            for (int dim : {1, 3, 5}) {
                const double sup = subspace_draw_sup(points, dim, sigma);
                for (int probe = 0; probe < 1000 && out.pass; ++probe) {
                    const Matrix basis = random_orthonormal(8, dim, rng);
                    double objective = 0.0;
                    for (std::size_t i = 0; i < points.size(); ++i)
                        objective +=
                            sigma[i] * (basis.transpose() * points[i]).squaredNorm();
                    objective /= static_cast<double>(points.size());
                    out.require(objective <= sup + 1e-9,
                                "a random basis beat the eigenvalue supremum");
                }
            }
        }
    }

    // (c) Monte-Carlo means below closed-form bounds, 50 datasets per setting
    const KernelSpec kernel = KernelSpec::gaussian(1.0);
    for (int trial = 0; trial < 50 && out.pass; ++trial) {
        const int n = rng.uniform_int(5, 50);
        const int d = rng.uniform_int(2, 10);
        std::vector<Vector> points;
        for (int i = 0; i < n; ++i) points.push_back(rng.uniform_ball(d, 1.0));
        const Dataset data(points, 1.0);
        const double radius = rng.uniform(0.1, 2.0);
        const int draws = 2000;

        const auto rkhs = mc_rademacher_rkhs_ball(gram_matrix(kernel, data.points()), radius,
                                                  draws, 1000 + trial);
        out.require(rkhs.mean <= rkhs.closed_form_bound + 3.0 * rkhs.std_error,
                    "rkhs Monte-Carlo mean exceeded its closed-form bound");

        const auto cluster = mc_rademacher_cluster_component(data, radius, draws, 2000 + trial);
        out.require(cluster.mean <= cluster.closed_form_bound + 3.0 * cluster.std_error,
                    "cluster Monte-Carlo mean exceeded its closed-form bound");

        const auto subspace =
            mc_rademacher_subspace(data, rng.uniform_int(1, d), draws, 3000 + trial);
        out.require(subspace.mean <= subspace.closed_form_bound + 3.0 * subspace.std_error,
                    "subspace Monte-Carlo mean exceeded its closed-form bound");
    }
    return out;
}

// ---------------------------------------------------------------- criterion 6

ExperimentConfig validity_config(Problem problem, double p, std::uint64_t seed) {
    ExperimentConfig config;
    config.problem = problem;
    config.generator.problem = problem;
    config.generator.dim = problem == Problem::subspace ? 4 : 3;
    config.generator.components = 3;
    config.generator.lambda_x = 1.0;
    config.generator.noise = 0.05;
    config.n_train = 100;
    config.n_eval = 2000;
    config.trials = 200;
    config.delta = 0.05;
    config.seed = seed;
    config.mc_draws = 2000;
    config.probe_models = 0;
    config.fit = FitConfig(3, LpConstraint(p, 1.0));
    config.fit.restarts = 3;
    config.fit.seed = seed;
    switch (problem) {
        case Problem::switching:
            config.kernel = KernelSpec::gaussian(1.0);
            config.fit.ridge = 1e-4;
            config.fit.constraint =
                LpConstraint(p, 2.0 * lp_norm(std::vector<double>{1.0, 1.0, 1.0}, p));
            break;
        case Problem::clustering:
            config.fit.constraint =
                LpConstraint(p, lp_norm(std::vector<double>{1.0, 1.0, 1.0}, p));
            break;
        case Problem::subspace:
            config.generator.dims = {1, 1, 1};
            config.fit.dims = {1, 1, 1};
            config.fit.constraint =
                LpConstraint(p, lp_norm(std::vector<double>{1.0, 1.0, 1.0}, p));
            break;
    }
    return config;
}

Outcome criterion_certificate_validity() {
    Outcome out;
    const BoundTag expected_tags[] = {BoundTag::thm1, BoundTag::thm2, BoundTag::thm5};
    const Problem problems[] = {Problem::switching, Problem::clustering, Problem::subspace};
    for (int which = 0; which < 3; ++which) {
        for (double p : {1.0, 2.0, kInf}) {
            const auto config = validity_config(problems[which], p, 6000 + which);
            const auto report = run_verification(config);
            int violations = 0;
            int counted = 0;
            for (const auto& trial : report.trials)
                for (const auto& cert : trial.certificates)
                    if (cert.tag == expected_tags[which]) {
                        ++counted;
                        violations += cert.violated ? 1 : 0;
                    }
            out.require(counted == config.trials,
                        "missing certificates for " + to_string(problems[which]));
            out.require(violations == 0,
                        to_string(problems[which]) + " at p = " + fmt(p) + ": " +
                            std::to_string(violations) + " certificate violations");
        }
    }
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion_learner_sanity() {
    Outcome out;

    // two-cluster instance, exact risk 1 against the brute-force oracle
    std::vector<Vector> quad(4, Vector(2));
    quad[0] << 0.0, 0.0;
    quad[1] << 0.0, 2.0;
    quad[2] << 10.0, 0.0;
    quad[3] << 10.0, 2.0;
    const Dataset four(quad, 11.0);
    FitConfig kcfg(2, LpConstraint(kInf, 100.0));
    kcfg.seed = 2;
    kcfg.restarts = 2;
    const double kmeans_risk = empirical_risk(fit_kmeans(four, kcfg), four);
    out.require(kmeans_risk == 1.0, "k-means risk " + fmt(kmeans_risk) + " != 1");
    out.require(oracle::kmeans_brute_force(four.points(), 2) == 1.0,
                "brute-force oracle disagrees with the expected optimum");

    // noiseless union of two lines
    Rng rng(702);
    std::vector<Vector> line_points;
    for (int i = 0; i < 16; ++i) {
        Vector x = Vector::Zero(3);
        x(i % 2) = rng.uniform(-1.0, 1.0);
        line_points.push_back(x);
    }
    const Dataset lines(line_points, 1.0);
    FitConfig scfg(2, LpConstraint(2.0, std::sqrt(2.0) + 1e-9));
    scfg.dims = {1, 1};
    scfg.restarts = 8;
    scfg.seed = 3;
    const double lines_risk = empirical_risk(fit_ksubspaces(lines, scfg), lines);
    out.require(lines_risk < 1e-12, "k-subspaces residual " + fmt(lines_risk) + " >= 1e-12");

    // single-source linear data under a linear kernel at ridge 1e-8
    std::vector<Vector> xs;
    std::vector<double> ys;
    Vector w = rng.gaussian_vector(3);
    w *= 0.45 / w.norm();
    for (int i = 0; i < 40; ++i) {
        xs.push_back(rng.uniform_ball(3, 1.0));
        ys.push_back(w.dot(xs.back()));
    }
    out.require(oracle::linear_least_squares_risk(xs, ys) < 1e-20,
                "least-squares oracle says the data is not linear");
    const Dataset linear_data(xs, ys, 1.0);
    FitConfig wcfg(2, LpConstraint(kInf, 10.0));
    wcfg.ridge = 1e-8;
    wcfg.seed = 4;
    wcfg.restarts = 2;
    const double swr =
        empirical_risk(fit_switching_regression(linear_data, KernelSpec::linear(), wcfg),
                       linear_data);
    out.require(swr < 1e-6, "switching regression risk " + fmt(swr) + " >= 1e-6");
    return out;
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion_growth_shape() {
    Outcome out;
    const double trace = 100.0;
    const std::size_t n = 100;
    struct Regime {
        double p;
        std::function<double(int)> shape;
    };
    const Regime regimes[] = {
        {kInf, [](int c) { return static_cast<double>(c); }},
        {2.0, [](int c) { return std::sqrt(static_cast<double>(c)); }},
        {1.0, [](int c) { return 1.0 + std::log(static_cast<double>(c)); }},
        {0.5, [](int) { return 1.0; }},
    };
    for (const auto& regime : regimes) {
        const LpConstraint constraint(regime.p, 1.0);
        const double base =
            thm1_bound(0.0, trace, constraint, 2, 0.05, n).complexity_term;
        const double shape_base = regime.shape(2);
        for (int c = 2; c <= 64 && out.pass; ++c) {
            const double term = thm1_bound(0.0, trace, constraint, c, 0.05, n).complexity_term;
            const double got = term / base;
            const double want = regime.shape(c) / shape_base;
            out.require(oracle::close_rel(got, want, 1e-12),
                        "growth shape at p = " + fmt(regime.p) + ", C = " + std::to_string(c) +
                            ": " + fmt(got) + " vs " + fmt(want));
        }
    }
    return out;
}

struct Criterion {
    int number;
    std::string name;
    double time_limit_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "growth function exactness and harmonic domination", 1.0,
         criterion_alpha_exactness},
        {2, "product-class embedding of random in-class models", 5.0, criterion_embedding},
        {3, "permutation invariance of the three losses", 1.0,
         criterion_permutation_invariance},
        {4, "subspace projection algebra", 1.0, criterion_subspace_algebra},
        {5, "Monte-Carlo complexity estimates vs oracles and bounds", 60.0,
         criterion_rademacher_oracles},
        {6, "certificate validity on held-out risk, 200 trials per setting", 600.0,
         criterion_certificate_validity},
        {7, "learner sanity against independent oracles", 10.0, criterion_learner_sanity},
        {8, "certificate growth regimes in the component count", 1.0,
         criterion_growth_shape},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out = criterion.run();
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.time_limit_seconds)
            out.require(false, "exceeded the " + fmt(criterion.time_limit_seconds) +
                                   " s budget (" + fmt(elapsed) + " s)");
        std::printf("[%s] criterion %d: %s (%.2f s, limit %.0f s)%s%s\n",
                    out.pass ? "PASS" : "FAIL", criterion.number, criterion.name.c_str(),
                    elapsed, criterion.time_limit_seconds, out.pass ? "" : " -- ",
                    out.pass ? "" : out.detail.c_str());
        failures += out.pass ? 0 : 1;
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures;
}
