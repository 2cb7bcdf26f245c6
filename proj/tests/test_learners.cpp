#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mcrisk/core.hpp"
#include "mcrisk/learners.hpp"
#include "mcrisk/losses.hpp"
#include "mcrisk/rng.hpp"
#include "test_support.hpp"

using namespace mcrisk;

namespace {

const double kInf = LpConstraint::infinity();

Dataset four_point_instance() {
    std::vector<Vector> points(4, Vector(2));
    points[0] << 0.0, 0.0;
    points[1] << 0.0, 2.0;
    points[2] << 10.0, 0.0;
    points[3] << 10.0, 2.0;
    return Dataset(std::move(points), 11.0);
}

Dataset random_cloud(Rng& rng, int n, int d, double radius) {
    std::vector<Vector> points;
    points.reserve(n);
    for (int i = 0; i < n; ++i) points.push_back(rng.uniform_ball(d, radius));
    return Dataset(std::move(points), radius);
}

}  // namespace

TEST_CASE("k-means: two-cluster instance recovers risk 1 exactly") {
    const Dataset data = four_point_instance();
    FitConfig cfg(2, LpConstraint(kInf, 100.0));
    cfg.restarts = 2;
    cfg.seed = 5;
    FitDiagnostics diag;
    const CenterModel model = fit_kmeans(data, cfg, &diag);
    CHECK(empirical_risk(model, data) == 1.0);
    CHECK(oracle::kmeans_brute_force(data.points(), 2) == 1.0);
    // the two means sit at (0,1) and (10,1) in some order
    std::vector<double> xs{model.centers[0](0), model.centers[1](0)};
    std::sort(xs.begin(), xs.end());
    CHECK(xs[0] == doctest::Approx(0.0));
    CHECK(xs[1] == doctest::Approx(10.0));
    CHECK(model.centers[0](1) == doctest::Approx(1.0));
    CHECK(model.centers[1](1) == doctest::Approx(1.0));
}

TEST_CASE("k-means: one center per point gives zero risk") {
    Rng rng(13);
    std::vector<Vector> points;
    for (int i = 0; i < 5; ++i) points.push_back(rng.uniform_ball(3, 1.0));
    const Dataset data(points, 1.0);
    FitConfig cfg(5, LpConstraint(kInf, 50.0));
    cfg.seed = 1;
    cfg.restarts = 4;
    const CenterModel model = fit_kmeans(data, cfg);
    CHECK(empirical_risk(model, data) == 0.0);
}

TEST_CASE("k-means: risk trace is nonincreasing without rescaling") {
    Rng rng(29);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Dataset data = random_cloud(rng, 60, 3, 1.0);
        FitConfig cfg(4, LpConstraint(kInf, 100.0));  // loose budget: no rescaling
        cfg.seed = seed;
        cfg.restarts = 1;
        FitDiagnostics diag;
        fit_kmeans(data, cfg, &diag);
        REQUIRE(diag.risk_trace.size() >= 2);
        for (std::size_t i = 1; i < diag.risk_trace.size(); ++i)
            CHECK(diag.risk_trace[i] <= diag.risk_trace[i - 1] * (1.0 + 1e-12));
    }
}

TEST_CASE("k-means: fitted model satisfies the constraint, including tight budgets") {
    Rng rng(37);
    for (double p : {0.5, 1.0, 2.0, kInf}) {
        const Dataset data = random_cloud(rng, 50, 3, 2.0);
        FitConfig cfg(3, LpConstraint(p, 0.8));  // tight: forces rescaling
        cfg.seed = 11;
        cfg.restarts = 2;
        const CenterModel model = fit_kmeans(data, cfg);
        const double nrm = lp_norm(complexity_vector(MultiComponentModel{model}), p);
        CHECK(nrm <= 0.8 * (1.0 + 1e-9));
    }
}

TEST_CASE("k-means: determinism and errors") {
    Rng rng(41);
    const Dataset data = random_cloud(rng, 30, 2, 1.0);
    FitConfig cfg(3, LpConstraint(2.0, 10.0));
    cfg.seed = 77;
    cfg.restarts = 3;
    const CenterModel a = fit_kmeans(data, cfg);
    const CenterModel b = fit_kmeans(data, cfg);
    REQUIRE(a.centers.size() == b.centers.size());
    for (std::size_t k = 0; k < a.centers.size(); ++k)
        CHECK(a.centers[k] == b.centers[k]);  // bitwise identical

    FitConfig too_many(31, LpConstraint(2.0, 10.0));
    CHECK_THROWS_AS(fit_kmeans(data, too_many), std::invalid_argument);
    FitConfig bad(2, LpConstraint(2.0, 10.0));
    bad.max_iterations = 0;
    CHECK_THROWS_AS(fit_kmeans(data, bad), std::invalid_argument);
}

TEST_CASE("k-means: duplicate-heavy data still yields C components") {
    std::vector<Vector> points(12, Vector(2));
    for (int i = 0; i < 10; ++i) points[i] << 1.0, 1.0;
    points[10] << -1.0, 0.5;
    points[11] << 0.0, -1.0;
    const Dataset data(points, 2.0);
    FitConfig cfg(3, LpConstraint(kInf, 10.0));
    cfg.seed = 3;
    const CenterModel model = fit_kmeans(data, cfg);
    CHECK(model.centers.size() == 3);
    CHECK(empirical_risk(model, data) <= 1e-12);
}

TEST_CASE("k-subspaces: exact union of two lines reaches zero risk") {
    Rng rng(51);
    // orthogonal lines through the origin in R^3
    Vector u = Vector::Unit(3, 0);
    Vector v = Vector::Unit(3, 1);
    std::vector<Vector> points;
    for (int i = 0; i < 12; ++i) {
        const double t = rng.uniform(-1.0, 1.0);
        points.push_back((i % 2 == 0) ? Vector(t * u) : Vector(t * v));
    }
    const Dataset data(points, 1.0);
    FitConfig cfg(2, LpConstraint(2.0, std::sqrt(2.0) + 1e-9));
    cfg.dims = {1, 1};
    cfg.restarts = 8;
    cfg.seed = 4;
    const SubspaceModel model = fit_ksubspaces(data, cfg);
    CHECK(empirical_risk(model, data) < 1e-12);
}

TEST_CASE("k-subspaces: full-dimensional single component has zero risk") {
    Rng rng(59);
    const Dataset data = random_cloud(rng, 20, 4, 1.0);
    FitConfig cfg(1, LpConstraint(2.0, 2.0 + 1e-12));
    cfg.dims = {4};
    cfg.seed = 9;
    const SubspaceModel model = fit_ksubspaces(data, cfg);
    CHECK(empirical_risk(model, data) < 1e-20);
}

TEST_CASE("k-subspaces: trace nonincreasing, dims policies, errors") {
    Rng rng(63);
    const Dataset data = random_cloud(rng, 40, 4, 1.0);
    SUBCASE("risk trace nonincreasing") {
        FitConfig cfg(3, LpConstraint(kInf, 2.0));
        cfg.dims = {2, 1, 1};
        cfg.seed = 2;
        FitDiagnostics diag;
        fit_ksubspaces(data, cfg, &diag);
        for (std::size_t i = 1; i < diag.risk_trace.size(); ++i)
            CHECK(diag.risk_trace[i] <= diag.risk_trace[i - 1] * (1.0 + 1e-12));
    }
    SUBCASE("budget split") {
        FitConfig cfg(3, LpConstraint(kInf, 2.0));
        cfg.dims_budget = 5;
        CHECK(resolve_subspace_dims(cfg, 4) == std::vector<int>{2, 2, 1});
        const SubspaceModel model = fit_ksubspaces(data, cfg);
        CHECK(model.dims() == std::vector<int>{2, 2, 1});
    }
    SUBCASE("infeasible or malformed dims") {
        FitConfig cfg(2, LpConstraint(2.0, 1.0));
        cfg.dims = {4, 4};  // sqrt(4)^2 + sqrt(4)^2 = 8 > 1
        CHECK_THROWS_AS(fit_ksubspaces(data, cfg), std::invalid_argument);
        FitConfig no_dims(2, LpConstraint(2.0, 5.0));
        CHECK_THROWS_AS(fit_ksubspaces(data, no_dims), std::invalid_argument);
        FitConfig oversize(2, LpConstraint(kInf, 5.0));
        oversize.dims = {5, 1};  // d_k > d
        CHECK_THROWS_AS(fit_ksubspaces(data, oversize), std::invalid_argument);
    }
    SUBCASE("determinism") {
        FitConfig cfg(2, LpConstraint(kInf, 2.0));
        cfg.dims = {2, 1};
        cfg.seed = 31;
        cfg.restarts = 2;
        const SubspaceModel a = fit_ksubspaces(data, cfg);
        const SubspaceModel b = fit_ksubspaces(data, cfg);
        for (std::size_t k = 0; k < a.bases.size(); ++k) CHECK(a.bases[k] == b.bases[k]);
    }
}

TEST_CASE("switching regression: single linear source is fit to the ridge floor") {
    Rng rng(73);
    const int n = 40, d = 3;
    std::vector<Vector> xs;
    std::vector<double> ys;
    Vector w = rng.gaussian_vector(d);
    w *= 0.45 / w.norm();  // |w.x| <= 0.45 over the unit ball
    for (int i = 0; i < n; ++i) {
        xs.push_back(rng.uniform_ball(d, 1.0));
        ys.push_back(w.dot(xs.back()));
    }
    CHECK(oracle::linear_least_squares_risk(xs, ys) < 1e-20);  // data is exactly linear
    const Dataset data(xs, ys, 1.0);
    FitConfig cfg(2, LpConstraint(kInf, 10.0));
    cfg.ridge = 1e-8;
    cfg.seed = 6;
    cfg.restarts = 2;
    const KernelModel model = fit_switching_regression(data, KernelSpec::linear(), cfg);
    CHECK(empirical_risk(model, data) < 1e-6);
}

TEST_CASE("switching regression: n = C singletons interpolate under a gaussian kernel") {
    Rng rng(79);
    const int c = 3;
    std::vector<Vector> xs;
    std::vector<double> ys;
    for (int i = 0; i < c; ++i) {
        xs.push_back(rng.uniform_ball(2, 1.0));
        ys.push_back(rng.uniform(-0.5, 0.5));
    }
    const Dataset data(xs, ys, 1.0);
    FitConfig cfg(c, LpConstraint(kInf, 1e6));
    cfg.ridge = 1e-10;
    cfg.seed = 8;
    const KernelModel model = fit_switching_regression(data, KernelSpec::gaussian(1.0), cfg);
    CHECK(empirical_risk(model, data) < 1e-6);
}

TEST_CASE("switching regression: clipped risk is bounded by 1 and constraints hold") {
    Rng rng(83);
    for (double p : {1.0, 2.0, kInf}) {
        const int n = 30;
        std::vector<Vector> xs;
        std::vector<double> ys;
        for (int i = 0; i < n; ++i) {
            xs.push_back(rng.uniform_ball(2, 1.0));
            ys.push_back(rng.uniform(-0.5, 0.5));
        }
        const Dataset data(xs, ys, 1.0);
        FitConfig cfg(2, LpConstraint(p, 0.5));  // tight budget forces rescaling
        cfg.seed = 15;
        const KernelModel model = fit_switching_regression(data, KernelSpec::gaussian(2.0), cfg);
        CHECK(empirical_risk(model, data) <= 1.0);
        CHECK(lp_norm(model.norms, p) <= 0.5 * (1.0 + 1e-9));
        model.validate();
    }
}

TEST_CASE("switching regression: determinism and missing outputs") {
    Rng rng(89);
    std::vector<Vector> xs;
    std::vector<double> ys;
    for (int i = 0; i < 20; ++i) {
        xs.push_back(rng.uniform_ball(2, 1.0));
        ys.push_back(rng.uniform(-0.4, 0.4));
    }
    const Dataset labeled(xs, ys, 1.0);
    const Dataset plain(xs, 1.0);
    FitConfig cfg(2, LpConstraint(2.0, 5.0));
    cfg.seed = 123;
    cfg.restarts = 3;
    const KernelModel a = fit_switching_regression(labeled, KernelSpec::gaussian(1.0), cfg);
    const KernelModel b = fit_switching_regression(labeled, KernelSpec::gaussian(1.0), cfg);
    CHECK(a.coefficients == b.coefficients);
    CHECK_THROWS_AS(fit_switching_regression(plain, KernelSpec::gaussian(1.0), cfg),
                    std::invalid_argument);
}

TEST_CASE("fits never beat their own initial model") {
    Rng rng(97);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Dataset data = random_cloud(rng, 50, 3, 1.0);
        FitConfig cfg(3, LpConstraint(kInf, 10.0));
        cfg.seed = seed;
        FitDiagnostics diag;
        fit_kmeans(data, cfg, &diag);
        CHECK(diag.best_risk <= diag.risk_trace.front() * (1.0 + 1e-12));
        FitConfig scfg(2, LpConstraint(kInf, 2.0));
        scfg.dims = {1, 1};
        scfg.seed = seed;
        FitDiagnostics sdiag;
        fit_ksubspaces(data, scfg, &sdiag);
        CHECK(sdiag.best_risk <= sdiag.risk_trace.front() * (1.0 + 1e-12));
    }
}
