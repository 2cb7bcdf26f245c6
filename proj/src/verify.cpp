#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mcrisk/core.hpp"
#include "mcrisk/harness.hpp"

namespace mcrisk {

namespace {

using nlohmann::json;

constexpr double kClassSlack = 1e-9;

// Deterministic parallel loop: iterations write into index-addressed slots,
// so the schedule cannot affect the result.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&fn, w, workers, count] {
            for (int i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

CertificateRecord to_record(const BoundCertificate& cert, double held_out, double slack) {
    CertificateRecord rec;
    rec.tag = cert.tag;
    rec.empirical_risk = cert.empirical_risk;
    rec.complexity_term = cert.complexity_term;
    rec.confidence_term = cert.confidence_term;
    rec.total = cert.total;
    rec.violated = held_out > cert.total + slack;
    return rec;
}

double loss_bound_for(const ExperimentConfig& config) {
    const double lx = config.generator.lambda_x;
    switch (config.problem) {
        case Problem::switching: return 1.0;
        case Problem::clustering:
            return clustering_bound_m(lx, config.fit.constraint.lambda);
        case Problem::subspace: return lx * lx;
    }
    throw std::logic_error("unknown problem");
}

}  // namespace

std::vector<BoundCertificate> closed_form_certificates(const MultiComponentModel& model,
                                                       const Dataset& data,
                                                       const LpConstraint& constraint,
                                                       double delta,
                                                       SubspaceMPolicy m_policy) {
    const ComplexityVector omega = complexity_vector(model);
    if (lp_norm(omega, constraint.p) > constraint.lambda * (1.0 + kClassSlack))
        throw std::invalid_argument(
            "certify: model complexity exceeds the constraint budget");
    const double risk = empirical_risk(model, data);
    const int c = static_cast<int>(component_count(model));
    const std::size_t n = data.size();
    std::vector<BoundCertificate> certs;

    if (std::holds_alternative<KernelModel>(model)) {
        const auto& kernel_model = std::get<KernelModel>(model);
        double trace = 0.0;
        for (const auto& x : data.points()) trace += kernel_model.kernel(x, x);
        certs.push_back(thm1_bound(risk, trace, constraint, std::max(2, c), delta, n));
    } else if (std::holds_alternative<CenterModel>(model)) {
        certs.push_back(thm2_bound(risk, data.sum_sq_norms(), constraint, std::max(2, c),
                                   data.lambda_x(), delta, n));
    } else {
        const auto& subspace_model = std::get<SubspaceModel>(model);
        const std::vector<int> dims = subspace_model.dims();
        certs.push_back(thm5_bound(risk, data.frobenius(), constraint, std::max(2, c),
                                   data.lambda_x(), delta, n, m_policy));
        certs.push_back(thm4_bound(risk, data.frobenius(), dims, data.lambda_x(), delta, n));
        if (c == 1)
            certs.push_back(thm3_bound(risk, data.frobenius(), dims[0], data.lambda_x(),
                                       delta, n));
    }
    return certs;
}

int VerificationReport::violation_count() const {
    int count = 0;
    for (const auto& trial : trials)
        for (const auto& cert : trial.certificates) count += cert.violated ? 1 : 0;
    return count;
}

int VerificationReport::probe_violation_count() const {
    int count = 0;
    for (const auto& trial : trials) count += trial.probe_violations;
    return count;
}

std::map<std::string, int> VerificationReport::violations_by_tag() const {
    std::map<std::string, int> by_tag;
    for (const auto& trial : trials)
        for (const auto& cert : trial.certificates)
            by_tag[to_string(cert.tag)] += cert.violated ? 1 : 0;
    return by_tag;
}

std::string VerificationReport::to_json() const {
    json j;
    j["config"] = config;
    j["slack"] = slack;
    j["loss_bound_m"] = loss_bound_m;
    json trial_rows = json::array();
    for (const auto& trial : trials) {
        json row;
        row["trial"] = trial.trial;
        row["empirical_risk"] = trial.empirical_risk;
        row["held_out_risk"] = trial.held_out_risk;
        row["mc_mean"] = trial.mc_estimate.mean;
        row["mc_std_error"] = trial.mc_estimate.std_error;
        row["mc_draws"] = trial.mc_estimate.draws;
        row["mc_closed_form_bound"] = trial.mc_estimate.closed_form_bound;
        row["probe_count"] = trial.probe_count;
        row["probe_violations"] = trial.probe_violations;
        json certs = json::array();
        for (const auto& cert : trial.certificates) {
            json c;
            c["tag"] = to_string(cert.tag);
            c["empirical_risk"] = cert.empirical_risk;
            c["complexity_term"] = cert.complexity_term;
            c["confidence_term"] = cert.confidence_term;
            c["total"] = cert.total;
            c["violated"] = cert.violated;
            certs.push_back(std::move(c));
        }
        row["certificates"] = std::move(certs);
        trial_rows.push_back(std::move(row));
    }
    j["trials"] = std::move(trial_rows);
    json summary;
    summary["trial_count"] = static_cast<int>(trials.size());
    summary["violations"] = violations_by_tag();
    summary["violation_count"] = violation_count();
    summary["probe_violation_count"] = probe_violation_count();
    double max_ratio = 0.0;
    for (const auto& trial : trials)
        for (const auto& cert : trial.certificates)
            if (cert.total > 0.0)
                max_ratio = std::max(max_ratio, trial.held_out_risk / cert.total);
    summary["max_held_out_to_total_ratio"] = max_ratio;
    j["summary"] = std::move(summary);
    return j.dump(2);
}

std::string VerificationReport::to_csv() const {
    std::ostringstream out;
    out << "trial,tag,empirical_risk,held_out_risk,complexity_term,confidence_term,total,"
           "violated\n";
    char buf[40];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& trial : trials)
        for (const auto& cert : trial.certificates)
            out << trial.trial << "," << to_string(cert.tag) << ","
                << fmt(cert.empirical_risk) << "," << fmt(trial.held_out_risk) << ","
                << fmt(cert.complexity_term) << "," << fmt(cert.confidence_term) << ","
                << fmt(cert.total) << "," << (cert.violated ? 1 : 0) << "\n";
    return out.str();
}

VerificationReport run_verification(const ExperimentConfig& config) {
    config.validate();
    VerificationReport report;
    report.config = config_echo(config);
    report.loss_bound_m = loss_bound_for(config);
    report.slack = report.loss_bound_m / std::sqrt(static_cast<double>(config.n_eval));
    report.trials.resize(config.trials);

    const LpConstraint constraint = config.fit.constraint;

    parallel_for(config.trials, [&](int t) {
        const std::uint64_t trial_seed = derive_seed(config.seed, static_cast<std::uint64_t>(t));
        const Dataset train =
            generate_synthetic(config.generator, config.n_train, derive_seed(trial_seed, 0));
        const Dataset eval =
            generate_synthetic(config.generator, config.n_eval, derive_seed(trial_seed, 1));

        FitConfig fit = config.fit;
        fit.seed = derive_seed(trial_seed, 2);

        TrialRecord rec;
        rec.trial = t;

        MultiComponentModel model = CenterModel{};
        LossClassSpec class_spec{ComplexitySetting::cluster, constraint, fit.components, {}};
        const Matrix* gram_ptr = nullptr;
        Matrix gram;
        double lemma_m = 1.0;

        switch (config.problem) {
            case Problem::switching: {
                model = fit_switching_regression(train, *config.kernel, fit);
                gram = gram_matrix(*config.kernel, train.points());
                gram_ptr = &gram;
                class_spec.setting = ComplexitySetting::rkhs;
                lemma_m = 1.0;
                break;
            }
            case Problem::clustering: {
                model = fit_kmeans(train, fit);
                class_spec.setting = ComplexitySetting::cluster;
                lemma_m = clustering_bound_m(train.lambda_x(), constraint.lambda);
                break;
            }
            case Problem::subspace: {
                SubspaceModel fitted = fit_ksubspaces(train, fit);
                std::vector<int> dims = fitted.dims();
                std::sort(dims.begin(), dims.end(), std::greater<int>());
                class_spec.setting = ComplexitySetting::subspace;
                class_spec.dims = std::move(dims);
                lemma_m = train.lambda_x() * train.lambda_x();
                model = std::move(fitted);
                break;
            }
        }

        rec.empirical_risk = empirical_risk(model, train);
        rec.held_out_risk = empirical_risk(model, eval);
        rec.mc_estimate = mc_loss_class_bound(train, gram_ptr, class_spec, config.mc_draws,
                                              derive_seed(trial_seed, 3));

        std::vector<BoundCertificate> certs = closed_form_certificates(
            model, train, constraint, config.delta, config.m_policy);
        certs.push_back(lemma1_bound(rec.empirical_risk, rec.mc_estimate.mean, lemma_m,
                                     config.delta, train.size()));
        for (const auto& cert : certs)
            rec.certificates.push_back(to_record(cert, rec.held_out_risk, report.slack));

        // uniformity probe: certificates must also hold for arbitrary in-class
        // models, not just fitted ones
        if (config.probe_models > 0) {
            Rng probe_rng(derive_seed(trial_seed, 4));
            rec.probe_count = config.probe_models;
            for (int j = 0; j < config.probe_models; ++j) {
                MultiComponentModel probe = model;
                switch (config.problem) {
                    case Problem::switching:
                        probe = random_kernel_model(*config.kernel, train.points(),
                                                    fit.components, constraint,
                                                    probe_rng.uniform(0.05, 1.0), probe_rng);
                        break;
                    case Problem::clustering:
                        probe = random_center_model(fit.components, config.generator.dim,
                                                    constraint, probe_rng.uniform(0.05, 1.0),
                                                    probe_rng);
                        break;
                    case Problem::subspace:
                        probe = random_subspace_model(
                            config.generator.dim,
                            resolve_subspace_dims(fit, config.generator.dim), probe_rng);
                        break;
                }
                const double probe_held = empirical_risk(probe, eval);
                const auto probe_certs = closed_form_certificates(
                    probe, train, constraint, config.delta, config.m_policy);
                for (const auto& cert : probe_certs)
                    if (probe_held > cert.total + report.slack) rec.probe_violations += 1;
            }
        }

        report.trials[t] = std::move(rec);
    });

    return report;
}

std::vector<AlphaRow> alpha_table(const std::vector<int>& component_counts,
                                  const std::vector<double>& p_values) {
    std::vector<AlphaRow> rows;
    rows.reserve(component_counts.size() * p_values.size());
    for (double p : p_values) {
        // incremental harmonic sums keep large C grids cheap
        std::vector<int> sorted = component_counts;
        std::sort(sorted.begin(), sorted.end());
        std::size_t next = 0;
        double running = 0.0;
        int k = 0;
        std::map<int, double> sums;
        while (next < sorted.size()) {
            ++k;
            running += std::isinf(p) ? 1.0 : std::pow(static_cast<double>(k), -1.0 / p);
            while (next < sorted.size() && sorted[next] == k) {
                sums[k] = running;
                ++next;
            }
        }
        for (int c : component_counts) {
            AlphaRow row;
            row.component_count = c;
            row.p = p;
            row.alpha_value = alpha(c, p);
            row.harmonic_sum = sums.at(c);
            row.ratio = row.harmonic_sum / row.alpha_value;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string alpha_table_csv(const std::vector<AlphaRow>& rows) {
    std::ostringstream out;
    out << "components,p,alpha,harmonic_sum,ratio\n";
    char buf[40];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& row : rows) {
        out << row.component_count << ","
            << (std::isinf(row.p) ? "inf" : fmt(row.p)) << "," << fmt(row.alpha_value) << ","
            << fmt(row.harmonic_sum) << "," << fmt(row.ratio) << "\n";
    }
    return out.str();
}

std::string alpha_table_json(const std::vector<AlphaRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json j;
        j["components"] = row.component_count;
        j["p"] = std::isinf(row.p) ? json("inf") : json(row.p);
        j["alpha"] = row.alpha_value;
        j["harmonic_sum"] = row.harmonic_sum;
        j["ratio"] = row.ratio;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace mcrisk
