// Command-line front end: synthetic data generation, fitting, certification,
// complexity estimation, and the end-to-end verification protocol.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mcrisk/core.hpp"
#include "mcrisk/harness.hpp"

namespace {

using namespace mcrisk;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_p_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token == "inf" || token == "infinity")
            out.push_back(LpConstraint::infinity());
        else
            out.push_back(std::stod(token));
    }
    return out;
}

std::vector<int> parse_c_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) out.push_back(std::stoi(token));
    return out;
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::optional<double> delta;
    std::optional<int> trials;
    std::string format = "csv";
};

ExperimentConfig load_config(const CommonFlags& flags) {
    ExperimentConfig config = flags.config_path.empty()
                                  ? ExperimentConfig{}
                                  : parse_config_file(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.delta) config.delta = *flags.delta;
    if (flags.trials) config.trials = *flags.trials;
    return config;
}

int cmd_generate(const CommonFlags& flags, int n) {
    ExperimentConfig config = load_config(flags);
    config.generator.problem = config.problem;
    const Dataset data = generate_synthetic(config.generator, n, config.seed);
    const std::string csv = dataset_to_csv(data);
    if (flags.out_path.empty())
        std::cout << csv;
    else
        write_text_file(flags.out_path, csv);
    return 0;
}

int cmd_fit(const CommonFlags& flags, const std::string& data_path,
            std::optional<double> lambda_x) {
    ExperimentConfig config = load_config(flags);
    const bool outputs = config.problem == Problem::switching;
    const Dataset data = ingest_csv(data_path, outputs, lambda_x);
    FitConfig fit = config.fit;
    if (flags.seed) fit.seed = *flags.seed;
    MultiComponentModel model = CenterModel{};
    switch (config.problem) {
        case Problem::switching:
            model = fit_switching_regression(data, *config.kernel, fit);
            break;
        case Problem::clustering:
            model = fit_kmeans(data, fit);
            break;
        case Problem::subspace:
            model = fit_ksubspaces(data, fit);
            break;
    }
    const std::string body = model_to_json(model);
    if (flags.out_path.empty())
        std::cout << body << "\n";
    else
        write_text_file(flags.out_path, body);
    std::cerr << "empirical_risk = " << fmt17(empirical_risk(model, data)) << "\n";
    return 0;
}

int cmd_certify(const CommonFlags& flags, const std::string& model_path,
                const std::string& data_path, std::optional<double> lambda_x) {
    ExperimentConfig config = load_config(flags);
    const MultiComponentModel model = load_model(model_path);
    const bool outputs = std::holds_alternative<KernelModel>(model);
    const Dataset data = ingest_csv(data_path, outputs, lambda_x);
    const auto certs = closed_form_certificates(model, data, config.fit.constraint,
                                                config.delta, config.m_policy);
    std::string body;
    for (const auto& cert : certs) {
        if (!body.empty()) body += "\n";
        body += serialize_certificate(cert);
    }
    if (flags.out_path.empty())
        std::cout << body;
    else
        write_text_file(flags.out_path, body);
    return 0;
}

int cmd_rademacher(const CommonFlags& flags, const std::string& data_path,
                   const std::string& setting, double radius, int dim, int draws) {
    ExperimentConfig config = load_config(flags);
    const Dataset data = ingest_csv(data_path, false);
    RademacherEstimate est;
    if (setting == "rkhs") {
        const KernelSpec kernel = config.kernel ? *config.kernel : KernelSpec::gaussian(1.0);
        est = mc_rademacher_rkhs_ball(gram_matrix(kernel, data.points()), radius, draws,
                                      config.seed);
    } else if (setting == "cluster") {
        est = mc_rademacher_cluster_component(data, radius, draws, config.seed);
    } else if (setting == "subspace") {
        est = mc_rademacher_subspace(data, dim, draws, config.seed);
    } else {
        throw std::invalid_argument("rademacher: setting must be rkhs, cluster or subspace");
    }
    std::ostringstream out;
    if (flags.format == "json") {
        out << "{\n  \"mean\": " << fmt17(est.mean) << ",\n  \"std_error\": "
            << fmt17(est.std_error) << ",\n  \"draws\": " << est.draws
            << ",\n  \"closed_form_bound\": " << fmt17(est.closed_form_bound) << "\n}\n";
    } else {
        out << "mean = " << fmt17(est.mean) << "\n";
        out << "std_error = " << fmt17(est.std_error) << "\n";
        out << "draws = " << est.draws << "\n";
        out << "closed_form_bound = " << fmt17(est.closed_form_bound) << "\n";
    }
    if (flags.out_path.empty())
        std::cout << out.str();
    else
        write_text_file(flags.out_path, out.str());
    return 0;
}

int cmd_verify(const CommonFlags& flags) {
    const ExperimentConfig config = load_config(flags);
    const VerificationReport report = run_verification(config);
    if (!flags.out_path.empty()) {
        write_text_file(flags.out_path, report.to_json());
        write_text_file(flags.out_path + ".csv", report.to_csv());
    }
    std::cout << "trials = " << report.trials.size() << "\n";
    for (const auto& [tag, count] : report.violations_by_tag())
        std::cout << "violations." << tag << " = " << count << "\n";
    std::cout << "probe_violations = " << report.probe_violation_count() << "\n";
    if (report.violation_count() + report.probe_violation_count() > 0) {
        std::cerr << "verification FAILED: certificate violated by held-out risk\n";
        return 3;
    }
    std::cout << "verification passed: no certificate violations\n";
    return 0;
}

int cmd_alpha_table(const CommonFlags& flags, const std::string& c_list, int c_max,
                    const std::string& p_list) {
    std::vector<int> cs;
    if (!c_list.empty())
        cs = parse_c_list(c_list);
    else
        for (int c = 2; c <= c_max; ++c) cs.push_back(c);
    const std::vector<double> ps = parse_p_list(p_list);
    const auto rows = alpha_table(cs, ps);
    const std::string body = flags.format == "json" ? alpha_table_json(rows)
                                                    : alpha_table_csv(rows);
    if (flags.out_path.empty())
        std::cout << body;
    else
        write_text_file(flags.out_path, body);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-component risk certificates: losses, complexity estimates, bounds"};
    app.require_subcommand(1);

    CommonFlags flags;
    int n = 100;
    std::string data_path;
    std::string model_path;
    std::optional<double> lambda_x;
    std::string setting = "cluster";
    double radius = 1.0;
    int dim = 1;
    int draws = 2000;
    std::string c_list;
    int c_max = 64;
    std::string p_list = "0.5,1,2,inf";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "configuration file");
        cmd->add_option("--seed", flags.seed, "master seed (overrides config)");
        cmd->add_option("--out", flags.out_path, "output path");
        cmd->add_option("--delta", flags.delta, "confidence level (overrides config)");
        cmd->add_option("--trials", flags.trials, "trial count (overrides config)");
        cmd->add_option("--format", flags.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* generate = app.add_subcommand("generate", "draw a synthetic dataset as CSV");
    add_common(generate);
    generate->add_option("--n", n, "number of points");

    CLI::App* fit = app.add_subcommand("fit", "fit a model to a CSV dataset");
    add_common(fit);
    fit->add_option("--data", data_path, "dataset CSV")->required();
    fit->add_option("--lambda-x", lambda_x, "norm bound (default: max point norm)");

    CLI::App* certify = app.add_subcommand("certify", "compute risk certificates for a model");
    add_common(certify);
    certify->add_option("--model", model_path, "model JSON file")->required();
    certify->add_option("--data", data_path, "dataset CSV")->required();
    certify->add_option("--lambda-x", lambda_x, "norm bound (default: max point norm)");

    CLI::App* rademacher = app.add_subcommand("rademacher",
                                              "Monte-Carlo complexity estimate for a class");
    add_common(rademacher);
    rademacher->add_option("--data", data_path, "dataset CSV")->required();
    rademacher->add_option("--setting", setting, "rkhs, cluster or subspace");
    rademacher->add_option("--radius", radius, "component class radius");
    rademacher->add_option("--dim", dim, "subspace dimension");
    rademacher->add_option("--draws", draws, "Monte-Carlo draws");

    CLI::App* verify = app.add_subcommand("verify", "run the certificate verification protocol");
    add_common(verify);

    CLI::App* table = app.add_subcommand("alpha-table", "growth-function table over (C, p) grids");
    add_common(table);
    table->add_option("--c-list", c_list, "comma-separated component counts");
    table->add_option("--c-max", c_max, "use C = 2..c_max when no list is given");
    table->add_option("--p-list", p_list, "comma-separated exponents ('inf' allowed)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (generate->parsed()) return cmd_generate(flags, n);
        if (fit->parsed()) return cmd_fit(flags, data_path, lambda_x);
        if (certify->parsed()) return cmd_certify(flags, model_path, data_path, lambda_x);
        if (rademacher->parsed())
            return cmd_rademacher(flags, data_path, setting, radius, dim, draws);
        if (verify->parsed()) return cmd_verify(flags);
        if (table->parsed()) return cmd_alpha_table(flags, c_list, c_max, p_list);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
