#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "mcrisk/harness.hpp"

namespace mcrisk {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_real(const std::string& value, const std::string& key) {
    if (value == "inf" || value == "infinity") return LpConstraint::infinity();
    errno = 0;
    char* tail = nullptr;
    const double v = std::strtod(value.c_str(), &tail);
    if (errno != 0 || tail != value.c_str() + value.size())
        throw std::invalid_argument("config: bad real for '" + key + "': " + value);
    return v;
}

long long parse_int(const std::string& value, const std::string& key) {
    errno = 0;
    char* tail = nullptr;
    const long long v = std::strtoll(value.c_str(), &tail, 10);
    if (errno != 0 || tail != value.c_str() + value.size())
        throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
    return v;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    errno = 0;
    char* tail = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &tail, 10);
    if (errno != 0 || tail != value.c_str() + value.size())
        throw std::invalid_argument("config: bad seed for '" + key + "': " + value);
    return v;
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
    std::vector<int> out;
    std::istringstream in(value);
    std::string token;
    while (std::getline(in, token, ','))
        out.push_back(static_cast<int>(parse_int(trim(token), key)));
    return out;
}

std::string dims_string(const std::vector<int>& dims) {
    std::ostringstream out;
    for (std::size_t i = 0; i < dims.size(); ++i) out << (i ? "," : "") << dims[i];
    return out.str();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n_train < 1) throw std::invalid_argument("config: n_train must be >= 1");
    if (n_eval < 10 * n_train)
        throw std::invalid_argument("config: n_eval must be at least 10 * n_train");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("config: delta must lie in (0,1)");
    if (mc_draws < 1) throw std::invalid_argument("config: mc_draws must be >= 1");
    if (probe_models < 0) throw std::invalid_argument("config: probe_models must be >= 0");
    generator.validate();
    fit.validate();
    if (problem == Problem::switching && !kernel)
        throw std::invalid_argument("config: switching problem requires a kernel");
    if (generator.problem != problem)
        throw std::invalid_argument("config: generator/problem mismatch");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    double kernel_gamma = 1.0;
    int kernel_degree = 2;
    double kernel_offset = 1.0;
    std::string kernel_family;
    std::string m_policy = "squared";

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_number) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "experiment" && section != "data" && section != "fit" &&
                section != "constraint" && section != "kernel")
                throw std::invalid_argument("config line " + std::to_string(line_number) +
                                            ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_number) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_number) +
                                        ": empty key or value");

        if (section == "experiment") {
            if (key == "problem") config.problem = problem_from_string(value);
            else if (key == "trials") config.trials = static_cast<int>(parse_int(value, key));
            else if (key == "delta") config.delta = parse_real(value, key);
            else if (key == "n_train") config.n_train = static_cast<int>(parse_int(value, key));
            else if (key == "n_eval") config.n_eval = static_cast<int>(parse_int(value, key));
            else if (key == "seed") config.seed = parse_u64(value, key);
            else if (key == "mc_draws") config.mc_draws = static_cast<int>(parse_int(value, key));
            else if (key == "probe_models")
                config.probe_models = static_cast<int>(parse_int(value, key));
            else if (key == "m_policy") m_policy = value;
            else
                throw std::invalid_argument("config line " + std::to_string(line_number) +
                                            ": unknown key '" + key + "' in [experiment]");
        } else if (section == "data") {
            if (key == "d") config.generator.dim = static_cast<int>(parse_int(value, key));
            else if (key == "components")
                config.generator.components = static_cast<int>(parse_int(value, key));
            else if (key == "lambda_x") config.generator.lambda_x = parse_real(value, key);
            else if (key == "noise") config.generator.noise = parse_real(value, key);
            else if (key == "dims") config.generator.dims = parse_int_list(value, key);
            else if (key == "output_scale") config.generator.output_scale = parse_real(value, key);
            else
                throw std::invalid_argument("config line " + std::to_string(line_number) +
                                            ": unknown key '" + key + "' in [data]");
        } else if (section == "fit") {
            if (key == "components") config.fit.components = static_cast<int>(parse_int(value, key));
            else if (key == "restarts") config.fit.restarts = static_cast<int>(parse_int(value, key));
            else if (key == "max_iterations")
                config.fit.max_iterations = static_cast<int>(parse_int(value, key));
            else if (key == "tolerance") config.fit.tolerance = parse_real(value, key);
            else if (key == "ridge") config.fit.ridge = parse_real(value, key);
            else if (key == "dims") config.fit.dims = parse_int_list(value, key);
            else if (key == "dims_budget")
                config.fit.dims_budget = static_cast<int>(parse_int(value, key));
            else
                throw std::invalid_argument("config line " + std::to_string(line_number) +
                                            ": unknown key '" + key + "' in [fit]");
        } else if (section == "constraint") {
            if (key == "p") config.fit.constraint.p = parse_real(value, key);
            else if (key == "lambda") config.fit.constraint.lambda = parse_real(value, key);
            else
                throw std::invalid_argument("config line " + std::to_string(line_number) +
                                            ": unknown key '" + key + "' in [constraint]");
        } else if (section == "kernel") {
            if (key == "family") kernel_family = value;
            else if (key == "gamma") kernel_gamma = parse_real(value, key);
            else if (key == "degree") kernel_degree = static_cast<int>(parse_int(value, key));
            else if (key == "offset") kernel_offset = parse_real(value, key);
            else
                throw std::invalid_argument("config line " + std::to_string(line_number) +
                                            ": unknown key '" + key + "' in [kernel]");
        } else {
            throw std::invalid_argument("config line " + std::to_string(line_number) +
                                        ": key outside any section");
        }
    }

    // re-validate the constraint fields that were poked directly
    config.fit.constraint = LpConstraint(config.fit.constraint.p, config.fit.constraint.lambda);

    if (!kernel_family.empty())
        config.kernel = KernelSpec::from_family_name(kernel_family, kernel_gamma, kernel_degree,
                                                     kernel_offset);
    else if (config.problem == Problem::switching)
        config.kernel = KernelSpec::gaussian(1.0);

    if (m_policy == "squared") config.m_policy = SubspaceMPolicy::squared;
    else if (m_policy == "linear") config.m_policy = SubspaceMPolicy::linear;
    else throw std::invalid_argument("config: m_policy must be 'squared' or 'linear'");

    config.generator.problem = config.problem;
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    try {
        return parse_config_text(read_text_file(path));
    } catch (const DataError& e) {
        // an unreadable configuration is a usage problem, not a data problem
        throw std::invalid_argument(e.what());
    }
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& config) {
    std::map<std::string, std::string> echo;
    echo["experiment.problem"] = to_string(config.problem);
    echo["experiment.trials"] = std::to_string(config.trials);
    echo["experiment.delta"] = fmt17(config.delta);
    echo["experiment.n_train"] = std::to_string(config.n_train);
    echo["experiment.n_eval"] = std::to_string(config.n_eval);
    echo["experiment.seed"] = std::to_string(config.seed);
    echo["experiment.mc_draws"] = std::to_string(config.mc_draws);
    echo["experiment.probe_models"] = std::to_string(config.probe_models);
    echo["experiment.m_policy"] =
        config.m_policy == SubspaceMPolicy::squared ? "squared" : "linear";
    echo["data.d"] = std::to_string(config.generator.dim);
    echo["data.components"] = std::to_string(config.generator.components);
    echo["data.lambda_x"] = fmt17(config.generator.lambda_x);
    echo["data.noise"] = fmt17(config.generator.noise);
    echo["data.dims"] = dims_string(config.generator.dims);
    echo["data.output_scale"] = fmt17(config.generator.output_scale);
    echo["fit.components"] = std::to_string(config.fit.components);
    echo["fit.restarts"] = std::to_string(config.fit.restarts);
    echo["fit.max_iterations"] = std::to_string(config.fit.max_iterations);
    echo["fit.tolerance"] = fmt17(config.fit.tolerance);
    echo["fit.ridge"] = fmt17(config.fit.ridge);
    echo["fit.dims"] = dims_string(config.fit.dims);
    echo["fit.dims_budget"] = std::to_string(config.fit.dims_budget);
    echo["constraint.p"] = config.fit.constraint.is_inf() ? "inf" : fmt17(config.fit.constraint.p);
    echo["constraint.lambda"] = fmt17(config.fit.constraint.lambda);
    if (config.kernel) {
        echo["kernel.family"] = config.kernel->family_name();
        echo["kernel.gamma"] = fmt17(config.kernel->gamma);
        echo["kernel.degree"] = std::to_string(config.kernel->degree);
        echo["kernel.offset"] = fmt17(config.kernel->offset);
    }
    return echo;
}

}  // namespace mcrisk
