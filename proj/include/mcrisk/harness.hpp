#ifndef MCRISK_HARNESS_HPP
#define MCRISK_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcrisk/bounds.hpp"
#include "mcrisk/learners.hpp"
#include "mcrisk/losses.hpp"
#include "mcrisk/rademacher.hpp"
#include "mcrisk/rng.hpp"
#include "mcrisk/types.hpp"

namespace mcrisk {

enum class Problem { switching, clustering, subspace };

std::string to_string(Problem problem);
Problem problem_from_string(const std::string& name);

// --- synthetic data -------------------------------------------------------

struct GeneratorSpec {
    Problem problem = Problem::clustering;
    int dim = 2;
    int components = 2;
    double lambda_x = 1.0;
    double noise = 0.05;
    std::vector<int> dims;        // subspace generator dimensions (default all 1)
    double output_scale = 0.9;    // switching: fraction of the [-1/2,1/2] range used
    void validate() const;
};

struct SyntheticSample {
    Dataset data;
    MultiComponentModel ground_truth;
};

// All draws are seeded; every generated point satisfies ||x|| <= lambda_x and
// switching outputs lie in [-1/2, 1/2] by construction.
Dataset generate_synthetic(const GeneratorSpec& spec, int n, std::uint64_t seed);
SyntheticSample generate_synthetic_with_truth(const GeneratorSpec& spec, int n,
                                              std::uint64_t seed);

// random members of the constrained classes (uniformity probes, tests)
CenterModel random_center_model(int components, int dim, const LpConstraint& constraint,
                                double fill, Rng& rng);
SubspaceModel random_subspace_model(int dim, const std::vector<int>& dims, Rng& rng);
KernelModel random_kernel_model(const KernelSpec& kernel, const std::vector<Vector>& anchors,
                                int components, const LpConstraint& constraint, double fill,
                                Rng& rng);

// --- experiment configuration ---------------------------------------------

struct ExperimentConfig {
    Problem problem = Problem::clustering;
    GeneratorSpec generator;
    int n_train = 100;
    int n_eval = 1000;
    int trials = 1;
    double delta = 0.05;
    FitConfig fit{2, LpConstraint(LpConstraint::infinity(), 1.0)};
    std::optional<KernelSpec> kernel;
    std::uint64_t seed = 0;
    int mc_draws = 2000;
    int probe_models = 0;
    SubspaceMPolicy m_policy = SubspaceMPolicy::squared;

    void validate() const;  // notably n_eval >= 10 * n_train
};

// Flat "key = value" text with [sections]; '#' starts a comment. Unknown
// sections or keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// full key=value echo of a config, defaults included (report provenance)
std::map<std::string, std::string> config_echo(const ExperimentConfig& config);

// --- certificates for a fitted/loaded model --------------------------------

// Closed-form certificates applicable to the model family:
// kernel -> thm1; centers -> thm2; subspaces -> thm5 and thm4 (plus thm3 when
// C = 1). The model must satisfy the constraint; otherwise this throws.
std::vector<BoundCertificate> closed_form_certificates(const MultiComponentModel& model,
                                                       const Dataset& data,
                                                       const LpConstraint& constraint,
                                                       double delta,
                                                       SubspaceMPolicy m_policy);

// --- verification protocol --------------------------------------------------

struct CertificateRecord {
    BoundTag tag;
    double empirical_risk = 0.0;
    double complexity_term = 0.0;
    double confidence_term = 0.0;
    double total = 0.0;
    bool violated = false;  // held-out risk > total + slack
};

struct TrialRecord {
    int trial = 0;
    double empirical_risk = 0.0;
    double held_out_risk = 0.0;
    RademacherEstimate mc_estimate;  // loss-class Monte-Carlo estimate
    std::vector<CertificateRecord> certificates;
    int probe_count = 0;
    int probe_violations = 0;
};

struct VerificationReport {
    std::map<std::string, std::string> config;
    double slack = 0.0;  // M / sqrt(n_eval), explicit held-out estimation slack
    double loss_bound_m = 0.0;
    std::vector<TrialRecord> trials;

    int violation_count() const;
    int probe_violation_count() const;
    std::map<std::string, int> violations_by_tag() const;

    std::string to_json() const;  // canonical structured form (no timestamps)
    std::string to_csv() const;   // flat per-trial, per-certificate table
};

// For each trial: draw a training set, fit, certify, estimate held-out risk
// on fresh points, and record a violation whenever the held-out risk exceeds
// a certificate total plus the explicit slack. Trials run in parallel and
// reduce deterministically by trial index.
VerificationReport run_verification(const ExperimentConfig& config);

// --- growth-function table ---------------------------------------------------

struct AlphaRow {
    int component_count;
    double p;
    double alpha_value;
    double harmonic_sum;
    double ratio;  // harmonic_sum / alpha_value
};

std::vector<AlphaRow> alpha_table(const std::vector<int>& component_counts,
                                  const std::vector<double>& p_values);
std::string alpha_table_csv(const std::vector<AlphaRow>& rows);
std::string alpha_table_json(const std::vector<AlphaRow>& rows);

// --- file formats -------------------------------------------------------------

// CSV datasets: one row per point, columns x_1..x_d then optionally y.
// A non-numeric first row is treated as a header. lambda_x is the maximum
// point norm unless overridden. Malformed rows raise DataError naming the row.
Dataset ingest_csv(const std::string& path, bool expect_outputs,
                   std::optional<double> lambda_x_override = std::nullopt);
Dataset dataset_from_csv_text(const std::string& text, bool expect_outputs,
                              std::optional<double> lambda_x_override = std::nullopt);
std::string dataset_to_csv(const Dataset& data, bool header = true);
void emit_csv(const Dataset& data, const std::string& path, bool header = true);

// JSON model files
std::string model_to_json(const MultiComponentModel& model);
MultiComponentModel model_from_json(const std::string& text);
void save_model(const MultiComponentModel& model, const std::string& path);
MultiComponentModel load_model(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mcrisk

#endif
