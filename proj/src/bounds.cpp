#include "mcrisk/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcrisk/core.hpp"

namespace mcrisk {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require_common(double empirical_risk, double delta, std::size_t n) {
    if (!(empirical_risk >= 0.0))
        throw std::invalid_argument("bound: empirical risk must be >= 0");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("bound: delta must lie in (0,1)");
    if (n < 1) throw std::invalid_argument("bound: n must be >= 1");
}

BoundCertificate assemble(BoundTag tag, double empirical_risk, double complexity,
                          double confidence, double delta, double m) {
    BoundCertificate cert;
    cert.tag = tag;
    cert.empirical_risk = empirical_risk;
    cert.complexity_term = complexity;
    cert.confidence_term = confidence;
    cert.total = empirical_risk + complexity + confidence;
    cert.delta = delta;
    cert.loss_bound_m = m;
    cert.provenance.emplace_back("tag", to_string(tag));
    return cert;
}

}  // namespace

std::string to_string(BoundTag tag) {
    switch (tag) {
        case BoundTag::lemma1: return "lemma1";
        case BoundTag::thm1: return "thm1";
        case BoundTag::thm2: return "thm2";
        case BoundTag::thm3: return "thm3";
        case BoundTag::thm4: return "thm4";
        case BoundTag::thm5: return "thm5";
    }
    throw std::logic_error("unknown bound tag");
}

std::string serialize_certificate(const BoundCertificate& cert) {
    std::ostringstream out;
    out << "tag = " << to_string(cert.tag) << "\n";
    out << "empirical_risk = " << fmt(cert.empirical_risk) << "\n";
    out << "complexity_term = " << fmt(cert.complexity_term) << "\n";
    out << "confidence_term = " << fmt(cert.confidence_term) << "\n";
    out << "total = " << fmt(cert.total) << "\n";
    out << "delta = " << fmt(cert.delta) << "\n";
    out << "loss_bound_m = " << fmt(cert.loss_bound_m) << "\n";
    for (const auto& [key, value] : cert.provenance)
        if (key != "tag") out << "input." << key << " = " << value << "\n";
    return out.str();
}

double confidence_term(double m, double delta, std::size_t n) {
    return 3.0 * m * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

BoundCertificate lemma1_bound(double empirical_risk, double rademacher_hat, double m,
                              double delta, std::size_t n) {
    require_common(empirical_risk, delta, n);
    if (!(m > 0.0)) throw std::invalid_argument("lemma1_bound: M must be positive");
    if (!(rademacher_hat >= 0.0))
        throw std::invalid_argument("lemma1_bound: complexity estimate must be >= 0");
    auto cert = assemble(BoundTag::lemma1, empirical_risk, 2.0 * rademacher_hat,
                         confidence_term(m, delta, n), delta, m);
    cert.provenance.emplace_back("rademacher_hat", fmt(rademacher_hat));
    cert.provenance.emplace_back("n", std::to_string(n));
    return cert;
}

BoundCertificate thm1_bound(double empirical_risk, double kernel_trace,
                            const LpConstraint& constraint, int component_count, double delta,
                            std::size_t n) {
    require_common(empirical_risk, delta, n);
    if (kernel_trace < 0.0) throw std::invalid_argument("thm1_bound: kernel trace must be >= 0");
    const double complexity = 4.0 * alpha(component_count, constraint.p) * constraint.lambda *
                              std::sqrt(kernel_trace) / static_cast<double>(n);
    auto cert = assemble(BoundTag::thm1, empirical_risk, complexity,
                         confidence_term(1.0, delta, n), delta, 1.0);
    cert.provenance.emplace_back("kernel_trace", fmt(kernel_trace));
    cert.provenance.emplace_back("p", fmt(constraint.p));
    cert.provenance.emplace_back("lambda", fmt(constraint.lambda));
    cert.provenance.emplace_back("components", std::to_string(component_count));
    cert.provenance.emplace_back("n", std::to_string(n));
    return cert;
}

BoundCertificate thm2_bound(double empirical_risk, double sum_sq_norms,
                            const LpConstraint& constraint, int component_count,
                            double lambda_x, double delta, std::size_t n) {
    require_common(empirical_risk, delta, n);
    if (sum_sq_norms < 0.0) throw std::invalid_argument("thm2_bound: sum of squared norms < 0");
    if (lambda_x < 0.0) throw std::invalid_argument("thm2_bound: lambda_x must be >= 0");
    const double nn = static_cast<double>(n);
    const double complexity =
        2.0 * alpha(component_count, constraint.p) *
        (2.0 * constraint.lambda * std::sqrt(sum_sq_norms) / nn +
         constraint.lambda * constraint.lambda / std::sqrt(nn));
    const double m = lambda_x * lambda_x + constraint.lambda * constraint.lambda;
    auto cert = assemble(BoundTag::thm2, empirical_risk, complexity,
                         confidence_term(m, delta, n), delta, m);
    cert.provenance.emplace_back("sum_sq_norms", fmt(sum_sq_norms));
    cert.provenance.emplace_back("p", fmt(constraint.p));
    cert.provenance.emplace_back("lambda", fmt(constraint.lambda));
    cert.provenance.emplace_back("lambda_x", fmt(lambda_x));
    cert.provenance.emplace_back("components", std::to_string(component_count));
    cert.provenance.emplace_back("n", std::to_string(n));
    return cert;
}

BoundCertificate thm3_bound(double empirical_risk, double frobenius, int d1, double lambda_x,
                            double delta, std::size_t n) {
    require_common(empirical_risk, delta, n);
    if (d1 < 1) throw std::invalid_argument("thm3_bound: d1 must be >= 1");
    if (frobenius < 0.0) throw std::invalid_argument("thm3_bound: frobenius must be >= 0");
    const double complexity =
        2.0 * std::sqrt(static_cast<double>(d1)) * frobenius / static_cast<double>(n);
    const double m = lambda_x * lambda_x;
    auto cert = assemble(BoundTag::thm3, empirical_risk, complexity,
                         confidence_term(m, delta, n), delta, m);
    cert.provenance.emplace_back("frobenius", fmt(frobenius));
    cert.provenance.emplace_back("d1", std::to_string(d1));
    cert.provenance.emplace_back("lambda_x", fmt(lambda_x));
    cert.provenance.emplace_back("n", std::to_string(n));
    return cert;
}

BoundCertificate thm4_bound(double empirical_risk, double frobenius,
                            const std::vector<int>& dims, double lambda_x, double delta,
                            std::size_t n) {
    require_common(empirical_risk, delta, n);
    if (dims.empty()) throw std::invalid_argument("thm4_bound: dims must be nonempty");
    if (frobenius < 0.0) throw std::invalid_argument("thm4_bound: frobenius must be >= 0");
    double root_sum = 0.0;
    for (int dk : dims) {
        if (dk < 1) throw std::invalid_argument("thm4_bound: every dimension must be >= 1");
        root_sum += std::sqrt(static_cast<double>(dk));
    }
    const double complexity = 2.0 * root_sum * frobenius / static_cast<double>(n);
    const double m = lambda_x * lambda_x;
    auto cert = assemble(BoundTag::thm4, empirical_risk, complexity,
                         confidence_term(m, delta, n), delta, m);
    cert.provenance.emplace_back("frobenius", fmt(frobenius));
    cert.provenance.emplace_back("lambda_x", fmt(lambda_x));
    cert.provenance.emplace_back("components", std::to_string(dims.size()));
    cert.provenance.emplace_back("n", std::to_string(n));
    return cert;
}

BoundCertificate thm5_bound(double empirical_risk, double frobenius,
                            const LpConstraint& constraint, int component_count,
                            double lambda_x, double delta, std::size_t n,
                            SubspaceMPolicy m_policy) {
    require_common(empirical_risk, delta, n);
    if (frobenius < 0.0) throw std::invalid_argument("thm5_bound: frobenius must be >= 0");
    if (lambda_x < 0.0) throw std::invalid_argument("thm5_bound: lambda_x must be >= 0");
    const double complexity = 2.0 * alpha(component_count, constraint.p) * constraint.lambda *
                              frobenius / static_cast<double>(n);
    const double m = (m_policy == SubspaceMPolicy::linear) ? lambda_x : lambda_x * lambda_x;
    auto cert = assemble(BoundTag::thm5, empirical_risk, complexity,
                         confidence_term(m, delta, n), delta, m);
    cert.provenance.emplace_back("frobenius", fmt(frobenius));
    cert.provenance.emplace_back("p", fmt(constraint.p));
    cert.provenance.emplace_back("lambda", fmt(constraint.lambda));
    cert.provenance.emplace_back("lambda_x", fmt(lambda_x));
    cert.provenance.emplace_back("components", std::to_string(component_count));
    cert.provenance.emplace_back("n", std::to_string(n));
    cert.provenance.emplace_back("m_policy",
                                 m_policy == SubspaceMPolicy::linear ? "linear" : "squared");
    return cert;
}

}  // namespace mcrisk
