#ifndef MCRISK_BOUNDS_HPP
#define MCRISK_BOUNDS_HPP

#include <string>
#include <utility>
#include <vector>

#include "mcrisk/types.hpp"

namespace mcrisk {

// Which closed-form certificate produced a bound. lemma1 is the generic
// empirical-complexity bound; thm1..thm5 are the specialized closed forms
// (switching regression, clustering, single subspace, fixed-dimension
// subspace collections, lp-constrained subspace collections).
enum class BoundTag { lemma1, thm1, thm2, thm3, thm4, thm5 };

std::string to_string(BoundTag tag);

// Confidence-term constant for the lp-constrained subspace certificate:
// `linear` keeps the stated 3*lambda_x factor; `squared` uses 3*lambda_x^2,
// consistent with the subspace loss bound M = lambda_x^2. Default squared;
// the choice is recorded in the certificate provenance, not silently folded.
enum class SubspaceMPolicy { linear, squared };

struct BoundCertificate {
    double empirical_risk = 0.0;
    double complexity_term = 0.0;
    double confidence_term = 0.0;
    double total = 0.0;  // empirical_risk + complexity_term + confidence_term, exactly
    double delta = 0.0;
    double loss_bound_m = 0.0;
    BoundTag tag = BoundTag::lemma1;

    // inputs and policy flags, serialized with the certificate
    std::vector<std::pair<std::string, std::string>> provenance;
};

// key = value serialization, stable ordering, 17 significant digits
std::string serialize_certificate(const BoundCertificate& cert);

// 3 M sqrt(ln(2/delta) / (2n))
double confidence_term(double m, double delta, std::size_t n);

// total = empirical + 2 * rademacher_hat + 3 M sqrt(ln(2/delta)/(2n))
BoundCertificate lemma1_bound(double empirical_risk, double rademacher_hat, double m,
                              double delta, std::size_t n);

// complexity = 4 alpha(C,p) lambda sqrt(kernel_trace) / n, M = 1
BoundCertificate thm1_bound(double empirical_risk, double kernel_trace,
                            const LpConstraint& constraint, int component_count, double delta,
                            std::size_t n);

// complexity = 2 alpha(C,p) (2 lambda sqrt(sum_sq_norms)/n + lambda^2/sqrt(n)),
// M = lambda_x^2 + lambda^2
BoundCertificate thm2_bound(double empirical_risk, double sum_sq_norms,
                            const LpConstraint& constraint, int component_count,
                            double lambda_x, double delta, std::size_t n);

// complexity = 2 sqrt(d1) ||X||_F / n, M = lambda_x^2
BoundCertificate thm3_bound(double empirical_risk, double frobenius, int d1, double lambda_x,
                            double delta, std::size_t n);

// complexity = 2 (sum_k sqrt(d_k)) ||X||_F / n, M = lambda_x^2
BoundCertificate thm4_bound(double empirical_risk, double frobenius,
                            const std::vector<int>& dims, double lambda_x, double delta,
                            std::size_t n);

// complexity = 2 alpha(C,p) lambda ||X||_F / n; confidence constant per policy
BoundCertificate thm5_bound(double empirical_risk, double frobenius,
                            const LpConstraint& constraint, int component_count,
                            double lambda_x, double delta, std::size_t n,
                            SubspaceMPolicy m_policy = SubspaceMPolicy::squared);

}  // namespace mcrisk

#endif
