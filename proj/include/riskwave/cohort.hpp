// cohort.hpp -- expression matrix plus per-patient clinical records
#pragma once

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "riskwave/common.hpp"

namespace riskwave {

/// One patient's clinical follow-up. censored = true means the patient was
/// alive at last contact, so survival_time_days is a lower bound only.
struct ClinicalRecord {
    std::string patient_id;
    double survival_time_days = 0.0;
    bool censored = false;

    bool operator==(const ClinicalRecord&) const = default;
};

/// Gene-expression cohort: m genes (rows) by n patients (columns).
/// Column j of `expression` belongs to patients[j].
struct Cohort {
    Eigen::MatrixXd expression;
    std::vector<std::string> gene_ids;
    std::vector<ClinicalRecord> patients;

    Eigen::Index gene_count() const { return expression.rows(); }
    Eigen::Index patient_count() const { return expression.cols(); }
};

/// Checks the structural invariants; throws Error naming the violation.
inline void validate_cohort(const Cohort& cohort) {
    const Eigen::Index m = cohort.expression.rows();
    const Eigen::Index n = cohort.expression.cols();
    detail::require(m >= 1, "cohort: need at least one gene row");
    detail::require(n >= 2, "cohort: need at least two patients");
    detail::require(static_cast<Eigen::Index>(cohort.gene_ids.size()) == m,
                    "cohort: gene_ids size does not match expression rows");
    detail::require(static_cast<Eigen::Index>(cohort.patients.size()) == n,
                    "cohort: clinical record count does not match expression columns");

    std::unordered_set<std::string> seen;
    for (const auto& g : cohort.gene_ids)
        detail::require(seen.insert(g).second, "cohort: duplicate gene id '" + g + "'");
    seen.clear();
    for (const auto& p : cohort.patients) {
        detail::require(seen.insert(p.patient_id).second,
                        "cohort: duplicate patient id '" + p.patient_id + "'");
        detail::require(p.survival_time_days >= 0.0,
                        "cohort: negative survival time for patient '" + p.patient_id + "'");
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            if (!std::isfinite(cohort.expression(i, j)))
                throw Error("cohort: non-finite expression value at row " + std::to_string(i + 1) +
                            ", column " + std::to_string(j + 1));
}

} // namespace riskwave
