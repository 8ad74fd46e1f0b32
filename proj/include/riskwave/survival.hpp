// survival.hpp -- Kaplan-Meier estimation and the five-year risk labeling rule
#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "riskwave/cohort.hpp"
#include "riskwave/common.hpp"

namespace riskwave {

/// Five years in days (5 x 365.25, rounded). All survival cutoffs use this.
inline constexpr double kFiveYearsDays = 1826.0;

/// A censored patient below five years is low-risk iff the conditional
/// survival probability is at least this value.
inline constexpr double kLowRiskConditionalMin = 0.75;

enum class RiskClass { LowRisk, HighRisk };

enum class LabelBasis { DirectRule, ConditionalCdf };

struct RiskLabel {
    RiskClass value = RiskClass::HighRisk;
    LabelBasis basis = LabelBasis::DirectRule;
    std::optional<double> conditional_prob; // present iff basis == ConditionalCdf
    // Set when the conditional CDF was undefined (all estimated mass consumed
    // before the censoring time); such patients are labeled high-risk.
    bool conditional_undefined = false;

    bool operator==(const RiskLabel&) const = default;
};

/// Kaplan-Meier cumulative distribution estimate. cdf[i] = P(ST <= event_times[i]).
struct KmCurve {
    std::vector<double> event_times; // distinct uncensored times, ascending
    std::vector<double> cdf;         // non-decreasing, within [0, 1]
    std::vector<int> n_at_risk;      // at-risk count at each event time
};

/// Product-limit estimator under right-censoring. Censored observations
/// shrink the risk set without creating a step; ties at an event time are
/// resolved events-first (censored patients at time t are still at risk at t).
///
/// Survival is tracked as an exact integer ratio within runs of event times
/// uninterrupted by censoring (the per-event factors telescope), so with no
/// censoring at all the cdf equals the empirical CDF bit for bit.
inline KmCurve km_fit(const std::vector<ClinicalRecord>& records) {
    detail::require(!records.empty(), "km_fit: no records");

    struct Obs {
        double time;
        bool censored;
    };
    std::vector<Obs> obs;
    obs.reserve(records.size());
    int uncensored = 0;
    for (const auto& r : records) {
        detail::require(r.survival_time_days >= 0.0, "km_fit: negative survival time");
        obs.push_back({r.survival_time_days, r.censored});
        if (!r.censored) ++uncensored;
    }
    detail::require(uncensored > 0, "km_fit: all records censored, no events to estimate from");

    std::sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.censored < b.censored; // events before censorings at ties
    });

    KmCurve out;
    int at_risk = static_cast<int>(obs.size());
    double num_base = 1.0, den_base = 1.0; // survival of closed segments, exact while integral
    int segment_start_risk = -1;           // at-risk when the open segment started; -1 = closed
    double segment_num = 1.0, segment_den = 1.0;

    std::size_t i = 0;
    while (i < obs.size()) {
        const double t = obs[i].time;
        int deaths = 0, censored = 0;
        for (; i < obs.size() && obs[i].time == t; ++i)
            obs[i].censored ? ++censored : ++deaths;

        if (deaths > 0) {
            if (segment_start_risk < 0) segment_start_risk = at_risk;
            segment_num = num_base * static_cast<double>(at_risk - deaths);
            segment_den = den_base * static_cast<double>(segment_start_risk);
            out.event_times.push_back(t);
            out.n_at_risk.push_back(at_risk);
            out.cdf.push_back((segment_den - segment_num) / segment_den);
        }
        at_risk -= deaths + censored;
        if (censored > 0 && segment_start_risk >= 0) {
            // a censoring breaks the telescoping run; freeze the product
            num_base = segment_num;
            den_base = segment_den;
            segment_start_risk = -1;
            if (den_base > 0x1p52) { // keep the integer products exactly representable
                num_base /= den_base;
                den_base = 1.0;
            }
        }
    }
    return out;
}

/// Right-continuous step evaluation of the fitted cdf; 0 before the first
/// event, the final value beyond the last.
inline double km_eval_cdf(const KmCurve& curve, double t_days) {
    detail::require(t_days >= 0.0, "km_eval_cdf: negative time");
    auto it = std::upper_bound(curve.event_times.begin(), curve.event_times.end(), t_days);
    if (it == curve.event_times.begin()) return 0.0;
    return curve.cdf[static_cast<std::size_t>(it - curve.event_times.begin()) - 1];
}

/// P(ST >= horizon | ST >= t) = (1 - cdf(horizon)) / (1 - cdf(t)).
/// Undefined (thrown) when cdf(t) = 1: no estimated mass survives past t.
inline double conditional_survival(const KmCurve& curve, double t_days, double horizon_days) {
    detail::require(t_days >= 0.0 && t_days < horizon_days,
                    "conditional_survival: need 0 <= t < horizon");
    const double cdf_t = km_eval_cdf(curve, t_days);
    if (cdf_t >= 1.0)
        throw Error("conditional_survival: undefined, cdf(t) = 1 at t = " + std::to_string(t_days));
    const double cdf_h = km_eval_cdf(curve, horizon_days);
    return (1.0 - cdf_h) / (1.0 - cdf_t);
}

/// Risk labeling rule:
///  - survival beyond five years (censored or not): low-risk
///  - deceased within five years: high-risk
///  - censored within five years: low-risk iff the conditional survival
///    probability is >= kLowRiskConditionalMin
/// Exactly five years counts as low-risk, matching the >= convention of the
/// conditional rule.
inline RiskLabel label_patient(const KmCurve& curve, const ClinicalRecord& record) {
    RiskLabel label;
    if (record.survival_time_days >= kFiveYearsDays) {
        label.value = RiskClass::LowRisk;
        label.basis = LabelBasis::DirectRule;
        return label;
    }
    if (!record.censored) {
        label.value = RiskClass::HighRisk;
        label.basis = LabelBasis::DirectRule;
        return label;
    }
    label.basis = LabelBasis::ConditionalCdf;
    if (km_eval_cdf(curve, record.survival_time_days) >= 1.0) {
        label.value = RiskClass::HighRisk;
        label.conditional_prob = 0.0;
        label.conditional_undefined = true;
        return label;
    }
    const double p = conditional_survival(curve, record.survival_time_days, kFiveYearsDays);
    label.conditional_prob = p;
    label.value = p >= kLowRiskConditionalMin ? RiskClass::LowRisk : RiskClass::HighRisk;
    return label;
}

struct CohortLabels {
    std::vector<RiskLabel> labels; // one per patient, cohort order
    KmCurve curve;                 // fitted on the full cohort
};

inline CohortLabels label_cohort(const Cohort& cohort) {
    CohortLabels out;
    out.curve = km_fit(cohort.patients);
    out.labels.reserve(cohort.patients.size());
    for (const auto& r : cohort.patients) out.labels.push_back(label_patient(out.curve, r));
    return out;
}

inline const char* to_string(RiskClass c) {
    return c == RiskClass::LowRisk ? "LowRisk" : "HighRisk";
}

inline const char* to_string(LabelBasis b) {
    return b == LabelBasis::DirectRule ? "DirectRule" : "ConditionalCdf";
}

} // namespace riskwave
