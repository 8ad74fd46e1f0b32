// synthetic.hpp -- seeded synthetic cohorts whose survival labeling is exact
// by construction
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "riskwave/cohort.hpp"
#include "riskwave/survival.hpp"

namespace riskwave {

/// Shape of the low-risk expression signal: a Gaussian bump across a
/// contiguous gene-index band, riding on i.i.d. noise. With random_sign the
/// bump direction flips per patient, so the class carries no per-gene mean
/// shift and only the band-limited second-order structure separates it.
struct SpectralEffect {
    double amplitude = 6.0;
    double bump_width = 2.0;    // Gaussian sd in gene-index units
    double band_lo_frac = 0.45; // bump centers drawn in [band_lo, band_hi] * m
    double band_hi_frac = 0.55;
    bool random_sign = true;
    double noise_sigma = 1.0;
    double censored_fraction = 0.3; // approximate fraction marked censored
};

struct SyntheticCohort {
    Cohort cohort;
    std::vector<RiskLabel> true_labels; // label_cohort(cohort).labels, verified
};

/// Deterministic synthetic cohort: exactly round(f*n) low-risk patients, the
/// spectral effect on their columns, and survival times arranged so that
/// label_cohort recovers the intended classes exactly. Low-risk patients get
/// times beyond five years; high-risk patients die before five years or are
/// censored early enough that the conditional rule still reads high-risk.
inline SyntheticCohort generate_synthetic_cohort(Eigen::Index m, Eigen::Index n,
                                                 double low_risk_fraction,
                                                 const SpectralEffect& effect,
                                                 std::uint64_t seed) {
    detail::require(m >= 8, "generate_synthetic_cohort: need m >= 8 genes");
    detail::require(n >= 10, "generate_synthetic_cohort: need n >= 10 patients");
    detail::require(low_risk_fraction > 0.0 && low_risk_fraction < 1.0,
                    "generate_synthetic_cohort: low_risk_fraction must be in (0,1)");
    detail::require(effect.amplitude >= 0.0 && effect.bump_width > 0.0,
                    "generate_synthetic_cohort: invalid effect");
    detail::require(effect.noise_sigma >= 0.0, "generate_synthetic_cohort: negative noise sigma");
    detail::require(effect.censored_fraction >= 0.0 && effect.censored_fraction < 1.0,
                    "generate_synthetic_cohort: censored_fraction must be in [0,1)");
    detail::require(0.0 <= effect.band_lo_frac && effect.band_lo_frac <= effect.band_hi_frac &&
                        effect.band_hi_frac <= 1.0,
                    "generate_synthetic_cohort: invalid band");

    const auto n_low = static_cast<Eigen::Index>(
        std::llround(low_risk_fraction * static_cast<double>(n)));
    detail::require(n_low >= 1 && n_low <= n - 1,
                    "generate_synthetic_cohort: fraction leaves a class empty");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // class assignment
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> is_low(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n_low; ++i) is_low[static_cast<std::size_t>(order[i])] = true;

    // expression: noise, then the band-limited component on low-risk columns
    Cohort cohort;
    cohort.expression.resize(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            cohort.expression(i, j) = effect.noise_sigma * gauss(rng);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!is_low[static_cast<std::size_t>(j)]) continue;
        const double lo = effect.band_lo_frac * static_cast<double>(m);
        const double hi = effect.band_hi_frac * static_cast<double>(m);
        const double center = lo + (hi - lo) * unit(rng);
        const double sign = effect.random_sign ? (unit(rng) < 0.5 ? 1.0 : -1.0) : 1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double d = (static_cast<double>(i + 1) - center) / effect.bump_width;
            cohort.expression(i, j) += sign * effect.amplitude * std::exp(-0.5 * d * d);
        }
    }

    cohort.gene_ids.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) cohort.gene_ids.push_back("G" + std::to_string(i + 1));

    // latent event times: low-risk beyond five years, high-risk well inside
    std::vector<double> latent(static_cast<std::size_t>(n));
    cohort.patients.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        cohort.patients[idx].patient_id = "P" + std::to_string(j + 1);
        latent[idx] = is_low[idx] ? kFiveYearsDays + 10.0 + 1800.0 * unit(rng)
                                  : 100.0 + 1700.0 * unit(rng);
        cohort.patients[idx].survival_time_days = latent[idx];
        cohort.patients[idx].censored = false;
    }

    // censoring: per class, keeping at least one uncensored high-risk event
    std::vector<Eigen::Index> lows, highs;
    for (Eigen::Index j = 0; j < n; ++j)
        (is_low[static_cast<std::size_t>(j)] ? lows : highs).push_back(j);
    auto censor_count = [&](std::size_t class_size, std::size_t cap) {
        const auto want = static_cast<std::size_t>(
            std::llround(effect.censored_fraction * static_cast<double>(class_size)));
        return std::min(want, cap);
    };
    std::shuffle(lows.begin(), lows.end(), rng);
    std::shuffle(highs.begin(), highs.end(), rng);
    const std::size_t censor_low = censor_count(lows.size(), lows.size());
    const std::size_t censor_high = censor_count(highs.size(), highs.size() - 1);
    for (std::size_t i = 0; i < censor_low; ++i) {
        auto& p = cohort.patients[static_cast<std::size_t>(lows[i])];
        p.censored = true;
        // censored low-risk stay beyond five years so the direct rule holds
        const double t = latent[static_cast<std::size_t>(lows[i])];
        p.survival_time_days = kFiveYearsDays + 1.0 + (t - kFiveYearsDays - 1.0) * unit(rng);
    }
    for (std::size_t i = 0; i < censor_high; ++i) {
        auto& p = cohort.patients[static_cast<std::size_t>(highs[i])];
        p.censored = true;
        p.survival_time_days = latent[static_cast<std::size_t>(highs[i])] * unit(rng);
    }

    // The conditional rule depends on the fitted curve, so verify and repair:
    // a censored high-risk patient judged low-risk gets an earlier censoring
    // time (shrinking it only lowers the conditional survival), falling back
    // to an uncensored event if the curve cannot support the label at all.
    for (int round = 0; round < 64; ++round) {
        const CohortLabels labeled = label_cohort(cohort);
        bool dirty = false;
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto idx = static_cast<std::size_t>(j);
            const RiskClass want = is_low[idx] ? RiskClass::LowRisk : RiskClass::HighRisk;
            if (labeled.labels[idx].value == want) continue;
            dirty = true;
            auto& p = cohort.patients[idx];
            if (round < 48 && p.censored && p.survival_time_days > 1.0)
                p.survival_time_days /= 2.0;
            else {
                p.censored = false;
                p.survival_time_days = latent[idx];
            }
        }
        if (!dirty) {
            SyntheticCohort out;
            out.cohort = std::move(cohort);
            out.true_labels = labeled.labels;
            validate_cohort(out.cohort);
            return out;
        }
    }
    throw Error("generate_synthetic_cohort: could not realize consistent labels; "
                "lower censored_fraction or low_risk_fraction");
}

} // namespace riskwave
