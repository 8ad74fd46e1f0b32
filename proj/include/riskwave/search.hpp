// search.hpp -- deterministic grid search over (T, k, P, h, Th) and the
// expansion/compression ablation
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskwave/evaluate.hpp"

namespace riskwave {

struct SearchSpace {
    std::vector<int> window_values;        // T
    std::vector<int> rank_values;          // k
    std::vector<double> train_fractions;   // P
    std::vector<int> hidden_values;        // h, combinations keep only h <= k
    std::vector<double> threshold_values;  // Th
    std::uint64_t seed = 0;
};

/// The paper's reported neighborhood; T in {3,5,7}, k in {3,5,7,9},
/// P in {0.7, 0.8}, h in {3..9}, Th from 0.5 to 0.95 in steps of 0.05.
inline SearchSpace default_search_space(std::uint64_t seed = 0) {
    SearchSpace space;
    space.window_values = {3, 5, 7};
    space.rank_values = {3, 5, 7, 9};
    space.train_fractions = {0.7, 0.8};
    space.hidden_values = {3, 4, 5, 6, 7, 8, 9};
    for (int i = 10; i <= 19; ++i) space.threshold_values.push_back(i * 0.05);
    space.seed = seed;
    return space;
}

struct ParameterTuple {
    int window = 0;        // T
    int rank = 0;          // k
    double train_frac = 0; // P
    int hidden = 0;        // h
    double threshold = 0;  // Th

    bool operator==(const ParameterTuple&) const = default;
};

enum class ComboStatus { Ok, Failed, TimedOut };

struct LeaderboardRow {
    ParameterTuple tuple;
    double tpr = 0.0;
    double fpr = 0.0;
    double auc = 0.0;
    double youden = 0.0; // tpr - fpr
    ComboStatus status = ComboStatus::Ok;
};

struct ComboFailure {
    ParameterTuple tuple;
    ComboStatus status = ComboStatus::Failed;
    std::string reason;
};

struct SearchResult {
    ParameterTuple best;
    double best_tpr = 0.0;
    double best_fpr = 0.0;
    double best_auc = 0.0;
    std::vector<LeaderboardRow> leaderboard; // sorted by the selection rule
    std::vector<ComboFailure> failures;      // combinations that could not be evaluated
};

/// Selection objectives. YoudenMax picks the highest tpr - fpr;
/// TprAtFprBound picks the highest tpr among rows with fpr <= fpr_bound.
/// Both break ties toward higher tpr, then lower k, h, T, P, Th.
enum class SearchObjective { YoudenMax, TprAtFprBound };

struct SearchOptions {
    SearchObjective objective = SearchObjective::YoudenMax;
    double fpr_bound = 0.1;                  // TprAtFprBound only
    double combo_time_budget_sec = 0.0;      // 0 = unlimited
    PipelineConfig base{};                   // non-searched knobs: sigma, mode, budgets
};

namespace detail {

inline bool row_before(const LeaderboardRow& a, const LeaderboardRow& b,
                       const SearchOptions& options) {
    if (options.objective == SearchObjective::TprAtFprBound) {
        const bool fa = a.fpr <= options.fpr_bound, fb = b.fpr <= options.fpr_bound;
        if (fa != fb) return fa;
    }
    const double ka = options.objective == SearchObjective::YoudenMax ? a.youden : a.tpr;
    const double kb = options.objective == SearchObjective::YoudenMax ? b.youden : b.tpr;
    if (ka != kb) return ka > kb;
    if (a.tpr != b.tpr) return a.tpr > b.tpr;
    if (a.tuple.rank != b.tuple.rank) return a.tuple.rank < b.tuple.rank;
    if (a.tuple.hidden != b.tuple.hidden) return a.tuple.hidden < b.tuple.hidden;
    if (a.tuple.window != b.tuple.window) return a.tuple.window < b.tuple.window;
    if (a.tuple.train_frac != b.tuple.train_frac) return a.tuple.train_frac < b.tuple.train_frac;
    return a.tuple.threshold < b.tuple.threshold;
}

} // namespace detail

/// Re-sorts rows by the documented selection rule; the first row wins.
inline void sort_leaderboard(std::vector<LeaderboardRow>& rows, const SearchOptions& options) {
    std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        return detail::row_before(a, b, options);
    });
}

/// Exhaustive evaluation of the h <= k filtered space with the given
/// protocol. Training work is shared across thresholds: the per-patient
/// scores of a (T, k, P, h) quadruple do not depend on Th, so each quadruple
/// is evaluated once (seed = space.seed + quadruple index) and every Th row
/// is derived from its scores. Failures and timeouts are recorded without
/// aborting the sweep.
inline SearchResult grid_search(const Cohort& cohort, const std::vector<RiskClass>& labels,
                                const SearchSpace& space, const EvalProtocol& protocol,
                                const SearchOptions& options = {},
                                const std::vector<Eigen::Index>& eval_indices = {}) {
    detail::require(!space.window_values.empty() && !space.rank_values.empty() &&
                        !space.train_fractions.empty() && !space.hidden_values.empty() &&
                        !space.threshold_values.empty(),
                    "grid_search: empty parameter list");
    for (double th : space.threshold_values)
        detail::require(th > 0.0 && th < 1.0, "grid_search: thresholds must be in (0,1)");

    bool any_combo = false;
    for (int k : space.rank_values)
        for (int h : space.hidden_values)
            if (h <= k) any_combo = true;
    detail::require(any_combo, "grid_search: no combination satisfies h <= k");

    SearchResult result;
    std::uint64_t quadruple_index = 0;
    for (int T : space.window_values)
        for (int k : space.rank_values)
            for (double P : space.train_fractions)
                for (int h : space.hidden_values) {
                    if (h > k) continue;
                    const std::uint64_t qseed = space.seed + quadruple_index++;

                    PipelineConfig config = options.base;
                    config.cwt.window = T;
                    config.rank = k;
                    config.hidden_units = h;
                    config.threshold = space.threshold_values.front();
                    EvalProtocol combo_protocol = protocol;
                    combo_protocol.p_train = P;
                    combo_protocol.seed = qseed;

                    std::optional<std::chrono::steady_clock::time_point> deadline;
                    if (options.combo_time_budget_sec > 0.0)
                        deadline = std::chrono::steady_clock::now() +
                                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                       std::chrono::duration<double>(options.combo_time_budget_sec));

                    auto record_failure = [&](ComboStatus status, const std::string& why) {
                        for (double th : space.threshold_values)
                            result.failures.push_back({{T, k, P, h, th}, status, why});
                    };

                    EvalReport report;
                    try {
                        report = protocol.kind == ProtocolKind::LeaveOneOut
                                     ? leave_one_out(cohort, labels, config, combo_protocol,
                                                     deadline)
                                     : regular_split(cohort, labels, config, combo_protocol,
                                                     eval_indices);
                    } catch (const detail::FoldTimeout&) {
                        record_failure(ComboStatus::TimedOut, "per-combination time budget hit");
                        continue;
                    } catch (const Error& e) {
                        record_failure(ComboStatus::Failed, e.what());
                        continue;
                    }
                    if (!report.roc) {
                        record_failure(ComboStatus::Failed,
                                       "scored set single-class, no ROC available");
                        continue;
                    }

                    std::vector<RiskClass> truths;
                    for (const auto& s : report.per_patient_scores)
                        truths.push_back(s.true_label);
                    for (double th : space.threshold_values) {
                        std::vector<RiskClass> preds;
                        preds.reserve(report.per_patient_scores.size());
                        for (const auto& s : report.per_patient_scores)
                            preds.push_back(classify(s.score, th));
                        const auto [tpr, fpr] = rates(preds, truths);
                        result.leaderboard.push_back(
                            {{T, k, P, h, th}, tpr, fpr, report.roc->auc, tpr - fpr,
                             ComboStatus::Ok});
                    }
                }

    detail::require(!result.leaderboard.empty(), "grid_search: every combination failed");
    sort_leaderboard(result.leaderboard, options);
    const LeaderboardRow& top = result.leaderboard.front();
    result.best = top.tuple;
    result.best_tpr = top.tpr;
    result.best_fpr = top.fpr;
    result.best_auc = top.auc;
    return result;
}

/// AUC with the full expansion + compression chain versus the raw centered
/// expression fed directly to the network, same protocol and seeds.
inline std::pair<double, double> ablation(const Cohort& cohort,
                                          const std::vector<RiskClass>& labels,
                                          const ParameterTuple& tuple,
                                          const EvalProtocol& protocol,
                                          const PipelineConfig& base = {},
                                          const std::vector<Eigen::Index>& eval_indices = {}) {
    PipelineConfig config = base;
    config.cwt.window = tuple.window;
    config.rank = tuple.rank;
    config.hidden_units = tuple.hidden;
    config.threshold = tuple.threshold;
    EvalProtocol run_protocol = protocol;
    run_protocol.p_train = tuple.train_frac;

    auto run = [&](bool expand) {
        PipelineConfig arm = config;
        arm.expand_compress = expand;
        const EvalReport report =
            protocol.kind == ProtocolKind::LeaveOneOut
                ? leave_one_out(cohort, labels, arm, run_protocol)
                : regular_split(cohort, labels, arm, run_protocol, eval_indices);
        detail::require(report.roc.has_value(), "ablation: scored set single-class");
        return report.roc->auc;
    };
    const double with_auc = run(true);
    const double without_auc = run(false);
    return {with_auc, without_auc};
}

} // namespace riskwave
