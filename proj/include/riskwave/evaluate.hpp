// evaluate.hpp -- leave-one-out and undersampled-split protocols, threshold
// classification, TPR/FPR, ROC and AUC
//
// The positive class throughout is LOW-risk: TPR is the probability that a
// low-risk patient is recognized as low-risk, FPR the probability that a
// high-risk patient is recognized as low-risk. Most ML tooling defaults to
// the opposite orientation; this one is deliberate.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "riskwave/cohort.hpp"
#include "riskwave/pipeline.hpp"
#include "riskwave/survival.hpp"

namespace riskwave {

enum class ProtocolKind { LeaveOneOut, RegularSplit };

struct EvalProtocol {
    ProtocolKind kind = ProtocolKind::LeaveOneOut;
    double p_train = 0.8; // P: fraction of each class kept for training in the early-stopping split
    std::optional<int> undersample_high_risk_to; // RegularSplit: retained high-risk training count
    std::uint64_t seed = 0;
    int jobs = 1; // parallel folds; results are independent of the worker count
};

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Threshold-indexed ROC, points ordered by ascending FPR from (0,0) to
/// (1,1), with the trapezoidal AUC.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

struct ScoredPatient {
    std::string patient_id;
    double score = 0.0;
    RiskClass true_label = RiskClass::HighRisk;
};

struct SkippedFold {
    std::string patient_id;
    std::string reason;
};

struct OperatingPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
};

/// RegularSplit bookkeeping: exactly which patients were retained.
struct RegularSplitInfo {
    std::vector<Eigen::Index> retained_high_risk; // training indices after undersampling
    Eigen::Index training_total = 0;
    Eigen::Index training_low_risk = 0;
    Eigen::Index training_high_risk = 0;
    Eigen::Index excluded_high_risk = 0;
};

struct EvalReport {
    std::vector<ScoredPatient> per_patient_scores;
    // Absent when the scored set ends up single-class (e.g. every low-risk
    // fold was skipped); scores are still reported.
    std::optional<RocCurve> roc;
    std::optional<OperatingPoint> operating_point;
    std::vector<SkippedFold> skipped_folds;
    bool excessive_skips = false; // more than 5% of folds skipped
    std::optional<RegularSplitInfo> split_info;
};

/// High-risk iff the score is strictly larger than the threshold.
inline RiskClass classify(double score, double threshold) {
    detail::require(threshold > 0.0 && threshold < 1.0, "classify: threshold must be in (0,1)");
    return score > threshold ? RiskClass::HighRisk : RiskClass::LowRisk;
}

/// (TPR, FPR) with low-risk as the positive class.
inline std::pair<double, double> rates(const std::vector<RiskClass>& predictions,
                                       const std::vector<RiskClass>& truths) {
    detail::require(predictions.size() == truths.size(), "rates: length mismatch");
    Eigen::Index tp = 0, fn = 0, fp = 0, tn = 0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const bool pred_low = predictions[i] == RiskClass::LowRisk;
        if (truths[i] == RiskClass::LowRisk)
            pred_low ? ++tp : ++fn;
        else
            pred_low ? ++fp : ++tn;
    }
    detail::require(tp + fn > 0 && fp + tn > 0, "rates: truths contain a single class");
    return {static_cast<double>(tp) / static_cast<double>(tp + fn),
            static_cast<double>(fp) / static_cast<double>(fp + tn)};
}

/// Threshold sweep over all distinct scores plus the sentinels 0 and 1.
/// Scores at or below a threshold read low-risk, so equal scores flip
/// together and the trapezoidal AUC matches the Mann-Whitney statistic with
/// half credit for ties.
inline RocCurve roc(const std::vector<double>& scores, const std::vector<RiskClass>& truths) {
    detail::require(scores.size() == truths.size(), "roc: length mismatch");
    Eigen::Index n_low = 0, n_high = 0;
    for (RiskClass c : truths) (c == RiskClass::LowRisk ? n_low : n_high)++;
    detail::require(n_low > 0 && n_high > 0, "roc: truths contain a single class");

    std::vector<std::pair<double, RiskClass>> order(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) order[i] = {scores[i], truths[i]};
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, 0.0});
    Eigen::Index low_seen = 0, high_seen = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double v = order[i].first;
        for (; i < order.size() && order[i].first == v; ++i)
            (order[i].second == RiskClass::LowRisk ? low_seen : high_seen)++;
        curve.points.push_back({v, static_cast<double>(high_seen) / static_cast<double>(n_high),
                                static_cast<double>(low_seen) / static_cast<double>(n_low)});
    }
    curve.points.push_back({1.0, 1.0, 1.0});

    double auc = 0.0;
    for (std::size_t p = 1; p < curve.points.size(); ++p)
        auc += (curve.points[p].fpr - curve.points[p - 1].fpr) *
               (curve.points[p].tpr + curve.points[p - 1].tpr) / 2.0;
    curve.auc = auc;
    return curve;
}

namespace detail {

inline void finish_report(EvalReport& report, double threshold) {
    bool has_low = false, has_high = false;
    for (const auto& s : report.per_patient_scores)
        (s.true_label == RiskClass::LowRisk ? has_low : has_high) = true;
    if (!has_low || !has_high || report.per_patient_scores.empty()) return;

    std::vector<double> scores;
    std::vector<RiskClass> truths, preds;
    scores.reserve(report.per_patient_scores.size());
    for (const auto& s : report.per_patient_scores) {
        scores.push_back(s.score);
        truths.push_back(s.true_label);
        preds.push_back(classify(s.score, threshold));
    }
    report.roc = roc(scores, truths);
    const auto [tpr, fpr] = rates(preds, truths);
    report.operating_point = OperatingPoint{threshold, tpr, fpr};
}

struct FoldTimeout {};

// Runs `fold(i)` for i in [0, n) on `jobs` threads. Fold results must land in
// preallocated slots; the work split cannot affect them.
template <typename F>
inline void parallel_folds(Eigen::Index n, int jobs, F&& fold) {
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (Eigen::Index i = 0; i < n; ++i) fold(i);
        return;
    }
    std::atomic<Eigen::Index> next{0};
    std::atomic<bool> timed_out{false};
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < std::min<Eigen::Index>(jobs, n); ++w)
        workers.emplace_back([&]() {
            for (;;) {
                const Eigen::Index i = next.fetch_add(1);
                if (i >= n || timed_out.load()) return;
                try {
                    fold(i);
                } catch (const FoldTimeout&) {
                    timed_out.store(true);
                    return;
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    timed_out.store(true);
                    return;
                }
            }
        });
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
    if (timed_out.load()) throw FoldTimeout{};
}

} // namespace detail

/// Fits the pipeline on every patient except `held_out`. Exposed so the
/// leakage property (fold-i state independent of column i) can be asserted
/// directly against the exact production path.
inline FittedPipeline fit_loo_fold(const Eigen::MatrixXd& features_full,
                                   const std::vector<RiskClass>& labels, Eigen::Index held_out,
                                   const PipelineConfig& config, const EvalProtocol& protocol,
                                   Eigen::Index genes) {
    const Eigen::Index n = features_full.cols();
    Eigen::MatrixXd train_features(features_full.rows(), n - 1);
    std::vector<RiskClass> train_labels;
    train_labels.reserve(static_cast<std::size_t>(n) - 1);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == held_out) continue;
        train_features.col(c++) = features_full.col(j);
        train_labels.push_back(labels[static_cast<std::size_t>(j)]);
    }
    return fit_pipeline_featurized(train_features, train_labels, protocol.p_train,
                                   protocol.seed + static_cast<std::uint64_t>(held_out), config,
                                   genes);
}

/// Leave-one-out: n pipeline fits, each scoring the held-out patient with a
/// compression basis and network trained without that patient's column.
/// Folds whose training set degenerates to a single class are skipped and
/// recorded, never silently dropped. Per-fold seeds are protocol.seed + fold.
inline EvalReport leave_one_out(
    const Cohort& cohort, const std::vector<RiskClass>& labels, const PipelineConfig& config,
    const EvalProtocol& protocol,
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt) {
    const Eigen::Index n = cohort.patient_count();
    detail::require(n >= 3, "leave_one_out: need at least three patients");
    detail::require(labels.size() == static_cast<std::size_t>(n),
                    "leave_one_out: label count mismatch");
    detail::require(protocol.p_train > 0.0 && protocol.p_train < 1.0,
                    "leave_one_out: p_train must be in (0,1)");

    const Eigen::MatrixXd features = featurize_cohort(cohort.expression, config);

    std::vector<std::optional<double>> scores(static_cast<std::size_t>(n));
    std::vector<std::string> skip_reason(static_cast<std::size_t>(n));

    detail::parallel_folds(n, protocol.jobs, [&](Eigen::Index i) {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw detail::FoldTimeout{};
        Eigen::Index low = 0, high = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            (labels[static_cast<std::size_t>(j)] == RiskClass::LowRisk ? low : high)++;
        }
        if (low == 0 || high == 0) {
            skip_reason[static_cast<std::size_t>(i)] =
                "training set single-class after holding out this patient";
            return;
        }
        const FittedPipeline fold =
            fit_loo_fold(features, labels, i, config, protocol, cohort.gene_count());
        scores[static_cast<std::size_t>(i)] = fold.score_featurized(features.col(i));
    });

    EvalReport report;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (scores[idx])
            report.per_patient_scores.push_back(
                {cohort.patients[idx].patient_id, *scores[idx], labels[idx]});
        else
            report.skipped_folds.push_back({cohort.patients[idx].patient_id, skip_reason[idx]});
    }
    report.excessive_skips =
        static_cast<double>(report.skipped_folds.size()) > 0.05 * static_cast<double>(n);
    detail::finish_report(report, config.threshold);
    return report;
}

/// The undersampled single-split protocol: among the non-evaluation patients,
/// keep every low-risk patient and a seeded without-replacement sample of the
/// high-risk patients, train once, then score the explicitly designated
/// evaluation set. Unretained high-risk patients take no part at all.
inline EvalReport regular_split(const Cohort& cohort, const std::vector<RiskClass>& labels,
                                const PipelineConfig& config, const EvalProtocol& protocol,
                                const std::vector<Eigen::Index>& eval_indices) {
    const Eigen::Index n = cohort.patient_count();
    detail::require(labels.size() == static_cast<std::size_t>(n),
                    "regular_split: label count mismatch");
    detail::require(protocol.kind == ProtocolKind::RegularSplit,
                    "regular_split: protocol kind mismatch");
    detail::require(protocol.p_train > 0.0 && protocol.p_train < 1.0,
                    "regular_split: p_train must be in (0,1)");
    detail::require(!eval_indices.empty(), "regular_split: evaluation set must be designated");

    std::vector<bool> is_eval(static_cast<std::size_t>(n), false);
    for (Eigen::Index idx : eval_indices) {
        detail::require(idx >= 0 && idx < n, "regular_split: evaluation index out of range");
        detail::require(!is_eval[static_cast<std::size_t>(idx)],
                        "regular_split: duplicate evaluation index");
        is_eval[static_cast<std::size_t>(idx)] = true;
    }

    std::vector<Eigen::Index> low_train, high_train;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (is_eval[static_cast<std::size_t>(j)]) continue;
        (labels[static_cast<std::size_t>(j)] == RiskClass::LowRisk ? low_train : high_train)
            .push_back(j);
    }

    const auto keep = static_cast<std::size_t>(
        protocol.undersample_high_risk_to.value_or(static_cast<int>(high_train.size())));
    if (keep > high_train.size())
        throw Error("regular_split: undersample count " + std::to_string(keep) +
                    " exceeds available high-risk patients " + std::to_string(high_train.size()));
    std::mt19937_64 rng(protocol.seed);
    std::shuffle(high_train.begin(), high_train.end(), rng);
    std::vector<Eigen::Index> retained(high_train.begin(),
                                       high_train.begin() + static_cast<Eigen::Index>(keep));
    std::sort(retained.begin(), retained.end());

    std::vector<Eigen::Index> train_idx = low_train;
    train_idx.insert(train_idx.end(), retained.begin(), retained.end());
    std::sort(train_idx.begin(), train_idx.end());

    const Eigen::MatrixXd features = featurize_cohort(cohort.expression, config);
    Eigen::MatrixXd train_features(features.rows(),
                                   static_cast<Eigen::Index>(train_idx.size()));
    std::vector<RiskClass> train_labels;
    train_labels.reserve(train_idx.size());
    for (std::size_t c = 0; c < train_idx.size(); ++c) {
        train_features.col(static_cast<Eigen::Index>(c)) = features.col(train_idx[c]);
        train_labels.push_back(labels[static_cast<std::size_t>(train_idx[c])]);
    }

    const FittedPipeline fitted = fit_pipeline_featurized(
        train_features, train_labels, protocol.p_train, protocol.seed, config,
        cohort.gene_count());

    EvalReport report;
    RegularSplitInfo info;
    info.retained_high_risk = retained;
    info.training_total = static_cast<Eigen::Index>(train_idx.size());
    info.training_low_risk = static_cast<Eigen::Index>(low_train.size());
    info.training_high_risk = static_cast<Eigen::Index>(keep);
    info.excluded_high_risk = static_cast<Eigen::Index>(high_train.size() - keep);
    report.split_info = std::move(info);

    for (Eigen::Index idx : eval_indices)
        report.per_patient_scores.push_back(
            {cohort.patients[static_cast<std::size_t>(idx)].patient_id,
             fitted.score_featurized(features.col(idx)), labels[static_cast<std::size_t>(idx)]});
    detail::finish_report(report, config.threshold);
    return report;
}

} // namespace riskwave
