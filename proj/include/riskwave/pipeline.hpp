// pipeline.hpp -- the full classification chain for one training cohort:
// wavelet expansion, SVD compression, feature standardization, NN training
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "riskwave/compress.hpp"
#include "riskwave/neuralnet.hpp"
#include "riskwave/survival.hpp"
#include "riskwave/wavelet.hpp"

namespace riskwave {

/// Everything a pipeline fit needs besides the data and the evaluation
/// protocol. expand_compress = false drops the wavelet + SVD stages and feeds
/// centered raw expression to the classifier (the ablation arm).
struct PipelineConfig {
    CwtConfig cwt{};        // T, sigma, scale mode
    int rank = 7;           // k, retained singular vectors
    int hidden_units = 7;   // h <= k
    double threshold = 0.84; // Th, operating point on the network output
    double learning_rate = 0.05;
    int max_epochs = 5000;
    int patience = 200;
    bool expand_compress = true;
    // Scale each feature row to unit variance (training statistics) before
    // the network sees it; keeps the conditioning independent of the
    // singular-value spread.
    bool standardize = true;
};

/// 1 = high risk, 0 = low risk: a score above the threshold reads high-risk.
inline double class_target(RiskClass c) { return c == RiskClass::HighRisk ? 1.0 : 0.0; }

/// Stratified train/validation split of patient indices: each class keeps at
/// least one member on the training side, and classes with two or more
/// members put at least one into validation. Singleton classes stay entirely
/// in training.
struct TrainValSplit {
    std::vector<Eigen::Index> train;
    std::vector<Eigen::Index> validation;
};

inline TrainValSplit stratified_split(const std::vector<RiskClass>& labels, double train_fraction,
                                      std::mt19937_64& rng) {
    detail::require(train_fraction > 0.0 && train_fraction < 1.0,
                    "stratified_split: train fraction must be in (0,1)");
    TrainValSplit split;
    for (RiskClass cls : {RiskClass::LowRisk, RiskClass::HighRisk}) {
        std::vector<Eigen::Index> members;
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(labels.size()); ++i)
            if (labels[i] == cls) members.push_back(i);
        if (members.empty()) continue;
        if (members.size() == 1) {
            split.train.push_back(members.front());
            continue;
        }
        std::shuffle(members.begin(), members.end(), rng);
        const auto count = static_cast<double>(members.size());
        auto n_val = static_cast<std::size_t>(
            std::clamp<long long>(std::llround((1.0 - train_fraction) * count), 1,
                                  static_cast<long long>(members.size()) - 1));
        split.validation.insert(split.validation.end(), members.begin(), members.begin() + n_val);
        split.train.insert(split.train.end(), members.begin() + n_val, members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    return split;
}

/// A fitted pipeline: the compression state (or raw centering for the
/// ablation arm), the feature scale, and the trained network.
struct FittedPipeline {
    PipelineConfig config;
    std::optional<CompressedFeatures> compressor; // present iff expand_compress
    Eigen::VectorXd raw_row_means;                // used by the raw arm
    Eigen::VectorXd feature_scale;                // per-feature sd of the training features
    NetModel net;

    /// Scores one patient from an already-featurized column (a Tm-vector in
    /// the expand_compress arm, an m-vector otherwise).
    double score_featurized(const Eigen::VectorXd& featurized) const {
        Eigen::VectorXd z;
        if (compressor)
            z = project(*compressor, featurized);
        else
            z = featurized - raw_row_means;
        return predict(net, (z.array() / feature_scale.array()).matrix());
    }

    /// Scores one patient from the raw expression column.
    double score(const Eigen::VectorXd& expression_column) const {
        if (!compressor) return score_featurized(expression_column);
        const Eigen::MatrixXd W = expand_patient(expression_column, config.cwt);
        return score_featurized(Eigen::Map<const Eigen::VectorXd>(W.data(), W.size()));
    }
};

/// Featurization shared by training and scoring: the vectorized wavelet
/// stack, or the expression matrix itself for the raw arm. Column i depends
/// only on column i of X.
inline Eigen::MatrixXd featurize_cohort(const Eigen::MatrixXd& X, const PipelineConfig& config) {
    if (!config.expand_compress) return X;
    return expand_cohort(X, config.cwt).coefficients;
}

/// Fits the full chain on pre-featurized training columns. `genes` is the
/// raw gene count (used for the k < m advisory warning). The seed drives
/// both the train/validation split and the network init.
inline FittedPipeline fit_pipeline_featurized(const Eigen::MatrixXd& features_train,
                                              const std::vector<RiskClass>& labels,
                                              double train_fraction, std::uint64_t seed,
                                              const PipelineConfig& config,
                                              Eigen::Index genes = 0) {
    const Eigen::Index n = features_train.cols();
    detail::require(static_cast<Eigen::Index>(labels.size()) == n,
                    "fit_pipeline: label count does not match training columns");
    detail::require(n >= 2, "fit_pipeline: need at least two training patients");

    FittedPipeline fitted;
    fitted.config = config;

    Eigen::MatrixXd Z;
    if (config.expand_compress) {
        fitted.compressor = fit_compressor(features_train, config.rank, genes);
        Z = fitted.compressor->features;
    } else {
        auto [centered, means] = center_rows(features_train);
        fitted.raw_row_means = std::move(means);
        Z = std::move(centered);
    }

    if (config.standardize) {
        const Eigen::VectorXd means = Z.rowwise().mean();
        Eigen::VectorXd sd =
            ((Z.colwise() - means).rowwise().squaredNorm() / static_cast<double>(n - 1))
                .cwiseSqrt();
        fitted.feature_scale = sd.cwiseMax(1e-12);
    } else {
        fitted.feature_scale = Eigen::VectorXd::Ones(Z.rows());
    }
    Z.array().colwise() /= fitted.feature_scale.array();

    std::mt19937_64 rng(seed);
    const TrainValSplit split = stratified_split(labels, train_fraction, rng);

    auto gather = [&](const std::vector<Eigen::Index>& idx, Eigen::MatrixXd& M,
                      Eigen::VectorXd& y) {
        M.resize(Z.rows(), static_cast<Eigen::Index>(idx.size()));
        y.resize(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c) {
            M.col(static_cast<Eigen::Index>(c)) = Z.col(idx[c]);
            y(static_cast<Eigen::Index>(c)) = class_target(labels[static_cast<std::size_t>(idx[c])]);
        }
    };
    Eigen::MatrixXd Zt, Zv;
    Eigen::VectorXd yt, yv;
    gather(split.train, Zt, yt);
    gather(split.validation, Zv, yv);

    NetConfig net_config;
    net_config.input_dim = static_cast<int>(Z.rows());
    net_config.hidden_units = config.hidden_units;
    net_config.learning_rate = config.learning_rate;
    net_config.max_epochs = config.max_epochs;
    net_config.patience = config.patience;
    net_config.seed = seed;
    fitted.net = train(init_model(net_config), Zt, yt, Zv, yv);
    return fitted;
}

/// Fits from raw expression columns (featurizes internally).
inline FittedPipeline fit_pipeline(const Eigen::MatrixXd& X_train,
                                   const std::vector<RiskClass>& labels, double train_fraction,
                                   std::uint64_t seed, const PipelineConfig& config) {
    return fit_pipeline_featurized(featurize_cohort(X_train, config), labels, train_fraction, seed,
                                   config, X_train.rows());
}

} // namespace riskwave
