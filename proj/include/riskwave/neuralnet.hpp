// neuralnet.hpp -- small feed-forward binary classifier trained by full-batch
// gradient descent, with a finite-difference gradient check
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "riskwave/common.hpp"

namespace riskwave {

/// One hidden tanh layer of `hidden_units` units and a sigmoid output.
/// hidden_units may not exceed input_dim.
struct NetConfig {
    int input_dim = 0;     // k
    int hidden_units = 0;  // h <= k
    double learning_rate = 0.05;
    int max_epochs = 5000;
    int patience = 200;    // epochs without validation improvement before stopping
    std::uint64_t seed = 0;
};

struct NetModel {
    Eigen::MatrixXd weights_in;  // h x k
    Eigen::VectorXd bias_in;     // h
    Eigen::VectorXd weights_out; // h
    double bias_out = 0.0;
    NetConfig config;
    std::vector<double> train_log; // training loss at the start of each epoch run
};

namespace detail {

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// log(1 + e^o) - y*o, evaluated without overflow.
inline double bce_from_logit(double o, double y) {
    return std::max(o, 0.0) - y * o + std::log1p(std::exp(-std::abs(o)));
}

} // namespace detail

/// Seeded uniform init scaled by 1/sqrt(fan-in). Draw order is fixed
/// (weights_in row by row, bias_in, weights_out, bias_out), so a seed pins
/// every parameter.
inline NetModel init_model(const NetConfig& config) {
    detail::require(config.input_dim >= 1, "init_model: input_dim must be >= 1");
    detail::require(config.hidden_units >= 1, "init_model: hidden_units must be >= 1");
    if (config.hidden_units > config.input_dim)
        throw Error("init_model: hidden_units = " + std::to_string(config.hidden_units) +
                    " exceeds input_dim = " + std::to_string(config.input_dim));
    detail::require(config.learning_rate > 0.0, "init_model: learning_rate must be positive");
    detail::require(config.max_epochs >= 1, "init_model: max_epochs must be >= 1");
    detail::require(config.patience >= 0, "init_model: patience must be >= 0");

    NetModel model;
    model.config = config;
    const int h = config.hidden_units;
    const int k = config.input_dim;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double in_scale = 1.0 / std::sqrt(static_cast<double>(k));
    const double out_scale = 1.0 / std::sqrt(static_cast<double>(h));

    model.weights_in.resize(h, k);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < k; ++j) model.weights_in(i, j) = unit(rng) * in_scale;
    model.bias_in.resize(h);
    for (int i = 0; i < h; ++i) model.bias_in(i) = unit(rng) * in_scale;
    model.weights_out.resize(h);
    for (int i = 0; i < h; ++i) model.weights_out(i) = unit(rng) * out_scale;
    model.bias_out = unit(rng) * out_scale;
    return model;
}

namespace detail {

inline double forward_logit(const NetModel& model, const Eigen::VectorXd& z) {
    const Eigen::VectorXd a = (model.weights_in * z + model.bias_in).array().tanh();
    return model.weights_out.dot(a) + model.bias_out;
}

} // namespace detail

/// sigmoid(w_out . tanh(W_in z + b_in) + b_out), clamped a hair inside (0,1)
/// so callers can rely on the open interval even where sigmoid would round
/// to an endpoint.
inline double predict(const NetModel& model, const Eigen::VectorXd& z) {
    detail::require(z.size() == model.weights_in.cols(),
                    "predict: input length " + std::to_string(z.size()) +
                        " does not match model input_dim " +
                        std::to_string(model.weights_in.cols()));
    const double p = detail::sigmoid(detail::forward_logit(model, z));
    return std::min(std::max(p, 1e-15), 1.0 - 1e-15);
}

/// Mean binary cross-entropy of the model on columns of Z against labels y
/// (1 = high risk, 0 = low risk).
inline double batch_loss(const NetModel& model, const Eigen::MatrixXd& Z,
                         const Eigen::VectorXd& y) {
    detail::require(Z.cols() == y.size(), "batch_loss: label count mismatch");
    double total = 0.0;
    const Eigen::MatrixXd A =
        ((model.weights_in * Z).colwise() + model.bias_in).array().tanh().matrix();
    for (Eigen::Index j = 0; j < Z.cols(); ++j)
        total += detail::bce_from_logit(model.weights_out.dot(A.col(j)) + model.bias_out, y(j));
    return total / static_cast<double>(Z.cols());
}

struct NetGradients {
    Eigen::MatrixXd weights_in;
    Eigen::VectorXd bias_in;
    Eigen::VectorXd weights_out;
    double bias_out = 0.0;
};

/// Cross-entropy loss of a single sample.
inline double sample_loss(const NetModel& model, const Eigen::VectorXd& z, double y) {
    return detail::bce_from_logit(detail::forward_logit(model, z), y);
}

/// Backpropagated gradient of sample_loss.
inline NetGradients sample_gradients(const NetModel& model, const Eigen::VectorXd& z, double y) {
    const Eigen::VectorXd a = (model.weights_in * z + model.bias_in).array().tanh();
    const double p = detail::sigmoid(model.weights_out.dot(a) + model.bias_out);
    const double dout = p - y;
    NetGradients g;
    g.weights_out = dout * a;
    g.bias_out = dout;
    const Eigen::VectorXd dpre =
        (dout * model.weights_out.array() * (1.0 - a.array().square())).matrix();
    g.weights_in = dpre * z.transpose();
    g.bias_in = dpre;
    return g;
}

/// Central finite differences of sample_loss over every parameter.
inline NetGradients numeric_gradients(const NetModel& model, const Eigen::VectorXd& z, double y,
                                      double step = 1e-5) {
    NetModel probe = model;
    auto diff = [&](double& param) {
        const double saved = param;
        param = saved + step;
        const double up = sample_loss(probe, z, y);
        param = saved - step;
        const double down = sample_loss(probe, z, y);
        param = saved;
        return (up - down) / (2.0 * step);
    };
    NetGradients g;
    g.weights_in.resize(probe.weights_in.rows(), probe.weights_in.cols());
    for (Eigen::Index i = 0; i < probe.weights_in.rows(); ++i)
        for (Eigen::Index j = 0; j < probe.weights_in.cols(); ++j)
            g.weights_in(i, j) = diff(probe.weights_in(i, j));
    g.bias_in.resize(probe.bias_in.size());
    for (Eigen::Index i = 0; i < probe.bias_in.size(); ++i) g.bias_in(i) = diff(probe.bias_in(i));
    g.weights_out.resize(probe.weights_out.size());
    for (Eigen::Index i = 0; i < probe.weights_out.size(); ++i)
        g.weights_out(i) = diff(probe.weights_out(i));
    g.bias_out = diff(probe.bias_out);
    return g;
}

/// Worst per-parameter disagreement between two gradients: relative where the
/// magnitudes matter, zero where both sit under the 1e-8 absolute floor.
inline double gradient_disagreement(const NetGradients& a, const NetGradients& b) {
    double worst = 0.0;
    auto compare = [&worst](double x, double y) {
        const double diff = std::abs(x - y);
        if (diff < 1e-8) return;
        worst = std::max(worst, diff / std::max(std::abs(x), std::abs(y)));
    };
    for (Eigen::Index i = 0; i < a.weights_in.size(); ++i)
        compare(a.weights_in(i), b.weights_in(i));
    for (Eigen::Index i = 0; i < a.bias_in.size(); ++i) compare(a.bias_in(i), b.bias_in(i));
    for (Eigen::Index i = 0; i < a.weights_out.size(); ++i)
        compare(a.weights_out(i), b.weights_out(i));
    compare(a.bias_out, b.bias_out);
    return worst;
}

/// Max disagreement between the backpropagated and finite-difference
/// gradients at (z, y).
inline double gradient_check(const NetModel& model, const Eigen::VectorXd& z, double y) {
    return gradient_disagreement(sample_gradients(model, z, y), numeric_gradients(model, z, y));
}

/// Full-batch gradient descent on mean cross-entropy. After each update the
/// validation loss is evaluated; the parameters with the best validation loss
/// are returned, and training stops once `patience` consecutive epochs fail
/// to improve it. An empty validation set disables early stopping (the final
/// parameters are returned).
inline NetModel train(NetModel model, const Eigen::MatrixXd& Z_train, const Eigen::VectorXd& y_train,
                      const Eigen::MatrixXd& Z_val, const Eigen::VectorXd& y_val) {
    const Eigen::Index n = Z_train.cols();
    detail::require(n >= 2, "train: need at least two training samples");
    detail::require(y_train.size() == n, "train: training label count mismatch");
    detail::require(Z_val.cols() == y_val.size(), "train: validation label count mismatch");
    detail::require(Z_train.rows() == model.weights_in.cols(), "train: feature dim mismatch");
    const double positives = y_train.sum();
    if (positives <= 0.0 || positives >= static_cast<double>(n))
        throw Error("train: training set contains a single class");

    const double lr = model.config.learning_rate;
    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd best_w_in = model.weights_in;
    Eigen::VectorXd best_b_in = model.bias_in;
    Eigen::VectorXd best_w_out = model.weights_out;
    double best_b_out = model.bias_out;
    double best_val = std::numeric_limits<double>::infinity();
    int stale = 0;
    const bool validate = Z_val.cols() > 0;
    model.train_log.clear();

    for (int epoch = 1; epoch <= model.config.max_epochs; ++epoch) {
        const Eigen::MatrixXd A =
            ((model.weights_in * Z_train).colwise() + model.bias_in).array().tanh().matrix();
        Eigen::VectorXd logits = (A.transpose() * model.weights_out).array() + model.bias_out;

        double loss = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            loss += detail::bce_from_logit(logits(j), y_train(j));
        loss *= inv_n;
        if (!std::isfinite(loss))
            throw Error("train: non-finite loss at epoch " + std::to_string(epoch));
        model.train_log.push_back(loss);

        Eigen::VectorXd delta(n);
        for (Eigen::Index j = 0; j < n; ++j)
            delta(j) = (detail::sigmoid(logits(j)) - y_train(j)) * inv_n;

        const Eigen::VectorXd g_wout = A * delta;
        const double g_bout = delta.sum();
        const Eigen::MatrixXd dpre =
            (model.weights_out * delta.transpose()).cwiseProduct(
                (1.0 - A.array().square()).matrix());
        model.weights_in -= lr * (dpre * Z_train.transpose());
        model.bias_in -= lr * dpre.rowwise().sum();
        model.weights_out -= lr * g_wout;
        model.bias_out -= lr * g_bout;

        if (validate) {
            const double val = batch_loss(model, Z_val, y_val);
            if (!std::isfinite(val))
                throw Error("train: non-finite validation loss at epoch " + std::to_string(epoch));
            if (val < best_val) {
                best_val = val;
                best_w_in = model.weights_in;
                best_b_in = model.bias_in;
                best_w_out = model.weights_out;
                best_b_out = model.bias_out;
                stale = 0;
            } else if (++stale > model.config.patience) {
                break;
            }
        }
    }
    if (validate) {
        model.weights_in = std::move(best_w_in);
        model.bias_in = std::move(best_b_in);
        model.weights_out = std::move(best_w_out);
        model.bias_out = best_b_out;
    }
    return model;
}

} // namespace riskwave
