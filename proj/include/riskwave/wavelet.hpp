// wavelet.hpp -- Mexican hat continuous wavelet expansion of gene vectors
#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "riskwave/common.hpp"

namespace riskwave {

/// Width parameter of the mother wavelet. Dilation is carried by the CWT
/// scale, so sigma = 1 is the normal choice.
struct MexicanHatParams {
    double sigma = 1.0;
};

/// psi(k) = 2 / (sqrt(3 sigma) pi^(1/4)) * (1 - k^2/sigma^2) * exp(-k^2 / (2 sigma^2))
/// Zero-mean, symmetric, unit L2 norm.
inline double mexican_hat(double k, const MexicanHatParams& params = {}) {
    detail::require(params.sigma > 0.0, "mexican_hat: sigma must be positive");
    const double s2 = params.sigma * params.sigma;
    const double norm = 2.0 / (std::sqrt(3.0 * params.sigma) * std::pow(std::numbers::pi, 0.25));
    return norm * (1.0 - k * k / s2) * std::exp(-k * k / (2.0 * s2));
}

/// Discrete CWT coefficient at one (scale, position): the unit-spaced sum
/// (1/sqrt(s)) * sum_t x(t) psi((t - tau)/s) over sample indices t = 1..m.
/// The signal is treated as zero outside 1..m. The Mexican hat is real, so
/// conjugation is the identity.
inline double cwt_single(const Eigen::VectorXd& x, double scale, double position,
                         const MexicanHatParams& params = {}) {
    detail::require(scale > 0.0, "cwt_single: scale must be positive");
    detail::require(x.size() >= 2, "cwt_single: signal must have at least two samples");
    double acc = 0.0;
    for (Eigen::Index t = 1; t <= x.size(); ++t)
        acc += x(t - 1) * mexican_hat((static_cast<double>(t) - position) / scale, params);
    return acc / std::sqrt(scale);
}

/// Which (scale, position) grid a patient expansion covers. Multi computes
/// integer scales 1..T across all m positions; Fixed keeps one scale and
/// slides a T-long position window across the m window starts.
enum class ScaleMode { Multi, Fixed };

struct CwtConfig {
    int window = 5; // T
    MexicanHatParams hat{};
    ScaleMode mode = ScaleMode::Multi;
    double fixed_scale = 1.0; // only used by ScaleMode::Fixed
};

/// Expands one patient vector into the T x m coefficient matrix W.
/// Multi mode: W(j-1, tau-1) = cwt(x, scale j, position tau).
/// Fixed mode: W(j-1, i-1) = cwt(x, fixed_scale, position i-1+j), i.e. the
/// j-th position inside a window starting at gene i.
inline Eigen::MatrixXd expand_patient(const Eigen::VectorXd& x, const CwtConfig& config) {
    detail::require(config.window >= 1, "expand_patient: window size must be >= 1");
    detail::require(x.size() >= 2, "expand_patient: need at least two genes");
    const Eigen::Index m = x.size();
    const int T = config.window;
    Eigen::MatrixXd W(T, m);
    if (config.mode == ScaleMode::Multi) {
        for (int j = 1; j <= T; ++j)
            for (Eigen::Index tau = 1; tau <= m; ++tau)
                W(j - 1, tau - 1) =
                    cwt_single(x, static_cast<double>(j), static_cast<double>(tau), config.hat);
    } else {
        detail::require(config.fixed_scale > 0.0, "expand_patient: fixed_scale must be positive");
        for (int j = 1; j <= T; ++j)
            for (Eigen::Index i = 1; i <= m; ++i)
                W(j - 1, i - 1) =
                    cwt_single(x, config.fixed_scale, static_cast<double>(i - 1 + j), config.hat);
    }
    return W;
}

/// The expanded cohort H: column i is the column-major vectorization of the
/// patient's T x m coefficient matrix, so H is Tm x n.
struct WaveletStack {
    Eigen::MatrixXd coefficients;
    int window_size = 0;                // T
    Eigen::Index genes_per_patient = 0; // m
};

inline WaveletStack expand_cohort(const Eigen::MatrixXd& X, const CwtConfig& config) {
    detail::require(X.rows() >= 2, "expand_cohort: need at least two genes");
    detail::require(X.cols() >= 1, "expand_cohort: need at least one patient");
    WaveletStack stack;
    stack.window_size = config.window;
    stack.genes_per_patient = X.rows();
    stack.coefficients.resize(static_cast<Eigen::Index>(config.window) * X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.cols(); ++i) {
        const Eigen::MatrixXd W = expand_patient(X.col(i), config);
        stack.coefficients.col(i) =
            Eigen::Map<const Eigen::VectorXd>(W.data(), W.size()); // column-major stacking
    }
    return stack;
}

} // namespace riskwave
