// compress.hpp -- row centering, SVD, and projection onto the leading left
// singular vectors
#pragma once

#include <iostream>
#include <utility>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "riskwave/common.hpp"

namespace riskwave {

/// The fitted compression: Hhat = basis^T * (H - row_means), with
/// basis = [l_1 .. l_k] the retained left singular vectors.
struct CompressedFeatures {
    Eigen::MatrixXd features;        // k x n, row i equals sigma_i * r_i^T
    Eigen::MatrixXd basis;           // Tm x k, orthonormal columns
    Eigen::VectorXd singular_values; // k values, descending
    Eigen::VectorXd row_means;       // Tm, retained for out-of-sample projection
};

/// Subtracts each row's mean; returns the centered matrix and the means.
inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> center_rows(const Eigen::MatrixXd& H) {
    detail::require(H.rows() >= 1 && H.cols() >= 1, "center_rows: empty matrix");
    Eigen::VectorXd means = H.rowwise().mean();
    Eigen::MatrixXd centered = H.colwise() - means;
    return {std::move(centered), std::move(means)};
}

namespace detail {

// SVD leaves each singular vector's sign free; pin it so the basis (and all
// downstream training) is reproducible: largest-|entry| positive, ties to the
// lowest index. The paired right singular vector flips with it.
inline void fix_singular_vector_signs(Eigen::MatrixXd& U, Eigen::MatrixXd& V) {
    for (Eigen::Index c = 0; c < U.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = std::abs(U(0, c));
        for (Eigen::Index r = 1; r < U.rows(); ++r) {
            const double a = std::abs(U(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (U(arg, c) < 0.0) {
            U.col(c) = -U.col(c);
            if (c < V.cols()) V.col(c) = -V.col(c);
        }
    }
}

} // namespace detail

/// Centers H, computes the thin SVD of the centered matrix, and projects onto
/// the first k left singular vectors. genes_hint, when positive, is the gene
/// count m of the upstream expression matrix: k is expected to stay below it,
/// so k >= m only warns.
inline CompressedFeatures fit_compressor(const Eigen::MatrixXd& H, int k,
                                         Eigen::Index genes_hint = 0) {
    detail::require(H.rows() >= 1 && H.cols() >= 1, "fit_compressor: empty matrix");
    const Eigen::Index max_k = std::min(H.rows(), H.cols());
    if (k < 1 || k > max_k)
        throw Error("fit_compressor: k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(max_k) + "]");
    if (genes_hint > 0 && k >= genes_hint)
        std::cerr << "warning: compression rank k = " << k
                  << " is not below the gene count m = " << genes_hint << "\n";

    auto [centered, means] = center_rows(H);
    // two-sided Jacobi rather than BDCSVD: Eigen 3.4.0's BDCSVD miscomputes
    // (asserts in debug, silent NaN in release) on some deflation patterns
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw Error("fit_compressor: SVD did not converge");

    Eigen::MatrixXd U = svd.matrixU();
    Eigen::MatrixXd V = svd.matrixV();
    detail::fix_singular_vector_signs(U, V);

    CompressedFeatures out;
    out.basis = U.leftCols(k);
    out.singular_values = svd.singularValues().head(k);
    out.row_means = std::move(means);
    out.features = out.basis.transpose() * centered;
    return out;
}

/// Projects a new Tm-vector with the training means and basis (the training
/// fit is never touched, so held-out evaluation stays honest).
inline Eigen::VectorXd project(const CompressedFeatures& features, const Eigen::VectorXd& h_new) {
    detail::require(h_new.size() == features.basis.rows(),
                    "project: vector length " + std::to_string(h_new.size()) +
                        " does not match basis rows " + std::to_string(features.basis.rows()));
    return features.basis.transpose() * (h_new - features.row_means);
}

} // namespace riskwave
