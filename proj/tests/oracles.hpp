// oracles.hpp -- test-only reference computations, kept independent of the
// implementation paths they check
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace oracles {

/// Classic cyclic Jacobi eigensolver for a symmetric matrix. Returns
/// eigenvalues descending with matching eigenvector columns. Deliberately
/// hand-rolled: it cross-checks SVD-based results through a different route.
inline void jacobi_eigs(Eigen::MatrixXd A, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    const Eigen::Index n = A.rows();
    vectors = Eigen::MatrixXd::Identity(n, n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (off < 1e-24) break;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(A(p, q)) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
                J(p, p) = c;
                J(q, q) = c;
                J(p, q) = s;
                J(q, p) = -s;
                A = J.transpose() * A * J;
                vectors = vectors * J;
            }
    }
    values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) values(i) = A(i, i);
    // sort descending
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
    Eigen::VectorXd sorted_values(n);
    Eigen::MatrixXd sorted_vectors(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sorted_values(i) = values(order[static_cast<std::size_t>(i)]);
        sorted_vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
    }
    values = sorted_values;
    vectors = sorted_vectors;
}

/// AUC as the Mann-Whitney pairwise statistic: P(score_pos < score_neg) with
/// half credit for ties, positives being the class whose scores should be low.
inline double mann_whitney_auc(const std::vector<double>& scores,
                               const std::vector<bool>& is_positive) {
    double wins = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!is_positive[i]) continue;
        ++n_pos;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (is_positive[j]) continue;
            if (scores[i] < scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    for (std::size_t j = 0; j < scores.size(); ++j)
        if (!is_positive[j]) ++n_neg;
    return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

} // namespace oracles
