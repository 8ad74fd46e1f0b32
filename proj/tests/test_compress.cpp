// Row centering, SVD compression, and out-of-sample projection.
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "riskwave/compress.hpp"

using namespace riskwave;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < M.size(); ++i) M(i) = gauss(rng);
    return M;
}

} // namespace

TEST(CenterRows, Basics) {
    Eigen::MatrixXd H(1, 3);
    H << 1, 2, 3;
    auto [centered, means] = center_rows(H);
    EXPECT_DOUBLE_EQ(means(0), 2.0);
    EXPECT_DOUBLE_EQ(centered(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(centered(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(centered(0, 2), 1.0);

    // already centered: unchanged, zero means
    auto [again, zero_means] = center_rows(centered);
    EXPECT_TRUE(again == centered);
    EXPECT_DOUBLE_EQ(zero_means.cwiseAbs().maxCoeff(), 0.0);

    // single column: every row collapses to zero
    Eigen::MatrixXd one_col(3, 1);
    one_col << 4, -2, 7;
    auto [zeroed, col_means] = center_rows(one_col);
    EXPECT_DOUBLE_EQ(zeroed.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_TRUE(col_means == one_col.col(0));
}

TEST(CenterRows, EveryRowMeanVanishes) {
    const Eigen::MatrixXd H = 100.0 * random_matrix(12, 7, 5);
    auto [centered, means] = center_rows(H);
    for (Eigen::Index r = 0; r < centered.rows(); ++r) {
        const double scale = H.row(r).cwiseAbs().maxCoeff();
        EXPECT_LT(std::abs(centered.row(r).mean()), 1e-12 * std::max(1.0, scale));
    }
}

TEST(FitCompressor, FullRankPreservesFrobeniusNorm) {
    const Eigen::MatrixXd H = random_matrix(12, 6, 7);
    const auto [centered, means] = center_rows(H);
    const CompressedFeatures cf = fit_compressor(H, 6);
    EXPECT_NEAR(cf.features.norm(), centered.norm(), 1e-8);
}

TEST(FitCompressor, RankOneInput) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(5, 4);
    H.row(2) << 1, 2, 3, 4; // single nonzero row
    const CompressedFeatures cf = fit_compressor(H, 3);
    EXPECT_GT(cf.singular_values(0), 0.0);
    EXPECT_NEAR(cf.singular_values(1), 0.0, 1e-12);
    EXPECT_NEAR(cf.singular_values(2), 0.0, 1e-12);
    const auto [centered, means] = center_rows(H);
    EXPECT_NEAR(cf.features.row(0).norm(), centered.norm(), 1e-10);
}

TEST(FitCompressor, MatchesIndependentEigendecomposition) {
    // eigenvalues of (centered H)^T (centered H) are squared singular values,
    // eigenvectors are right singular vectors: row i of Hhat = sigma_i r_i^T
    const Eigen::MatrixXd H = random_matrix(12, 6, 19);
    const auto [centered, means] = center_rows(H);
    const CompressedFeatures cf = fit_compressor(H, 3);

    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    oracles::jacobi_eigs(centered.transpose() * centered, eigenvalues, eigenvectors);

    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(cf.singular_values(i), std::sqrt(std::max(0.0, eigenvalues(i))), 1e-8);
        // compare up to the eigenvector's free sign
        const Eigen::VectorXd expected = cf.singular_values(i) * eigenvectors.col(i);
        const double direct = (cf.features.row(i).transpose() - expected).norm();
        const double flipped = (cf.features.row(i).transpose() + expected).norm();
        EXPECT_LT(std::min(direct, flipped), 1e-8);
    }
}

TEST(FitCompressor, BasisOrthonormal) {
    const CompressedFeatures cf = fit_compressor(random_matrix(15, 8, 23), 5);
    const Eigen::MatrixXd gram = cf.basis.transpose() * cf.basis;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FitCompressor, SignConventionLargestEntryPositive) {
    const CompressedFeatures cf = fit_compressor(random_matrix(10, 6, 29), 4);
    for (Eigen::Index c = 0; c < cf.basis.cols(); ++c) {
        Eigen::Index arg = 0;
        cf.basis.col(c).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(cf.basis(arg, c), 0.0);
    }
}

TEST(FitCompressor, RetainedEnergyNondecreasingInRank) {
    const Eigen::MatrixXd H = random_matrix(10, 7, 31);
    double prev = 0.0;
    for (int k = 1; k <= 7; ++k) {
        const CompressedFeatures cf = fit_compressor(H, k);
        const double energy = cf.features.squaredNorm();
        EXPECT_GE(energy, prev - 1e-10);
        prev = energy;
    }
    // full rank reconstructs the centered matrix
    const auto [centered, means] = center_rows(H);
    const CompressedFeatures full = fit_compressor(H, 7);
    const double rel = (full.basis * full.features - centered).norm() / centered.norm();
    EXPECT_LT(rel, 1e-6);
}

TEST(FitCompressor, EckartYoungTruncationError) {
    std::mt19937_64 seeds(101);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd H = random_matrix(10, 6, seeds());
        const auto [centered, means] = center_rows(H);
        Eigen::BDCSVD<Eigen::MatrixXd> all(centered);
        const Eigen::VectorXd sv = all.singularValues();
        for (int k : {1, 3, 5}) {
            const CompressedFeatures cf = fit_compressor(H, k);
            const double err = (centered - cf.basis * cf.features).norm();
            double tail = 0.0;
            for (Eigen::Index i = k; i < sv.size(); ++i) tail += sv(i) * sv(i);
            EXPECT_NEAR(err, std::sqrt(tail), 1e-8);
        }
    }
}

TEST(FitCompressor, DeterministicAcrossRuns) {
    const Eigen::MatrixXd H = random_matrix(14, 9, 37);
    const CompressedFeatures a = fit_compressor(H, 4);
    const CompressedFeatures b = fit_compressor(H, 4);
    EXPECT_TRUE(a.features == b.features);
    EXPECT_TRUE(a.basis == b.basis);
    EXPECT_TRUE(a.singular_values == b.singular_values);
}

TEST(FitCompressor, RankValidation) {
    const Eigen::MatrixXd H = random_matrix(6, 4, 41);
    EXPECT_THROW(fit_compressor(H, 0), Error);
    EXPECT_THROW(fit_compressor(H, 5), Error); // beyond min(rows, cols)
}

TEST(Project, ConsistentWithFit) {
    const Eigen::MatrixXd H = random_matrix(12, 5, 43);
    const CompressedFeatures cf = fit_compressor(H, 3);
    for (Eigen::Index j = 0; j < H.cols(); ++j) {
        const Eigen::VectorXd z = project(cf, H.col(j));
        EXPECT_LT((z - cf.features.col(j)).cwiseAbs().maxCoeff(), 1e-8);
    }
    // the row-mean vector projects to zero
    EXPECT_LT(project(cf, cf.row_means).cwiseAbs().maxCoeff(), 1e-12);
    // dimension mismatch
    EXPECT_THROW(project(cf, Eigen::VectorXd::Zero(11)), Error);
}

TEST(Project, OrthogonalResidualProjectsToZero) {
    const Eigen::MatrixXd H = random_matrix(10, 6, 47);
    const CompressedFeatures cf = fit_compressor(H, 4);
    // Gram-Schmidt residual of a random vector against the basis columns
    Eigen::VectorXd v = random_matrix(10, 1, 53);
    for (Eigen::Index c = 0; c < cf.basis.cols(); ++c)
        v -= cf.basis.col(c).dot(v) * cf.basis.col(c);
    const Eigen::VectorXd z = project(cf, v + cf.row_means);
    EXPECT_LT(z.cwiseAbs().maxCoeff(), 1e-10);
}
