// Feed-forward classifier: init, predict, train, gradient check.
#include <random>

#include <gtest/gtest.h>

#include "riskwave/neuralnet.hpp"

using namespace riskwave;

namespace {

NetConfig small_config(int k = 2, int h = 2, std::uint64_t seed = 1) {
    NetConfig c;
    c.input_dim = k;
    c.hidden_units = h;
    c.seed = seed;
    return c;
}

// 10-point linearly separable toy set in 2-D
void toy_set(Eigen::MatrixXd& Z, Eigen::VectorXd& y) {
    Z.resize(2, 10);
    y.resize(10);
    // class 0 around (-1, -1), class 1 around (+1, +1)
    const double pts[10][2] = {{-1.2, -0.8}, {-0.9, -1.1}, {-1.0, -1.4}, {-1.3, -1.0},
                               {-0.7, -0.9}, {1.1, 0.9},   {0.8, 1.2},   {1.3, 1.0},
                               {0.9, 0.7},   {1.2, 1.3}};
    for (int i = 0; i < 10; ++i) {
        Z(0, i) = pts[i][0];
        Z(1, i) = pts[i][1];
        y(i) = i < 5 ? 0.0 : 1.0;
    }
}

bool models_identical(const NetModel& a, const NetModel& b) {
    return a.weights_in == b.weights_in && a.bias_in == b.bias_in &&
           a.weights_out == b.weights_out && a.bias_out == b.bias_out;
}

} // namespace

TEST(InitModel, DeterministicAndShaped) {
    const NetModel a = init_model(small_config(4, 3, 99));
    const NetModel b = init_model(small_config(4, 3, 99));
    EXPECT_TRUE(models_identical(a, b));
    const NetModel c = init_model(small_config(4, 3, 100));
    EXPECT_FALSE(models_identical(a, c));

    // h = k = 1: one input weight, one input bias, one output weight (+ output bias)
    const NetModel tiny = init_model(small_config(1, 1));
    EXPECT_EQ(tiny.weights_in.size(), 1);
    EXPECT_EQ(tiny.bias_in.size(), 1);
    EXPECT_EQ(tiny.weights_out.size(), 1);
}

TEST(InitModel, RejectsMoreHiddenUnitsThanInputs) {
    EXPECT_THROW(init_model(small_config(3, 4)), Error);
    EXPECT_NO_THROW(init_model(small_config(3, 3)));
}

TEST(Predict, ZeroParametersGiveOneHalf) {
    NetModel model = init_model(small_config(3, 2));
    model.weights_in.setZero();
    model.bias_in.setZero();
    model.weights_out.setZero();
    model.bias_out = 0.0;
    EXPECT_DOUBLE_EQ(predict(model, Eigen::Vector3d(1.0, -2.0, 0.5)), 0.5);
}

TEST(Predict, StrictlyInsideUnitInterval) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 50.0);
    const NetModel model = init_model(small_config(5, 4, 3));
    for (int i = 0; i < 1000; ++i) {
        Eigen::VectorXd z(5);
        for (int j = 0; j < 5; ++j) z(j) = gauss(rng);
        const double p = predict(model, z);
        EXPECT_GT(p, 0.0);
        EXPECT_LT(p, 1.0);
    }
    // even a wildly saturated model stays inside the open interval
    NetModel hot = init_model(small_config(2, 2));
    hot.weights_out << 1e6, 1e6;
    hot.bias_out = 1e8;
    EXPECT_LT(predict(hot, Eigen::Vector2d(1, 1)), 1.0);
    EXPECT_GT(predict(hot, Eigen::Vector2d(1, 1)), 0.0);
}

TEST(Predict, MonotoneInOutputBias) {
    NetModel model = init_model(small_config(2, 2, 5));
    const Eigen::Vector2d z(0.3, -0.8);
    double prev = -1.0;
    for (double b = -3.0; b <= 3.0; b += 0.5) {
        model.bias_out = b;
        const double p = predict(model, z);
        EXPECT_GT(p, prev);
        prev = p;
    }
}

TEST(Train, SeparableToySetReachesPerfectAccuracy) {
    Eigen::MatrixXd Z;
    Eigen::VectorXd y;
    toy_set(Z, y);
    NetConfig config = small_config(2, 2, 11);
    config.max_epochs = 2000;
    config.learning_rate = 0.5;
    const NetModel trained = train(init_model(config), Z, y, Eigen::MatrixXd(2, 0),
                                   Eigen::VectorXd(0));
    for (int i = 0; i < 10; ++i) {
        const double p = predict(trained, Z.col(i));
        EXPECT_EQ(p > 0.5 ? 1.0 : 0.0, y(i)) << "sample " << i << " score " << p;
    }
}

TEST(Train, LossMonotoneAtSmallLearningRate) {
    Eigen::MatrixXd Z;
    Eigen::VectorXd y;
    toy_set(Z, y);
    NetConfig config = small_config(2, 2, 13);
    config.learning_rate = 0.01;
    config.max_epochs = 1500;
    const NetModel trained = train(init_model(config), Z, y, Eigen::MatrixXd(2, 0),
                                   Eigen::VectorXd(0));
    for (std::size_t e = 10; e + 1 < trained.train_log.size(); ++e)
        EXPECT_LE(trained.train_log[e + 1], trained.train_log[e] + 1e-9) << "epoch " << e;
}

TEST(Train, FlippedLabelsMirrorTheTrajectory) {
    Eigen::MatrixXd Z;
    Eigen::VectorXd y;
    toy_set(Z, y);
    // symmetric starting point: zero output layer makes the flip exact
    NetConfig config = small_config(2, 2, 17);
    config.max_epochs = 400;
    NetModel init = init_model(config);
    init.weights_out.setZero();
    init.bias_out = 0.0;

    const Eigen::VectorXd flipped = Eigen::VectorXd::Ones(10) - y;
    const NetModel plain = train(init, Z, y, Eigen::MatrixXd(2, 0), Eigen::VectorXd(0));
    const NetModel mirror = train(init, Z, flipped, Eigen::MatrixXd(2, 0), Eigen::VectorXd(0));

    ASSERT_EQ(plain.train_log.size(), mirror.train_log.size());
    for (std::size_t e = 0; e < plain.train_log.size(); ++e)
        EXPECT_NEAR(plain.train_log[e], mirror.train_log[e], 1e-6);
    for (int i = 0; i < 10; ++i)
        EXPECT_NEAR(predict(mirror, Z.col(i)), 1.0 - predict(plain, Z.col(i)), 1e-6);
}

TEST(Train, PatienceZeroSingleEpochDoesOneUpdate) {
    Eigen::MatrixXd Z;
    Eigen::VectorXd y;
    toy_set(Z, y);
    NetConfig config = small_config(2, 2, 19);
    config.max_epochs = 1;
    config.patience = 0;
    const NetModel init = init_model(config);
    const NetModel stepped = train(init, Z, y, Z, y);
    EXPECT_EQ(stepped.train_log.size(), 1u);
    EXPECT_FALSE(models_identical(init, stepped));
}

TEST(Train, RejectsSingleClassTrainingSet) {
    Eigen::MatrixXd Z = Eigen::MatrixXd::Random(2, 6);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(6);
    EXPECT_THROW(
        train(init_model(small_config()), Z, ones, Eigen::MatrixXd(2, 0), Eigen::VectorXd(0)),
        Error);
}

TEST(Train, ReportsNonFiniteLossWithEpoch) {
    Eigen::MatrixXd Z;
    Eigen::VectorXd y;
    toy_set(Z, y);
    NetModel corrupted = init_model(small_config(2, 2, 23));
    corrupted.bias_out = std::numeric_limits<double>::quiet_NaN();
    try {
        train(corrupted, Z, y, Eigen::MatrixXd(2, 0), Eigen::VectorXd(0));
        FAIL() << "expected Error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("epoch 1"), std::string::npos);
    }
}

TEST(Train, DeterministicReruns) {
    Eigen::MatrixXd Z;
    Eigen::VectorXd y;
    toy_set(Z, y);
    NetConfig config = small_config(2, 2, 29);
    config.max_epochs = 300;
    const NetModel a = train(init_model(config), Z, y, Z, y);
    const NetModel b = train(init_model(config), Z, y, Z, y);
    EXPECT_TRUE(models_identical(a, b));
    EXPECT_EQ(a.train_log, b.train_log);
}

TEST(GradientCheck, TwentySeedsUnderTolerance) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const NetModel model = init_model(small_config(4, 3, seed));
        Eigen::VectorXd z(4);
        for (int i = 0; i < 4; ++i) z(i) = gauss(rng);
        const double y = seed % 2 ? 1.0 : 0.0;
        EXPECT_LT(gradient_check(model, z, y), 1e-4) << "seed " << seed;
    }
}

TEST(GradientCheck, SaturatedCorrectPredictionIsQuiet) {
    // confidently correct model: both gradients ~0, the absolute floor keeps
    // the ratio from exploding
    NetModel model = init_model(small_config(2, 2, 37));
    model.weights_in << 10, 0, 0, 10;
    model.bias_in.setZero();
    model.weights_out << 30, 30;
    model.bias_out = 0.0;
    const Eigen::Vector2d z(3.0, 3.0); // strongly positive logit
    EXPECT_LT(gradient_check(model, z, 1.0), 1e-4);
}

TEST(GradientCheck, DetectsACorruptedGradient) {
    const NetModel model = init_model(small_config(3, 2, 41));
    const Eigen::Vector3d z(0.7, -1.1, 0.4);
    NetGradients analytic = sample_gradients(model, z, 1.0);
    const NetGradients numeric = numeric_gradients(model, z, 1.0);
    // flip the sign of the largest input-weight gradient term
    Eigen::Index r = 0, c = 0;
    analytic.weights_in.cwiseAbs().maxCoeff(&r, &c);
    analytic.weights_in(r, c) = -analytic.weights_in(r, c);
    EXPECT_GT(gradient_disagreement(analytic, numeric), 1e-2);
}
