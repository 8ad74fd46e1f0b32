// CLI subcommands: artifacts, manifests, determinism, error reporting.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "riskwave/app.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class AppTest : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = fs::temp_directory_path() /
                ("riskwave_app_" +
                 std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    std::string dir(const std::string& name) const { return (root_ / name).string(); }

    int run(const std::vector<std::string>& args) {
        out_.str("");
        err_.str("");
        return riskwave::app::run(args, out_, err_);
    }

    static std::string slurp(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    // simulate a small cohort and return the csv paths
    std::pair<std::string, std::string> simulate_small(const std::string& name,
                                                       const std::string& seed = "7") {
        const int code = run({"simulate", "--out", dir(name), "--seed", seed, "--genes", "12",
                              "--patients", "16", "--low-risk-frac", "0.25"});
        EXPECT_EQ(code, 0) << err_.str();
        return {dir(name) + "/expression.csv", dir(name) + "/clinical.csv"};
    }

    std::vector<std::string> eval_args(const std::string& expr, const std::string& clin,
                                       const std::string& out) {
        return {"evaluate",      "--expression", expr,           "--clinical",  clin,
                "--out",         out,            "--seed",       "7",           "--window",
                "3",             "--rank",       "3",            "--train-frac", "0.75",
                "--hidden",      "2",            "--threshold",  "0.6",         "--max-epochs",
                "150",           "--patience",   "30"};
    }

    fs::path root_;
    std::ostringstream out_, err_;
};

std::set<std::string> files_in(const std::string& dir) {
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        names.insert(entry.path().filename().string());
    return names;
}

} // namespace

TEST_F(AppTest, SimulateWritesLoadableCohort) {
    const auto [expr, clin] = simulate_small("sim");
    const riskwave::Cohort cohort = riskwave::load_cohort(expr, clin);
    EXPECT_EQ(cohort.gene_count(), 12);
    EXPECT_EQ(cohort.patient_count(), 16);
    EXPECT_EQ(files_in(dir("sim")),
              (std::set<std::string>{"expression.csv", "clinical.csv", "true_labels.csv",
                                     "manifest.json"}));
}

TEST_F(AppTest, LabelMatchesGeneratorTruth) {
    const auto [expr, clin] = simulate_small("sim");
    ASSERT_EQ(run({"label", "--expression", expr, "--clinical", clin, "--out", dir("lab")}), 0)
        << err_.str();

    // labels.csv values equal the generator's true_labels.csv
    std::map<std::string, std::string> truth;
    std::ifstream tf(dir("sim") + "/true_labels.csv");
    std::string line;
    std::getline(tf, line); // header
    while (std::getline(tf, line)) {
        const auto comma = line.find(',');
        truth[line.substr(0, comma)] = line.substr(comma + 1);
    }
    std::ifstream lf(dir("lab") + "/labels.csv");
    std::getline(lf, line);
    int checked = 0;
    while (std::getline(lf, line)) {
        std::stringstream ss(line);
        std::string id, label;
        std::getline(ss, id, ',');
        std::getline(ss, label, ',');
        ASSERT_TRUE(truth.count(id)) << id;
        EXPECT_EQ(label, truth[id]) << id;
        ++checked;
    }
    EXPECT_EQ(checked, 16);

    const std::string svg = slurp(dir("lab") + "/km_curve.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
}

TEST_F(AppTest, FeaturizeEmitsCompressedFeatures) {
    const auto [expr, clin] = simulate_small("sim");
    ASSERT_EQ(run({"featurize", "--expression", expr, "--clinical", clin, "--out", dir("feat"),
                   "--window", "3", "--rank", "4", "--dump-stack"}),
              0)
        << err_.str();
    const auto names = files_in(dir("feat"));
    EXPECT_TRUE(names.count("features.csv"));
    EXPECT_TRUE(names.count("singular_values.csv"));
    EXPECT_TRUE(names.count("wavelet_stack.csv"));
    // features.csv: header + k rows
    std::ifstream in(dir("feat") + "/features.csv");
    std::string line;
    int rows = -1;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 4);
}

TEST_F(AppTest, EndToEndDeterminism) {
    // simulate then pipeline, twice with the same seed: identical artifacts
    const auto [e1, c1] = simulate_small("sim1");
    const auto [e2, c2] = simulate_small("sim2");
    EXPECT_EQ(slurp(e1), slurp(e2));
    EXPECT_EQ(slurp(c1), slurp(c2));

    auto args1 = eval_args(e1, c1, dir("run1"));
    auto args2 = eval_args(e2, c2, dir("run2"));
    args1[0] = args2[0] = "pipeline";
    ASSERT_EQ(run(args1), 0) << err_.str();
    ASSERT_EQ(run(args2), 0) << err_.str();

    const json m1 = json::parse(slurp(dir("run1") + "/manifest.json"));
    const json m2 = json::parse(slurp(dir("run2") + "/manifest.json"));
    ASSERT_EQ(m1["outputs"].size(), m2["outputs"].size());
    for (std::size_t i = 0; i < m1["outputs"].size(); ++i) {
        EXPECT_EQ(m1["outputs"][i]["file"], m2["outputs"][i]["file"]);
        EXPECT_EQ(m1["outputs"][i]["fnv1a64"], m2["outputs"][i]["fnv1a64"]);
    }
}

TEST_F(AppTest, ManifestSufficesToReRun) {
    const auto [expr, clin] = simulate_small("sim");
    ASSERT_EQ(run(eval_args(expr, clin, dir("orig"))), 0) << err_.str();
    const json manifest = json::parse(slurp(dir("orig") + "/manifest.json"));

    // re-run from the recorded args, pointing --out somewhere fresh
    std::vector<std::string> args;
    for (const auto& a : manifest["args"]) args.push_back(a.get<std::string>());
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--out") args[i + 1] = dir("rerun");
    ASSERT_EQ(run(args), 0) << err_.str();

    const json rerun = json::parse(slurp(dir("rerun") + "/manifest.json"));
    ASSERT_EQ(manifest["outputs"].size(), rerun["outputs"].size());
    for (std::size_t i = 0; i < manifest["outputs"].size(); ++i)
        EXPECT_EQ(manifest["outputs"][i]["fnv1a64"], rerun["outputs"][i]["fnv1a64"]);
}

TEST_F(AppTest, OutputsStayInsideOutDirAndMatchManifest) {
    const auto [expr, clin] = simulate_small("sim");
    ASSERT_EQ(run(eval_args(expr, clin, dir("eval"))), 0) << err_.str();
    const json manifest = json::parse(slurp(dir("eval") + "/manifest.json"));
    std::set<std::string> expected{"manifest.json"};
    for (const auto& output : manifest["outputs"])
        expected.insert(output["file"].get<std::string>());
    EXPECT_EQ(files_in(dir("eval")), expected);
}

TEST_F(AppTest, PipelineEmitsFullReport) {
    const auto [expr, clin] = simulate_small("sim");
    std::vector<std::string> args = eval_args(expr, clin, dir("pipe"));
    args[0] = "pipeline";
    ASSERT_EQ(run(args), 0) << err_.str();
    const auto names = files_in(dir("pipe"));
    for (const char* required : {"labels.csv", "km_curve.csv", "km_curve.svg", "scores.csv",
                                 "roc.csv", "roc.svg", "summary.csv", "model.bundle",
                                 "manifest.json"})
        EXPECT_TRUE(names.count(required)) << required;

    // the bundle reloads and scores
    const riskwave::FittedPipeline fitted =
        riskwave::load_pipeline(dir("pipe") + "/model.bundle");
    const riskwave::Cohort cohort = riskwave::load_cohort(expr, clin);
    const double p = fitted.score(cohort.expression.col(0));
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
}

TEST_F(AppTest, RegularProtocolNeedsEvalIds) {
    const auto [expr, clin] = simulate_small("sim");
    auto args = eval_args(expr, clin, dir("reg"));
    args.push_back("--protocol");
    args.push_back("regular");
    EXPECT_NE(run(args), 0);
    EXPECT_NE(err_.str().find("eval-ids"), std::string::npos);

    // with an ids file it works
    {
        std::ofstream ids(dir("sim") + "/ids.txt");
        ids << "P1\nP2\nP3\n";
    }
    args.push_back("--eval-ids");
    args.push_back(dir("sim") + "/ids.txt");
    EXPECT_EQ(run(args), 0) << err_.str();
}

TEST_F(AppTest, SearchEmitsLeaderboardAndBestConfig) {
    const auto [expr, clin] = simulate_small("sim");
    ASSERT_EQ(run({"search", "--expression", expr, "--clinical", clin, "--out", dir("srch"),
                   "--seed", "7", "--windows", "2", "--ranks", "2", "3", "--train-fracs", "0.75",
                   "--hiddens", "2", "--thresholds", "0.5", "0.7", "--max-epochs", "120",
                   "--patience", "25"}),
              0)
        << err_.str();
    const std::string board = slurp(dir("srch") + "/leaderboard.csv");
    EXPECT_NE(board.find("T,k,P,h,Th,tpr,fpr,auc,youden,status"), std::string::npos);
    // 2 ranks x 2 thresholds = 4 rows + header
    EXPECT_EQ(std::count(board.begin(), board.end(), '\n'), 5);

    const json best = json::parse(slurp(dir("srch") + "/best_config.json"));
    EXPECT_TRUE(best.contains("window"));
    EXPECT_TRUE(best.contains("threshold"));

    // best_config.json presets an evaluate run
    auto args = eval_args(expr, clin, dir("cfged"));
    args.push_back("--config");
    args.push_back(dir("srch") + "/best_config.json");
    EXPECT_EQ(run(args), 0) << err_.str();
}

TEST_F(AppTest, MissingInputFileNamesThePath) {
    const int code = run({"label", "--expression", dir("absent.csv"), "--clinical",
                          dir("absent2.csv"), "--out", dir("x")});
    EXPECT_NE(code, 0);
    EXPECT_NE(err_.str().find("absent"), std::string::npos);
}

TEST_F(AppTest, UnknownFlagFailsCleanly) {
    EXPECT_NE(run({"label", "--no-such-flag"}), 0);
    EXPECT_NE(run({"frobnicate"}), 0);
}
