// app.hpp -- batch command-line front end: simulate, label, featurize,
// evaluate, search, pipeline
//
// Every subcommand writes its artifacts (and nothing else) into --out and
// finishes with a manifest.json recording the effective arguments, the seed,
// and an FNV-1a 64 content hash per artifact. Re-running the recorded
// arguments reproduces the hashes.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskwave/bundle.hpp"
#include "riskwave/dataio.hpp"
#include "riskwave/evaluate.hpp"
#include "riskwave/search.hpp"
#include "riskwave/survival.hpp"
#include "riskwave/svg.hpp"
#include "riskwave/synthetic.hpp"

namespace riskwave {
namespace app {

namespace detail {

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Collects artifacts under one output directory and hashes them for the
/// manifest.
class OutputDir {
public:
    OutputDir(std::string dir, std::string command, std::vector<std::string> args,
              std::uint64_t seed)
        : dir_(std::move(dir)), command_(std::move(command)), args_(std::move(args)),
          seed_(seed) {
        std::filesystem::create_directories(dir_);
    }

    std::string path(const std::string& name) const {
        return (std::filesystem::path(dir_) / name).string();
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(path(name), std::ios::binary);
        if (!out) throw Error("cannot write file: " + path(name));
        out << content;
        require_stream(out, path(name));
        record(name, content);
    }

    /// For files produced by other writers: hash what landed on disk.
    void record_existing(const std::string& name) {
        std::ifstream in(path(name), std::ios::binary);
        if (!in) throw Error("missing expected artifact: " + path(name));
        std::stringstream buffer;
        buffer << in.rdbuf();
        record(name, buffer.str());
    }

    void finish() {
        nlohmann::json manifest;
        manifest["command"] = command_;
        manifest["args"] = args_;
        manifest["seed"] = seed_;
        manifest["outputs"] = nlohmann::json::array();
        for (const auto& [name, hash] : outputs_)
            manifest["outputs"].push_back({{"file", name}, {"fnv1a64", hash}});
        std::ofstream out(path("manifest.json"), std::ios::binary);
        if (!out) throw Error("cannot write file: " + path("manifest.json"));
        out << manifest.dump(2) << '\n';
    }

private:
    static void require_stream(std::ostream& out, const std::string& where) {
        if (!out) throw Error("write failed: " + where);
    }
    void record(const std::string& name, const std::string& content) {
        outputs_.emplace_back(name, hex64(fnv1a64(content)));
    }

    std::string dir_;
    std::string command_;
    std::vector<std::string> args_;
    std::uint64_t seed_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

inline std::string csv_num(double v) { return riskwave::detail::full_precision(v); }

inline std::string labels_csv(const Cohort& cohort, const std::vector<RiskLabel>& labels) {
    std::string out = "patient_id,label,basis,conditional_prob\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out += cohort.patients[i].patient_id;
        out += ',';
        out += to_string(labels[i].value);
        out += ',';
        out += to_string(labels[i].basis);
        out += ',';
        if (labels[i].conditional_prob) out += csv_num(*labels[i].conditional_prob);
        out += '\n';
    }
    return out;
}

inline std::string km_csv(const KmCurve& curve) {
    std::string out = "t_days,cdf\n";
    for (std::size_t i = 0; i < curve.event_times.size(); ++i)
        out += csv_num(curve.event_times[i]) + "," + csv_num(curve.cdf[i]) + "\n";
    return out;
}

inline std::string scores_csv(const EvalReport& report) {
    std::string out = "patient_id,score,true_label\n";
    for (const auto& s : report.per_patient_scores)
        out += s.patient_id + "," + csv_num(s.score) + "," + to_string(s.true_label) + "\n";
    return out;
}

inline std::string roc_csv(const RocCurve& curve) {
    std::string out = "threshold,fpr,tpr\n";
    for (const auto& p : curve.points)
        out += csv_num(p.threshold) + "," + csv_num(p.fpr) + "," + csv_num(p.tpr) + "\n";
    return out;
}

inline std::string summary_csv(const EvalReport& report) {
    std::string out = "auc,threshold,tpr,fpr,n_scored,n_skipped,excessive_skips\n";
    out += report.roc ? csv_num(report.roc->auc) : "nan";
    out += ',';
    out += report.operating_point ? csv_num(report.operating_point->threshold) : "nan";
    out += ',';
    out += report.operating_point ? csv_num(report.operating_point->tpr) : "nan";
    out += ',';
    out += report.operating_point ? csv_num(report.operating_point->fpr) : "nan";
    out += ',' + std::to_string(report.per_patient_scores.size());
    out += ',' + std::to_string(report.skipped_folds.size());
    out += report.excessive_skips ? ",1\n" : ",0\n";
    return out;
}

inline std::string matrix_csv(const Eigen::MatrixXd& M, const std::string& row_prefix,
                              const std::vector<std::string>& col_ids) {
    std::string out = "row";
    for (const auto& id : col_ids) out += "," + id;
    out += '\n';
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        out += row_prefix + std::to_string(r + 1);
        for (Eigen::Index c = 0; c < M.cols(); ++c) out += "," + csv_num(M(r, c));
        out += '\n';
    }
    return out;
}

inline void emit_report(OutputDir& out, const EvalReport& report) {
    out.write("scores.csv", scores_csv(report));
    if (report.roc) {
        out.write("roc.csv", roc_csv(*report.roc));
        std::vector<double> fpr, tpr;
        for (const auto& p : report.roc->points) {
            fpr.push_back(p.fpr);
            tpr.push_back(p.tpr);
        }
        svg::Chart chart;
        chart.title = "ROC (AUC " + csv_num(report.roc->auc).substr(0, 6) + ")";
        chart.x_label = "false positive rate";
        chart.y_label = "true positive rate";
        out.write("roc.svg", svg::line_plot(fpr, tpr, chart));
    }
    out.write("summary.csv", summary_csv(report));
}

/// Shared pipeline/protocol flags; --config presets the searched five from a
/// best_config.json, explicit flags still win.
struct RunFlags {
    std::string expression, clinical, out_dir, eval_ids_file, config_file;
    std::uint64_t seed = 0;
    int window = 5;
    double sigma = 1.0;
    std::string scale_mode = "multi";
    double fixed_scale = 1.0;
    int rank = 7;
    double train_frac = 0.8;
    int hidden = 7;
    double threshold = 0.84;
    double learning_rate = 0.05;
    int max_epochs = 5000;
    int patience = 200;
    std::string protocol = "loo";
    int undersample = 0; // 0 = keep all
    int jobs = 1;
    bool no_expand = false;
    bool no_standardize = false;

    PipelineConfig pipeline_config() const {
        PipelineConfig config;
        config.cwt.window = window;
        config.cwt.hat.sigma = sigma;
        config.cwt.mode = scale_mode == "fixed" ? ScaleMode::Fixed : ScaleMode::Multi;
        config.cwt.fixed_scale = fixed_scale;
        config.rank = rank;
        config.hidden_units = hidden;
        config.threshold = threshold;
        config.learning_rate = learning_rate;
        config.max_epochs = max_epochs;
        config.patience = patience;
        config.expand_compress = !no_expand;
        config.standardize = !no_standardize;
        return config;
    }

    EvalProtocol eval_protocol() const {
        EvalProtocol p;
        p.kind = protocol == "regular" ? ProtocolKind::RegularSplit : ProtocolKind::LeaveOneOut;
        p.p_train = train_frac;
        if (undersample > 0) p.undersample_high_risk_to = undersample;
        p.seed = seed;
        p.jobs = jobs;
        return p;
    }
};

inline void add_input_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--expression", flags.expression, "expression CSV path")->required();
    cmd->add_option("--clinical", flags.clinical, "clinical CSV path")->required();
}

inline void add_pipeline_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--window", flags.window, "wavelet window size T");
    cmd->add_option("--sigma", flags.sigma, "mother wavelet width");
    cmd->add_option("--scale-mode", flags.scale_mode, "multi|fixed")
        ->check(CLI::IsMember({"multi", "fixed"}));
    cmd->add_option("--fixed-scale", flags.fixed_scale, "scale used by --scale-mode fixed");
    cmd->add_option("--rank", flags.rank, "retained singular vectors k");
    cmd->add_option("--train-frac", flags.train_frac, "training fraction P of each class");
    cmd->add_option("--hidden", flags.hidden, "hidden units h (h <= k)");
    cmd->add_option("--threshold", flags.threshold, "classification threshold Th");
    cmd->add_option("--learning-rate", flags.learning_rate, "gradient-descent step");
    cmd->add_option("--max-epochs", flags.max_epochs, "training epoch cap");
    cmd->add_option("--patience", flags.patience, "early-stopping patience");
    cmd->add_option("--jobs", flags.jobs, "parallel folds");
    cmd->add_flag("--no-expand", flags.no_expand, "skip wavelet expansion + compression");
    cmd->add_flag("--no-standardize", flags.no_standardize, "skip feature standardization");
    cmd->add_option("--config", flags.config_file,
                    "best_config.json presetting window/rank/train-frac/hidden/threshold");
}

inline void add_protocol_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--protocol", flags.protocol, "loo|regular")
        ->check(CLI::IsMember({"loo", "regular"}));
    cmd->add_option("--undersample", flags.undersample,
                    "regular protocol: retained high-risk training count");
    cmd->add_option("--eval-ids", flags.eval_ids_file,
                    "regular protocol: file of patient ids to score, one per line");
}

inline void apply_config_file(CLI::App* cmd, RunFlags& flags) {
    if (flags.config_file.empty()) return;
    std::ifstream in(flags.config_file);
    if (!in) throw Error("cannot open file: " + flags.config_file);
    nlohmann::json j;
    in >> j;
    auto preset = [&](const char* flag, auto& slot, const char* key) {
        if (cmd->count(flag) == 0 && j.contains(key)) slot = j[key];
    };
    preset("--window", flags.window, "window");
    preset("--rank", flags.rank, "rank");
    preset("--train-frac", flags.train_frac, "train_frac");
    preset("--hidden", flags.hidden, "hidden");
    preset("--threshold", flags.threshold, "threshold");
}

inline std::vector<Eigen::Index> resolve_eval_ids(const Cohort& cohort,
                                                  const std::string& ids_file) {
    riskwave::detail::require(!ids_file.empty(),
                              "regular protocol needs --eval-ids (explicit evaluation set)");
    std::ifstream in(ids_file);
    if (!in) throw Error("cannot open file: " + ids_file);
    std::vector<Eigen::Index> indices;
    std::string id;
    while (std::getline(in, id)) {
        if (!id.empty() && id.back() == '\r') id.pop_back();
        if (id.empty()) continue;
        bool found = false;
        for (Eigen::Index j = 0; j < cohort.patient_count(); ++j)
            if (cohort.patients[static_cast<std::size_t>(j)].patient_id == id) {
                indices.push_back(j);
                found = true;
                break;
            }
        if (!found) throw Error("evaluation id '" + id + "' not found in cohort");
    }
    return indices;
}

inline std::vector<RiskClass> survival_classes(const CohortLabels& labeled) {
    std::vector<RiskClass> classes;
    classes.reserve(labeled.labels.size());
    for (const auto& l : labeled.labels) classes.push_back(l.value);
    return classes;
}

} // namespace detail

/// Parses argv (without the program name) and executes one subcommand.
/// Returns the process exit code; errors come out as a single line on `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App cli{"wavelet/SVD risk-classification pipeline"};
    cli.require_subcommand(1);

    detail::RunFlags flags;
    // simulate-only knobs
    int sim_genes = 40, sim_patients = 100;
    double sim_frac = 0.17;
    SpectralEffect effect;
    bool fixed_sign = false;

    auto* simulate = cli.add_subcommand("simulate", "write a seeded synthetic cohort");
    simulate->add_option("--out", flags.out_dir, "output directory")->required();
    simulate->add_option("--seed", flags.seed, "master seed");
    simulate->add_option("--genes", sim_genes, "gene count m");
    simulate->add_option("--patients", sim_patients, "patient count n");
    simulate->add_option("--low-risk-frac", sim_frac, "low-risk fraction");
    simulate->add_option("--amplitude", effect.amplitude, "bump amplitude");
    simulate->add_option("--bump-width", effect.bump_width, "bump sd in gene units");
    simulate->add_option("--band-lo", effect.band_lo_frac, "bump center band lower fraction");
    simulate->add_option("--band-hi", effect.band_hi_frac, "bump center band upper fraction");
    simulate->add_option("--noise-sigma", effect.noise_sigma, "i.i.d. noise sd");
    simulate->add_option("--censor-frac", effect.censored_fraction, "censored fraction");
    simulate->add_flag("--fixed-sign", fixed_sign, "do not randomize the bump sign");

    auto* label = cli.add_subcommand("label", "Kaplan-Meier fit and risk labels");
    detail::add_input_flags(label, flags);
    label->add_option("--out", flags.out_dir, "output directory")->required();

    auto* featurize = cli.add_subcommand("featurize", "wavelet stack and compressed features");
    detail::add_input_flags(featurize, flags);
    featurize->add_option("--out", flags.out_dir, "output directory")->required();
    bool dump_stack = false;
    featurize->add_option("--window", flags.window, "wavelet window size T");
    featurize->add_option("--sigma", flags.sigma, "mother wavelet width");
    featurize->add_option("--scale-mode", flags.scale_mode, "multi|fixed")
        ->check(CLI::IsMember({"multi", "fixed"}));
    featurize->add_option("--fixed-scale", flags.fixed_scale, "scale for --scale-mode fixed");
    featurize->add_option("--rank", flags.rank, "retained singular vectors k");
    featurize->add_flag("--dump-stack", dump_stack, "also write the full Tm x n stack");

    auto* evaluate = cli.add_subcommand("evaluate", "run an evaluation protocol");
    detail::add_input_flags(evaluate, flags);
    evaluate->add_option("--out", flags.out_dir, "output directory")->required();
    detail::add_pipeline_flags(evaluate, flags);
    detail::add_protocol_flags(evaluate, flags);

    auto* search = cli.add_subcommand("search", "grid search over T, k, P, h, Th");
    detail::add_input_flags(search, flags);
    search->add_option("--out", flags.out_dir, "output directory")->required();
    SearchSpace space = default_search_space();
    std::string objective = "youden";
    double fpr_bound = 0.1, combo_budget = 0.0;
    search->add_option("--windows", space.window_values, "window sizes T");
    search->add_option("--ranks", space.rank_values, "ranks k");
    search->add_option("--train-fracs", space.train_fractions, "training fractions P");
    search->add_option("--hiddens", space.hidden_values, "hidden unit counts h");
    search->add_option("--thresholds", space.threshold_values, "thresholds Th");
    search->add_option("--objective", objective, "youden|tpr-at-fpr")
        ->check(CLI::IsMember({"youden", "tpr-at-fpr"}));
    search->add_option("--fpr-bound", fpr_bound, "bound for --objective tpr-at-fpr");
    search->add_option("--combo-budget", combo_budget, "seconds per combination, 0 = unlimited");
    search->add_option("--seed", flags.seed, "master seed");
    search->add_option("--sigma", flags.sigma, "mother wavelet width");
    search->add_option("--scale-mode", flags.scale_mode, "multi|fixed")
        ->check(CLI::IsMember({"multi", "fixed"}));
    search->add_option("--learning-rate", flags.learning_rate, "gradient-descent step");
    search->add_option("--max-epochs", flags.max_epochs, "training epoch cap");
    search->add_option("--patience", flags.patience, "early-stopping patience");
    search->add_option("--jobs", flags.jobs, "parallel folds");
    detail::add_protocol_flags(search, flags);

    auto* pipeline = cli.add_subcommand("pipeline", "labels, evaluation and model bundle in one run");
    detail::add_input_flags(pipeline, flags);
    pipeline->add_option("--out", flags.out_dir, "output directory")->required();
    detail::add_pipeline_flags(pipeline, flags);
    detail::add_protocol_flags(pipeline, flags);

    std::vector<const char*> argv;
    argv.push_back("riskwave");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        cli.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return cli.exit(e, out, err);
    }

    try {
        if (simulate->parsed()) {
            effect.random_sign = !fixed_sign;
            const SyntheticCohort synth =
                generate_synthetic_cohort(sim_genes, sim_patients, sim_frac, effect, flags.seed);
            detail::OutputDir dir(flags.out_dir, "simulate", args, flags.seed);
            write_cohort(synth.cohort, dir.path("expression.csv"), dir.path("clinical.csv"));
            dir.record_existing("expression.csv");
            dir.record_existing("clinical.csv");
            std::string truth = "patient_id,true_label\n";
            for (std::size_t i = 0; i < synth.true_labels.size(); ++i)
                truth += synth.cohort.patients[i].patient_id + "," +
                         to_string(synth.true_labels[i].value) + "\n";
            dir.write("true_labels.csv", truth);
            dir.finish();
            out << "wrote synthetic cohort (" << sim_genes << " genes x " << sim_patients
                << " patients) to " << flags.out_dir << "\n";
            return 0;
        }

        if (label->parsed()) {
            const Cohort cohort = load_cohort(flags.expression, flags.clinical);
            const CohortLabels labeled = label_cohort(cohort);
            detail::OutputDir dir(flags.out_dir, "label", args, flags.seed);
            dir.write("labels.csv", detail::labels_csv(cohort, labeled.labels));
            dir.write("km_curve.csv", detail::km_csv(labeled.curve));
            svg::Chart chart;
            chart.title = "Kaplan-Meier CDF";
            chart.x_label = "survival time (days)";
            chart.y_label = "P(ST <= t)";
            dir.write("km_curve.svg",
                      svg::step_plot(labeled.curve.event_times, labeled.curve.cdf, chart));
            dir.finish();
            Eigen::Index low = 0;
            for (const auto& l : labeled.labels)
                if (l.value == RiskClass::LowRisk) ++low;
            out << "labeled " << labeled.labels.size() << " patients: " << low << " low-risk, "
                << (labeled.labels.size() - static_cast<std::size_t>(low)) << " high-risk\n";
            return 0;
        }

        if (featurize->parsed()) {
            const Cohort cohort = load_cohort(flags.expression, flags.clinical);
            const PipelineConfig config = flags.pipeline_config();
            const WaveletStack stack = expand_cohort(cohort.expression, config.cwt);
            const CompressedFeatures compressed =
                fit_compressor(stack.coefficients, config.rank, cohort.gene_count());
            detail::OutputDir dir(flags.out_dir, "featurize", args, flags.seed);
            std::vector<std::string> ids;
            for (const auto& p : cohort.patients) ids.push_back(p.patient_id);
            dir.write("features.csv", detail::matrix_csv(compressed.features, "pc", ids));
            std::string sv = "index,singular_value\n";
            for (Eigen::Index i = 0; i < compressed.singular_values.size(); ++i)
                sv += std::to_string(i + 1) + "," +
                      detail::csv_num(compressed.singular_values(i)) + "\n";
            dir.write("singular_values.csv", sv);
            if (dump_stack)
                dir.write("wavelet_stack.csv", detail::matrix_csv(stack.coefficients, "w", ids));
            dir.finish();
            out << "featurized " << cohort.patient_count() << " patients: stack "
                << stack.coefficients.rows() << " x " << stack.coefficients.cols()
                << ", compressed to rank " << config.rank << "\n";
            return 0;
        }

        if (evaluate->parsed() || pipeline->parsed()) {
            CLI::App* active = evaluate->parsed() ? evaluate : pipeline;
            detail::apply_config_file(active, flags);
            const Cohort cohort = load_cohort(flags.expression, flags.clinical);
            const CohortLabels labeled = label_cohort(cohort);
            const std::vector<RiskClass> classes = detail::survival_classes(labeled);
            const PipelineConfig config = flags.pipeline_config();
            const EvalProtocol protocol = flags.eval_protocol();

            detail::OutputDir dir(flags.out_dir, active->get_name(), args, flags.seed);
            if (pipeline->parsed()) {
                dir.write("labels.csv", detail::labels_csv(cohort, labeled.labels));
                dir.write("km_curve.csv", detail::km_csv(labeled.curve));
                svg::Chart chart;
                chart.title = "Kaplan-Meier CDF";
                chart.x_label = "survival time (days)";
                chart.y_label = "P(ST <= t)";
                dir.write("km_curve.svg",
                          svg::step_plot(labeled.curve.event_times, labeled.curve.cdf, chart));
            }

            EvalReport report;
            if (protocol.kind == ProtocolKind::LeaveOneOut)
                report = leave_one_out(cohort, classes, config, protocol);
            else
                report = regular_split(cohort, classes, config, protocol,
                                       detail::resolve_eval_ids(cohort, flags.eval_ids_file));
            detail::emit_report(dir, report);

            if (pipeline->parsed()) {
                // final model trained on the whole cohort, for reuse
                const FittedPipeline fitted = fit_pipeline(
                    cohort.expression, classes, protocol.p_train, protocol.seed, config);
                save_pipeline(fitted, dir.path("model.bundle"));
                dir.record_existing("model.bundle");
            }
            dir.finish();
            if (report.roc)
                out << "scored " << report.per_patient_scores.size() << " patients, AUC "
                    << report.roc->auc << "\n";
            else
                out << "scored " << report.per_patient_scores.size()
                    << " patients (single-class, no ROC)\n";
            return 0;
        }

        if (search->parsed()) {
            const Cohort cohort = load_cohort(flags.expression, flags.clinical);
            const CohortLabels labeled = label_cohort(cohort);
            const std::vector<RiskClass> classes = detail::survival_classes(labeled);
            space.seed = flags.seed;
            EvalProtocol protocol = flags.eval_protocol();
            SearchOptions options;
            options.objective = objective == "youden" ? SearchObjective::YoudenMax
                                                      : SearchObjective::TprAtFprBound;
            options.fpr_bound = fpr_bound;
            options.combo_time_budget_sec = combo_budget;
            options.base = flags.pipeline_config();
            std::vector<Eigen::Index> eval_indices;
            if (protocol.kind == ProtocolKind::RegularSplit)
                eval_indices = detail::resolve_eval_ids(cohort, flags.eval_ids_file);

            const SearchResult result =
                grid_search(cohort, classes, space, protocol, options, eval_indices);

            detail::OutputDir dir(flags.out_dir, "search", args, flags.seed);
            std::string board = "T,k,P,h,Th,tpr,fpr,auc,youden,status\n";
            auto row_line = [](const ParameterTuple& t, double tpr, double fpr, double auc,
                               double youden, const char* status) {
                return std::to_string(t.window) + "," + std::to_string(t.rank) + "," +
                       detail::csv_num(t.train_frac) + "," + std::to_string(t.hidden) + "," +
                       detail::csv_num(t.threshold) + "," + detail::csv_num(tpr) + "," +
                       detail::csv_num(fpr) + "," + detail::csv_num(auc) + "," +
                       detail::csv_num(youden) + "," + status + "\n";
            };
            for (const auto& r : result.leaderboard)
                board += row_line(r.tuple, r.tpr, r.fpr, r.auc, r.youden, "ok");
            for (const auto& f : result.failures)
                board += row_line(f.tuple, std::nan(""), std::nan(""), std::nan(""),
                                  std::nan(""),
                                  f.status == ComboStatus::TimedOut ? "timed_out" : "failed");
            dir.write("leaderboard.csv", board);

            nlohmann::json best;
            best["window"] = result.best.window;
            best["rank"] = result.best.rank;
            best["train_frac"] = result.best.train_frac;
            best["hidden"] = result.best.hidden;
            best["threshold"] = result.best.threshold;
            best["tpr"] = result.best_tpr;
            best["fpr"] = result.best_fpr;
            best["auc"] = result.best_auc;
            dir.write("best_config.json", best.dump(2) + "\n");
            dir.finish();
            out << "searched " << (result.leaderboard.size() + result.failures.size())
                << " combinations; best T=" << result.best.window << " k=" << result.best.rank
                << " P=" << result.best.train_frac << " h=" << result.best.hidden
                << " Th=" << result.best.threshold << " (tpr " << result.best_tpr << ", fpr "
                << result.best_fpr << ", auc " << result.best_auc << ")\n";
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace app
} // namespace riskwave
