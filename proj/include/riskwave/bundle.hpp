// bundle.hpp -- flat-text persistence of a fitted pipeline (compression
// state, feature scale, network parameters) so a trained model can be
// re-applied without retraining
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "riskwave/dataio.hpp"
#include "riskwave/pipeline.hpp"

namespace riskwave {
namespace detail {

inline void write_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& M) {
    out << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            out << (c ? " " : "") << full_precision(M(r, c));
        out << '\n';
    }
}

inline Eigen::MatrixXd read_matrix(std::istream& in, const std::string& expect) {
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    in >> name >> rows >> cols;
    if (!in || name != expect)
        throw Error("bundle: expected section '" + expect + "', found '" + name + "'");
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            if (!(in >> M(r, c))) throw Error("bundle: truncated section '" + expect + "'");
    return M;
}

} // namespace detail

inline void save_pipeline(const FittedPipeline& fitted, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    const auto& cfg = fitted.config;
    out << "riskwave-bundle 1\n";
    out << "config " << cfg.cwt.window << ' ' << detail::full_precision(cfg.cwt.hat.sigma) << ' '
        << (cfg.cwt.mode == ScaleMode::Multi ? "multi" : "fixed") << ' '
        << detail::full_precision(cfg.cwt.fixed_scale) << ' ' << cfg.rank << ' '
        << cfg.hidden_units << ' ' << detail::full_precision(cfg.threshold) << ' '
        << detail::full_precision(cfg.learning_rate) << ' ' << cfg.max_epochs << ' '
        << cfg.patience << ' ' << (cfg.expand_compress ? 1 : 0) << ' '
        << (cfg.standardize ? 1 : 0) << '\n';
    if (fitted.compressor) {
        out << "compressor 1\n";
        detail::write_matrix(out, "basis", fitted.compressor->basis);
        detail::write_matrix(out, "singular_values", fitted.compressor->singular_values);
        detail::write_matrix(out, "row_means", fitted.compressor->row_means);
    } else {
        out << "compressor 0\n";
        detail::write_matrix(out, "raw_row_means", fitted.raw_row_means);
    }
    detail::write_matrix(out, "feature_scale", fitted.feature_scale);
    detail::write_matrix(out, "weights_in", fitted.net.weights_in);
    detail::write_matrix(out, "bias_in", fitted.net.bias_in);
    detail::write_matrix(out, "weights_out", fitted.net.weights_out);
    out << "bias_out " << detail::full_precision(fitted.net.bias_out) << '\n';
    detail::require(static_cast<bool>(out), "write failed: " + path);
}

inline FittedPipeline load_pipeline(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::string tag, mode;
    int version = 0;
    in >> tag >> version;
    if (tag != "riskwave-bundle" || version != 1)
        throw Error("bundle: unrecognized header in " + path);

    FittedPipeline fitted;
    auto& cfg = fitted.config;
    int expand = 0, standardize = 0;
    in >> tag >> cfg.cwt.window >> cfg.cwt.hat.sigma >> mode >> cfg.cwt.fixed_scale >> cfg.rank >>
        cfg.hidden_units >> cfg.threshold >> cfg.learning_rate >> cfg.max_epochs >> cfg.patience >>
        expand >> standardize;
    if (!in || tag != "config") throw Error("bundle: malformed config section");
    cfg.cwt.mode = mode == "multi" ? ScaleMode::Multi : ScaleMode::Fixed;
    cfg.expand_compress = expand != 0;
    cfg.standardize = standardize != 0;

    int has_compressor = 0;
    in >> tag >> has_compressor;
    if (!in || tag != "compressor") throw Error("bundle: malformed compressor section");
    if (has_compressor) {
        CompressedFeatures cf;
        cf.basis = detail::read_matrix(in, "basis");
        cf.singular_values = detail::read_matrix(in, "singular_values");
        cf.row_means = detail::read_matrix(in, "row_means");
        fitted.compressor = std::move(cf);
    } else {
        fitted.raw_row_means = detail::read_matrix(in, "raw_row_means");
    }
    fitted.feature_scale = detail::read_matrix(in, "feature_scale");
    fitted.net.weights_in = detail::read_matrix(in, "weights_in");
    fitted.net.bias_in = detail::read_matrix(in, "bias_in");
    fitted.net.weights_out = detail::read_matrix(in, "weights_out");
    in >> tag >> fitted.net.bias_out;
    if (!in || tag != "bias_out") throw Error("bundle: malformed bias_out section");
    return fitted;
}

} // namespace riskwave
