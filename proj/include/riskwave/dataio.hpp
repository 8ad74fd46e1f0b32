// dataio.hpp -- delimited-text ingest and emit for cohorts
//
// Expression file: header "gene_id,P001,P002,...", one row per gene.
// Clinical file:   header "patient_id,survival_time_days,censored",
//                  censored in {0,1}.
// Cohort columns follow the clinical file's row order; expression columns
// are matched to clinical rows by patient id.
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "riskwave/cohort.hpp"
#include "riskwave/common.hpp"

namespace riskwave {
namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline double parse_numeric_cell(const std::string& cell, const std::string& where) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw Error("non-numeric cell '" + cell + "' at " + where);
    return value;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

// shortest decimal digits that round-trip a double
inline std::string full_precision(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Reads and validates a cohort from the two CSV files. Every malformed cell
/// or id mismatch is reported with its location.
inline Cohort load_cohort(const std::string& expression_path, const std::string& clinical_path) {
    const auto expr_lines = detail::read_lines(expression_path);
    detail::require(expr_lines.size() >= 2, "expression file has no data rows: " + expression_path);
    const auto header = detail::split_csv_line(expr_lines[0]);
    detail::require(header.size() >= 2, "expression header needs a gene-id column and at least "
                                        "one patient column: " + expression_path);

    std::unordered_map<std::string, Eigen::Index> expr_col; // patient id -> column in file
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto [it, fresh] = expr_col.emplace(header[c], static_cast<Eigen::Index>(c - 1));
        if (!fresh)
            throw Error("duplicate patient id '" + header[c] + "' in expression header");
    }

    const Eigen::Index m = static_cast<Eigen::Index>(expr_lines.size()) - 1;
    const Eigen::Index n_file = static_cast<Eigen::Index>(header.size()) - 1;
    Eigen::MatrixXd file_matrix(m, n_file);
    std::vector<std::string> gene_ids;
    gene_ids.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto cells = detail::split_csv_line(expr_lines[static_cast<std::size_t>(r) + 1]);
        if (static_cast<Eigen::Index>(cells.size()) != n_file + 1)
            throw Error("expression row " + std::to_string(r + 1) + " has " +
                        std::to_string(cells.size() - 1) + " values, expected " +
                        std::to_string(n_file));
        gene_ids.push_back(cells[0]);
        for (Eigen::Index c = 0; c < n_file; ++c)
            file_matrix(r, c) = detail::parse_numeric_cell(
                cells[static_cast<std::size_t>(c) + 1],
                "row " + std::to_string(r + 1) + ", col " + std::to_string(c + 1));
    }

    const auto clin_lines = detail::read_lines(clinical_path);
    detail::require(clin_lines.size() >= 2, "clinical file has no data rows: " + clinical_path);
    const auto clin_header = detail::split_csv_line(clin_lines[0]);
    detail::require(clin_header.size() == 3 && clin_header[0] == "patient_id" &&
                        clin_header[1] == "survival_time_days" && clin_header[2] == "censored",
                    "clinical header must be patient_id,survival_time_days,censored: " +
                        clinical_path);

    Cohort cohort;
    cohort.gene_ids = std::move(gene_ids);
    cohort.expression.resize(m, static_cast<Eigen::Index>(clin_lines.size()) - 1);
    std::size_t used = 0;
    for (std::size_t r = 1; r < clin_lines.size(); ++r) {
        const auto cells = detail::split_csv_line(clin_lines[r]);
        if (cells.size() != 3)
            throw Error("clinical row " + std::to_string(r) + " needs 3 cells");
        ClinicalRecord record;
        record.patient_id = cells[0];
        record.survival_time_days =
            detail::parse_numeric_cell(cells[1], "clinical row " + std::to_string(r) + ", col 2");
        if (cells[2] == "0")
            record.censored = false;
        else if (cells[2] == "1")
            record.censored = true;
        else
            throw Error("clinical row " + std::to_string(r) +
                        ": censored must be 0 or 1, got '" + cells[2] + "'");

        const auto it = expr_col.find(record.patient_id);
        if (it == expr_col.end())
            throw Error("patient '" + record.patient_id +
                        "' in clinical file but not in expression header");
        cohort.expression.col(static_cast<Eigen::Index>(used++)) = file_matrix.col(it->second);
        cohort.patients.push_back(std::move(record));
        expr_col.erase(it);
    }
    if (!expr_col.empty()) {
        std::string missing;
        for (const auto& [id, _] : expr_col) {
            missing = id;
            break;
        }
        throw Error("patient '" + missing + "' in expression header but not in clinical file");
    }
    validate_cohort(cohort);
    return cohort;
}

/// Writes the two CSV files with enough digits for an exact round-trip.
inline void write_cohort(const Cohort& cohort, const std::string& expression_path,
                         const std::string& clinical_path) {
    validate_cohort(cohort);
    std::ofstream expr(expression_path);
    if (!expr) throw Error("cannot write file: " + expression_path);
    expr << "gene_id";
    for (const auto& p : cohort.patients) expr << ',' << p.patient_id;
    expr << '\n';
    for (Eigen::Index r = 0; r < cohort.expression.rows(); ++r) {
        expr << cohort.gene_ids[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < cohort.expression.cols(); ++c)
            expr << ',' << detail::full_precision(cohort.expression(r, c));
        expr << '\n';
    }
    detail::require(static_cast<bool>(expr), "write failed: " + expression_path);

    std::ofstream clin(clinical_path);
    if (!clin) throw Error("cannot write file: " + clinical_path);
    clin << "patient_id,survival_time_days,censored\n";
    for (const auto& p : cohort.patients)
        clin << p.patient_id << ',' << detail::full_precision(p.survival_time_days) << ','
             << (p.censored ? 1 : 0) << '\n';
    detail::require(static_cast<bool>(clin), "write failed: " + clinical_path);
}

} // namespace riskwave
