#ifndef HMME_IO_HPP
#define HMME_IO_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hmme/errors.hpp"
#include "hmme/model.hpp"

namespace hmme::io {

/// A design read from CSV plus its group labels in first-appearance
/// order; entry i labels the group behind v[i] in solver output.
struct LabeledDesign {
    GroupedDesign<double> design;
    std::vector<std::int64_t> group_labels;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

inline double parse_double(std::string_view field, std::int64_t line_number) {
    double value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc{} || result.ptr != last || field.empty()) {
        throw ParseError("line " + std::to_string(line_number) + ": expected a number, got '" +
                             std::string(field) + "'",
                         line_number);
    }
    if (!std::isfinite(value)) {
        throw ParseError("line " + std::to_string(line_number) + ": non-finite value '" +
                             std::string(field) + "'",
                         line_number);
    }
    return value;
}

inline std::int64_t parse_label(std::string_view field, std::int64_t line_number) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc{} || result.ptr != last || field.empty() || value <= 0) {
        throw ParseError("line " + std::to_string(line_number) +
                             ": group label must be a positive integer, got '" +
                             std::string(field) + "'",
                         line_number);
    }
    return value;
}

}  // namespace detail

/// Shortest decimal representation that round-trips back to the same
/// double.
inline std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

/// Reads the `group,y,x1,...,xp` CSV format. Rows may appear in any
/// order; groups are indexed by first appearance. Errors carry the
/// offending 1-based line number.
inline LabeledDesign read_design_csv(std::istream& in) {
    std::string line;
    std::int64_t line_number = 0;

    if (!std::getline(in, line)) {
        throw ParseError("line 1: missing header", 1);
    }
    line_number = 1;
    const auto header = detail::split_fields(line);
    if (header.size() < 3 || header[0] != "group" || header[1] != "y") {
        throw ParseError("line 1: header must be group,y,x1,...,xp", 1);
    }
    const std::size_t p = header.size() - 2;
    for (std::size_t c = 0; c < p; ++c) {
        if (header[c + 2] != "x" + std::to_string(c + 1)) {
            throw ParseError("line 1: header must be group,y,x1,...,xp", 1);
        }
    }

    std::vector<std::int64_t> labels;
    std::unordered_map<std::int64_t, std::size_t> label_to_index;
    std::vector<std::vector<double>> ys;          // per group
    std::vector<std::vector<double>> xs;          // per group, row-major m_i * p

    while (std::getline(in, line)) {
        ++line_number;
        if (detail::trim(line).empty()) continue;  // tolerate a trailing blank line
        const auto fields = detail::split_fields(line);
        if (fields.size() != p + 2) {
            throw ParseError("line " + std::to_string(line_number) + ": expected " +
                                 std::to_string(p + 2) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_number);
        }
        const std::int64_t label = detail::parse_label(fields[0], line_number);
        const double y = detail::parse_double(fields[1], line_number);

        auto [it, inserted] = label_to_index.try_emplace(label, labels.size());
        if (inserted) {
            labels.push_back(label);
            ys.emplace_back();
            xs.emplace_back();
        }
        const std::size_t g = it->second;
        ys[g].push_back(y);
        for (std::size_t c = 0; c < p; ++c) {
            xs[g].push_back(detail::parse_double(fields[c + 2], line_number));
        }
    }
    if (labels.empty()) {
        throw ParseError("line " + std::to_string(line_number + 1) + ": no data rows",
                         line_number + 1);
    }

    std::vector<GroupBlock<double>> groups;
    groups.reserve(labels.size());
    for (std::size_t g = 0; g < labels.size(); ++g) {
        const Index rows = static_cast<Index>(ys[g].size());
        GroupBlock<double> blk;
        blk.covariates.resize(rows, static_cast<Index>(p));
        blk.responses.resize(rows);
        for (Index r = 0; r < rows; ++r) {
            blk.responses(r) = ys[g][static_cast<std::size_t>(r)];
            for (std::size_t c = 0; c < p; ++c) {
                blk.covariates(r, static_cast<Index>(c)) = xs[g][static_cast<std::size_t>(r) * p + c];
            }
        }
        groups.push_back(std::move(blk));
    }
    return LabeledDesign{GroupedDesign<double>(std::move(groups)), std::move(labels)};
}

inline LabeledDesign read_design_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return read_design_csv(in);
}

/// Writes a design in the CSV format with full-precision values. When no
/// labels are given, groups are labeled 1..n.
inline void write_design_csv(std::ostream& out, const GroupedDesign<double>& design,
                             const std::vector<std::int64_t>& labels = {}) {
    const Index n = design.group_count();
    const Index p = design.covariate_count();
    out << "group,y";
    for (Index c = 0; c < p; ++c) out << ",x" << (c + 1);
    out << '\n';
    for (Index i = 0; i < n; ++i) {
        const std::int64_t label =
            labels.empty() ? static_cast<std::int64_t>(i + 1) : labels[static_cast<std::size_t>(i)];
        const auto& blk = design.group(i);
        for (Index r = 0; r < blk.covariates.rows(); ++r) {
            out << label << ',' << format_double(blk.responses(r));
            for (Index c = 0; c < p; ++c) {
                out << ',' << format_double(blk.covariates(r, c));
            }
            out << '\n';
        }
    }
}

inline void write_design_csv_file(const std::string& path, const GroupedDesign<double>& design,
                                  const std::vector<std::int64_t>& labels = {}) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_design_csv(out, design, labels);
    if (!out.good()) {
        throw IoError("failed writing '" + path + "'");
    }
}

inline nlohmann::json vector_to_json(const VectorX<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

/// Solver output document. Balancedness is detected, not declared: a
/// common group size is reported as "m", otherwise the per-group sizes
/// are listed as "m_i".
inline nlohmann::json solution_to_json(const MixedSolution<double>& solution,
                                       const GroupedDesign<double>& design, double lambda,
                                       const std::vector<std::int64_t>& group_labels = {}) {
    nlohmann::json doc;
    doc["beta"] = vector_to_json(solution.beta);
    doc["v"] = vector_to_json(solution.v);
    doc["residual_inf_norm"] = solution.residual_inf_norm;
    doc["wall_time_seconds"] = solution.wall_time_seconds;
    doc["n"] = design.group_count();
    if (design.balanced()) {
        doc["m"] = design.common_group_size();
    } else {
        nlohmann::json sizes = nlohmann::json::array();
        for (Index i = 0; i < design.group_count(); ++i) sizes.push_back(design.group_size(i));
        doc["m_i"] = sizes;
    }
    doc["p"] = design.covariate_count();
    doc["lambda"] = lambda;
    if (!group_labels.empty()) {
        doc["group_labels"] = group_labels;
    }
    return doc;
}

inline void write_json_file(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << doc.dump(2) << '\n';
    if (!out.good()) {
        throw IoError("failed writing '" + path + "'");
    }
}

}  // namespace hmme::io

#endif  // HMME_IO_HPP
