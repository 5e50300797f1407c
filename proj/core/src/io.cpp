#include "hetseg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hetseg/error.hpp"

namespace hetseg::io {

namespace {

using nlohmann::json;

std::vector<std::string> split_row(const std::string& line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            if (!cell.empty() || was_quoted)
                throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": stray quote");
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
            was_quoted = false;
        } else {
            cell += c;
        }
    }
    if (quoted) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unterminated quote");
    cells.push_back(std::move(cell));
    return cells;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round12(v);
}

json vector_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number(v(i)));
    return arr;
}

json test_object(const TestReport& r) {
    return json{
        {"method", std::string(to_string(r.statistic_kind))},
        {"kappa", number(r.kappa)},
        {"statistic", number(r.statistic)},
        {"argmax_index", r.argmax_index},
        {"argmax_t", number(r.argmax_t)},
        {"critical_value", number(r.critical_value)},
        {"alpha", number(r.alpha)},
        {"reject", r.reject},
        {"bandwidth", number(r.bandwidth)},
        {"n", r.n},
        {"d", r.d},
        {"cv_source", std::string(to_string(r.cv_source))},
        {"p_value", number(r.p_value)},
    };
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out << text << '\n';
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

std::string format_cell(double v) {
    if (!std::isfinite(v)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

double round12(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

Dataset read_csv(std::istream& in, const CsvSelection& selection) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        header = split_row(line, line_no);
        break;
    }
    if (header.empty()) throw Error(ErrorKind::ParseError, "missing header row");
    for (auto& h : header) h = trim(h);

    auto column_of = [&](const std::string& name) {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == name) return j;
        throw Error(ErrorKind::MissingColumn, "column '" + name + "' not found");
    };
    const std::size_t ycol = column_of(selection.response);
    std::vector<std::size_t> xcols;
    if (selection.covariates.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (j != ycol) xcols.push_back(j);
    } else {
        for (const auto& name : selection.covariates) xcols.push_back(column_of(name));
    }

    std::vector<double> yv;
    std::vector<std::vector<double>> xv;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++row_no;
        const auto cells = split_row(line, line_no);
        if (cells.size() != header.size())
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(header.size()) + " fields, found " +
                                                   std::to_string(cells.size()));
        auto value = [&](std::size_t j) {
            const auto v = parse_number(cells[j]);
            if (!v)
                throw Error(ErrorKind::NonNumericCell, "row " + std::to_string(row_no) + ", column '" + header[j] +
                                                           "': '" + cells[j] + "'");
            return *v;
        };
        yv.push_back(value(ycol));
        std::vector<double> xr;
        xr.reserve(xcols.size());
        for (auto j : xcols) xr.push_back(value(j));
        xv.push_back(std::move(xr));
    }
    if (yv.empty()) throw Error(ErrorKind::TooFewRows, "no data rows");

    const auto n = static_cast<Eigen::Index>(yv.size());
    const Eigen::Index offset = selection.intercept ? 1 : 0;
    const auto d = static_cast<Eigen::Index>(xcols.size()) + offset;
    if (d == 0) throw Error(ErrorKind::MissingColumn, "no covariates selected");
    Matrix x(n, d);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i) = yv[static_cast<std::size_t>(i)];
        if (selection.intercept) x(i, 0) = 1.0;
        for (std::size_t j = 0; j < xcols.size(); ++j)
            x(i, static_cast<Eigen::Index>(j) + offset) = xv[static_cast<std::size_t>(i)][j];
    }
    return Dataset(std::move(x), std::move(y), selection.intercept);
}

Dataset read_csv(const std::filesystem::path& path, const CsvSelection& selection) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    return read_csv(in, selection);
}

std::string report_json(const TestReport& report) {
    json doc{{"schema", kReportSchema}, {"kind", "test"}};
    doc.update(test_object(report));
    return doc.dump(2);
}

std::string report_json(const SegmentationResult& result) {
    const auto& cfg = result.config;
    json doc{{"schema", kReportSchema}, {"kind", "segmentation"}};
    doc["method"] = std::string(to_string(cfg.test.statistic));
    doc["kappa"] = number(cfg.test.kappa);
    doc["alpha"] = number(cfg.test.alpha);
    doc["cv_source"] = std::string(to_string(cfg.test.cv_source));
    doc["min_segment"] = cfg.min_segment.value_or(0);
    doc["max_depth"] = cfg.max_depth.value_or(0);
    doc["bonferroni"] = cfg.bonferroni;
    doc["change_points"] = result.change_points;
    json segs = json::array();
    for (const auto& s : result.segments)
        segs.push_back({{"start", s.start}, {"end", s.end}, {"beta", vector_json(s.beta)}, {"resid_sd", number(s.resid_sd)}});
    doc["segments"] = std::move(segs);
    json reps = json::array();
    for (const auto& t : result.reports) {
        json obj{{"start", t.start}, {"end", t.end}, {"depth", t.depth}};
        obj.update(test_object(t.report));
        reps.push_back(std::move(obj));
    }
    doc["reports"] = std::move(reps);
    doc["warnings"] = result.warnings;
    return doc.dump(2);
}

void write_report(const TestReport& report, const std::filesystem::path& path) { write_text(report_json(report), path); }

void write_report(const SegmentationResult& result, const std::filesystem::path& path) {
    write_text(report_json(result), path);
}

void emit_cusum_table(const CusumPath& path, const std::vector<std::optional<double>>& profile, std::ostream& out) {
    const std::size_t n = path.n();
    const std::size_t d = path.d();
    if (profile.size() != n + 1)
        throw Error(ErrorKind::DimensionMismatch, "profile length must be N + 1");
    out << "k,t";
    for (std::size_t j = 1; j <= d; ++j) out << ",z_" << j;
    out << ",standardized_stat\n";
    for (std::size_t k = 0; k <= n; ++k) {
        out << k << ',' << format_cell(path.t(k));
        const Vector row = path.row(k);
        for (std::size_t j = 0; j < d; ++j) out << ',' << format_cell(row(static_cast<Eigen::Index>(j)));
        out << ',';
        if (profile[k]) out << format_cell(*profile[k]);
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::IoError, "failed writing CUSUM table");
}

void emit_cusum_table(const CusumPath& path, const std::vector<std::optional<double>>& profile,
                      const std::filesystem::path& out) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw Error(ErrorKind::IoError, "cannot open " + out.string() + " for writing");
    emit_cusum_table(path, profile, file);
}

}  // namespace hetseg::io
