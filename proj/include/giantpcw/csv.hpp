// tabular output: commented metadata header and full-precision rows
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "giantpcw/config.hpp"
#include "giantpcw/errors.hpp"

namespace giantpcw {

struct Table {
    std::string name;                                       // file stem
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> meta;  // key, value
    Warnings warnings;

    void add_row(std::vector<double> r) {
        if (r.size() != columns.size()) throw DomainError("row width does not match the columns");
        rows.push_back(std::move(r));
    }
    void note(const std::string& k, double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        meta.emplace_back(k, buf);
    }
    void note(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }
};

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join(const std::vector<std::string>& v, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

// Data rows only; every header line starts with '#'.
inline std::string csv_body(const Table& t) {
    std::string s;
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + format_number(r[i]);
        s += "\n";
    }
    return s;
}

inline std::string csv_text(const Table& t, const Config* cfg, const std::string& command,
                            const std::string& timestamp) {
    std::ostringstream os;
    os << "# giantpcw " << command << "\n";
    os << "# generated: " << timestamp << "\n";
    if (cfg) os << "# config_hash: " << cfg->hash() << "\n";
    os << "# columns: " << join(t.columns) << "\n";
    os << "# units: " << join(t.units) << "\n";
    for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << "\n";
    for (const auto& w : t.warnings) os << "# warning: " << w << "\n";
    if (cfg) {
        std::istringstream in(cfg->echo());
        std::string line;
        while (std::getline(in, line)) os << "# config| " << line << "\n";
    }
    os << csv_body(t);
    return os.str();
}

// Numeric matrix of a CSV written by csv_text.
inline std::vector<std::vector<double>> read_csv_matrix(const std::string& text) {
    std::vector<std::vector<double>> m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = detail::trim(tok);
            double v{};
            const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
                throw DomainError("non-numeric CSV field '" + tok + "'");
            row.push_back(v);
        }
        m.push_back(std::move(row));
    }
    return m;
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

}  // namespace giantpcw
