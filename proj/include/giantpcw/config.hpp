// sectioned key = value configuration with declared units
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace giantpcw {

struct ConfigError : std::runtime_error {
    int line{0};
    ConfigError(const std::string& source, int line_no, const std::string& msg)
        : std::runtime_error(source + (line_no > 0 ? ":" + std::to_string(line_no) : "") + ": " + msg),
          line(line_no) {}
};

enum class Dim { none, integer, text, length, capacitance, inductance, wavenumber, rate, time };

struct KeySpec {
    Dim dim{Dim::none};
    std::string default_text;  // empty: required
    bool list{false};
};

struct SectionSpec {
    bool required{false};
    std::map<std::string, KeySpec> keys;
};

using Schema = std::map<std::string, SectionSpec>;

struct Entry {
    std::vector<double> values;
    std::string unit;
    std::string text;
    int line{0};  // 0: default
};

// Scales for units that depend on the computed system.
struct UnitContext {
    double lambda_m{0.0};               // m
    double km{0.0};                     // rad/m
    double Cg{0.0};                     // F
    std::optional<double> L_eff;        // m
    std::optional<double> gap;          // rad/s
    double J0{1.0};
};

namespace detail {

inline const std::map<std::string, double>& unit_table(Dim d) {
    static const double tau = 2 * std::numbers::pi;
    static const std::map<Dim, std::map<std::string, double>> t = {
        {Dim::length, {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"lambda_m", 0}, {"L_eff", 0}}},
        {Dim::capacitance, {{"F", 1.0}, {"pF", 1e-12}, {"fF", 1e-15}, {"aF", 1e-18}, {"Cg", 0}}},
        {Dim::inductance, {{"H", 1.0}, {"nH", 1e-9}, {"pH", 1e-12}}},
        {Dim::wavenumber, {{"rad/m", 1.0}, {"cyc/m", tau}, {"km", 0}}},
        {Dim::rate,
         {{"rad/s", 1.0}, {"Hz", tau}, {"kHz", tau * 1e3}, {"MHz", tau * 1e6}, {"GHz", tau * 1e9},
          {"gap", 0}, {"J0", 0}}},
        {Dim::time, {{"s", 1.0}, {"us", 1e-6}, {"ns", 1e-9}, {"1/J0", 0}}},
    };
    static const std::map<std::string, double> none = {{"", 1.0}, {"1", 1.0}};
    auto it = t.find(d);
    return it == t.end() ? none : it->second;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::optional<double> parse_number(const std::string& s) {
    double v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// "1, 2, 3 unit" -> numbers and unit.
inline bool split_values(const std::string& raw, std::vector<double>& vals, std::string& unit) {
    std::string nums = trim(raw);
    unit.clear();
    const auto last = nums.find_last_of(" \t");
    if (last != std::string::npos) {
        const std::string tok = nums.substr(last + 1);
        if (!parse_number(tok)) unit = tok, nums = trim(nums.substr(0, last));
    }
    std::stringstream ss(nums);
    std::string tok;
    vals.clear();
    while (std::getline(ss, tok, ',')) {
        auto v = parse_number(trim(tok));
        if (!v) return false;
        vals.push_back(*v);
    }
    return !vals.empty();
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
    return h;
}

}  // namespace detail

class Config {
public:
    std::string source;
    std::map<std::string, std::map<std::string, Entry>> sections;
    Schema schema;

    bool has(const std::string& sec) const { return sections.count(sec) > 0; }

    const Entry& entry(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end()) throw ConfigError(source, 0, "missing section [" + sec + "]");
        auto k = s->second.find(key);
        if (k == s->second.end()) throw ConfigError(source, 0, "missing key " + sec + "." + key);
        return k->second;
    }

    // Value in SI (rates in rad/s, wavenumbers in rad/m).
    double get(const std::string& sec, const std::string& key, const UnitContext& ctx = {},
               std::size_t i = 0) const {
        const auto& e = entry(sec, key);
        if (i >= e.values.size()) throw ConfigError(source, e.line, sec + "." + key + " has too few values");
        return e.values[i] * scale(sec, key, e, ctx);
    }

    std::vector<double> get_list(const std::string& sec, const std::string& key,
                                 const UnitContext& ctx = {}) const {
        const auto& e = entry(sec, key);
        std::vector<double> out;
        const double s = scale(sec, key, e, ctx);
        for (double v : e.values) out.push_back(v * s);
        return out;
    }

    int get_int(const std::string& sec, const std::string& key) const {
        const auto& e = entry(sec, key);
        return static_cast<int>(std::lround(e.values.at(0)));
    }

    const std::string& get_text(const std::string& sec, const std::string& key) const {
        return entry(sec, key).text;
    }

    const std::string& unit(const std::string& sec, const std::string& key) const {
        return entry(sec, key).unit;
    }

    // Canonical text with defaults filled in; parses back to the same config.
    std::string echo() const {
        std::ostringstream os;
        for (const auto& [sec, keys] : sections) {
            os << "[" << sec << "]\n";
            for (const auto& [k, e] : keys) {
                os << k << " = ";
                if (!e.text.empty()) {
                    os << e.text;
                } else {
                    for (std::size_t i = 0; i < e.values.size(); ++i) {
                        char buf[32];
                        std::snprintf(buf, sizeof buf, "%.17g", e.values[i]);
                        os << (i ? ", " : "") << buf;
                    }
                    if (!e.unit.empty()) os << " " << e.unit;
                }
                os << "\n";
            }
        }
        return os.str();
    }

    std::string hash() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(detail::fnv1a(echo())));
        return buf;
    }

private:
    double scale(const std::string& sec, const std::string& key, const Entry& e,
                 const UnitContext& ctx) const {
        const Dim d = schema.at(sec).keys.at(key).dim;
        const auto& tab = detail::unit_table(d);
        const double f = tab.at(e.unit);
        if (f != 0.0) return f;
        auto need = [&](std::optional<double> v, const char* what) {
            if (!v || !(*v > 0))
                throw ConfigError(source, e.line, "unit " + e.unit + " needs " + what + " which is not available here");
            return *v;
        };
        if (e.unit == "lambda_m") return need(ctx.lambda_m > 0 ? std::optional(ctx.lambda_m) : std::nullopt, "lambda_m");
        if (e.unit == "L_eff") return need(ctx.L_eff, "L_eff");
        if (e.unit == "km") return need(ctx.km > 0 ? std::optional(ctx.km) : std::nullopt, "km");
        if (e.unit == "Cg") return need(ctx.Cg > 0 ? std::optional(ctx.Cg) : std::nullopt, "Cg");
        if (e.unit == "gap") return need(ctx.gap, "the band gap");
        if (e.unit == "J0" ) return ctx.J0;
        if (e.unit == "1/J0") return 1.0 / ctx.J0;
        throw ConfigError(source, e.line, "unit " + e.unit + " not resolvable");
    }
};

inline Entry parse_entry(const std::string& source, int line, const std::string& key,
                         const KeySpec& spec, const std::string& raw) {
    Entry e;
    e.line = line;
    if (spec.dim == Dim::text) {
        e.text = detail::trim(raw);
        if (e.text.empty()) throw ConfigError(source, line, key + " needs a value");
        return e;
    }
    if (!detail::split_values(raw, e.values, e.unit))
        throw ConfigError(source, line, "cannot read a number from '" + detail::trim(raw) + "' for " + key);
    if (!spec.list && e.values.size() != 1)
        throw ConfigError(source, line, key + " takes a single value");
    const auto& tab = detail::unit_table(spec.dim);
    if (!tab.count(e.unit)) {
        std::string allowed;
        for (const auto& [u, f] : tab)
            if (!u.empty()) allowed += (allowed.empty() ? "" : ", ") + u;
        if (e.unit.empty())
            throw ConfigError(source, line, key + " needs a unit (one of " + allowed + ")");
        throw ConfigError(source, line, "unit '" + e.unit + "' is not valid for " + key +
                                            (allowed.empty() ? " (dimensionless)" : " (use " + allowed + ")"));
    }
    if (spec.dim == Dim::integer)
        for (double v : e.values)
            if (v != std::round(v)) throw ConfigError(source, line, key + " must be an integer");
    return e;
}

inline Config parse_config(const std::string& text, const Schema& schema,
                           const std::string& source = "<config>") {
    Config c;
    c.source = source;
    c.schema = schema;
    std::istringstream in(text);
    std::string line, current;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        const auto hashpos = line.find('#');
        if (hashpos != std::string::npos) line.erase(hashpos);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(source, no, "malformed section header");
            current = detail::trim(line.substr(1, line.size() - 2));
            if (!schema.count(current)) throw ConfigError(source, no, "unknown section [" + current + "]");
            if (c.sections.count(current)) throw ConfigError(source, no, "duplicate section [" + current + "]");
            c.sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(source, no, "expected key = value");
        if (current.empty()) throw ConfigError(source, no, "key outside any section");
        const std::string key = detail::trim(line.substr(0, eq));
        const auto& keys = schema.at(current).keys;
        auto ks = keys.find(key);
        if (ks == keys.end()) throw ConfigError(source, no, "unknown key '" + key + "' in [" + current + "]");
        if (c.sections[current].count(key)) throw ConfigError(source, no, "duplicate key '" + key + "'");
        c.sections[current][key] = parse_entry(source, no, key, ks->second, line.substr(eq + 1));
    }
    for (const auto& [sec, spec] : schema) {
        if (!c.sections.count(sec)) {
            if (spec.required) throw ConfigError(source, 0, "missing required section [" + sec + "]");
            bool all_default = true;
            for (const auto& [k, ks] : spec.keys) all_default = all_default && !ks.default_text.empty();
            if (!all_default) continue;
            c.sections[sec];
        }
        auto& have = c.sections[sec];
        for (const auto& [k, ks] : spec.keys) {
            if (have.count(k)) continue;
            if (ks.default_text.empty())
                throw ConfigError(source, 0, "missing required key " + sec + "." + k);
            have[k] = parse_entry(source, 0, k, ks, ks.default_text);
        }
    }
    return c;
}

inline Config load_config(const std::string& path, const Schema& schema) {
    std::ifstream f(path);
    if (!f) throw ConfigError(path, 0, "cannot open config file");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), schema, path);
}

}  // namespace giantpcw
