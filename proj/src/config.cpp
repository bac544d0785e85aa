#include "hyperphase/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace hyperphase {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& s, const std::string& key) {
    const std::string t = trim(s);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) throw ConfigError("key '" + key + "': '" + t + "' is not a number");
    return v;
}

int parse_int(const std::string& s, const std::string& key) {
    const double v = parse_number(s, key);
    if (v != static_cast<int>(v)) throw ConfigError("key '" + key + "': expected an integer");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& s, const std::string& key) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("key '" + key + "': expected true or false");
}

// Angles typed with three or four decimals, like 1.5708, are read as the
// nearest k pi / d (d <= 24) lying within half a unit of the last digit.
double parse_angle(const std::string& s, const std::string& key) {
    const double v = parse_number(s, key);
    const auto dot = s.find('.');
    if (s.find_first_of("eE") != std::string::npos) return v;
    const std::size_t decimals = dot == std::string::npos ? 0 : s.size() - dot - 1;
    if (decimals < 3 || decimals > 4) return v;
    const double half_unit = 0.5 * std::pow(10.0, -static_cast<double>(decimals));
    for (int d = 1; d <= 24; ++d) {
        const double k = std::round(v * d / kPi);
        const double snapped = k * kPi / d;
        if (std::abs(snapped - v) <= half_unit) return snapped;
    }
    return v;
}

IdealArc parse_arc(const std::string& s, const std::string& key) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw ConfigError("key '" + key + "': arc '" + s + "' must be center,halfwidth");
    return IdealArc(parse_angle(parts[0], key), parse_angle(parts[1], key));
}

std::string arcs_to_string(const std::vector<IdealArc>& arcs) {
    std::string s;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (i) s += "; ";
        s += format_double(arcs[i].center) + "," + format_double(arcs[i].halfwidth);
    }
    return s;
}

std::string numbers_to_string(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s;
}

bool same_arcs(const std::vector<IdealArc>& a, const std::vector<IdealArc>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].center != b[i].center || a[i].halfwidth != b[i].halfwidth) return false;
    return true;
}

struct Parsed {
    RunConfig cfg;
    bool has_plus = false, has_minus = false;
};

Parsed apply(RunConfig cfg, const std::string& text) {
    static const std::set<std::string> known = {"command", "plus", "minus", "eps", "R", "grid-h", "grid", "well",
                                                "n", "cap", "out", "report", "deterministic", "tol"};
    Parsed p;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::set<std::string> seen;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!known.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        if (key == "command") cfg.command = val;
        else if (key == "plus") cfg.data.omega_plus = parse_arc_list(val, key), p.has_plus = true;
        else if (key == "minus") cfg.data.omega_minus = parse_arc_list(val, key), p.has_minus = true;
        else if (key == "eps") cfg.eps = parse_number_list(val, key);
        else if (key == "R") cfg.R = parse_number_list(val, key);
        else if (key == "grid-h") cfg.grid_h = val == "auto" ? 0.0 : parse_number(val, key);
        else if (key == "grid") cfg.grid = parse_int(val, key);
        else if (key == "well") cfg.well = val;
        else if (key == "n") cfg.n = parse_int(val, key);
        else if (key == "cap") cfg.cap = parse_arc(val, key);
        else if (key == "out") cfg.out = val;
        else if (key == "report") cfg.report = val;
        else if (key == "deterministic") cfg.deterministic = parse_bool(val, key);
        else if (key == "tol") cfg.tol = parse_number(val, key);
    }
    for (double e : cfg.eps)
        if (!(e > 0.0)) throw ConfigError("key 'eps': values must be positive");
    for (double r : cfg.R)
        if (!(r > 0.0 && r < 1.0)) throw ConfigError("key 'R': values must lie in (0, 1)");
    if (cfg.grid_h < 0.0) throw ConfigError("key 'grid-h': must be positive or auto");
    if (cfg.grid < 4) throw ConfigError("key 'grid': at least 4 points per side");
    if (cfg.n < 1) throw ConfigError("key 'n': must be >= 1");
    if (!(cfg.tol > 0.0)) throw ConfigError("key 'tol': must be positive");
    cfg.data.validate();
    p.cfg = std::move(cfg);
    return p;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_number_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_number(part, key));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<IdealArc> parse_arc_list(const std::string& s, const std::string& key) {
    std::vector<IdealArc> out;
    if (trim(s).empty()) return out;
    for (const auto& part : split(s, ';')) {
        if (part.empty()) continue;
        out.push_back(parse_arc(part, key));
    }
    return out;
}

bool RunConfig::operator==(const RunConfig& o) const {
    return command == o.command && same_arcs(data.omega_plus, o.data.omega_plus) &&
           same_arcs(data.omega_minus, o.data.omega_minus) && eps == o.eps && R == o.R && grid_h == o.grid_h &&
           grid == o.grid && well == o.well && n == o.n && cap.center == o.cap.center &&
           cap.halfwidth == o.cap.halfwidth && out == o.out && report == o.report &&
           deterministic == o.deterministic && tol == o.tol;
}

RunConfig parse_config(const std::string& text) {
    Parsed p = apply(RunConfig{}, text);
    if (!p.has_plus && !p.has_minus) throw ConfigError("missing required key 'plus' or 'minus'");
    return p.cfg;
}

RunConfig merge_config(RunConfig base, const std::string& text) { return apply(std::move(base), text).cfg; }

std::string print_config(const RunConfig& cfg) {
    std::ostringstream os;
    if (!cfg.command.empty()) os << "command = " << cfg.command << "\n";
    os << "plus = " << arcs_to_string(cfg.data.omega_plus) << "\n";
    os << "minus = " << arcs_to_string(cfg.data.omega_minus) << "\n";
    os << "eps = " << numbers_to_string(cfg.eps) << "\n";
    os << "R = " << numbers_to_string(cfg.R) << "\n";
    os << "grid-h = " << (cfg.grid_h == 0.0 ? std::string("auto") : format_double(cfg.grid_h)) << "\n";
    os << "grid = " << cfg.grid << "\n";
    os << "well = " << cfg.well << "\n";
    os << "n = " << cfg.n << "\n";
    os << "cap = " << format_double(cfg.cap.center) << "," << format_double(cfg.cap.halfwidth) << "\n";
    if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";
    if (!cfg.report.empty()) os << "report = " << cfg.report << "\n";
    os << "deterministic = " << (cfg.deterministic ? "true" : "false") << "\n";
    os << "tol = " << format_double(cfg.tol) << "\n";
    return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : print_config(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double resolved_spacing(const RunConfig& cfg, double eps, double R) {
    return cfg.grid_h > 0.0 ? cfg.grid_h : eps * (1.0 - R * R) / 6.0;
}

}  // namespace hyperphase
