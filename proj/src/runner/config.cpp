#include "sqg/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "sqg/csv.hpp"
#include "sqg/error.hpp"

namespace sqg {

namespace {

struct Located {
    std::string value;
    int line = 0;
};

class Reader {
public:
    Reader(const std::map<std::string, Located>& entries, const std::string& source)
        : entries_(entries), source_(source) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        const auto it = entries_.find(key);
        const std::string where = it == entries_.end() || it->second.line == 0
                                      ? source_
                                      : source_ + ":" + std::to_string(it->second.line);
        throw ConfigError(where + ": " + key + ": " + what);
    }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        try {
            return csv::parse_double(entries_.at(key).value);
        } catch (const IoError&) {
            fail(key, "expected a number, got '" + entries_.at(key).value + "'");
        }
    }

    int integer(const std::string& key, int fallback) const {
        const double v = number(key, fallback);
        if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, "expected an integer");
        return static_cast<int>(v);
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string& v = entries_.at(key).value;
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        fail(key, "expected true or false, got '" + v + "'");
    }

    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        for (auto tok : csv::split(entries_.at(key).value)) {
            try {
                out.push_back(csv::parse_double(tok));
            } catch (const IoError&) {
                fail(key, "expected a comma-separated list of numbers");
            }
        }
        return out;
    }

    Vec2 point(const std::string& key, Vec2 fallback) const {
        if (!has(key)) return fallback;
        const auto v = list(key);
        if (v.size() != 2) fail(key, "expected two comma-separated numbers");
        return {v[0], v[1]};
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? entries_.at(key).value : fallback;
    }

private:
    const std::map<std::string, Located>& entries_;
    std::string source_;
};

RunConfig build(const std::map<std::string, Located>& located, const std::string& source) {
    std::set<std::string> known;
    for (const auto& [k, v] : config_keys()) known.insert(k);
    for (const auto& [k, v] : located) {
        if (!known.count(k)) {
            throw ConfigError(source + ":" + std::to_string(v.line) + ": unknown key '" + k + "'");
        }
    }
    Reader in(located, source);
    for (const char* key : {"alpha", "N", "L", "t_end"}) {
        if (!in.has(key)) throw ConfigError(source + ": missing required key '" + key + "'");
    }

    RunConfig rc;
    SolverConfig& c = rc.solver;
    c.alpha = in.number("alpha", 1.0);
    c.N = in.integer("N", 256);
    c.L = in.number("L", 40.0);
    c.t_end = in.number("t_end", 50.0);
    c.cfl = in.number("cfl", 0.5);
    c.max_dt = in.number("max_dt", 0.1);
    c.dealias = in.boolean("dealias", true);
    c.linear_only = in.boolean("linear_only", false);

    const std::string kind = in.text("init", "gaussian");
    if (kind == "gaussian") c.init.kind = InitKind::gaussian;
    else if (kind == "two_bump") c.init.kind = InitKind::two_bump;
    else if (kind == "expr") c.init.kind = InitKind::expression;
    else in.fail("init", "expected gaussian, two_bump or expr");
    c.init.amplitude = in.number("amplitude", 1e-2);
    c.init.width = in.number("width", 1.0);
    c.init.center = in.point("center", {0.0, 0.0});
    c.init.amplitude2 = in.number("amplitude2", 0.0);
    c.init.center2 = in.point("center2", {0.0, 0.0});
    c.init.expression = in.text("expr", "");
    if (c.init.kind == InitKind::expression && c.init.expression.empty()) {
        in.fail("init", "init=expr needs an expr key");
    }

    if (in.has("checkpoints")) {
        c.checkpoints = in.list("checkpoints");
        if (c.checkpoints.empty() || c.checkpoints.back() < c.t_end) c.checkpoints.push_back(c.t_end);
    } else {
        const double t_first = in.number("t_first", 0.1);
        const int count = in.integer("n_checkpoints", 41);
        try {
            c.checkpoints = log_checkpoints(std::min(t_first, c.t_end), c.t_end, count);
        } catch (const DomainError& e) {
            in.fail("n_checkpoints", e.what());
        }
    }

    rc.annulus.r_min = in.number("annulus_r_min", 5.0 * c.init.width);
    rc.annulus.r_max = in.number("annulus_r_max", 0.5 * c.L);
    rc.kernel_r_max = in.number("kernel_r_max", 5000.0);
    rc.kernel_tol = in.number("kernel_tol", 1e-10);
    rc.theorem_diagnostics = in.boolean("theorem_diagnostics", true);
    rc.decay_window_start = in.number("decay_window_start", 5.0);
    rc.growth_window_start = in.number("growth_window_start", 1.0);

    try {
        validate(c);
        validate(rc.annulus, c.L);
    } catch (const DomainError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    if (rc.theorem_diagnostics && c.alpha > 1.0) {
        rc.warnings.push_back("alpha=" + csv::format_double(c.alpha) +
                              " lies outside 0 < alpha <= 1, where the far-field estimates are stated; "
                              "theorem diagnostics are reported without a guarantee");
    }
    for (const auto& [k, v] : located) rc.entries[k] = v.value;
    return rc;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_keys() {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"alpha", "(required)"},
        {"N", "(required)"},
        {"L", "(required)"},
        {"t_end", "(required)"},
        {"cfl", "0.5"},
        {"max_dt", "0.1"},
        {"checkpoints", "(log-spaced)"},
        {"n_checkpoints", "41"},
        {"t_first", "0.1"},
        {"init", "gaussian"},
        {"amplitude", "0.01"},
        {"width", "1"},
        {"center", "0,0"},
        {"amplitude2", "0"},
        {"center2", "0,0"},
        {"expr", ""},
        {"dealias", "true"},
        {"linear_only", "false"},
        {"annulus_r_min", "5*width"},
        {"annulus_r_max", "L/2"},
        {"kernel_r_max", "5000"},
        {"kernel_tol", "1e-10"},
        {"theorem_diagnostics", "true"},
        {"decay_window_start", "5"},
        {"growth_window_start", "1"},
    };
    return keys;
}

RunConfig parse_config_text(std::string_view text, const std::string& source) {
    std::map<std::string, Located> located;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = csv::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key(csv::trim(line.substr(0, eq)));
        const std::string value(csv::trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
        if (located.count(key)) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        located[key] = {value, line_no};
    }
    return build(located, source);
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.string());
}

RunConfig config_from_entries(const std::map<std::string, std::string>& entries,
                              const std::string& source) {
    std::map<std::string, Located> located;
    for (const auto& [k, v] : entries) located[k] = {v, 0};
    return build(located, source);
}

std::string config_hash(const RunConfig& config) {
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : config.entries) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace sqg
