#include "fvp/problem_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "fvp/error.hpp"

namespace fvp {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::config, what); }

double parse_real(std::string_view token, const std::string& key) {
    double v = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        fail("key '" + key + "': '" + std::string(token) + "' is not a finite number");
    }
    return v;
}

std::vector<double> parse_reals(const std::string& value, const std::string& key) {
    std::istringstream ss(value);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) out.push_back(parse_real(tok, key));
    if (out.empty()) fail("key '" + key + "': expected at least one number");
    return out;
}

int parse_int(const std::string& value, const std::string& key) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        fail("key '" + key + "': '" + value + "' is not an integer");
    }
    return v;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "on" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "off" || value == "no" || value == "0") return false;
    fail("key '" + key + "': '" + value + "' is not a boolean (true/false/on/off)");
}

using Section = std::map<std::string, std::string>;

}  // namespace

std::vector<double> linear_grid(double start, double stop, int count) {
    if (count < 1) fail("key 'grid.count': must be >= 1");
    if (count == 1) return {start};
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        g[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
    }
    g.back() = stop;
    return g;
}

ProblemConfig parse_problem_config(std::istream& in) {
    std::map<std::string, Section> sections;
    std::vector<Condition> conditions;
    std::string current;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("line " + std::to_string(line_no) + ": unterminated section header");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            static const std::map<std::string, int> known{
                {"problem", 0}, {"conditions", 0}, {"grid", 0}, {"solver", 0}, {"oracle", 0}};
            if (!known.contains(current)) fail("line " + std::to_string(line_no) + ": unknown section [" + current + "]");
            sections[current];
            continue;
        }
        if (current.empty()) fail("line " + std::to_string(line_no) + ": entry outside any section");
        if (current == "conditions") {
            const std::vector<double> xy = parse_reals(line, "conditions (line " + std::to_string(line_no) + ")");
            if (xy.size() != 2) {
                fail("key 'conditions' (line " + std::to_string(line_no) + "): expected 'x y'");
            }
            conditions.push_back({xy[0], xy[1]});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) fail("line " + std::to_string(line_no) + ": missing key");
        if (value.empty()) fail("key '" + current + "." + key + "': missing value");
        if (!sections[current].emplace(key, value).second) fail("key '" + current + "." + key + "': given twice");
    }

    ProblemConfig cfg;
    auto take = [&](const std::string& sec, const std::string& key) -> std::optional<std::string> {
        auto s = sections.find(sec);
        if (s == sections.end()) return std::nullopt;
        auto it = s->second.find(key);
        if (it == s->second.end()) return std::nullopt;
        std::string v = it->second;
        s->second.erase(it);
        return v;
    };

    // [problem]
    const auto order = take("problem", "order");
    if (!order) fail("key 'problem.order': required");
    cfg.problem.order = parse_int(*order, "problem.order");
    if (cfg.problem.order < 1) fail("key 'problem.order': must be >= 1");
    for (int i = 1; i <= cfg.problem.order + 1; ++i) {
        const std::string key = "p" + std::to_string(i);
        const auto v = take("problem", key);
        if (!v) fail("key 'problem." + key + "': required for order " + std::to_string(cfg.problem.order));
        cfg.problem.base_coeffs.push_back(parse_reals(*v, "problem." + key));
    }
    cfg.problem.conditions = conditions;
    if (static_cast<int>(conditions.size()) != cfg.problem.order) {
        fail("key 'conditions': order " + std::to_string(cfg.problem.order) + " needs " +
             std::to_string(cfg.problem.order) + " conditions, got " + std::to_string(conditions.size()));
    }
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (conditions[i].x == conditions[j].x) {
                fail("key 'conditions': abscissae must be pairwise distinct (x = " +
                     std::to_string(conditions[i].x) + " repeated)");
            }
        }
    }

    // [grid]
    if (auto pts = take("grid", "points")) {
        if (sections["grid"].contains("start") || sections["grid"].contains("stop") ||
            sections["grid"].contains("count")) {
            fail("key 'grid.points': cannot be combined with start/stop/count");
        }
        cfg.grid = parse_reals(*pts, "grid.points");
    } else {
        const auto start = take("grid", "start");
        const auto stop = take("grid", "stop");
        const auto count = take("grid", "count");
        if (!start || !stop || !count) fail("key 'grid': need either points or start, stop and count");
        const int n = parse_int(*count, "grid.count");
        if (n < 1) fail("key 'grid.count': must be >= 1");
        cfg.grid = linear_grid(parse_real(*start, "grid.start"), parse_real(*stop, "grid.stop"), n);
    }

    // [solver]
    if (auto v = take("solver", "n_trunc")) cfg.solver.n_trunc = parse_int(*v, "solver.n_trunc");
    if (auto v = take("solver", "depth_margin")) cfg.solver.depth_margin = parse_int(*v, "solver.depth_margin");
    if (auto v = take("solver", "tail_tol")) cfg.solver.tail_tol = parse_real(*v, "solver.tail_tol");
    if (auto v = take("solver", "threads")) {
        const int t = parse_int(*v, "solver.threads");
        if (t < 1) fail("key 'solver.threads': must be >= 1");
        cfg.solver.threads = static_cast<unsigned>(t);
    }
    if (auto v = take("solver", "ordering")) {
        if (*v == "nearest_last") cfg.solver.ordering = ConditionOrder::nearest_last;
        else if (*v == "as_given") cfg.solver.ordering = ConditionOrder::as_given;
        else fail("key 'solver.ordering': expected nearest_last or as_given, got '" + *v + "'");
    }

    // [oracle]
    if (auto v = take("oracle", "enabled")) cfg.oracle = parse_bool(*v, "oracle.enabled");
    if (auto v = take("oracle", "tolerance")) cfg.oracle_tolerance = parse_real(*v, "oracle.tolerance");
    if (auto v = take("oracle", "step_tol")) cfg.oracle_ivp.step_tol = parse_real(*v, "oracle.step_tol");

    for (const auto& [name, entries] : sections) {
        if (!entries.empty()) fail("key '" + name + "." + entries.begin()->first + "': unknown key");
    }

    try {
        validate(cfg.problem);
        validate(cfg.solver);
    } catch (const Error& e) {
        fail(e.what());
    }
    if (cfg.problem.order > cfg.solver.n_trunc) fail("key 'solver.n_trunc': must be >= problem.order");
    return cfg;
}

ProblemConfig load_problem_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path.string() + "'");
    return parse_problem_config(in);
}

}  // namespace fvp
