#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fvp/error.hpp"
#include "fvp/expansion.hpp"
#include "fvp/jet.hpp"
#include "fvp/oracle.hpp"
#include "fvp/problem_config.hpp"
#include "fvp/recursion.hpp"
#include "fvp/report_io.hpp"
#include "fvp/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPointFailure = 2;

struct RunOptions {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::optional<int> n_trunc;
    std::optional<double> tail_tol;
    std::string oracle;  // "", "on" or "off"
    std::string ordering;
    std::optional<unsigned> threads;
};

void add_run_options(CLI::App* cmd, RunOptions& o, bool oracle_switch) {
    cmd->add_option("--config", o.config, "problem configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output file (default: stdout)");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--n-trunc", o.n_trunc, "truncation index N");
    cmd->add_option("--tail-tol", o.tail_tol, "relative tail tolerance of the Q series");
    cmd->add_option("--ordering", o.ordering, "condition consumption order")
        ->check(CLI::IsMember({"nearest_last", "as_given"}));
    cmd->add_option("--threads", o.threads, "worker threads");
    if (oracle_switch) {
        cmd->add_option("--oracle", o.oracle, "compare against the shooting oracle")
            ->check(CLI::IsMember({"on", "off"}));
    }
}

fvp::ProblemConfig load_with_overrides(const RunOptions& o) {
    fvp::ProblemConfig cfg = fvp::load_problem_config(o.config);
    if (o.n_trunc) cfg.solver.n_trunc = *o.n_trunc;
    if (o.tail_tol) cfg.solver.tail_tol = *o.tail_tol;
    if (o.threads) cfg.solver.threads = *o.threads;
    if (o.ordering == "as_given") cfg.solver.ordering = fvp::ConditionOrder::as_given;
    if (o.ordering == "nearest_last") cfg.solver.ordering = fvp::ConditionOrder::nearest_last;
    if (o.oracle == "on") cfg.oracle = true;
    if (o.oracle == "off") cfg.oracle = false;
    try {
        fvp::validate(cfg.solver);
    } catch (const fvp::Error& e) {
        throw fvp::Error(fvp::ErrorKind::config, e.what());
    }
    return cfg;
}

void emit(const RunOptions& o, const std::vector<fvp::OutputRecord>& records, bool with_oracle) {
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw fvp::Error(fvp::ErrorKind::config, "cannot write '" + o.out + "'");
    }
    std::ostream& out = o.out.empty() ? std::cout : file;
    if (o.format == "json") {
        fvp::write_json(out, records, with_oracle);
    } else {
        fvp::write_csv(out, records, with_oracle);
    }
}

void report_failures(const fvp::SolutionReport& report) {
    for (const fvp::PointResult& p : report.points) {
        if (!p.ok) {
            std::cerr << fmt::format("x = {:.17g}: {}\n", p.x, p.error_message);
        } else if (p.interval_warning) {
            std::cerr << fmt::format("x = {:.17g}: warning: far from every condition point\n", p.x);
        }
    }
}

/// `verify` fails points whose deviation exceeds the configured tolerance.
int run_solve(const RunOptions& o, bool verify) {
    fvp::ProblemConfig cfg = load_with_overrides(o);
    if (verify) cfg.oracle = true;
    fvp::SolutionReport report = fvp::solve(cfg.problem, cfg.grid, cfg.solver);
    std::vector<double> oracle;
    if (cfg.oracle) {
        oracle = fvp::evaluate_oracle(cfg.problem, cfg.grid, cfg.oracle_ivp);
    }
    std::vector<fvp::OutputRecord> records = fvp::make_records(report, oracle);
    bool failed = !report.all_ok();
    double max_dev = 0.0;
    if (verify) {
        for (fvp::OutputRecord& r : records) {
            if (r.status != "ok") continue;
            max_dev = std::max(max_dev, *r.abs_deviation);
            if (!(*r.abs_deviation <= cfg.oracle_tolerance)) {
                r.status = "error:oracle_mismatch";
                failed = true;
            }
        }
    }
    emit(o, records, cfg.oracle);
    report_failures(report);
    if (verify) {
        std::cerr << fmt::format("max abs deviation {:.3e} (tolerance {:.3e})\n", max_dev,
                                 cfg.oracle_tolerance);
    }
    return failed ? kExitPointFailure : kExitOk;
}

fvp::FunctionUnderTest parse_function(const std::string& spec) {
    if (spec == "exp") return fvp::exp_function();
    if (spec == "sin") return fvp::sin_function();
    if (spec == "cos") return fvp::cos_function();
    if (spec.rfind("poly:", 0) == 0) {
        std::vector<double> coeffs;
        std::stringstream ss(spec.substr(5));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                coeffs.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw fvp::Error(fvp::ErrorKind::config, "bad polynomial coefficient '" + tok + "'");
            }
        }
        if (coeffs.empty()) throw fvp::Error(fvp::ErrorKind::config, "poly: needs coefficients");
        return fvp::polynomial_function(coeffs);
    }
    throw fvp::Error(fvp::ErrorKind::config, "unknown function '" + spec + "' (exp, sin, cos, poly:c0,c1,...)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Series solution of linear ODEs with function value conditions"};
    app.require_subcommand(1);

    RunOptions solve_opts;
    auto* solve_cmd = app.add_subcommand("solve", "evaluate the solution on the configured grid");
    add_run_options(solve_cmd, solve_opts, true);

    RunOptions verify_opts;
    auto* verify_cmd = app.add_subcommand("verify", "solve and compare with the shooting oracle");
    add_run_options(verify_cmd, verify_opts, false);

    std::string fn_spec = "exp";
    double demo_a = 0.0;
    double demo_x = 1.0;
    int demo_n_max = 10;
    auto* expand_cmd = app.add_subcommand("expand-demo", "derivative expansion and its integral remainder");
    expand_cmd->add_option("function", fn_spec, "exp | sin | cos | poly:c0,c1,...");
    expand_cmd->add_option("--a", demo_a, "expansion base point");
    expand_cmd->add_option("--x", demo_x, "evaluation point");
    expand_cmd->add_option("--n-max", demo_n_max, "largest expansion order")->check(CLI::Range(0, 60));

    std::string rows_config;
    int rows_n_max = 6;
    std::optional<double> rows_center;
    auto* rows_cmd = app.add_subcommand("rows", "coefficient rows of the configured equation at a point");
    rows_cmd->add_option("--config", rows_config, "problem configuration file")->required()->check(CLI::ExistingFile);
    rows_cmd->add_option("--n-max", rows_n_max, "last derivative order")->check(CLI::Range(1, 150));
    rows_cmd->add_option("--center", rows_center, "expansion point (default: first condition abscissa)");

    RunOptions conv_opts;
    std::vector<int> conv_ns{10, 20, 30, 40};
    auto* conv_cmd = app.add_subcommand("convergence-table", "solution values for several truncations");
    conv_cmd->add_option("--config", conv_opts.config, "problem configuration file")->required()->check(CLI::ExistingFile);
    conv_cmd->add_option("--n-list", conv_ns, "truncation indices")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*solve_cmd) return run_solve(solve_opts, false);
        if (*verify_cmd) return run_solve(verify_opts, true);

        if (*expand_cmd) {
            const fvp::FunctionUnderTest f = parse_function(fn_spec);
            std::cout << "n,z,r,identity_residual\n";
            for (int n = 0; n <= demo_n_max; ++n) {
                const fvp::ExpansionReport r = fvp::expand(f, demo_a, demo_x, n);
                std::cout << fmt::format("{},{:.17g},{:.17g},{:.3e}\n", n, r.z_value, r.r_value,
                                         r.identity_residual);
            }
            return kExitOk;
        }

        if (*rows_cmd) {
            const fvp::ProblemConfig cfg = fvp::load_problem_config(rows_config);
            const int k = cfg.problem.order;
            const double center = rows_center.value_or(cfg.problem.conditions.front().x);
            const fvp::JetSpec spec{rows_n_max + 1, center};
            fvp::CoefficientRow base{k, k, {}};
            for (const auto& poly : cfg.problem.base_coeffs) {
                base.entries.push_back(fvp::from_polynomial(poly, spec));
            }
            std::cout << "n";
            for (int j = 0; j <= k; ++j) std::cout << ",e" << j;
            std::cout << '\n';
            for (const fvp::CoefficientRow& row : fvp::generate_rows(base, rows_n_max)) {
                std::cout << row.n;
                for (const fvp::Jet& e : row.entries) std::cout << fmt::format(",{:.17g}", fvp::value(e));
                std::cout << '\n';
            }
            return kExitOk;
        }

        if (*conv_cmd) {
            const fvp::ProblemConfig cfg = fvp::load_problem_config(conv_opts.config);
            std::vector<fvp::SolutionReport> runs;
            bool failed = false;
            for (int n : conv_ns) {
                fvp::SolverConfig sc = cfg.solver;
                sc.n_trunc = n;
                fvp::validate(sc);
                runs.push_back(fvp::solve(cfg.problem, cfg.grid, sc));
                failed = failed || !runs.back().all_ok();
            }
            std::cout << "x";
            for (int n : conv_ns) std::cout << ",N=" << n;
            std::cout << '\n';
            for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
                std::cout << fmt::format("{:.17g}", cfg.grid[i]);
                for (const auto& run : runs) std::cout << fmt::format(",{:.17g}", run.values[i]);
                std::cout << '\n';
            }
            return failed ? kExitPointFailure : kExitOk;
        }
    } catch (const fvp::Error& e) {
        std::cerr << "error (" << fvp::to_string(e.kind()) << "): " << e.what() << '\n';
        const bool config_error = e.kind() == fvp::ErrorKind::config ||
                                  e.kind() == fvp::ErrorKind::invalid_input;
        return config_error ? kExitConfig : kExitPointFailure;
    }
    return kExitOk;
}
