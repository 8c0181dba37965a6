#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fvp/solver.hpp"

namespace fvp {

/// One row of CLI output.
struct OutputRecord {
    double x = 0.0;
    double y_method = 0.0;
    std::optional<double> y_oracle;
    std::optional<double> abs_deviation;
    /// "ok" or "error:<kind>".
    std::string status;
};

/// Pairs each point result with its oracle value when one is given
/// (`oracle` empty, or the same length as report.points).
std::vector<OutputRecord> make_records(const SolutionReport& report,
                                       std::span<const double> oracle = {});

/// Header x,y_method[,y_oracle,abs_deviation],status; reals printed with 17
/// significant digits, failures as nan.
void write_csv(std::ostream& out, std::span<const OutputRecord> records, bool with_oracle);

/// A JSON array of objects with the same fields; failures as null.
void write_json(std::ostream& out, std::span<const OutputRecord> records, bool with_oracle);

}  // namespace fvp
