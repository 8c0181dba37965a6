#include "fvp/report_io.hpp"

#include <cmath>
#include <fmt/format.h>
#include <json.hpp>

#include "fvp/error.hpp"

namespace fvp {

namespace {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    return fmt::format("{:.17g}", v);
}

nlohmann::json json_real(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

}  // namespace

std::vector<OutputRecord> make_records(const SolutionReport& report, std::span<const double> oracle) {
    if (!oracle.empty() && oracle.size() != report.points.size()) {
        throw Error(ErrorKind::invalid_input, "oracle values do not match the evaluation points");
    }
    std::vector<OutputRecord> out;
    out.reserve(report.points.size());
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const PointResult& p = report.points[i];
        OutputRecord r;
        r.x = p.x;
        r.y_method = p.value;
        if (!oracle.empty()) {
            r.y_oracle = oracle[i];
            r.abs_deviation = std::abs(p.value - oracle[i]);
        }
        r.status = p.ok ? std::string("ok")
                        : "error:" + std::string(to_string(p.error_kind.value_or(ErrorKind::invalid_input)));
        out.push_back(std::move(r));
    }
    return out;
}

void write_csv(std::ostream& out, std::span<const OutputRecord> records, bool with_oracle) {
    out << (with_oracle ? "x,y_method,y_oracle,abs_deviation,status\n" : "x,y_method,status\n");
    for (const OutputRecord& r : records) {
        out << format_real(r.x) << ',' << format_real(r.y_method) << ',';
        if (with_oracle) {
            out << format_real(r.y_oracle.value_or(NAN)) << ','
                << format_real(r.abs_deviation.value_or(NAN)) << ',';
        }
        out << r.status << '\n';
    }
}

void write_json(std::ostream& out, std::span<const OutputRecord> records, bool with_oracle) {
    nlohmann::json arr = nlohmann::json::array();
    for (const OutputRecord& r : records) {
        nlohmann::json row;
        row["x"] = json_real(r.x);
        row["y_method"] = json_real(r.y_method);
        if (with_oracle) {
            row["y_oracle"] = json_real(r.y_oracle.value_or(NAN));
            row["abs_deviation"] = json_real(r.abs_deviation.value_or(NAN));
        }
        row["status"] = r.status;
        arr.push_back(std::move(row));
    }
    out << arr.dump(2) << '\n';
}

}  // namespace fvp
