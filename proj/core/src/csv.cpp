#include "qkerr/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "qkerr/errors.hpp"

namespace qkerr {

std::string format_real(double x) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

void write_series_csv(std::ostream& out, const EntropySeries& series) {
    out << kSeriesHeader << '\n';
    for (const auto& r : series)
        out << format_real(r.t) << ',' << format_real(r.gamma_t) << ',' << format_real(r.s_field)
            << ',' << format_real(r.s_atom) << ',' << format_real(r.purity_field) << '\n';
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
    out << kSweepHeader << '\n';
    for (const auto& p : points) out << format_real(p.q) << ',' << format_real(p.s_field) << '\n';
}

void write_revival_csv(std::ostream& out, const RevivalReport& report) {
    out << kRevivalHeader << '\n';
    for (const auto& d : report.dips)
        out << format_real(d.t) << ',' << format_real(d.gamma_t) << ',' << format_real(d.s) << ','
            << to_string(d.kind) << '\n';
}

namespace {

std::string_view trim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty())
        throw FormatError("line " + std::to_string(line_no) + ": cannot parse '" +
                          std::string(field) + "' as a number");
    return value;
}

}  // namespace

EntropySeries read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty series file");
    if (trim_cr(line) != kSeriesHeader)
        throw FormatError("unexpected header '" + line + "', expected '" + kSeriesHeader + "'");

    EntropySeries series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim_cr(line);
        if (row.empty()) continue;
        std::vector<double> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = row.find(',', start);
            fields.push_back(parse_field(row.substr(start, comma - start), line_no));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 5)
            throw FormatError("line " + std::to_string(line_no) + ": expected 5 columns, found " +
                              std::to_string(fields.size()));
        series.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
    }
    return series;
}

}  // namespace qkerr
