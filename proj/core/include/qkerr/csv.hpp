#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "qkerr/experiments.hpp"

namespace qkerr {

/// "%.12g"; the one float format used in every CSV this library writes.
std::string format_real(double x);

void write_series_csv(std::ostream& out, const EntropySeries& series);
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);
void write_revival_csv(std::ostream& out, const RevivalReport& report);

/// Reads the output of write_series_csv. Throws FormatError on any malformed line.
EntropySeries read_series_csv(std::istream& in);

inline constexpr const char* kSeriesHeader = "t,gamma_t,S_field,S_atom,purity_field";
inline constexpr const char* kSweepHeader = "q,S_field";
inline constexpr const char* kRevivalHeader = "t,gamma_t,S,classification";

}  // namespace qkerr
