#pragma once

#include <iosfwd>
#include <string>

#include "vlgc/core.hpp"

namespace vlgc {

/**
 * Reads a comma-separated table: a header row of series names, then one row
 * per time step. Every cell must hold a finite decimal number. Errors name
 * the offending row (1-based, header is row 1) and column.
 */
[[nodiscard]] TimeSeriesSet read_csv(std::istream& in);
[[nodiscard]] TimeSeriesSet read_csv_file(const std::string& path);

/// Writes the format read_csv accepts, with shortest round-trip number formatting.
void write_csv(std::ostream& out, const TimeSeriesSet& set);
void write_csv_file(const std::string& path, const TimeSeriesSet& set);

}  // namespace vlgc
