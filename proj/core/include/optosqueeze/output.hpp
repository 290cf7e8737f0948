#pragma once

#include <iosfwd>
#include <string>

#include "optosqueeze/sweep.hpp"

namespace osq {

enum class OutputFormat { csv, json };

// CSV columns, exactly:
//   axis, method, V_min, V_max, phi_star_rad, squeeze_db, occupancy,
//   micromotion_pp, stable
// RFC-4180 quoting; numbers in shortest round-trip form; no timestamps, so
// identical inputs give byte-identical CSV. Failed methods keep their row
// with nan fields and stable = 0.
void write_csv(const SweepResult& result, std::ostream& os);

// JSON mirror of the rows plus metadata: the fully resolved scenario echo,
// tool version and a UTC timestamp. Failed methods carry an "error" string.
// Re-reading and re-serializing the document is byte-identical.
void write_json(const SweepResult& result, std::ostream& os);

std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result);

// Writes in the requested format; throws Error(io_error) on failure.
void write_output(const SweepResult& result, OutputFormat format,
                  const std::string& path);

}  // namespace osq
