#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mosquito/dynamics.h"
#include "mosquito/stability.h"

namespace mosquito::io {

/// 17 significant digits with '.' as the decimal separator, independent of
/// the global locale. Round-trips every finite double.
std::string format_double(double v);

/// Inverse of format_double; throws std::invalid_argument on junk.
double parse_double(const std::string& text);

/// Header `n,x,y`, one newline-terminated row per recorded point.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
std::vector<TrajectoryPoint> read_trajectory_csv(std::istream& is);

/// Array of {"n", "x", "y"} objects.
void write_trajectory_json(std::ostream& os, const Trajectory& traj);

/// Header `x0,y0,verdict,iterations`, rows in cell order (y outer, x inner).
void write_basin_csv(std::ostream& os, const BasinGrid& grid);

/// Top-level keys: regime, origin, interior, analysis, thresholds.
nlohmann::json to_json(const FixedPointReport& report);
FixedPointReport report_from_json(const nlohmann::json& j);

}  // namespace mosquito::io
