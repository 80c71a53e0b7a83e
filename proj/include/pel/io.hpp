#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pel/grid.hpp"
#include "pel/halfspace.hpp"
#include "pel/symbols.hpp"

namespace pel {

// 17-significant-digit, round-trip-exact rendering used by every CSV cell
std::string format_g17(double v);

// {"n": int, "order": int, "terms": [{"alpha": [ints], "re": f, "im": f}]}
nlohmann::json symbol_to_json(const DifferentialSymbol& s);
DifferentialSymbol symbol_from_json(const nlohmann::json& j);

// Field files are a single-line JSON header followed by the values as
// little-endian float64 (re, im) pairs in storage order.  GridField headers
// carry {"n", "N", "L"}; half-space headers add the x_n profile and the
// spectral flag.
void write_grid_field(const std::string& path, const GridField& u);
GridField read_grid_field(const std::string& path);
void write_halfspace_field(const std::string& path, const HalfSpaceField& u);
HalfSpaceField read_halfspace_field(const std::string& path);

// header line + one row per entry, cells at 17 significant digits
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

// 2-space indented dump with a trailing newline; objects keep sorted keys,
// so identical content is byte-identical on disk
void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace pel
