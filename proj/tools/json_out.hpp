#pragma once

#include <string>

#include "json.hpp"

namespace qctl::cli {

/// Pretty JSON with every floating-point value printed to 17 significant digits,
/// so reruns produce byte-identical files.
std::string dump_json(const nlohmann::ordered_json& j);

/// %.17g
std::string format_double(double v);

}  // namespace qctl::cli
