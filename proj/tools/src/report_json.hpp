#pragma once

#include <json.hpp>

#include "lorentz/verify.hpp"

namespace lorentz::cli {

nlohmann::json to_json(const verify::Report& r);
/// Inverse of to_json; throws std::invalid_argument on a malformed document.
verify::Report report_from_json(const nlohmann::json& j);

}  // namespace lorentz::cli
