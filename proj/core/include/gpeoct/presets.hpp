#pragma once

#include <map>
#include <string>

namespace gpeoct {

/// Shipped experiment presets as configuration text, keyed by name.
const std::map<std::string, std::string>& presets();

/// Throws ConfigError with the available names when `name` is unknown.
std::string preset_text(const std::string& name);

} // namespace gpeoct
