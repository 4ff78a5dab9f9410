#pragma once
#include <string>

#include "specweyl/model.hpp"

namespace specweyl {

// Loads a model description (see docs/model-schema.md); tabulated tables are resolved
// relative to the JSON file. Throws ModelError on schema violations.
PotentialModel load_model(const std::string& path);
PotentialModel parse_model(const std::string& json_text, const std::string& base_dir = ".");

// Default frame base point: 0 on the line, the midpoint of a finite interval, 1 on (0, inf).
double default_base_point(const PotentialModel& m);

} // namespace specweyl
