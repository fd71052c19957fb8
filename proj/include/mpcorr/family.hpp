#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mpcorr/states.hpp"

namespace mpcorr {

/// Unknown family, unknown or missing parameter, or an out-of-domain value.
class FamilySpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"family": name, "params": {...}}
struct StateFamilySpec {
  std::string family;
  nlohmann::json params = nlohmann::json::object();
};

/// Stable family names: bell, rashid, cc-mixture, cc-theta, generalized-werner, ghz,
/// tripartite-qutrit-e3.
const std::vector<std::string>& family_names();

/// Parameter names accepted by a family.
const std::vector<std::string>& family_parameters(const std::string& family);

DensityMatrixd make_family(const StateFamilySpec& spec);

StateFamilySpec parse_family_spec(const nlohmann::json& doc);

}  // namespace mpcorr
