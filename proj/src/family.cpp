#include "mpcorr/family.hpp"

#include <map>

namespace mpcorr {

namespace {

using nlohmann::json;

const std::map<std::string, std::vector<std::string>>& catalog() {
  static const std::map<std::string, std::vector<std::string>> families{
      {"bell", {"which"}},
      {"rashid", {"theta"}},
      {"cc-mixture", {"terms"}},
      {"cc-theta", {"theta"}},
      {"generalized-werner", {"p", "theta"}},
      {"ghz", {"parties", "level"}},
      {"tripartite-qutrit-e3", {"theta1", "theta2"}},
  };
  return families;
}

double number(const json& params, const std::string& name) {
  if (!params.contains(name)) throw FamilySpecError("missing parameter '" + name + "'");
  const auto& v = params[name];
  if (!v.is_number()) throw FamilySpecError("parameter '" + name + "' must be a number");
  return v.get<double>();
}

int integer(const json& params, const std::string& name) {
  const double v = number(params, name);
  if (v != double(int(v))) throw FamilySpecError("parameter '" + name + "' must be an integer");
  return int(v);
}

Eigen::Vector3d vec3(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3) throw FamilySpecError(what + " must be a 3-vector");
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) {
    if (!v[std::size_t(i)].is_number()) throw FamilySpecError(what + " must be numeric");
    out(i) = v[std::size_t(i)].get<double>();
  }
  return out;
}

BellState bell_from_name(const std::string& name) {
  for (auto b : {BellState::PsiMinus, BellState::PsiPlus, BellState::PhiMinus, BellState::PhiPlus})
    if (name == to_string(b)) return b;
  throw FamilySpecError("unknown Bell state '" + name + "' (psi-minus, psi-plus, phi-minus, phi-plus)");
}

}  // namespace

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, params] : catalog()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& family_parameters(const std::string& family) {
  auto it = catalog().find(family);
  if (it == catalog().end()) throw FamilySpecError("unknown family '" + family + "'");
  return it->second;
}

DensityMatrixd make_family(const StateFamilySpec& spec) {
  const auto& allowed = family_parameters(spec.family);
  if (!spec.params.is_object()) throw FamilySpecError("\"params\" must be an object");
  for (const auto& [key, value] : spec.params.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw FamilySpecError("family '" + spec.family + "' has no parameter '" + key + "'");

  const auto& p = spec.params;
  try {
    if (spec.family == "bell") {
      if (!p.contains("which") || !p["which"].is_string()) throw FamilySpecError("bell needs a string 'which'");
      return bell<double>(bell_from_name(p["which"].get<std::string>()));
    }
    if (spec.family == "rashid") return rashid<double>(number(p, "theta"));
    if (spec.family == "cc-theta") return cc_theta<double>(number(p, "theta"));
    if (spec.family == "generalized-werner") return generalized_werner<double>(number(p, "p"), number(p, "theta"));
    if (spec.family == "ghz") return ghz<double>(integer(p, "parties"), integer(p, "level"));
    if (spec.family == "tripartite-qutrit-e3")
      return tripartite_qutrit_e3<double>(number(p, "theta1"), number(p, "theta2"));
    if (spec.family == "cc-mixture") {
      if (!p.contains("terms") || !p["terms"].is_array() || p["terms"].empty())
        throw FamilySpecError("cc-mixture needs a nonempty 'terms' array");
      std::vector<CcTerm<double>> terms;
      for (const auto& t : p["terms"]) {
        if (!t.is_object() || !t.contains("p") || !t["p"].is_number() || !t.contains("na") || !t.contains("nb"))
          throw FamilySpecError("each cc-mixture term needs 'p', 'na' and 'nb'");
        terms.push_back({t["p"].get<double>(), vec3(t["na"], "na"), vec3(t["nb"], "nb")});
      }
      return cc_mixture<double>(terms);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::Unsupported)
      throw FamilySpecError(e.what());
    throw;
  }
  throw FamilySpecError("unknown family '" + spec.family + "'");
}

StateFamilySpec parse_family_spec(const json& doc) {
  if (!doc.is_object() || !doc.contains("family") || !doc["family"].is_string())
    throw FamilySpecError("family spec needs a string \"family\"");
  StateFamilySpec spec{doc["family"].get<std::string>(), json::object()};
  if (doc.contains("params")) spec.params = doc["params"];
  return spec;
}

}  // namespace mpcorr
