#include "mpcorr/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mpcorr/classify.hpp"
#include "mpcorr/family.hpp"
#include "mpcorr/io.hpp"
#include "mpcorr/measures.hpp"
#include "mpcorr/sweep.hpp"

namespace mpcorr::cli {

namespace {

using nlohmann::json;

// Signals that the command already chose its exit code.
struct UnsupportedShape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
}

json parse_set_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

json parse_sets(const std::vector<std::string>& sets) {
  json params = json::object();
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw FamilySpecError("--set expects name=value, got '" + s + "'");
    params[s.substr(0, eq)] = parse_set_value(s.substr(eq + 1));
  }
  return params;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bloch decomposition, correlation measures and entanglement classification of multipartite states"};
  app.require_subcommand(1);

  std::string input, output, family, spec_path, outputs;
  std::vector<std::string> params, sets;

  auto* decompose_cmd = app.add_subcommand("decompose", "write the coherence vectors and correlation tensors");
  auto* measure_cmd = app.add_subcommand("measure", "report E_C, E_D, E_E, concurrence and entropy");
  auto* classify_cmd = app.add_subcommand("classify", "classify a two-qubit state");
  for (auto* cmd : {decompose_cmd, measure_cmd, classify_cmd}) {
    cmd->add_option("--input", input, "state JSON file")->required();
    cmd->add_option("--output", output, "report path (default: stdout)");
  }

  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate outputs over a parameter grid of a state family");
  sweep_cmd->add_option("--family", family, "family name")->required();
  sweep_cmd->add_option("--param", params, "grid name=start:stop:count (repeatable)");
  sweep_cmd->add_option("--set", sets, "fixed parameter name=value (repeatable)");
  sweep_cmd->add_option("--outputs", outputs, "comma list of ec,ed,ee,concurrence,entropy,nsv,ph,xi,nanb")->required();
  sweep_cmd->add_option("--output", output, "CSV path (default: stdout)");

  auto* family_cmd = app.add_subcommand("family", "instantiate a state family and write its state JSON");
  family_cmd->add_option("--family", family, "family name");
  family_cmd->add_option("--set", sets, "parameter name=value (repeatable); values may be JSON");
  family_cmd->add_option("--spec", spec_path, "family spec JSON {\"family\": ..., \"params\": {...}}");
  family_cmd->add_option("--output", output, "state path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadSpec;
  }

  try {
    if (decompose_cmd->parsed()) {
      const auto rho = io::read_state_file(input);
      emit(io::decomposition_to_json(decompose(rho)).dump(2) + "\n", output, out);
    } else if (measure_cmd->parsed()) {
      const auto rho = io::read_state_file(input);
      emit(io::measures_to_json(rho, measure_all(rho)).dump(2) + "\n", output, out);
    } else if (classify_cmd->parsed()) {
      const auto rho = io::read_state_file(input);
      if (rho.dims() != Dims{2, 2})
        throw UnsupportedShape("classify supports two-qubit states only (dims [2,2])");
      emit(io::classification_to_json(classify_two_qubit(rho)).dump(2) + "\n", output, out);
    } else if (sweep_cmd->parsed()) {
      SweepSpec spec;
      spec.family = family;
      for (const auto& p : params) spec.grids.push_back(parse_param_grid(p));
      spec.fixed = parse_sets(sets);
      spec.outputs = parse_output_list(outputs);
      emit(run_sweep(spec, sweep_threads_from_env()), output, out);
    } else if (family_cmd->parsed()) {
      StateFamilySpec spec;
      if (!spec_path.empty()) {
        std::ifstream in(spec_path);
        if (!in) throw io::ParseError("cannot open " + spec_path);
        json doc;
        try {
          doc = json::parse(in);
        } catch (const json::exception& e) {
          throw io::ParseError(std::string("malformed JSON: ") + e.what());
        }
        spec = parse_family_spec(doc);
      }
      if (!family.empty()) spec.family = family;
      if (spec.family.empty()) throw FamilySpecError("--family or --spec is required");
      const json overrides = parse_sets(sets);
      for (const auto& [key, value] : overrides.items()) spec.params[key] = value;
      emit(io::state_to_json(make_family(spec)).dump() + "\n", output, out);
    }
  } catch (const io::ParseError& e) {
    err << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return kParseError;
  } catch (const FamilySpecError& e) {
    err << json{{"error", "BadSpec"}, {"message", e.what()}}.dump() << "\n";
    return kBadSpec;
  } catch (const UnsupportedShape& e) {
    err << json{{"error", "UnsupportedShape"}, {"message", e.what()}}.dump() << "\n";
    return kUnsupportedShape;
  } catch (const Error& e) {
    err << io::error_to_json(e).dump() << "\n";
    if (e.code() == ErrorCode::Unsupported) return kUnsupportedShape;
    return kValidationError;
  } catch (const std::exception& e) {
    err << json{{"error", "IOError"}, {"message", e.what()}}.dump() << "\n";
    return kParseError;
  }
  return kOk;
}

}  // namespace mpcorr::cli
