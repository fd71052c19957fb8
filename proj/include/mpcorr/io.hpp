#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mpcorr/classify.hpp"
#include "mpcorr/measures.hpp"

namespace mpcorr::io {

/// Malformed JSON or a document that does not follow the state schema.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses {"dims": [...], "pure": [[re,im],...]} or {"dims": [...], "matrix": [[[re,im],...],...]}.
/// Schema problems raise ParseError; matrices violating the density-matrix invariants raise Error.
DensityMatrixd parse_state(const nlohmann::json& doc);
DensityMatrixd read_state_file(const std::string& path);

nlohmann::json state_to_json(const DensityMatrixd& rho);
nlohmann::json decomposition_to_json(const BlochDecompositiond& d);
nlohmann::json measures_to_json(const DensityMatrixd& rho, const MeasureSet& m);
nlohmann::json classification_to_json(const ClassificationReport<double>& r);

/// {"error": code, "message": ..., "residual": ...}
nlohmann::json error_to_json(const Error& e);

/// Shortest decimal that round-trips to the same double, locale independent.
std::string format_double(double v);

}  // namespace mpcorr::io
