#include "mpcorr/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mpcorr::io {

namespace {

using nlohmann::json;

std::complex<double> parse_complex(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ParseError("complex entries must be [re, im] pairs");
}

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json tensor_to_json(const CorrelationTensor<double>& t) {
  // Nested arrays, outermost index first.
  std::function<json(std::size_t, Index)> build = [&](std::size_t level, Index offset) {
    json arr = json::array();
    Index stride = 1;
    for (std::size_t k = level + 1; k < t.extents().size(); ++k) stride *= t.extents()[k];
    for (int i = 0; i < t.extents()[level]; ++i) {
      const Index at = offset + i * stride;
      if (level + 1 == t.extents().size()) arr.push_back(t.values()(at));
      else arr.push_back(build(level + 1, at));
    }
    return arr;
  };
  return build(0, 0);
}

std::string labels(const std::vector<int>& parties) {
  std::string s;
  for (int p : parties) s += party_label(p);
  return s;
}

}  // namespace

DensityMatrixd parse_state(const json& doc) {
  if (!doc.is_object()) throw ParseError("state document must be a JSON object");
  if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].empty())
    throw ParseError("state document needs a nonempty \"dims\" array");
  Dims dims;
  for (const auto& n : doc["dims"]) {
    if (!n.is_number_integer()) throw ParseError("\"dims\" entries must be integers");
    dims.push_back(n.get<int>());
  }
  const bool has_pure = doc.contains("pure");
  const bool has_matrix = doc.contains("matrix");
  if (has_pure == has_matrix) throw ParseError("state document needs exactly one of \"pure\" or \"matrix\"");

  if (has_pure) {
    const auto& amps = doc["pure"];
    if (!amps.is_array()) throw ParseError("\"pure\" must be an array");
    CVector<double> psi(Index(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) psi(Index(i)) = parse_complex(amps[i]);
    return from_pure<double>(psi, dims);
  }
  const auto& rows = doc["matrix"];
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) throw ParseError("\"matrix\" must be an array of rows");
  const std::size_t n = rows.size();
  CMatrix<double> m(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) throw ParseError("\"matrix\" must be square");
    for (std::size_t c = 0; c < n; ++c) m(Index(r), Index(c)) = parse_complex(rows[r][c]);
  }
  return validate<double>(m, dims);
}

DensityMatrixd read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_state(doc);
}

json state_to_json(const DensityMatrixd& rho) {
  json rows = json::array();
  for (Index r = 0; r < rho.dimension(); ++r) {
    json row = json::array();
    for (Index c = 0; c < rho.dimension(); ++c) row.push_back(complex_to_json(rho.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"dims", rho.dims()}, {"matrix", std::move(rows)}};
}

json decomposition_to_json(const BlochDecompositiond& d) {
  json out;
  out["dims"] = d.dims;
  json coh = json::object();
  for (int p = 0; p < d.parties(); ++p) {
    const auto& v = d.coherence_vectors[std::size_t(p)];
    coh[party_label(p)] = std::vector<double>(v.data(), v.data() + v.size());
  }
  out["coherence_vectors"] = std::move(coh);
  json pairs = json::object();
  for (const auto& [key, c] : d.pair_correlations) {
    json rows = json::array();
    for (Index i = 0; i < c.rows(); ++i) {
      json row = json::array();
      for (Index j = 0; j < c.cols(); ++j) row.push_back(c(i, j));
      rows.push_back(std::move(row));
    }
    pairs[labels({key.first, key.second})] = std::move(rows);
  }
  out["pair_correlations"] = std::move(pairs);
  if (!d.triple_correlations.empty()) {
    json triples = json::object();
    for (const auto& [key, t] : d.triple_correlations) triples[labels(t.parties())] = tensor_to_json(t);
    out["triple_correlations"] = std::move(triples);
  }
  if (d.quad_correlations) out["quad_correlations"] = tensor_to_json(*d.quad_correlations);
  return out;
}

json measures_to_json(const DensityMatrixd& rho, const MeasureSet& m) {
  json out{{"dims", rho.dims()}, {"e_c", m.e_c}};
  if (m.e_d) out["e_d"] = *m.e_d;
  if (m.e_e) out["e_e"] = *m.e_e;
  if (m.concurrence) out["concurrence"] = *m.concurrence;
  if (m.entropy_bits) out["entropy_bits"] = *m.entropy_bits;
  return out;
}

json classification_to_json(const ClassificationReport<double>& r) {
  const auto& sv = r.spectrum.singular_values;
  json out{{"category", to_string(r.category)},
           {"nsv_count", r.nsv_count},
           {"singular_values", std::vector<double>(sv.data(), sv.data() + sv.size())},
           {"nsv_threshold", r.spectrum.threshold_used},
           {"ph_entangled", r.ph_entangled},
           {"min_pt_eigenvalue", r.min_pt_eigenvalue},
           {"purity", r.purity}};
  if (r.invariants) {
    json inv{{"xi", r.invariants->xi},
             {"na_dot_nb", r.invariants->na_dot_nb},
             {"na_dot_C_nb", r.invariants->na_dot_C_nb}};
    try {
      inv["ph_condition"] = ph_condition_explicit(*r.invariants);
    } catch (const Error&) {
      inv["ph_condition"] = nullptr;
    }
    out["invariants"] = std::move(inv);
  } else {
    out["invariants"] = nullptr;
  }
  return out;
}

json error_to_json(const Error& e) {
  json out{{"error", to_string(e.code())}, {"message", e.what()}};
  if (e.residual()) out["residual"] = *e.residual();
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace mpcorr::io
