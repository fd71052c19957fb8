#include "mpcorr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "mpcorr/classify.hpp"
#include "mpcorr/io.hpp"
#include "mpcorr/measures.hpp"

namespace mpcorr {

namespace {

bool equal_dims(const Dims& dims) {
  return std::all_of(dims.begin(), dims.end(), [&](int n) { return n == dims[0]; });
}

bool two_qubits(const Dims& dims) { return dims == Dims{2, 2}; }

bool output_supported(const std::string& out, const Dims& dims) {
  const auto parties = dims.size();
  if (out == "ec") return parties == 2 || ((parties == 3 || parties == 4) && equal_dims(dims));
  if (out == "ed") return parties == 3 && equal_dims(dims) && (dims[0] == 2 || dims[0] == 3);
  if (out == "ee") return parties == 4 && equal_dims(dims) && dims[0] == 2;
  if (out == "concurrence" || out == "entropy" || out == "nsv" || out == "ph") return parties == 2;
  if (out == "xi" || out == "nanb") return two_qubits(dims);
  return false;
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw FamilySpecError("cannot parse " + what + " '" + text + "'");
  return v;
}

nlohmann::json point_params(const SweepSpec& spec, const std::vector<int>& k) {
  nlohmann::json params = spec.fixed;
  for (std::size_t g = 0; g < spec.grids.size(); ++g) params[spec.grids[g].name] = spec.grids[g].value(k[g]);
  return params;
}

std::vector<int> grid_index(const SweepSpec& spec, std::size_t row) {
  std::vector<int> k(spec.grids.size());
  for (std::size_t g = spec.grids.size(); g-- > 0;) {
    k[g] = int(row % std::size_t(spec.grids[g].count));
    row /= std::size_t(spec.grids[g].count);
  }
  return k;
}

std::string evaluate_row(const SweepSpec& spec, std::size_t row) {
  const auto k = grid_index(spec, row);
  const auto params = point_params(spec, k);
  const auto rho = make_family({spec.family, params});
  const auto d = decompose(rho);

  std::string line;
  auto cell = [&](const std::string& text) {
    if (!line.empty()) line += ',';
    line += text;
  };
  for (std::size_t g = 0; g < spec.grids.size(); ++g) cell(io::format_double(spec.grids[g].value(k[g])));

  std::optional<PhResult> ph;
  for (const auto& out : spec.outputs) {
    if (out == "ec") {
      cell(io::format_double(rho.parties() == 2 ? e_c_bipartite(d) : e_c_multipartite(d)));
    } else if (out == "ed") {
      cell(io::format_double(e_d(d)));
    } else if (out == "ee") {
      cell(io::format_double(e_e(d)));
    } else if (out == "concurrence") {
      cell(is_pure(rho, kPureMeasureTol) ? io::format_double(concurrence_pure(rho)) : "");
    } else if (out == "entropy") {
      cell(is_pure(rho, kPureMeasureTol) ? io::format_double(entanglement_entropy(rho)) : "");
    } else if (out == "nsv") {
      cell(std::to_string(correlation_spectrum(d.C(0, 1)).nsv_count));
    } else if (out == "ph") {
      if (!ph) ph = ph_test(rho);
      cell(ph->entangled ? "1" : "0");
    } else if (out == "xi") {
      try {
        cell(io::format_double(ph_invariants(d).xi));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateBlochVectors) throw;
        cell("");
      }
    } else if (out == "nanb") {
      cell(io::format_double(d.coherence_vectors[0].dot(d.coherence_vectors[1])));
    }
  }
  return line;
}

}  // namespace

const std::vector<std::string>& sweep_output_names() {
  static const std::vector<std::string> names{"ec", "ed", "ee", "concurrence", "entropy", "nsv", "ph", "xi", "nanb"};
  return names;
}

ParamGrid parse_param_grid(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw FamilySpecError("--param expects name=start:stop:count, got '" + text + "'");
  ParamGrid g;
  g.name = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : rest.find(':', c1 + 1);
  if (c2 == std::string::npos) throw FamilySpecError("--param expects name=start:stop:count, got '" + text + "'");
  g.start = parse_number(rest.substr(0, c1), "grid start");
  g.stop = parse_number(rest.substr(c1 + 1, c2 - c1 - 1), "grid stop");
  const double count = parse_number(rest.substr(c2 + 1), "grid count");
  if (count < 1 || count != double(int(count))) throw FamilySpecError("grid count must be a positive integer");
  g.count = int(count);
  return g;
}

std::vector<std::string> parse_output_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void validate_sweep(const SweepSpec& spec) {
  const auto& allowed = family_parameters(spec.family);
  if (spec.outputs.empty()) throw FamilySpecError("at least one output is required");
  std::vector<std::string> seen;
  for (const auto& g : spec.grids) {
    if (std::find(allowed.begin(), allowed.end(), g.name) == allowed.end())
      throw FamilySpecError("family '" + spec.family + "' has no parameter '" + g.name + "'");
    if (std::find(seen.begin(), seen.end(), g.name) != seen.end() || spec.fixed.contains(g.name))
      throw FamilySpecError("parameter '" + g.name + "' given more than once");
    if (g.count < 1) throw FamilySpecError("grid count must be >= 1");
    seen.push_back(g.name);
  }
  for (const auto& out : spec.outputs)
    if (std::find(sweep_output_names().begin(), sweep_output_names().end(), out) == sweep_output_names().end())
      throw FamilySpecError("unknown output '" + out + "'");

  const auto probe = make_family({spec.family, point_params(spec, std::vector<int>(spec.grids.size(), 0))});
  for (const auto& out : spec.outputs)
    if (!output_supported(out, probe.dims()))
      throw FamilySpecError("output '" + out + "' does not apply to family '" + spec.family + "'");
}

std::string run_sweep(const SweepSpec& spec, unsigned threads) {
  validate_sweep(spec);
  std::size_t rows = 1;
  for (const auto& g : spec.grids) rows *= std::size_t(g.count);

  std::vector<std::string> lines(rows);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < rows; r = next++) {
      try {
        lines[r] = evaluate_row(spec, r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, unsigned(rows)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  std::string csv;
  std::string header;
  for (const auto& g : spec.grids) header += (header.empty() ? "" : ",") + g.name;
  for (const auto& out : spec.outputs) header += (header.empty() ? "" : ",") + out;
  csv += header + '\n';
  for (const auto& line : lines) csv += line + '\n';
  return csv;
}

unsigned sweep_threads_from_env() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MPCORR_THREADS")) {
    unsigned v = 0;
    const std::string s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && v > 0) return v;
  }
  return hw;
}

}  // namespace mpcorr
