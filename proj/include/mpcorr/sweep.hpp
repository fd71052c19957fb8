#pragma once

#include <string>
#include <vector>

#include "mpcorr/family.hpp"

namespace mpcorr {

/// Evenly spaced grid start..stop with count points (count == 1 gives start only).
struct ParamGrid {
  std::string name;
  double start = 0;
  double stop = 0;
  int count = 1;

  double value(int k) const { return count == 1 ? start : start + (stop - start) * double(k) / double(count - 1); }
};

/// Outputs: ec, ed, ee, concurrence, entropy, nsv, ph, xi, nanb.
struct SweepSpec {
  std::string family;
  std::vector<ParamGrid> grids;
  nlohmann::json fixed = nlohmann::json::object();
  std::vector<std::string> outputs;
};

const std::vector<std::string>& sweep_output_names();

/// "name=start:stop:count"
ParamGrid parse_param_grid(const std::string& text);

/// "ec,ph,xi"
std::vector<std::string> parse_output_list(const std::string& text);

/// Throws FamilySpecError when the spec is unusable for its family.
void validate_sweep(const SweepSpec& spec);

/// CSV: header row, one column per grid parameter then per output, rows in grid order with the
/// first declared parameter varying slowest. Grid points may be evaluated on up to `threads`
/// threads; the output does not depend on the thread count.
std::string run_sweep(const SweepSpec& spec, unsigned threads);

/// Sweep parallelism: MPCORR_THREADS when set to a positive integer, else hardware concurrency.
unsigned sweep_threads_from_env();

}  // namespace mpcorr
