#ifndef GAMMALAB_PROBE_HPP_
#define GAMMALAB_PROBE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gammalab {

/// Outcome of one inequality probe: the two sides of a paper inequality,
/// their ratio, and estimator diagnostics. Chain probes additionally list
/// every intermediate quantity in order.
struct ProbeResult {
  std::string probe_id;
  nlohmann::json params;  // geometry, space, symbol, extra quantities
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;     // lhs / rhs (0 when rhs == 0 and lhs == 0)
  double stderr_est = 0.0;
  std::uint64_t seed = 0;
  bool ordering_ok = true;  // explicit-constant inequalities only

  /// Named quantities of a chain, in the paper's order.
  std::vector<std::pair<std::string, double>> quantities;

  void add_quantity(const std::string& name, double value) {
    quantities.emplace_back(name, value);
  }
  double quantity(const std::string& name) const;

  /// Fixed schema: probe_id,param_json,lhs,rhs,ratio,stderr,seed,runtime_ms
  static std::string csv_header();
  std::string csv_row(std::int64_t runtime_ms) const;
  nlohmann::json to_json() const;
};

inline double safe_ratio(double lhs, double rhs) {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace gammalab

#endif  // GAMMALAB_PROBE_HPP_
