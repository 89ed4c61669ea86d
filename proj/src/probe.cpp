#include "gammalab/probe.hpp"

#include <sstream>

#include "gammalab/common.hpp"

namespace gammalab {

double ProbeResult::quantity(const std::string& name) const {
  for (const auto& [k, v] : quantities)
    if (k == name) return v;
  throw InvalidInput("probe " + probe_id + " has no quantity " + name);
}

std::string ProbeResult::csv_header() {
  return "probe_id,param_json,lhs,rhs,ratio,stderr,seed,runtime_ms";
}

std::string ProbeResult::csv_row(std::int64_t runtime_ms) const {
  nlohmann::json p = params;
  if (!quantities.empty()) {
    nlohmann::json q = nlohmann::json::object();
    for (const auto& [k, v] : quantities) q[k] = v;
    p["quantities"] = q;
  }
  if (!ordering_ok) p["ordering_ok"] = false;
  std::string pj = p.dump();
  // JSON strings contain commas; quote the field per RFC 4180
  std::string quoted = "\"";
  for (char c : pj) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted += "\"";
  std::ostringstream os;
  os << probe_id << ',' << quoted << ',' << format_double(lhs) << ','
     << format_double(rhs) << ',' << format_double(ratio) << ','
     << format_double(stderr_est) << ',' << seed << ',' << runtime_ms;
  return os.str();
}

nlohmann::json ProbeResult::to_json() const {
  nlohmann::json j;
  j["probe_id"] = probe_id;
  j["params"] = params;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["ratio"] = ratio;
  j["stderr"] = stderr_est;
  j["seed"] = seed;
  j["ordering_ok"] = ordering_ok;
  if (!quantities.empty()) {
    nlohmann::json q = nlohmann::json::object();
    for (const auto& [k, v] : quantities) q[k] = v;
    j["quantities"] = q;
  }
  return j;
}

}  // namespace gammalab
