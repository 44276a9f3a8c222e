#include "stablab/reports.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace stablab {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) {
  if (std::isfinite(v)) return v;
  return fmt_double(v);  // JSON has no inf/nan literals
}

ojson params_json(const std::map<std::string, double>& params) {
  ojson p = ojson::object();
  for (const auto& [k, v] : params) p[k] = num(v);
  return p;
}

}  // namespace

std::string InequalityReport::to_json() const {
  ojson j;
  j["name"] = name;
  j["lhs"] = num(lhs);
  j["rhs"] = num(rhs);
  j["slack"] = num(slack);
  j["eps_disc"] = num(eps_disc);
  j["params"] = params_json(params);
  return j.dump();
}

std::string HardyReport::to_json() const {
  ojson j;
  j["variant"] = variant;
  j["n"] = n;
  j["alpha"] = num(alpha);
  j["y"] = {num(y[0]), num(y[1]), num(y[2])};
  j["lhs_main"] = num(lhs_main);
  j["lhs_radialterm"] = num(lhs_radialterm);
  j["rhs"] = num(rhs);
  j["slack"] = num(slack);
  j["eps_disc"] = num(eps_disc);
  j["params"] = params_json(params);
  return j.dump();
}

const char* HardyReport::csv_header() { return "variant,n,alpha,lhs,rhs,slack"; }

std::string HardyReport::csv_row() const {
  return csv_quote(variant) + "," + std::to_string(n) + "," + fmt_double(alpha) + "," +
         fmt_double(lhs_main + lhs_radialterm) + "," + fmt_double(rhs) + "," + fmt_double(slack);
}

std::string EstimateReport::to_json() const {
  ojson j;
  j["name"] = name;
  j["lhs"] = num(lhs);
  j["rhs"] = num(rhs);
  j["empirical_constant"] = num(empirical_constant);
  j["params"] = params_json(params);
  return j.dump();
}

const char* EstimateReport::csv_header() { return "estimate,n,lambda,alpha,lhs,rhs,ratio"; }

std::string EstimateReport::csv_row() const {
  auto get = [&](const char* k) {
    auto it = params.find(k);
    return it == params.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
  };
  return csv_quote(name) + "," + fmt_double(get("n")) + "," + fmt_double(get("lambda")) + "," +
         fmt_double(get("alpha")) + "," + fmt_double(lhs) + "," + fmt_double(rhs) + "," +
         fmt_double(empirical_constant);
}

std::string ClassificationReport::to_json() const {
  ojson j;
  j["positive_at_zero"] = positive_at_zero;
  j["nondecreasing"] = nondecreasing;
  j["convex"] = convex;
  j["superlinear"] = superlinear;
  j["tau_defined"] = tau_defined;
  j["tau_converged"] = tau_converged;
  j["tau_limit"] = num(tau_limit);
  return j.dump();
}

std::string StabilityReport::to_json() const {
  ojson j;
  j["mu1"] = num(mu1);
  j["stable"] = stable;
  j["grid_size"] = grid_size;
  return j.dump();
}

}  // namespace stablab
