#pragma once

#include <array>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace stablab {

// Deterministic decimal rendering used by every CSV/JSON emitter.
std::string fmt_double(double v);

// RFC-4180 field quoting (only when the field needs it).
std::string csv_quote(const std::string& s);

// One verified inequality or identity: the two sides, the signed slack
// rhs - lhs, and the discretization bound eps_disc the slack is judged
// against. params records grid sizes, exponents and similar knobs.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double eps_disc = 0.0;
  std::map<std::string, double> params;

  std::string to_json() const;
};

struct HardyReport {
  std::string variant;  // foliated | manifold | radial | surface_p2 | surface | carron
  int n = 0;
  double alpha = 0.0;
  std::array<double, 3> y{0.0, 0.0, 0.0};
  double lhs_main = 0.0;
  double lhs_radialterm = 0.0;
  double rhs = 0.0;
  double slack = 0.0;      // rhs - (lhs_main + lhs_radialterm)
  double eps_disc = 0.0;
  std::map<std::string, double> params;

  std::string to_json() const;
  std::string csv_row() const;
  static const char* csv_header();  // "variant,n,alpha,lhs,rhs,slack"
};

struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double empirical_constant = 0.0;  // lhs / rhs where the bound reads lhs <= C * rhs
  std::map<std::string, double> params;

  std::string to_json() const;
  std::string csv_row() const;
  static const char* csv_header();  // "estimate,n,lambda,alpha,lhs,rhs,ratio"
};

struct ClassificationReport {
  bool positive_at_zero = false;
  bool nondecreasing = false;
  bool convex = false;
  bool superlinear = false;
  bool tau_defined = false;    // f' nonvanishing on the sampled tail
  bool tau_converged = false;
  double tau_limit = std::numeric_limits<double>::quiet_NaN();

  std::string to_json() const;
};

struct StabilityReport {
  double mu1 = 0.0;
  bool stable = false;
  int grid_size = 0;
  double lambda = 0.0;
  double quad_form_min = 0.0;            // Rayleigh value of the returned eigenfunction
  std::vector<double> eigenfunction;     // on the solution grid, max-normalized
  std::vector<double> low_eigenvalues;   // ascending, low_eigenvalues[0] == mu1

  std::string to_json() const;  // {"mu1":..., "stable":..., "grid_size":...}
};

}  // namespace stablab
