#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stablab/reports.hpp"

namespace stablab {

enum class NonlinKind { exponential, power, affine, tabulated };

// A C^1 source term f with evaluable f and f'. Immutable after construction;
// safe to evaluate concurrently.
//
// Built-in families:
//   exponential  f(t) = a e^{bt}
//   power        f(t) = a (1+t)^m
//   affine       f(t) = a + bt
//   tabulated    monotone-cubic (Fritsch-Carlson) interpolant of (t_i, f_i)
class Nonlinearity {
 public:
  static Nonlinearity exponential(double a, double b);
  static Nonlinearity power(double a, double m);
  static Nonlinearity affine(double a, double b);
  // Knots must be strictly increasing.
  static Nonlinearity tabulated(std::vector<double> knots, std::vector<double> values);

  // Config syntax: "exp:a:b", "power:a:m", "affine:a:b", "tab:<csv path>".
  static Nonlinearity from_config(const std::string& spec);
  // Two-column CSV (t, f), optional header line.
  static Nonlinearity tabulated_from_csv(const std::string& path);

  // f(t) and f'(t). Throws std::domain_error outside the knot range of a
  // tabulated kind.
  std::pair<double, double> eval(double t) const;
  double f(double t) const { return eval(t).first; }
  double fprime(double t) const { return eval(t).second; }

  NonlinKind kind() const { return kind_; }
  std::string describe() const;

  // Samples [0, t_max] on 1000 points and reports the sign/monotonicity/
  // convexity flags together with the limit estimate of f f'' / f'^2 at
  // t_max (f'' by centered differences of f'). All flags are "sampled":
  // they certify the grid, not the continuum.
  ClassificationReport classify(double t_max) const;

 private:
  Nonlinearity() = default;

  NonlinKind kind_ = NonlinKind::affine;
  double a_ = 0.0, b_ = 0.0;  // family parameters (b_ doubles as m for power)
  std::vector<double> knots_, values_, slopes_;
};

}  // namespace stablab
