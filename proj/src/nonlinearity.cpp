#include "stablab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stablab {

Nonlinearity Nonlinearity::exponential(double a, double b) {
  Nonlinearity n;
  n.kind_ = NonlinKind::exponential;
  n.a_ = a;
  n.b_ = b;
  return n;
}

Nonlinearity Nonlinearity::power(double a, double m) {
  Nonlinearity n;
  n.kind_ = NonlinKind::power;
  n.a_ = a;
  n.b_ = m;
  return n;
}

Nonlinearity Nonlinearity::affine(double a, double b) {
  Nonlinearity n;
  n.kind_ = NonlinKind::affine;
  n.a_ = a;
  n.b_ = b;
  return n;
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size() || knots.size() < 2)
    throw std::invalid_argument("tabulated: need >= 2 matched knots/values");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1]))
      throw std::invalid_argument("tabulated: knots must be strictly increasing");

  Nonlinearity n;
  n.kind_ = NonlinKind::tabulated;
  n.knots_ = std::move(knots);
  n.values_ = std::move(values);

  // Fritsch-Carlson monotone cubic slopes: keeps the interpolant C^1 and
  // free of overshoot between monotone knots.
  const std::size_t m = n.knots_.size();
  std::vector<double> d(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i)
    d[i] = (n.values_[i + 1] - n.values_[i]) / (n.knots_[i + 1] - n.knots_[i]);
  n.slopes_.assign(m, 0.0);
  n.slopes_[0] = d[0];
  n.slopes_[m - 1] = d[m - 2];
  for (std::size_t i = 1; i + 1 < m; ++i)
    n.slopes_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (d[i] == 0.0) {
      n.slopes_[i] = n.slopes_[i + 1] = 0.0;
      continue;
    }
    const double al = n.slopes_[i] / d[i];
    const double be = n.slopes_[i + 1] / d[i];
    const double s = al * al + be * be;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      n.slopes_[i] = tau * al * d[i];
      n.slopes_[i + 1] = tau * be * d[i];
    }
  }
  return n;
}

Nonlinearity Nonlinearity::from_config(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.empty()) throw std::invalid_argument("nonlinearity config: empty spec");
  auto want = [&](std::size_t k) {
    if (parts.size() != k + 1)
      throw std::invalid_argument("nonlinearity config: bad parameter count in '" + spec + "'");
  };
  const std::string& kind = parts[0];
  if (kind == "exp" || kind == "exponential") {
    want(2);
    return exponential(std::stod(parts[1]), std::stod(parts[2]));
  }
  if (kind == "power") {
    want(2);
    return power(std::stod(parts[1]), std::stod(parts[2]));
  }
  if (kind == "affine") {
    want(2);
    return affine(std::stod(parts[1]), std::stod(parts[2]));
  }
  if (kind == "tab" || kind == "tabulated") {
    want(1);
    return tabulated_from_csv(parts[1]);
  }
  throw std::invalid_argument("nonlinearity config: unknown kind '" + kind + "'");
}

Nonlinearity Nonlinearity::tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open nonlinearity table: " + path);
  std::vector<double> t, f;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (ls >> a >> b) {
      t.push_back(a);
      f.push_back(b);
    }  // non-numeric lines (header) are skipped
  }
  return tabulated(std::move(t), std::move(f));
}

std::pair<double, double> Nonlinearity::eval(double t) const {
  switch (kind_) {
    case NonlinKind::exponential: {
      const double v = a_ * std::exp(b_ * t);
      return {v, b_ * v};
    }
    case NonlinKind::power: {
      const double base = 1.0 + t;
      const double v = a_ * std::pow(base, b_);
      return {v, a_ * b_ * std::pow(base, b_ - 1.0)};
    }
    case NonlinKind::affine:
      return {a_ + b_ * t, b_};
    case NonlinKind::tabulated: {
      if (t < knots_.front() || t > knots_.back())
        throw std::domain_error("tabulated nonlinearity evaluated outside knot range");
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
      std::size_t i = (it == knots_.begin()) ? 0 : (it - knots_.begin() - 1);
      if (i + 1 >= knots_.size()) i = knots_.size() - 2;
      const double h = knots_[i + 1] - knots_[i];
      const double s = (t - knots_[i]) / h;
      const double s2 = s * s, s3 = s2 * s;
      const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
      const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
      const double v = h00 * values_[i] + h * h10 * slopes_[i] + h01 * values_[i + 1] +
                       h * h11 * slopes_[i + 1];
      const double dh00 = 6 * s2 - 6 * s, dh10 = 3 * s2 - 4 * s + 1;
      const double dh01 = -6 * s2 + 6 * s, dh11 = 3 * s2 - 2 * s;
      const double dv = (dh00 * values_[i] + h * dh10 * slopes_[i] + dh01 * values_[i + 1] +
                         h * dh11 * slopes_[i + 1]) /
                        h;
      return {v, dv};
    }
  }
  throw std::logic_error("unreachable");
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case NonlinKind::exponential: os << "exp:" << a_ << ":" << b_; break;
    case NonlinKind::power: os << "power:" << a_ << ":" << b_; break;
    case NonlinKind::affine: os << "affine:" << a_ << ":" << b_; break;
    case NonlinKind::tabulated: os << "tabulated[" << knots_.size() << "]"; break;
  }
  return os.str();
}

ClassificationReport Nonlinearity::classify(double t_max) const {
  if (!(t_max > 0.0)) throw std::invalid_argument("classify: t_max must be positive");
  const int samples = 1000;
  ClassificationReport rep;

  const double f0 = f(0.0);
  rep.positive_at_zero = f0 > 0.0;

  std::vector<double> ts(samples + 1), fs(samples + 1), fps(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    ts[i] = t_max * i / samples;
    auto [fv, fp] = eval(ts[i]);
    fs[i] = fv;
    fps[i] = fp;
  }

  double fmax_abs = 1e-300;
  for (double v : fs) fmax_abs = std::max(fmax_abs, std::abs(v));
  const double tol = 1e-10 * fmax_abs;

  rep.nondecreasing = true;
  for (double fp : fps)
    if (fp < -tol) { rep.nondecreasing = false; break; }

  // convexity: f' nondecreasing on the sample
  rep.convex = true;
  for (int i = 1; i <= samples; ++i)
    if (fps[i] < fps[i - 1] - tol) { rep.convex = false; break; }

  // superlinear growth proxy: t f'(t) / f(t) stays above 1 on the tail
  rep.superlinear = true;
  for (int i = samples / 2; i <= samples; ++i) {
    if (fs[i] <= 0.0 || ts[i] * fps[i] <= (1.0 + 1e-3) * fs[i]) {
      rep.superlinear = false;
      break;
    }
  }

  // tau(t) = f f'' / f'^2 with f'' from centered differences of f'.
  auto tau_at = [&](double t) -> double {
    const double h = std::max(1e-5, 1e-5 * std::abs(t));
    auto [fv, fp] = eval(t);
    const double fpp = (fprime(t + h) - fprime(t - h)) / (2.0 * h);
    if (std::abs(fp) < 1e-12 * (1.0 + std::abs(fv))) return std::numeric_limits<double>::quiet_NaN();
    return fv * fpp / (fp * fp);
  };

  // f' vanishing on the sampled tail leaves the limit undefined.
  rep.tau_defined = true;
  for (int i = (9 * samples) / 10; i <= samples; ++i) {
    if (std::abs(fps[i]) < 1e-12 * (1.0 + std::abs(fs[i]))) {
      rep.tau_defined = false;
      break;
    }
  }
  if (rep.tau_defined) {
    const double t1 = tau_at(t_max);
    const double t2 = tau_at(0.8 * t_max);
    const double t3 = tau_at(0.6 * t_max);
    rep.tau_limit = t1;
    rep.tau_converged = std::isfinite(t1) && std::isfinite(t2) && std::isfinite(t3) &&
                        std::abs(t1 - t2) <= 1e-3 * (1.0 + std::abs(t1)) &&
                        std::abs(t2 - t3) <= 1e-2 * (1.0 + std::abs(t1));
  }
  return rep;
}

}  // namespace stablab
