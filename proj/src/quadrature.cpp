#include "stablab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace stablab {

double trapz(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapz: size mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

double trapz_uniform(double h, std::span<const double> y) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return h * s;
}

double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: n >= 1 required");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

double cap_integral(int n, double theta) {
  if (n < 2) throw std::invalid_argument("cap_integral: n >= 2 required");
  if (theta <= 0.0) return 0.0;
  // 32-node Gauss-Legendre on [0, theta]; integrand is smooth.
  static const double gl_x[16] = {
      0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
      0.3318686022821276497, 0.4213512761306353454, 0.5068999089322293900,
      0.5877157572407623290, 0.6630442669302152009, 0.7321821187402896804,
      0.7944837959679424069, 0.8493676137325699701, 0.8963211557660521240,
      0.9349060759377396891, 0.9647622555875064308, 0.9856115115452683354,
      0.9972638618494815635};
  static const double gl_w[16] = {
      0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
      0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
      0.0781938957870703065, 0.0723457941088485062, 0.0658222227763618468,
      0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
      0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706,
      0.0070186100094700966};
  const double c = 0.5 * theta;
  double s = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double t1 = c * (1.0 - gl_x[i]);
    const double t2 = c * (1.0 + gl_x[i]);
    s += gl_w[i] * (std::pow(std::sin(t1), n - 2) + std::pow(std::sin(t2), n - 2));
  }
  return c * s;
}

}  // namespace stablab
