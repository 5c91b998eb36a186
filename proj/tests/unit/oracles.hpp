#pragma once

// Independent reference computations shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline long double factorial(int n) {
  long double f = 1.0L;
  for (int k = 2; k <= n; ++k) f *= static_cast<long double>(k);
  return f;
}

/// B(a, b) for positive integers via exact factorials.
inline double beta_function_int(int a, int b) {
  return static_cast<double>(factorial(a - 1) * factorial(b - 1) / factorial(a + b - 1));
}

/// Trapezoid integral of the Beta(a, b) density over [0, t] for integer shapes >= 2.
inline double beta_cdf_trapezoid(double t, int a, int b, double step = 1e-6) {
  const double norm = beta_function_int(a, b);
  auto f = [&](double x) { return std::pow(x, a - 1) * std::pow(1.0 - x, b - 1) / norm; };
  const auto n = static_cast<std::int64_t>(std::llround(t / step));
  const double h = t / static_cast<double>(n);
  long double sum = 0.5L * (f(0.0) + f(t));
  for (std::int64_t k = 1; k < n; ++k) sum += f(h * static_cast<double>(k));
  return static_cast<double>(sum * h);
}

/// O(S * T) count of samples <= t.
inline std::vector<double> naive_ecdf(const std::vector<double>& samples, const std::vector<double>& t) {
  std::vector<double> out;
  for (const double x : t) {
    std::size_t c = 0;
    for (const double s : samples) c += s <= x ? 1 : 0;
    out.push_back(static_cast<double>(c) / static_cast<double>(samples.size()));
  }
  return out;
}

/// Dvoretzky-Kiefer-Wolfowitz half-width: sqrt(ln(2/alpha) / (2n)).
inline double dkw_bound(std::size_t n, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace oracle
