#pragma once

// Reference computations that share no code with the library.

#include <cstddef>
#include <functional>

namespace oracle {

/// phi(x) for -phi'' = 4 pi sin^2(pi x), phi(0) = phi(1) = 0.
double green_sin(double x);
/// int_0^1 phi(x) sin^2(pi x) dx.
double quartic_sin();

struct NehariProblem {
  std::size_t points = 255;
  double mass = 1.0;
  double omega = 0.0;
  double lambda = 1.0;
  std::function<double(double)> f;
  std::function<double(double)> primitive;
};

struct NehariResult {
  double value = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
};

/// Minimizes max_{t>0} J_+(t u) over u in 1D with a direct (O(n^2)) sine
/// transform, by Sobolev gradient steps followed by an exact fibering
/// maximization (Brent) after every step.
NehariResult nehari_level(const NehariProblem& problem);

}  // namespace oracle
