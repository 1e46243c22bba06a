#pragma once

// Sine-transform kernels. `parallel` is the production path (FFTW DST-I,
// OpenMP over rows in 2D); `serial` is the direct O(n^2)-per-axis sum kept
// as a reference for tests and benchmarks. Both compute the unnormalized
//
//   out[k] = sum_j in[j] * sin(pi (j+1)(k+1) / (n+1))
//
// along every axis of a d-dimensional n^d array stored row-major.

#include <cstddef>
#include <span>

namespace hartree::kernels {

namespace parallel {
void sine_transform(std::span<const double> in, std::span<double> out, int dimension,
                    std::size_t points);
}

namespace serial {
void sine_transform(std::span<const double> in, std::span<double> out, int dimension,
                    std::size_t points);
}

/// Number of OpenMP threads the parallel kernels will use.
int max_threads();

}  // namespace hartree::kernels
