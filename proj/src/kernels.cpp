#include "hartree/kernels.hpp"

#include <fftw3.h>
#include <omp.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hartree::kernels {
namespace {

void check_sizes(std::span<const double> in, std::span<double> out, int dimension,
                 std::size_t points) {
  if (dimension < 1 || dimension > 2) throw std::invalid_argument("sine_transform: dimension must be 1 or 2");
  const std::size_t total = dimension == 1 ? points : points * points;
  if (in.size() != total || out.size() != total)
    throw std::invalid_argument("sine_transform: buffer size does not match n^d");
}

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
public:
  ~PlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> scratch(n);
    fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(n), scratch.data(), scratch.data(),
                                      FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(n, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// RODFT00 returns twice the sine sum.
void transform_line(fftw_plan plan, double* line, std::size_t n) {
  fftw_execute_r2r(plan, line, line);
  for (std::size_t i = 0; i < n; ++i) line[i] *= 0.5;
}

std::vector<double> sine_table(std::size_t n) {
  const std::size_t period = 2 * (n + 1);
  std::vector<double> table(period);
  for (std::size_t m = 0; m < period; ++m)
    table[m] = std::sin(std::numbers::pi * static_cast<double>(m) / static_cast<double>(n + 1));
  return table;
}

void direct_line(const std::vector<double>& table, const double* in, std::size_t in_stride,
                 double* out, std::size_t out_stride, std::size_t n) {
  const std::size_t period = 2 * (n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += in[j * in_stride] * table[((j + 1) * (k + 1)) % period];
    out[k * out_stride] = sum;
  }
}

}  // namespace

namespace parallel {

void sine_transform(std::span<const double> in, std::span<double> out, int dimension,
                    std::size_t points) {
  check_sizes(in, out, dimension, points);
  const std::size_t n = points;
  fftw_plan plan = plan_cache().get(n);
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  if (dimension == 1) {
    transform_line(plan, out.data(), n);
    return;
  }
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (n >= 32)
  for (std::ptrdiff_t r = 0; r < rows; ++r) transform_line(plan, out.data() + r * rows, n);

#pragma omp parallel if (n >= 32)
  {
    std::vector<double> column(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < rows; ++c) {
      for (std::size_t r = 0; r < n; ++r) column[r] = out[r * n + static_cast<std::size_t>(c)];
      transform_line(plan, column.data(), n);
      for (std::size_t r = 0; r < n; ++r) out[r * n + static_cast<std::size_t>(c)] = column[r];
    }
  }
}

}  // namespace parallel

namespace serial {

void sine_transform(std::span<const double> in, std::span<double> out, int dimension,
                    std::size_t points) {
  check_sizes(in, out, dimension, points);
  const std::size_t n = points;
  const auto table = sine_table(n);
  if (dimension == 1) {
    std::vector<double> result(n);
    direct_line(table, in.data(), 1, result.data(), 1, n);
    std::copy(result.begin(), result.end(), out.begin());
    return;
  }
  std::vector<double> rows(n * n);
  for (std::size_t r = 0; r < n; ++r) direct_line(table, in.data() + r * n, 1, rows.data() + r * n, 1, n);
  for (std::size_t c = 0; c < n; ++c) direct_line(table, rows.data() + c, n, out.data() + c, n, n);
}

}  // namespace serial

int max_threads() { return omp_get_max_threads(); }

}  // namespace hartree::kernels
