#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace spinsurf {

/// Worker count used by parallel_for. Defaults to 1.
void set_thread_count(int n);
int thread_count() noexcept;

/// Runs body(i) for i in [0, n). Iterations must be independent; results are
/// identical for any thread count because each index writes its own output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is reproducible bit-for-bit.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

}  // namespace spinsurf
