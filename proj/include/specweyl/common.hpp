#pragma once
#include <complex>
#include <cstddef>
#include <functional>

namespace specweyl {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

enum class Side { Left, Right };

// Worker count: SPECWEYL_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0,n). Results must not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace specweyl
