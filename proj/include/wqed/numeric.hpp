#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

namespace wqed {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Wraps an angle into (-pi, pi].
inline double wrap_phase(double angle) {
    double w = std::remainder(angle, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

// Argument of z in (-pi, pi]; atan2 returns -pi for a negative real with -0 imaginary part.
inline double arg_wrapped(cplx z) {
    double a = std::arg(z);
    return a == -kPi ? kPi : a;
}

// Pairwise summation. The result depends only on the order of the input, never on how the
// values were produced, so parallel producers that fill a buffer give reproducible sums.
template <typename T>
T pairwise_sum(std::span<const T> values) {
    if (values.size() <= 8) {
        T acc{};
        for (const T& v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace wqed
