#pragma once

#include <cmath>

namespace chiralsg {

/// Value of a scalar function of x together with its first two x-derivatives.
///
/// Products and sums propagate derivatives exactly, so gauge fields built from
/// Gaussian envelopes get analytic gradients (and curvatures) for free.
template <typename T>
struct Jet {
    T v{};
    T d1{};
    T d2{};

    static constexpr Jet constant(T value) { return {value, T{}, T{}}; }
};

template <typename T>
constexpr Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

template <typename T>
constexpr Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

template <typename T>
constexpr Jet<T> operator-(const Jet<T>& a) {
    return {-a.v, -a.d1, -a.d2};
}

template <typename T>
constexpr Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + T{2} * a.d1 * b.d1 + a.v * b.d2};
}

template <typename T>
constexpr Jet<T> operator*(T s, const Jet<T>& a) {
    return {s * a.v, s * a.d1, s * a.d2};
}

template <typename T>
constexpr Jet<T> operator*(const Jet<T>& a, T s) {
    return s * a;
}

/// exp(-(x - center)^2 / width^2) and its derivatives at x.
template <typename T>
Jet<T> gaussian_jet(T x, T center, T width) {
    using std::exp;
    const T u = x - center;
    const T w2 = width * width;
    const T e = exp(-u * u / w2);
    const T slope = -T{2} * u / w2;
    return {e, slope * e, (slope * slope - T{2} / w2) * e};
}

}  // namespace chiralsg
