#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace degen {

/// Forward-mode dual number carrying N partial derivatives.
template <std::size_t N>
struct Dual {
  double value = 0.0;
  std::array<double, N> grad{};

  static constexpr Dual constant(double v) { return Dual{v, {}}; }

  static constexpr Dual variable(double v, std::size_t index) {
    Dual d{v, {}};
    d.grad[index] = 1.0;
    return d;
  }
};

namespace detail {

// chain rule: result value fv with derivative scaled by dfv
template <std::size_t N>
constexpr Dual<N> chain(const Dual<N>& a, double fv, double dfv) {
  Dual<N> r{fv, {}};
  for (std::size_t i = 0; i < N; ++i) r.grad[i] = dfv * a.grad[i];
  return r;
}

}  // namespace detail

template <std::size_t N>
constexpr Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r{a.value + b.value, {}};
  for (std::size_t i = 0; i < N; ++i) r.grad[i] = a.grad[i] + b.grad[i];
  return r;
}

template <std::size_t N>
constexpr Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r{a.value - b.value, {}};
  for (std::size_t i = 0; i < N; ++i) r.grad[i] = a.grad[i] - b.grad[i];
  return r;
}

template <std::size_t N>
constexpr Dual<N> operator-(const Dual<N>& a) {
  return detail::chain(a, -a.value, -1.0);
}

template <std::size_t N>
constexpr Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r{a.value * b.value, {}};
  for (std::size_t i = 0; i < N; ++i)
    r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  return r;
}

template <std::size_t N>
constexpr Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  const double q = a.value / b.value;
  Dual<N> r{q, {}};
  for (std::size_t i = 0; i < N; ++i)
    r.grad[i] = (a.grad[i] - q * b.grad[i]) / b.value;
  return r;
}

template <std::size_t N>
Dual<N> sin(const Dual<N>& a) { return detail::chain(a, std::sin(a.value), std::cos(a.value)); }

template <std::size_t N>
Dual<N> cos(const Dual<N>& a) { return detail::chain(a, std::cos(a.value), -std::sin(a.value)); }

template <std::size_t N>
Dual<N> tan(const Dual<N>& a) {
  const double t = std::tan(a.value);
  return detail::chain(a, t, 1.0 + t * t);
}

template <std::size_t N>
Dual<N> exp(const Dual<N>& a) {
  const double e = std::exp(a.value);
  return detail::chain(a, e, e);
}

template <std::size_t N>
Dual<N> log(const Dual<N>& a) { return detail::chain(a, std::log(a.value), 1.0 / a.value); }

template <std::size_t N>
Dual<N> sqrt(const Dual<N>& a) {
  const double r = std::sqrt(a.value);
  return detail::chain(a, r, 0.5 / r);
}

template <std::size_t N>
Dual<N> tanh(const Dual<N>& a) {
  const double t = std::tanh(a.value);
  return detail::chain(a, t, 1.0 - t * t);
}

// derivative of |a| at 0 taken as 0
template <std::size_t N>
Dual<N> abs(const Dual<N>& a) {
  const double s = a.value > 0.0 ? 1.0 : (a.value < 0.0 ? -1.0 : 0.0);
  return detail::chain(a, std::abs(a.value), s);
}

inline double value_of(double v) { return v; }
template <std::size_t N>
double value_of(const Dual<N>& d) { return d.value; }

}  // namespace degen
