#pragma once

// Second-order forward jets: value, spatial gradient and Laplacian carried
// through arithmetic and elementary functions. The triple is closed under
// composition since
//   lap(phi(u)) = phi'(u) lap(u) + phi''(u) |grad u|^2,
//   lap(u v)    = u lap(v) + v lap(u) + 2 grad(u).grad(v).

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>

namespace cpinn {

template <typename Scalar, int Dim>
struct Jet2 {
  using Vector = Eigen::Matrix<Scalar, Dim, 1>;

  Scalar value{0};
  Vector grad = Vector::Zero();
  Scalar lap{0};

  Jet2() = default;
  Jet2(Scalar v) : value(v) {}  // NOLINT: constants promote implicitly
  Jet2(Scalar v, const Vector& g, Scalar l) : value(v), grad(g), lap(l) {}

  /// The coordinate function x_i evaluated at x.
  static Jet2 variable(Scalar x, int i) {
    Jet2 j(x);
    j.grad(i) = Scalar(1);
    return j;
  }

  Jet2& operator+=(const Jet2& o) {
    value += o.value;
    grad += o.grad;
    lap += o.lap;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    value -= o.value;
    grad -= o.grad;
    lap -= o.lap;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
  Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator-(const Jet2& a) { return Jet2(-a.value, -a.grad, -a.lap); }
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    return Jet2(a.value * b.value, a.value * b.grad + b.value * a.grad,
                a.value * b.lap + b.value * a.lap + Scalar(2) * a.grad.dot(b.grad));
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

  /// phi(u) given phi(u), phi'(u), phi''(u).
  static Jet2 chain(const Jet2& u, Scalar f, Scalar f1, Scalar f2) {
    return Jet2(f, f1 * u.grad, f1 * u.lap + f2 * u.grad.squaredNorm());
  }

  friend Jet2 reciprocal(const Jet2& u) {
    const Scalar inv = Scalar(1) / u.value;
    return chain(u, inv, -inv * inv, Scalar(2) * inv * inv * inv);
  }
};

template <typename S, int D>
Jet2<S, D> exp(const Jet2<S, D>& u) {
  using std::exp;
  const S e = exp(u.value);
  return Jet2<S, D>::chain(u, e, e, e);
}

template <typename S, int D>
Jet2<S, D> log(const Jet2<S, D>& u) {
  using std::log;
  return Jet2<S, D>::chain(u, log(u.value), S(1) / u.value, -S(1) / (u.value * u.value));
}

template <typename S, int D>
Jet2<S, D> sin(const Jet2<S, D>& u) {
  using std::cos;
  using std::sin;
  const S s = sin(u.value);
  return Jet2<S, D>::chain(u, s, cos(u.value), -s);
}

template <typename S, int D>
Jet2<S, D> cos(const Jet2<S, D>& u) {
  using std::cos;
  using std::sin;
  const S c = cos(u.value);
  return Jet2<S, D>::chain(u, c, -sin(u.value), -c);
}

template <typename S, int D>
Jet2<S, D> tanh(const Jet2<S, D>& u) {
  using std::tanh;
  const S t = tanh(u.value);
  const S t1 = S(1) - t * t;
  return Jet2<S, D>::chain(u, t, t1, S(-2) * t * t1);
}

template <typename S, int D>
Jet2<S, D> sqrt(const Jet2<S, D>& u) {
  using std::sqrt;
  const S s = sqrt(u.value);
  return Jet2<S, D>::chain(u, s, S(0.5) / s, S(-0.25) / (s * u.value));
}

/// u^a for real a; at u = 0 the derivatives are taken as their limits (valid for a >= 2).
template <typename S, int D>
Jet2<S, D> pow(const Jet2<S, D>& u, S a) {
  using std::pow;
  const S f = pow(u.value, a);
  const S f1 = u.value == S(0) ? S(a == S(1) ? 1 : 0) : a * pow(u.value, a - S(1));
  const S f2 = u.value == S(0) ? S(a == S(2) ? 2 : 0) : a * (a - S(1)) * pow(u.value, a - S(2));
  return Jet2<S, D>::chain(u, f, f1, f2);
}

/// max(x, 0)^3 and its first three derivatives.
template <typename S>
struct Relu3 {
  static S f(S x) { return x > S(0) ? x * x * x : S(0); }
  static S d1(S x) { return x > S(0) ? S(3) * x * x : S(0); }
  static S d2(S x) { return x > S(0) ? S(6) * x : S(0); }
  static S d3(S x) { return x > S(0) ? S(6) : S(0); }
};

inline double relu3(double x) { return Relu3<double>::f(x); }

template <typename S, int D>
Jet2<S, D> relu3(const Jet2<S, D>& u) {
  return Jet2<S, D>::chain(u, Relu3<S>::f(u.value), Relu3<S>::d1(u.value), Relu3<S>::d2(u.value));
}

/// Jets of the coordinate functions at x.
template <typename S, int D>
std::array<Jet2<S, D>, D> coordinates(const Eigen::Matrix<S, D, 1>& x) {
  std::array<Jet2<S, D>, D> out;
  for (int i = 0; i < D; ++i) out[i] = Jet2<S, D>::variable(x(i), i);
  return out;
}

using Jet2d = Jet2<double, 2>;
using Jet3d = Jet2<double, 3>;

}  // namespace cpinn
