// Copyright 2026 The goalcast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOALCAST_DUAL_HPP_
#define GOALCAST_DUAL_HPP_

#include <cmath>

#include <Eigen/Core>

namespace goalcast {

// First-order forward-mode scalar carrying N tangent slots. Seeding slot i
// with 1 makes .d(i) the partial derivative with respect to variable i.
template <int N>
struct Dual {
  using Tangent = Eigen::Matrix<double, N, 1>;

  double v = 0.0;
  Tangent d = Tangent::Zero();

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit promotion of constants
  Dual(double value, const Tangent& tangent) : v(value), d(tangent) {}

  static Dual Variable(double value, int slot) {
    Dual out(value);
    out.d(slot) = 1.0;
    return out;
  }

  Dual& operator+=(const Dual& rhs) {
    v += rhs.v;
    d += rhs.d;
    return *this;
  }
  Dual& operator-=(const Dual& rhs) {
    v -= rhs.v;
    d -= rhs.d;
    return *this;
  }
  Dual& operator*=(const Dual& rhs) {
    d = v * rhs.d + rhs.v * d;
    v *= rhs.v;
    return *this;
  }
  Dual& operator/=(const Dual& rhs) {
    v /= rhs.v;
    d = (d - v * rhs.d) / rhs.v;
    return *this;
  }

  Dual operator-() const { return Dual(-v, -d); }
};

template <int N>
Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N>
Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N>
Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N>
Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }

template <int N>
Dual<N> operator+(double a, Dual<N> b) { b.v += a; return b; }
template <int N>
Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <int N>
Dual<N> operator-(double a, const Dual<N>& b) { return Dual<N>(a - b.v, -b.d); }
template <int N>
Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <int N>
Dual<N> operator*(double a, Dual<N> b) { b.v *= a; b.d *= a; return b; }
template <int N>
Dual<N> operator*(Dual<N> a, double b) { a.v *= b; a.d *= b; return a; }
template <int N>
Dual<N> operator/(double a, const Dual<N>& b) { return Dual<N>(a) / b; }
template <int N>
Dual<N> operator/(Dual<N> a, double b) { a.v /= b; a.d /= b; return a; }

template <int N>
bool operator<(const Dual<N>& a, const Dual<N>& b) { return a.v < b.v; }
template <int N>
bool operator>(const Dual<N>& a, const Dual<N>& b) { return a.v > b.v; }

template <int N>
Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.v);
  return Dual<N>(s, a.d / (2.0 * s));
}

template <int N>
Dual<N> tanh(const Dual<N>& a) {
  const double t = std::tanh(a.v);
  return Dual<N>(t, (1.0 - t * t) * a.d);
}

template <int N>
Dual<N> exp(const Dual<N>& a) {
  const double e = std::exp(a.v);
  return Dual<N>(e, e * a.d);
}

template <int N>
Dual<N> sin(const Dual<N>& a) {
  return Dual<N>(std::sin(a.v), std::cos(a.v) * a.d);
}

template <int N>
Dual<N> cos(const Dual<N>& a) {
  return Dual<N>(std::cos(a.v), -std::sin(a.v) * a.d);
}

// Second-order forward-mode scalar: value, gradient and full Hessian over N
// variables in one sweep. Multiplication is O(N^2), so keep the active set
// small (the models instantiate N <= 30).
template <int N>
struct Dual2 {
  using Grad = Eigen::Matrix<double, N, 1>;
  using Hess = Eigen::Matrix<double, N, N>;

  double v = 0.0;
  Grad g = Grad::Zero();
  Hess h = Hess::Zero();

  Dual2() = default;
  Dual2(double value) : v(value) {}  // NOLINT
  static Dual2 Variable(double value, int slot) {
    Dual2 out(value);
    out.g(slot) = 1.0;
    return out;
  }

  Dual2& operator+=(const Dual2& rhs) {
    v += rhs.v;
    g += rhs.g;
    h += rhs.h;
    return *this;
  }
  Dual2& operator-=(const Dual2& rhs) {
    v -= rhs.v;
    g -= rhs.g;
    h -= rhs.h;
    return *this;
  }
  Dual2& operator*=(const Dual2& rhs) {
    h = v * rhs.h + rhs.v * h + g * rhs.g.transpose() + rhs.g * g.transpose();
    g = v * rhs.g + rhs.v * g;
    v *= rhs.v;
    return *this;
  }
  Dual2& operator/=(const Dual2& rhs) {
    // a/b = a * b^-1 with (b^-1)' = -b'/b^2, (b^-1)'' = (2 b' b'^T - b b'') / b^3
    const double inv = 1.0 / rhs.v;
    const Dual2 recip(inv, -inv * inv * rhs.g,
                      inv * inv * inv *
                          (2.0 * rhs.g * rhs.g.transpose() - rhs.v * rhs.h));
    return *this *= recip;
  }

  Dual2(double value, const Grad& grad, const Hess& hess)
      : v(value), g(grad), h(hess) {}

  Dual2 operator-() const { return Dual2(-v, -g, -h); }
};

template <int N>
Dual2<N> operator+(Dual2<N> a, const Dual2<N>& b) { return a += b; }
template <int N>
Dual2<N> operator-(Dual2<N> a, const Dual2<N>& b) { return a -= b; }
template <int N>
Dual2<N> operator*(Dual2<N> a, const Dual2<N>& b) { return a *= b; }
template <int N>
Dual2<N> operator/(Dual2<N> a, const Dual2<N>& b) { return a /= b; }

template <int N>
Dual2<N> operator+(double a, Dual2<N> b) { b.v += a; return b; }
template <int N>
Dual2<N> operator+(Dual2<N> a, double b) { a.v += b; return a; }
template <int N>
Dual2<N> operator-(double a, const Dual2<N>& b) {
  return Dual2<N>(a - b.v, -b.g, -b.h);
}
template <int N>
Dual2<N> operator-(Dual2<N> a, double b) { a.v -= b; return a; }
template <int N>
Dual2<N> operator*(double a, Dual2<N> b) {
  b.v *= a;
  b.g *= a;
  b.h *= a;
  return b;
}
template <int N>
Dual2<N> operator*(Dual2<N> a, double b) { return b * a; }
template <int N>
Dual2<N> operator/(Dual2<N> a, double b) { return (1.0 / b) * a; }
template <int N>
Dual2<N> operator/(double a, const Dual2<N>& b) { return Dual2<N>(a) / b; }

// Applies a scalar function given f(x), f'(x), f''(x) at a.v.
template <int N>
Dual2<N> chain(const Dual2<N>& a, double f, double df, double ddf) {
  return Dual2<N>(f, df * a.g, df * a.h + ddf * a.g * a.g.transpose());
}

template <int N>
Dual2<N> sqrt(const Dual2<N>& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}

template <int N>
Dual2<N> tanh(const Dual2<N>& a) {
  const double t = std::tanh(a.v);
  const double sech2 = 1.0 - t * t;
  return chain(a, t, sech2, -2.0 * t * sech2);
}

template <int N>
Dual2<N> exp(const Dual2<N>& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}

}  // namespace goalcast

#endif  // GOALCAST_DUAL_HPP_
