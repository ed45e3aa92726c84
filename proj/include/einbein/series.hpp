#pragma once

#include <vector>

#include "einbein/types.hpp"

namespace einbein {

/// Dense truncated power series over Complex, coefficients ascending.
/// All operations truncate to the shorter relevant length.
namespace series {

using Series = std::vector<Complex>;

inline Series mul(const Series& a, const Series& b, size_t n) {
  Series r(n, Complex{0.0, 0.0});
  for (size_t i = 0; i < a.size() && i < n; ++i)
    for (size_t j = 0; j < b.size() && i + j < n; ++j) r[i + j] += a[i] * b[j];
  return r;
}

/// a / b with b[0] != 0.
inline Series div(const Series& a, const Series& b, size_t n) {
  Series r(n, Complex{0.0, 0.0});
  for (size_t i = 0; i < n; ++i) {
    Complex s = i < a.size() ? a[i] : Complex{0.0, 0.0};
    for (size_t j = 1; j <= i && j < b.size(); ++j) s -= b[j] * r[i - j];
    r[i] = s / b[0];
  }
  return r;
}

/// log(a) with a[0] = 1: integrate a'/a.
inline Series log(const Series& a, size_t n) {
  Series da(n, Complex{0.0, 0.0});
  for (size_t i = 1; i < a.size() && i <= n; ++i) da[i - 1] = double(i) * a[i];
  Series q = div(da, a, n);
  Series r(n, Complex{0.0, 0.0});
  for (size_t i = 1; i < n; ++i) r[i] = q[i - 1] / double(i);
  return r;
}

/// sin(t)/t as a series in t.
inline Series sinc(size_t n) {
  Series r(n, Complex{0.0, 0.0});
  double fact = 1.0;
  for (size_t k = 0; 2 * k < n; ++k) {
    if (k > 0) fact *= -1.0 / double(2 * k) / double(2 * k + 1);
    r[2 * k] = fact;
  }
  return r;
}

inline Series cos(size_t n) {
  Series r(n, Complex{0.0, 0.0});
  double fact = 1.0;
  for (size_t k = 0; 2 * k < n; ++k) {
    if (k > 0) fact *= -1.0 / double(2 * k - 1) / double(2 * k);
    r[2 * k] = fact;
  }
  return r;
}

/// cot(t) without the 1/t pole: cot(t) = 1/t + cot_regular(t).
inline Series cot_regular(size_t n) {
  // cot = cos/sin = cos/(t sinc) = (cos/sinc)/t; cos/sinc = 1 + O(t^2)
  Series q = div(cos(n + 1), sinc(n + 1), n + 1);
  Series r(n, Complex{0.0, 0.0});
  for (size_t i = 0; i < n; ++i) r[i] = q[i + 1];
  return r;
}

/// csc(t) without the 1/t pole.
inline Series csc_regular(size_t n) {
  Series one{Complex{1.0, 0.0}};
  Series q = div(one, sinc(n + 1), n + 1);
  Series r(n, Complex{0.0, 0.0});
  for (size_t i = 0; i < n; ++i) r[i] = q[i + 1];
  return r;
}

inline Complex eval(const Series& a, Complex t) {
  Complex v{0.0, 0.0};
  for (size_t i = a.size(); i-- > 0;) v = v * t + a[i];
  return v;
}

}  // namespace series
}  // namespace einbein
