#pragma once
// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical code.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

struct Dense {
  int n = 0;
  std::vector<cd> a;
  explicit Dense(int size = 0) : n(size), a(static_cast<std::size_t>(size) * size) {}
  cd& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  cd operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

inline Dense unit(int n, int i, int j, cd v = 1.0) {
  Dense d(n);
  d(i, j) = v;
  return d;
}

inline Dense add(const Dense& x, const Dense& y, cd s = 1.0) {
  Dense out(x.n);
  for (std::size_t k = 0; k < x.a.size(); ++k) out.a[k] = x.a[k] + s * y.a[k];
  return out;
}

inline Dense scale(const Dense& x, cd s) {
  Dense out(x.n);
  for (std::size_t k = 0; k < x.a.size(); ++k) out.a[k] = s * x.a[k];
  return out;
}

// Entrywise triple loop.
inline Dense multiply(const Dense& x, const Dense& y) {
  Dense out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      cd s = 0.0;
      for (int k = 0; k < x.n; ++k) s += x(i, k) * y(k, j);
      out(i, j) = s;
    }
  return out;
}

inline Dense commutator(const Dense& x, const Dense& y) {
  return add(multiply(x, y), multiply(y, x), -1.0);
}

inline cd trace(const Dense& x) {
  cd s = 0.0;
  for (int i = 0; i < x.n; ++i) s += x(i, i);
  return s;
}

inline double max_abs_diff(const Dense& x, const Dense& y) {
  double m = 0.0;
  for (std::size_t k = 0; k < x.a.size(); ++k) m = std::max(m, std::abs(x.a[k] - y.a[k]));
  return m;
}

// sl(3) generators E_ij / sqrt(6), 1-based indices.
inline Dense sl3_x(int i, int j) { return unit(3, i - 1, j - 1, 1.0 / std::sqrt(6.0)); }

// sp(4) generators with m = 1/sqrt(6), 1-based indices, l = 2.
inline Dense sp4_x_diff(int i, int j) {
  const double h = 1.0 / std::sqrt(12.0);
  return add(unit(4, i - 1, j - 1, h), unit(4, 2 + j - 1, 2 + i - 1, h), -1.0);
}
inline Dense sp4_x_sum(int i, int j) {
  const double h = 1.0 / std::sqrt(12.0);
  if (i == j) return unit(4, i - 1, 2 + i - 1, 1.0 / std::sqrt(6.0));
  return add(unit(4, i - 1, 2 + j - 1, h), unit(4, j - 1, 2 + i - 1, h));
}
inline Dense transpose(const Dense& x) {
  Dense out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) out(i, j) = x(j, i);
  return out;
}

}  // namespace oracle
