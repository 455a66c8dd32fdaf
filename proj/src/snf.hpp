#pragma once

#include <cstdlib>
#include <optional>
#include <vector>

// Smith normal form over Z with transform tracking, for the small dense
// relation matrices that show up in quotient construction and equation
// solving. U*A*V = D with U, V unimodular and D diagonal with a divisibility
// chain d_1 | d_2 | ...
namespace cqmkit::snf {

using IMat = std::vector<std::vector<long long>>;

inline IMat identity(std::size_t n) {
  IMat m(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

struct Result {
  IMat d;
  IMat u;     // row transform
  IMat v;     // column transform
  IMat vinv;  // inverse of v
  std::vector<long long> diag;  // min(rows,cols) entries, zeros for rank deficit
};

inline Result smith(IMat a) {
  const std::size_t r = a.size(), c = r ? a[0].size() : 0;
  Result res;
  res.u = identity(r);
  res.v = identity(c);
  res.vinv = identity(c);

  auto row_sub = [&](std::size_t i, std::size_t j, long long f) {  // row_i -= f*row_j
    for (std::size_t k = 0; k < c; ++k) a[i][k] -= f * a[j][k];
    for (std::size_t k = 0; k < r; ++k) res.u[i][k] -= f * res.u[j][k];
  };
  auto col_sub = [&](std::size_t i, std::size_t j, long long f) {  // col_i -= f*col_j
    for (std::size_t k = 0; k < r; ++k) a[k][i] -= f * a[k][j];
    for (std::size_t k = 0; k < c; ++k) res.v[k][i] -= f * res.v[k][j];
    for (std::size_t k = 0; k < c; ++k) res.vinv[j][k] += f * res.vinv[i][k];
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(res.u[i], res.u[j]);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < r; ++k) std::swap(a[k][i], a[k][j]);
    for (std::size_t k = 0; k < c; ++k) std::swap(res.v[k][i], res.v[k][j]);
    std::swap(res.vinv[i], res.vinv[j]);
  };
  auto row_neg = [&](std::size_t i) {
    for (std::size_t k = 0; k < c; ++k) a[i][k] = -a[i][k];
    for (std::size_t k = 0; k < r; ++k) res.u[i][k] = -res.u[i][k];
  };

  const std::size_t m = std::min(r, c);

  // clears row t and column t below/right of the pivot, starting at stage t
  auto diagonalize_from = [&](std::size_t start) {
    for (std::size_t t = start; t < m; ++t) {
      for (;;) {
        std::size_t pi = t, pj = t;
        long long best = 0;
        for (std::size_t i = t; i < r; ++i)
          for (std::size_t j = t; j < c; ++j)
            if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
              best = std::llabs(a[i][j]);
              pi = i;
              pj = j;
            }
        if (best == 0) return;
        if (pi != t) row_swap(pi, t);
        if (pj != t) col_swap(pj, t);
        bool clean = true;
        for (std::size_t i = t + 1; i < r && clean; ++i)
          if (a[i][t] != 0) {
            row_sub(i, t, a[i][t] / a[t][t]);
            if (a[i][t] != 0) clean = false;  // remainder beats pivot, re-pick
          }
        for (std::size_t j = t + 1; j < c && clean; ++j)
          if (a[t][j] != 0) {
            col_sub(j, t, a[t][j] / a[t][t]);
            if (a[t][j] != 0) clean = false;
          }
        if (clean) break;
      }
      if (a[t][t] < 0) row_neg(t);
    }
  };

  diagonalize_from(0);

  // enforce the divisibility chain
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t t = 0; t + 1 < m; ++t) {
      long long x = a[t][t], y = a[t + 1][t + 1];
      if (x != 0 && y % x != 0) {
        col_sub(t, t + 1, -1);  // reintroduce a coupling entry, then re-eliminate
        diagonalize_from(t);
        changed = true;
      }
    }
  }

  res.d = a;
  res.diag.resize(m);
  for (std::size_t t = 0; t < m; ++t) res.diag[t] = a[t][t];
  return res;
}

// any integer solution of A x = b, or nullopt
inline std::optional<std::vector<long long>> solve_integer(const IMat& a,
                                                           const std::vector<long long>& b) {
  const std::size_t r = a.size(), c = r ? a[0].size() : 0;
  if (r == 0) return std::vector<long long>(c, 0);
  Result s = smith(a);
  std::vector<long long> t(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k) t[i] += s.u[i][k] * b[k];
  std::vector<long long> y(c, 0);
  for (std::size_t i = 0; i < r; ++i) {
    long long d = i < s.diag.size() ? s.diag[i] : 0;
    if (d == 0) {
      if (t[i] != 0) return std::nullopt;
    } else {
      if (t[i] % d != 0) return std::nullopt;
      if (i < c) y[i] = t[i] / d;
    }
  }
  std::vector<long long> x(c, 0);
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t k = 0; k < c; ++k) x[i] += s.v[i][k] * y[k];
  return x;
}

}  // namespace cqmkit::snf
