#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "cqmkit/error.hpp"
#include "cqmkit/mat.hpp"

namespace cqmkit {

// sparse matrices keep structure-map algebra at O(nonzeros); dense
// intermediates of e.g. the bialgebra law would need d^4 x d^2 entries
struct SMat {
  const Theory* t;
  std::size_t rows, cols;
  std::vector<std::map<std::size_t, Scalar>> row;

  SMat(const Theory* t_, std::size_t r_, std::size_t c_) : t(t_), rows(r_), cols(c_), row(r_) {}

  static SMat eye(const Theory* t, std::size_t d) {
    SMat m(t, d, d);
    for (std::size_t i = 0; i < d; ++i) m.row[i].emplace(i, Scalar::one(t));
    return m;
  }

  static SMat from(const Mat& m) {
    SMat out(m.theory(), m.rows(), m.cols());
    Scalar z = Scalar::zero(m.theory());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (!m.at(r, c).equals(z, 0)) out.row[r].emplace(c, m.at(r, c));
    return out;
  }

  Mat dense() const {
    Mat out(t, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (const auto& [c, v] : row[r]) out.set(r, c, v);
    return out;
  }

  SMat scaled(const Scalar& s) const {
    SMat out = *this;
    for (auto& m : out.row)
      for (auto& [c, v] : m) v *= s;
    return out;
  }
};

inline SMat smul(const SMat& a, const SMat& b) {
  if (a.cols != b.rows) raise(ErrorCode::Usage, "inner dimensions differ");
  SMat out(a.t, a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (const auto& [k, va] : a.row[i])
      for (const auto& [j, vb] : b.row[k]) {
        auto it = out.row[i].find(j);
        if (it == out.row[i].end())
          out.row[i].emplace(j, va * vb);
        else
          it->second += va * vb;
      }
  return out;
}

inline SMat stensor(const SMat& a, const SMat& b) {
  SMat out(a.t, a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (const auto& [j, va] : a.row[i])
      for (std::size_t k = 0; k < b.rows; ++k)
        for (const auto& [l, vb] : b.row[k]) out.row[i * b.rows + k].emplace(j * b.cols + l, va * vb);
  return out;
}

inline SMat sdagger(const SMat& a) {
  SMat out(a.t, a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (const auto& [j, v] : a.row[i]) out.row[j].emplace(i, involve(v));
  return out;
}

// permutation sending basis column c to row f(c)
inline SMat sperm(const Theory* t, std::size_t n, const std::function<std::size_t(std::size_t)>& f) {
  SMat out(t, n, n);
  for (std::size_t c = 0; c < n; ++c) out.row[f(c)].emplace(c, Scalar::one(t));
  return out;
}

inline double sresidual(const SMat& a, const SMat& b) {
  if (a.rows != b.rows || a.cols != b.cols || a.t != b.t) return 1;
  Scalar z = Scalar::zero(a.t);
  double res = 0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (const auto& [c, v] : a.row[i]) {
      auto it = b.row[i].find(c);
      res = std::max(res, v.distance(it == b.row[i].end() ? z : it->second));
    }
    for (const auto& [c, v] : b.row[i])
      if (!a.row[i].count(c)) res = std::max(res, v.distance(z));
  }
  return res;
}

}  // namespace cqmkit
