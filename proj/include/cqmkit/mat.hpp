#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cqmkit/scalar.hpp"

namespace cqmkit {

// dense row-major matrix over one theory's semiring
class Mat {
 public:
  Mat(const Theory* t, std::size_t rows, std::size_t cols);  // zero-filled
  static Mat identity(const Theory* t, std::size_t d);
  static Mat from_rows(const Theory* t, const std::vector<std::vector<Scalar>>& rows);
  static Mat column(const Theory* t, const std::vector<Scalar>& entries);
  static Mat basis_column(const Theory* t, std::size_t d, std::size_t i);

  const Theory* theory() const { return theory_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Scalar& at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Scalar& v);

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Mat operator+(const Mat& a, const Mat& b);
  Mat scaled(const Scalar& s) const;

  bool equals(const Mat& o, double tol) const;
  friend bool operator==(const Mat& a, const Mat& b) { return a.equals(b, tolerance()); }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }
  // largest entrywise Scalar::distance; shape or theory mismatch counts as 1
  double max_distance(const Mat& o) const;

  std::string str() const;

 private:
  const Theory* theory_;
  std::size_t rows_, cols_;
  std::vector<Scalar> entries_;
};

Mat dagger(const Mat& m);
Mat conj_entries(const Mat& m);
Mat tensor(const Mat& a, const Mat& b);  // first factor slowest: index (n,m) -> n*dim_b + m

struct Distribution {
  const Theory* theory;
  std::map<long long, Scalar> weights;
  Scalar total() const;
};

// state is a d x 1 column (pure) or d x d density matrix; norms[i] must equal
// <b_i|b_i> and be invertible; completeness sum |b_i><b_i| / N_i = id is checked
Distribution born_distribution(const Mat& state, const std::vector<Mat>& basis,
                               const std::vector<Scalar>& norms);

Mat cpm_double(const Mat& m);                     // conj(m) (x) m
Mat discard(const Theory* t, std::size_t dim);    // 1 x dim^2 row pairing conjugate indices

struct PurificationReport {
  std::size_t x_size = 0;
  bool dilation_of_identity = false;        // (id (x) discard) double(f) = double(id)
  bool product_decomposition_exists = true; // some state psi with f = id (x) psi
  bool counterexample() const { return dilation_of_identity && !product_decomposition_exists; }
};

// f := sum over nonempty U subset X, x in U of |x>(x)|U> <x|
PurificationReport check_purification_counterexample(const Theory* t, std::size_t x_size);

}  // namespace cqmkit
