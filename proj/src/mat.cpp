#include "cqmkit/mat.hpp"

#include <sstream>

#include "cqmkit/error.hpp"

namespace cqmkit {

Mat::Mat(const Theory* t, std::size_t rows, std::size_t cols)
    : theory_(t), rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) raise(ErrorCode::Usage, "matrix dimensions must be positive");
  entries_.assign(rows * cols, Scalar::zero(t));
}

Mat Mat::identity(const Theory* t, std::size_t d) {
  Mat m(t, d, d);
  for (std::size_t i = 0; i < d; ++i) m.set(i, i, Scalar::one(t));
  return m;
}

Mat Mat::from_rows(const Theory* t, const std::vector<std::vector<Scalar>>& rows) {
  if (rows.empty() || rows[0].empty()) raise(ErrorCode::Usage, "matrix dimensions must be positive");
  Mat m(t, rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) raise(ErrorCode::Usage, "ragged matrix rows");
    for (std::size_t c = 0; c < m.cols_; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Mat Mat::column(const Theory* t, const std::vector<Scalar>& entries) {
  Mat m(t, entries.size(), 1);
  for (std::size_t r = 0; r < entries.size(); ++r) m.set(r, 0, entries[r]);
  return m;
}

Mat Mat::basis_column(const Theory* t, std::size_t d, std::size_t i) {
  Mat m(t, d, 1);
  m.set(i, 0, Scalar::one(t));
  return m;
}

const Scalar& Mat::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) raise(ErrorCode::Usage, "matrix index out of range");
  return entries_[r * cols_ + c];
}

void Mat::set(std::size_t r, std::size_t c, const Scalar& v) {
  if (r >= rows_ || c >= cols_) raise(ErrorCode::Usage, "matrix index out of range");
  if (v.theory() != theory_) raise(ErrorCode::InvalidTheory, "entry from a different theory");
  entries_[r * cols_ + c] = v;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.theory_ != b.theory_) raise(ErrorCode::InvalidTheory, "theory mismatch in product");
  if (a.cols_ != b.rows_) raise(ErrorCode::Usage, "inner dimensions differ");
  Mat out(a.theory_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a.entries_[i * a.cols_ + k];
      if (aik.equals(Scalar::zero(a.theory_), 0)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        out.entries_[i * out.cols_ + j] += aik * b.entries_[k * b.cols_ + j];
    }
  return out;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (a.theory_ != b.theory_) raise(ErrorCode::InvalidTheory, "theory mismatch in sum");
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) raise(ErrorCode::Usage, "shape mismatch in sum");
  Mat out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
  return out;
}

Mat Mat::scaled(const Scalar& s) const {
  if (s.theory() != theory_) raise(ErrorCode::InvalidTheory, "scale from a different theory");
  Mat out = *this;
  for (Scalar& e : out.entries_) e *= s;
  return out;
}

bool Mat::equals(const Mat& o, double tol) const {
  if (theory_ != o.theory_ || rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (!entries_[i].equals(o.entries_[i], tol)) return false;
  return true;
}

double Mat::max_distance(const Mat& o) const {
  if (theory_ != o.theory_ || rows_ != o.rows_ || cols_ != o.cols_) return 1;
  double d = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    d = std::max(d, entries_[i].distance(o.entries_[i]));
  return d;
}

std::string Mat::str() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? "\n[" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << at(r, c).str();
    os << "]";
  }
  return os.str();
}

Mat dagger(const Mat& m) {
  Mat out(m.theory(), m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out.set(c, r, involve(m.at(r, c)));
  return out;
}

Mat conj_entries(const Mat& m) {
  Mat out(m.theory(), m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out.set(r, c, involve(m.at(r, c)));
  return out;
}

Mat tensor(const Mat& a, const Mat& b) {
  if (a.theory() != b.theory()) raise(ErrorCode::InvalidTheory, "theory mismatch in tensor");
  Mat out(a.theory(), a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ra = 0; ra < a.rows(); ++ra)
    for (std::size_t ca = 0; ca < a.cols(); ++ca) {
      const Scalar& v = a.at(ra, ca);
      if (v.equals(Scalar::zero(a.theory()), 0)) continue;
      for (std::size_t rb = 0; rb < b.rows(); ++rb)
        for (std::size_t cb = 0; cb < b.cols(); ++cb)
          out.set(ra * b.rows() + rb, ca * b.cols() + cb, v * b.at(rb, cb));
    }
  return out;
}

Scalar Distribution::total() const {
  Scalar s = Scalar::zero(theory);
  for (const auto& [k, w] : weights) s += w;
  return s;
}

Distribution born_distribution(const Mat& state, const std::vector<Mat>& basis,
                               const std::vector<Scalar>& norms) {
  const Theory* t = state.theory();
  const std::size_t d = state.rows();
  const bool density = state.cols() == d && d > 1;
  if (state.cols() != 1 && !density) raise(ErrorCode::Usage, "state must be a column or square");
  if (basis.size() != norms.size()) raise(ErrorCode::Usage, "one norm per basis vector");

  std::vector<Scalar> inv;
  for (const Scalar& n : norms) {
    if (n.theory() != t) raise(ErrorCode::InvalidTheory, "norm from a different theory");
    if (!is_invertible(n)) raise(ErrorCode::NonInvertibleNorm, "basis norm not invertible");
    inv.push_back(invert(n));
  }

  Mat resolution(t, d, d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Mat& b = basis[i];
    if (b.theory() != t || b.rows() != d || b.cols() != 1)
      raise(ErrorCode::Usage, "basis vector shape mismatch");
    if (!(dagger(b) * b).at(0, 0).equals(norms[i], tolerance()))
      raise(ErrorCode::Usage, "declared norm differs from <b|b>");
    resolution = resolution + (b * dagger(b)).scaled(inv[i]);
  }
  if (resolution != Mat::identity(t, d))
    raise(ErrorCode::IncompleteBasis, "basis does not resolve the identity");

  Distribution out{t, {}};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Scalar w;
    if (density) {
      w = (dagger(basis[i]) * state * basis[i]).at(0, 0) * inv[i];
    } else {
      Scalar amp = (dagger(basis[i]) * state).at(0, 0);
      w = involve(amp) * amp * inv[i];
    }
    out.weights.emplace(static_cast<long long>(i), w);
  }
  return out;
}

Mat cpm_double(const Mat& m) { return tensor(conj_entries(m), m); }

Mat discard(const Theory* t, std::size_t dim) {
  Mat out(t, 1, dim * dim);
  for (std::size_t x = 0; x < dim; ++x) out.set(0, x * dim + x, Scalar::one(t));
  return out;
}

namespace {

// CPM form of id_X tensor discard_E: maps the doubled X*E system to the doubled
// X system by pairing the conjugate and plain E indices
Mat partial_discard(const Theory* t, std::size_t x, std::size_t e) {
  const std::size_t xe = x * e;
  Mat out(t, x * x, xe * xe);
  for (std::size_t xc = 0; xc < x; ++xc)
    for (std::size_t xp = 0; xp < x; ++xp)
      for (std::size_t u = 0; u < e; ++u)
        out.set(xc * x + xp, (xc * e + u) * xe + (xp * e + u), Scalar::one(t));
  return out;
}

}  // namespace

PurificationReport check_purification_counterexample(const Theory* t, std::size_t x_size) {
  Scalar one = Scalar::one(t);
  if (!(one + one).equals(one, 0)) raise(ErrorCode::NotApplicable, "unit is not additively idempotent");
  if (x_size < 2) raise(ErrorCode::Usage, "need at least two points");
  if (x_size > 10) raise(ErrorCode::TooLarge, "environment dimension 2^X-1 above 1024");
  const std::size_t env = (std::size_t{1} << x_size) - 1;  // nonempty subsets as bitmasks 1..2^X-1

  Mat f(t, x_size * env, x_size);
  for (std::size_t u = 1; u <= env; ++u)
    for (std::size_t x = 0; x < x_size; ++x)
      if (u & (std::size_t{1} << x)) f.set(x * env + (u - 1), x, one);

  PurificationReport rep;
  rep.x_size = x_size;
  rep.dilation_of_identity =
      partial_discard(t, x_size, env) * cpm_double(f) == cpm_double(Mat::identity(t, x_size));

  rep.product_decomposition_exists = false;
  Mat id = Mat::identity(t, x_size);
  if (t->kind() == TheoryKind::Boolean && env <= 15) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << env); ++bits) {
      Mat psi(t, env, 1);
      for (std::size_t u = 0; u < env; ++u)
        if (bits & (std::size_t{1} << u)) psi.set(u, 0, one);
      if (tensor(id, psi) == f) {
        rep.product_decomposition_exists = true;
        break;
      }
    }
  } else {
    // f = id (x) psi forces psi_U = f[(x,U), x] for every x at once, plus zero
    // off-diagonal blocks; read psi off x = 0 and compare
    Mat psi(t, env, 1);
    for (std::size_t u = 0; u < env; ++u) psi.set(u, 0, f.at(u, 0));
    rep.product_decomposition_exists = tensor(id, psi) == f;
  }
  return rep;
}

}  // namespace cqmkit
