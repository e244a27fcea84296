#include "opmin/qlinalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace opmin {

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t.push_back(c);
  if (t.empty()) throw std::invalid_argument("empty rational");
  auto slash = t.find('/');
  auto digits_ok = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t k = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) k = 1;
    if (k == s.size()) return false;
    for (; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? t : t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false))
    throw std::invalid_argument("malformed rational '" + text + "'");
  if (num[0] == '+') num = num.substr(1);
  mpz_class n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (const auto& x : r) data_.push_back(x);
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_columns(std::size_t rows, const std::vector<QVector>& cols) {
  QMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw std::invalid_argument("from_columns: column length");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

QVector QMatrix::column(std::size_t c) const {
  QVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

QVector QMatrix::row(std::size_t r) const {
  return QVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return opmin::is_zero(x); });
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  QMatrix p(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(r, k);
      if (opmin::is_zero(a)) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) {
        const Rational& b = o(k, c);
        if (!opmin::is_zero(b)) p(r, c) += a * b;
      }
    }
  return p;
}

QVector QMatrix::operator*(const QVector& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
  QVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!opmin::is_zero(v[c])) out[r] += (*this)(r, c) * v[c];
  return out;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  QMatrix s = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] += o.data_[k];
  return s;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference: shape mismatch");
  QMatrix s = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] -= o.data_[k];
  return s;
}

QMatrix& QMatrix::operator*=(const Rational& c) {
  for (auto& x : data_) x *= c;
  return *this;
}

bool QMatrix::operator==(const QMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

std::string QMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? "; " : "");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c).get_str();
  }
  os << "]";
  return os.str();
}

RrefResult rref(const QMatrix& m) {
  RrefResult res{m, {}};
  QMatrix& a = res.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && is_zero(a(piv, col))) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row)
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(piv, c), a(row, c));
    Rational inv = 1 / a(row, col);
    for (std::size_t c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || is_zero(a(r, col))) continue;
      Rational f = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c)
        if (!is_zero(a(row, c))) a(r, c) -= f * a(row, c);
    }
    res.pivots.push_back(col);
    ++row;
  }
  return res;
}

std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

bool Subspace::contains(const QVector& v) const {
  if (v.size() != ambient_dim) return false;
  if (basis.empty()) return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_zero(x); });
  return solve(QMatrix::from_columns(ambient_dim, basis), v).has_value();
}

Subspace kernel_basis(const QMatrix& m) {
  RrefResult r = rref(m);
  Subspace ker{m.cols(), {}};
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector v(m.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < r.pivots.size(); ++k) v[r.pivots[k]] = -r.reduced(k, f);
    ker.basis.push_back(std::move(v));
  }
  return ker;
}

std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: right-hand side length");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  RrefResult r = rref(aug);
  if (!r.pivots.empty() && r.pivots.back() == a.cols()) return std::nullopt;
  QVector x(a.cols());
  for (std::size_t k = 0; k < r.pivots.size(); ++k) x[r.pivots[k]] = r.reduced(k, a.cols());
  return x;
}

namespace {

QMatrix reverse_columns(const QMatrix& m) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < m.cols(); ++c) r(i, m.cols() - 1 - c) = m(i, c);
  return r;
}

QMatrix reverse_rows(const QMatrix& m) { return reverse_columns(m.transpose()).transpose(); }

QMatrix inverse(const QMatrix& s) {
  const std::size_t n = s.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = s(r, c);
    aug(r, n + r) = 1;
  }
  RrefResult rr = rref(aug);
  if (rr.pivots.size() < n || rr.pivots[n - 1] >= n) throw LinalgError("singular matrix");
  QMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = rr.reduced(r, n + c);
  return inv;
}

// left inverse of a full-column-rank matrix
QMatrix left_inverse(const QMatrix& m) {
  RrefResult rt = rref(m.transpose());
  if (rt.pivots.size() != m.cols()) throw LinalgError("left_inverse: columns are dependent");
  QMatrix sub(m.cols(), m.cols());
  for (std::size_t k = 0; k < m.cols(); ++k)
    for (std::size_t c = 0; c < m.cols(); ++c) sub(k, c) = m(rt.pivots[k], c);
  QMatrix sinv = inverse(sub);
  QMatrix l(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.cols(); ++r)
    for (std::size_t k = 0; k < m.cols(); ++k) l(r, rt.pivots[k]) = sinv(r, k);
  return l;
}

CohomologyResult cohomology_first(const QMatrix& d_in, const QMatrix& d_out) {
  const std::size_t w = d_in.rows();
  Subspace z = kernel_basis(d_out);
  std::vector<QVector> cols;
  std::size_t b = 0;
  {
    RrefResult rb = rref(d_in);
    // column space basis: pivot columns of d_in
    for (auto p : rb.pivots) cols.push_back(d_in.column(p));
    b = cols.size();
  }
  CohomologyResult res;
  res.representatives.ambient_dim = w;
  std::size_t current = b;
  for (const auto& v : z.basis) {
    std::vector<QVector> trial = cols;
    trial.push_back(v);
    if (rank(QMatrix::from_columns(w, trial)) > current) {
      cols.push_back(v);
      ++current;
      res.representatives.basis.push_back(v);
    }
  }
  res.h_dim = res.representatives.basis.size();
  if (cols.empty()) {
    res.projector = QMatrix(res.h_dim, w);
    return res;
  }
  QMatrix l = left_inverse(QMatrix::from_columns(w, cols));
  res.projector = QMatrix(res.h_dim, w);
  for (std::size_t r = 0; r < res.h_dim; ++r)
    for (std::size_t c = 0; c < w; ++c) res.projector(r, c) = l(b + r, c);
  return res;
}

}  // namespace

CohomologyResult cohomology(const QMatrix& d_in, const QMatrix& d_out, PivotStrategy strategy) {
  if (d_in.rows() != d_out.cols())
    throw std::invalid_argument("cohomology: d_in has " + std::to_string(d_in.rows()) + " rows but d_out has " +
                                std::to_string(d_out.cols()) + " columns");
  if (d_in.cols() && d_out.rows() && !(d_out * d_in).is_zero())
    throw LinalgError("cohomology: d_out * d_in is not zero");
  if (strategy == PivotStrategy::FirstPivot) return cohomology_first(d_in, d_out);
  // reversed coordinate order on the middle space
  CohomologyResult r = cohomology_first(reverse_rows(d_in), reverse_columns(d_out));
  for (auto& v : r.representatives.basis) std::reverse(v.begin(), v.end());
  r.projector = reverse_columns(r.projector);
  return r;
}

QMatrix linear_section(const QMatrix& p, PivotStrategy strategy) {
  QMatrix work = strategy == PivotStrategy::FirstPivot ? p : reverse_columns(p);
  RrefResult r = rref(work);
  if (r.pivots.size() != p.rows())
    throw LinalgError("linear_section: map of rank " + std::to_string(r.pivots.size()) + " onto a space of dim " +
                      std::to_string(p.rows()) + " is not surjective");
  std::vector<std::size_t> piv = r.pivots;
  if (strategy == PivotStrategy::LastPivot)
    for (auto& c : piv) c = p.cols() - 1 - c;
  QMatrix sub(p.rows(), p.rows());
  for (std::size_t row = 0; row < p.rows(); ++row)
    for (std::size_t k = 0; k < piv.size(); ++k) sub(row, k) = p(row, piv[k]);
  QMatrix sinv = inverse(sub);
  QMatrix s(p.cols(), p.rows());
  for (std::size_t k = 0; k < piv.size(); ++k)
    for (std::size_t c = 0; c < p.rows(); ++c) s(piv[k], c) = sinv(k, c);
  return s;
}

GroupAction::GroupAction(int n, std::size_t dim, std::vector<QMatrix> adjacent)
    : n_(n), dim_(dim), adjacent_(std::move(adjacent)) {
  if (n < 0) throw std::invalid_argument("GroupAction: negative arity");
  if (adjacent_.size() != static_cast<std::size_t>(n > 0 ? n - 1 : 0))
    throw std::invalid_argument("GroupAction: expected " + std::to_string(n > 0 ? n - 1 : 0) + " generators");
  for (const auto& g : adjacent_)
    if (g.rows() != dim || g.cols() != dim) throw std::invalid_argument("GroupAction: generator shape");
}

GroupAction GroupAction::trivial(int n, std::size_t dim) {
  std::vector<QMatrix> g(n > 0 ? n - 1 : 0, QMatrix::identity(dim));
  return GroupAction(n, dim, g);
}

GroupAction GroupAction::sign(int n) {
  std::vector<QMatrix> g(n > 0 ? n - 1 : 0, QMatrix{{-1}});
  return GroupAction(n, 1, g);
}

GroupAction GroupAction::regular(int n) {
  auto perms = all_perms(n);
  std::map<Perm, std::size_t> index;
  for (std::size_t k = 0; k < perms.size(); ++k) index[perms[k]] = k;
  std::vector<QMatrix> gens;
  for (int a = 0; a + 1 < n; ++a) {
    QMatrix m(perms.size(), perms.size());
    Perm s = transposition(n, a, a + 1);
    for (std::size_t k = 0; k < perms.size(); ++k) m(index[compose(s, perms[k])], k) = 1;
    gens.push_back(std::move(m));
  }
  return GroupAction(n, perms.size(), gens);
}

QMatrix GroupAction::matrix(const Perm& sigma) const {
  if (static_cast<int>(sigma.size()) != n_) throw std::invalid_argument("GroupAction::matrix: wrong arity");
  QMatrix m = QMatrix::identity(dim_);
  for (int a : adjacent_word(sigma)) m = m * adjacent_[a];
  return m;
}

QMatrix average(const GroupAction& src, const GroupAction& tgt, const QMatrix& raw) {
  if (src.arity() != tgt.arity()) throw std::invalid_argument("average: actions of different arity");
  if (raw.rows() != tgt.dim() || raw.cols() != src.dim()) throw std::invalid_argument("average: shape mismatch");
  // coset factorisation: sum over Sigma_m = sum_k (k m) * sum over Sigma_{m-1}
  QMatrix f = raw;
  const int n = src.arity();
  for (int m = 2; m <= n; ++m) {
    QMatrix acc = f;
    for (int k = 0; k < m - 1; ++k) {
      Perm g = transposition(n, k, m - 1);
      acc = acc + tgt.matrix(g) * f * src.matrix(g);
    }
    acc *= Rational(1, m);
    f = acc;
  }
  return f;
}

}  // namespace opmin
