#include "opmin/sparse.hpp"

#include <algorithm>
#include <sstream>

namespace opmin {

SparseVec SparseVec::unit(std::size_t i, const Rational& c) {
  SparseVec v;
  if (!is_zero(c)) v.e_.emplace_back(i, c);
  return v;
}

SparseVec SparseVec::from_dense(const QVector& d) {
  SparseVec v;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!is_zero(d[i])) v.e_.emplace_back(i, d[i]);
  return v;
}

SparseVec SparseVec::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SparseVec v;
  for (auto& [i, c] : entries) {
    if (!v.e_.empty() && v.e_.back().first == i)
      v.e_.back().second += c;
    else
      v.e_.emplace_back(i, std::move(c));
    if (is_zero(v.e_.back().second)) v.e_.pop_back();
  }
  return v;
}

QVector SparseVec::to_dense(std::size_t n) const {
  QVector d(n);
  for (const auto& [i, c] : e_) {
    if (i >= n) throw std::out_of_range("SparseVec::to_dense: index beyond length");
    d[i] = c;
  }
  return d;
}

Rational SparseVec::get(std::size_t i) const {
  auto it = std::lower_bound(e_.begin(), e_.end(), i, [](const Entry& a, std::size_t k) { return a.first < k; });
  if (it != e_.end() && it->first == i) return it->second;
  return 0;
}

void SparseVec::axpy(const Rational& c, const SparseVec& o) {
  if (is_zero(c) || o.e_.empty()) return;
  std::vector<Entry> out;
  out.reserve(e_.size() + o.e_.size());
  std::size_t a = 0, b = 0;
  while (a < e_.size() || b < o.e_.size()) {
    if (b == o.e_.size() || (a < e_.size() && e_[a].first < o.e_[b].first)) {
      out.push_back(std::move(e_[a++]));
    } else if (a == e_.size() || o.e_[b].first < e_[a].first) {
      out.emplace_back(o.e_[b].first, c * o.e_[b].second);
      ++b;
    } else {
      Rational s = e_[a].second + c * o.e_[b].second;
      if (!is_zero(s)) out.emplace_back(e_[a].first, std::move(s));
      ++a;
      ++b;
    }
  }
  e_ = std::move(out);
}

SparseVec SparseVec::operator+(const SparseVec& o) const {
  SparseVec r = *this;
  r.axpy(1, o);
  return r;
}

SparseVec SparseVec::operator-(const SparseVec& o) const {
  SparseVec r = *this;
  r.axpy(-1, o);
  return r;
}

SparseVec SparseVec::operator-() const {
  SparseVec r = *this;
  for (auto& [i, c] : r.e_) c = -c;
  return r;
}

SparseVec SparseVec::operator*(const Rational& c) const {
  if (is_zero(c)) return {};
  SparseVec r = *this;
  for (auto& [i, x] : r.e_) x *= c;
  return r;
}

std::string SparseVec::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [i, c] : e_) {
    os << (first ? "" : ", ") << i << ":" << c.get_str();
    first = false;
  }
  os << "}";
  return os.str();
}

void VecBuilder::add(std::size_t i, const Rational& c) {
  if (is_zero(c)) return;
  auto [it, fresh] = acc_.try_emplace(i, c);
  if (!fresh) {
    it->second += c;
    if (is_zero(it->second)) acc_.erase(it);
  }
}

void VecBuilder::add(const SparseVec& v, const Rational& c) {
  if (is_zero(c)) return;
  for (const auto& [i, x] : v.entries()) add(i, c * x);
}

SparseVec VecBuilder::build() {
  SparseVec v;
  v.e_.reserve(acc_.size());
  for (auto& [i, c] : acc_) v.e_.emplace_back(i, std::move(c));
  acc_.clear();
  return v;
}

SparseVec SparseMap::apply(const SparseVec& v) const {
  SparseVec out;
  for (const auto& [i, c] : v.entries()) {
    if (i >= cols.size()) throw std::out_of_range("SparseMap::apply: index beyond domain");
    out.axpy(c, cols[i]);
  }
  return out;
}

SparseMap SparseMap::then(const SparseMap& after) const {
  SparseMap r{after.rows, {}};
  r.cols.reserve(cols.size());
  for (const auto& c : cols) r.cols.push_back(after.apply(c));
  return r;
}

QMatrix SparseMap::to_dense() const {
  QMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [i, x] : cols[c].entries()) m(i, c) = x;
  return m;
}

SparseMap SparseMap::from_dense(const QMatrix& m) {
  SparseMap r{m.rows(), {}};
  for (std::size_t c = 0; c < m.cols(); ++c) r.cols.push_back(SparseVec::from_dense(m.column(c)));
  return r;
}

SparseMap SparseMap::identity(std::size_t n) {
  SparseMap r{n, {}};
  for (std::size_t i = 0; i < n; ++i) r.cols.push_back(SparseVec::unit(i));
  return r;
}

bool SparseMap::is_zero() const {
  return std::all_of(cols.begin(), cols.end(), [](const SparseVec& v) { return v.empty(); });
}

SparseVec EchelonBasis::reduce(SparseVec v, SparseVec* combo) const {
  std::size_t pos = 0;
  while (pos < v.size()) {
    const auto idx = v.entries()[pos].first;
    auto it = pivot_row_.find(idx);
    if (it == pivot_row_.end()) {
      ++pos;
      continue;
    }
    Rational c = v.entries()[pos].second;
    v.axpy(-c, rows_[it->second]);
    if (combo && track_) combo->axpy(c, combos_[it->second]);
  }
  return v;
}

bool EchelonBasis::insert(const SparseVec& v, std::optional<std::size_t> tag) {
  SparseVec combo;
  SparseVec r = reduce(v, track_ ? &combo : nullptr);
  if (r.empty()) return false;
  Rational inv = 1 / r.entries().front().second;
  const std::size_t piv = r.entries().front().first;
  if (track_) {
    // r = v - combo
    SparseVec c = -combo;
    if (tag) c.axpy(1, SparseVec::unit(*tag));
    combos_.push_back(c * inv);
  }
  rows_.push_back(r * inv);
  pivot_row_[piv] = rows_.size() - 1;
  return true;
}

std::size_t sparse_rank(const std::vector<SparseVec>& cols) {
  EchelonBasis b;
  for (const auto& c : cols) b.insert(c);
  return b.rank();
}

std::vector<SparseVec> sparse_kernel(const std::vector<SparseVec>& cols) {
  EchelonBasis b(true);
  std::vector<SparseVec> ker;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    SparseVec combo;
    SparseVec r = b.reduce(cols[j], &combo);
    if (r.empty()) {
      SparseVec k = -combo;
      k.axpy(1, SparseVec::unit(j));
      ker.push_back(std::move(k));
    } else {
      b.insert(cols[j], j);
    }
  }
  return ker;
}

std::optional<SparseVec> sparse_solve(const std::vector<SparseVec>& cols, const SparseVec& b) {
  return SpanSolver(cols).solve(b);
}

SpanSolver::SpanSolver(const std::vector<SparseVec>& cols) {
  for (std::size_t j = 0; j < cols.size(); ++j) basis_.insert(cols[j], j);
}

std::optional<SparseVec> SpanSolver::solve(const SparseVec& b) const {
  SparseVec combo;
  if (!basis_.reduce(b, &combo).empty()) return std::nullopt;
  return combo;
}

namespace {

SparseVec reversed(const SparseVec& v, std::size_t n) {
  std::vector<SparseVec::Entry> e;
  e.reserve(v.size());
  for (const auto& [i, c] : v.entries()) e.emplace_back(n - 1 - i, c);
  return SparseVec::from_entries(std::move(e));
}

}  // namespace

QVector SparseCohomology::project(const SparseVec& cocycle) const {
  SparseVec combo;
  SparseVec v = reversed ? opmin::reversed(cocycle, ambient) : cocycle;
  if (!coords.reduce(v, &combo).empty()) throw LinalgError("project: vector is not a cocycle");
  QVector out(h);
  for (const auto& [i, c] : combo.entries()) out[i] = c;
  return out;
}

SparseCohomology sparse_cohomology(const std::vector<SparseVec>& d_in, const std::vector<SparseVec>& d_out,
                                   std::size_t ambient, PivotStrategy strategy) {
  if (d_out.size() != ambient)
    throw std::invalid_argument("sparse_cohomology: d_out has " + std::to_string(d_out.size()) +
                                " columns, expected " + std::to_string(ambient));
  for (const auto& c : d_in) {
    if (c.max_index_plus_one() > ambient) throw std::invalid_argument("sparse_cohomology: d_in leaves the middle space");
    SparseVec img;
    for (const auto& [i, x] : c.entries()) img.axpy(x, d_out[i]);
    if (!img.empty()) throw LinalgError("sparse_cohomology: d_out * d_in is not zero");
  }
  const bool rev = strategy == PivotStrategy::LastPivot;
  std::vector<SparseVec> din, dout;
  if (rev) {
    for (const auto& c : d_in) din.push_back(reversed(c, ambient));
    dout.assign(d_out.rbegin(), d_out.rend());
  }
  const auto& in = rev ? din : d_in;
  const auto& out = rev ? dout : d_out;

  SparseCohomology res;
  res.reversed = rev;
  res.ambient = ambient;
  for (const auto& c : in) res.coords.insert(c);
  for (auto& z : sparse_kernel(out)) {
    if (res.coords.insert(z, res.h)) {
      res.reps.push_back(rev ? reversed(z, ambient) : z);
      ++res.h;
    }
  }
  return res;
}

}  // namespace opmin
