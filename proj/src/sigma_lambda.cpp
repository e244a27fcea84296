#include "opmin/sigma_lambda.hpp"

#include <sstream>
#include <unordered_map>

namespace opmin {

SparseVec SigmaModuleView::restrict(int n, std::size_t, int) const {
  throw std::logic_error("module has no restriction maps (arity " + std::to_string(n) + ")");
}

std::vector<std::size_t> SigmaModuleView::basis_in_degree(int n, int d) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < dim(n); ++b)
    if (degree(n, b) == d) out.push_back(b);
  return out;
}

std::set<int> SigmaModuleView::degrees(int n) const {
  std::set<int> s;
  for (std::size_t b = 0; b < dim(n); ++b) s.insert(degree(n, b));
  return s;
}

SparseVec SigmaModuleView::differential(int n, const SparseVec& v) const {
  SparseVec out;
  for (const auto& [i, c] : v.entries()) out.axpy(c, differential(n, i));
  return out;
}

SparseVec SigmaModuleView::act(int n, const Perm& sigma, const SparseVec& v) const {
  if (is_identity(sigma)) return v;
  SparseVec out;
  for (const auto& [i, c] : v.entries()) out.axpy(c, act(n, sigma, i));
  return out;
}

SparseVec SigmaModuleView::restrict(int n, const SparseVec& v, int i) const {
  SparseVec out;
  for (const auto& [b, c] : v.entries()) out.axpy(c, restrict(n, b, i));
  return out;
}

std::string Violation::to_string() const {
  std::ostringstream os;
  os << check;
  if (arity >= 0) os << " at arity " << arity << ", degree " << degree;
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

void ValidationReport::merge(const ValidationReport& o) {
  violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  checks += o.checks;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << checks << " checks, " << violations.size() << " violations";
  for (std::size_t k = 0; k < violations.size() && k < 10; ++k) os << "\n  " << violations[k].to_string();
  return os.str();
}

DgSigmaModule::DgSigmaModule(std::vector<ArityData> arities, bool lambda) : a_(std::move(arities)), lambda_(lambda) {
  for (std::size_t n = 0; n < a_.size(); ++n) {
    const auto& d = a_[n];
    const std::size_t k = d.degrees.size();
    if (!d.labels.empty() && d.labels.size() != k) throw std::invalid_argument("DgSigmaModule: label count");
    if (d.adjacent.size() != (n >= 2 ? n - 1 : 0))
      throw std::invalid_argument("DgSigmaModule: arity " + std::to_string(n) + " needs " +
                                  std::to_string(n >= 2 ? n - 1 : 0) + " transposition matrices");
    for (const auto& s : d.adjacent)
      if (s.rows != k || s.cols.size() != k) throw std::invalid_argument("DgSigmaModule: action matrix shape");
    if (d.differential.rows != k || d.differential.cols.size() != k)
      throw std::invalid_argument("DgSigmaModule: differential shape at arity " + std::to_string(n));
    if (lambda_ && n >= 1) {
      if (d.restrictions.size() != n)
        throw std::invalid_argument("DgSigmaModule: arity " + std::to_string(n) + " needs " + std::to_string(n) +
                                    " restriction maps");
      const std::size_t below = n == 1 ? 1 : a_[n - 1].degrees.size();
      for (const auto& r : d.restrictions)
        if (r.rows != below || r.cols.size() != k) throw std::invalid_argument("DgSigmaModule: restriction shape");
    }
  }
}

std::size_t DgSigmaModule::dim(int n) const {
  if (n < 0 || n > max_arity()) return 0;
  return a_[n].degrees.size();
}

const ArityData& DgSigmaModule::data(int n) const {
  if (n < 0 || n > max_arity()) throw std::out_of_range("arity " + std::to_string(n) + " outside the module window");
  return a_[n];
}

ArityData& DgSigmaModule::mutable_data(int n) {
  if (n < 0 || n > max_arity()) throw std::out_of_range("arity " + std::to_string(n) + " outside the module window");
  return a_[n];
}

std::string DgSigmaModule::label(int n, std::size_t b) const {
  const auto& d = data(n);
  return d.labels.empty() ? std::to_string(b) : d.labels.at(b);
}

SparseVec DgSigmaModule::act(int n, const Perm& sigma, std::size_t b) const {
  const auto& d = data(n);
  SparseVec v = SparseVec::unit(b);
  auto w = adjacent_word(sigma);
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = d.adjacent[*it].apply(v);
  return v;
}

SparseVec DgSigmaModule::restrict(int n, std::size_t b, int i) const {
  if (!lambda_) return SigmaModuleView::restrict(n, b, i);
  return data(n).restrictions.at(i).cols.at(b);
}

DgSigmaModule materialize(const SigmaModuleView& m, int up_to) {
  std::vector<ArityData> out;
  for (int n = 0; n <= up_to; ++n) {
    ArityData d;
    const std::size_t k = m.dim(n);
    for (std::size_t b = 0; b < k; ++b) {
      d.degrees.push_back(m.degree(n, b));
      d.labels.push_back(m.label(n, b));
    }
    d.differential.rows = k;
    for (std::size_t b = 0; b < k; ++b) d.differential.cols.push_back(m.differential(n, b));
    for (int a = 0; a + 1 < n; ++a) {
      SparseMap s{k, {}};
      Perm t = transposition(n, a, a + 1);
      for (std::size_t b = 0; b < k; ++b) s.cols.push_back(m.act(n, t, b));
      d.adjacent.push_back(std::move(s));
    }
    if (m.has_restrictions() && n >= 1) {
      const std::size_t below = n == 1 ? 1 : m.dim(n - 1);
      for (int i = 0; i < n; ++i) {
        SparseMap r{below, {}};
        for (std::size_t b = 0; b < k; ++b) r.cols.push_back(m.restrict(n, b, i));
        d.restrictions.push_back(std::move(r));
      }
    }
    out.push_back(std::move(d));
  }
  return DgSigmaModule(std::move(out), m.has_restrictions());
}

namespace {

// arity 0 below a truncated module behaves as the ground field
SparseVec d_low(const SigmaModuleView& m, int n, const SparseVec& v) {
  if (n == 0 && m.dim(0) == 0) return {};
  return m.differential(n, v);
}

SparseVec act_low(const SigmaModuleView& m, int n, const Perm& s, const SparseVec& v) {
  if (n <= 1) return v;
  return m.act(n, s, v);
}

bool degree_ok(const SigmaModuleView& m, int n, const SparseVec& v, int d) {
  if (n == 0 && m.dim(0) == 0) return d == 0 || v.empty();
  for (const auto& [i, c] : v.entries())
    if (i >= m.dim(n) || m.degree(n, i) != d) return false;
  return true;
}

struct Reporter {
  ValidationReport& rep;
  const SigmaModuleView& m;
  std::map<std::string, int> counts;
  void check(bool ok, const std::string& what, int n, std::size_t b, const std::string& extra = "") {
    ++rep.checks;
    if (ok) return;
    if (counts[what]++ >= 5) return;
    rep.add({what, n, m.degree(n, b), "basis element " + m.label(n, b) + (extra.empty() ? "" : " (" + extra + ")")});
  }
};

}  // namespace

ValidationReport validate(const SigmaModuleView& m, int up_to) {
  ValidationReport rep;
  Reporter r{rep, m, {}};
  up_to = std::min(up_to, m.max_arity());
  for (int n = 0; n <= up_to; ++n) {
    const std::size_t k = m.dim(n);
    std::vector<Perm> s;
    for (int a = 0; a + 1 < n; ++a) s.push_back(transposition(n, a, a + 1));
    for (std::size_t b = 0; b < k; ++b) {
      const int deg = m.degree(n, b);
      const SparseVec e = SparseVec::unit(b);
      SparseVec db = m.differential(n, b);
      r.check(degree_ok(m, n, db, deg + 1), "differential raises degree by one", n, b);
      r.check(m.differential(n, db).empty(), "d^2 = 0", n, b);
      for (std::size_t a = 0; a < s.size(); ++a) {
        SparseVec sb = m.act(n, s[a], b);
        const std::string g = "s" + std::to_string(a + 1);
        r.check(degree_ok(m, n, sb, deg), "action preserves degree", n, b, g);
        r.check(m.act(n, s[a], sb) == e, "Coxeter relation s_i^2 = 1", n, b, g);
        if (a + 1 < s.size()) {
          SparseVec x = e;
          for (int rep3 = 0; rep3 < 3; ++rep3) x = m.act(n, s[a], m.act(n, s[a + 1], x));
          r.check(x == e, "Coxeter relation (s_i s_i+1)^3 = 1", n, b, g);
        }
        for (std::size_t c = a + 2; c < s.size(); ++c)
          r.check(m.act(n, s[a], m.act(n, s[c], e)) == m.act(n, s[c], sb), "Coxeter relation s_i s_j = s_j s_i", n,
                  b, g + ",s" + std::to_string(c + 1));
        r.check(m.differential(n, sb) == m.act(n, s[a], db), "d is equivariant", n, b, g);
      }
      if (!m.has_restrictions() || n == 0) continue;
      std::vector<SparseVec> del(n);
      for (int i = 0; i < n; ++i) {
        del[i] = m.restrict(n, b, i);
        const std::string g = "delta" + std::to_string(i + 1);
        r.check(degree_ok(m, n - 1, del[i], deg), "restriction preserves degree", n, b, g);
        r.check(d_low(m, n - 1, del[i]) == m.restrict(n, db, i), "restriction commutes with d", n, b, g);
      }
      for (int i = 0; i < n && n >= 2; ++i)
        for (int j = i + 1; j < n; ++j)
          r.check(m.restrict(n - 1, del[j], i) == m.restrict(n - 1, del[i], j - 1),
                  "simplicial identity delta_i delta_j = delta_j-1 delta_i", n, b,
                  "i=" + std::to_string(i + 1) + ",j=" + std::to_string(j + 1));
      for (std::size_t a = 0; a < s.size(); ++a) {
        SparseVec sb = m.act(n, s[a], b);
        Perm inv = inverse(s[a]);
        for (int i = 0; i < n; ++i) {
          SparseVec lhs = m.restrict(n, sb, i);
          SparseVec rhs = act_low(m, n - 1, restrict_perm(s[a], i), del[inv[i]]);
          r.check(lhs == rhs, "restriction is equivariant", n, b,
                  "s" + std::to_string(a + 1) + ",delta" + std::to_string(i + 1));
        }
      }
    }
  }
  return rep;
}

SparseVec ArityMap::apply(int n, const SparseVec& v) const {
  SparseVec out;
  for (const auto& [i, c] : v.entries()) out.axpy(c, apply(n, i));
  return out;
}

ModuleMorphism::ModuleMorphism(std::shared_ptr<const SigmaModuleView> src, std::shared_ptr<const SigmaModuleView> tgt,
                               std::vector<SparseMap> maps)
    : src_(std::move(src)), tgt_(std::move(tgt)), maps_(std::move(maps)) {
  for (std::size_t n = 0; n < maps_.size(); ++n)
    if (maps_[n].cols.size() != src_->dim(n) || maps_[n].rows != tgt_->dim(n))
      throw std::invalid_argument("ModuleMorphism: map shape at arity " + std::to_string(n));
}

SparseVec ModuleMorphism::apply(int n, std::size_t b) const {
  if (n < 0 || n >= static_cast<int>(maps_.size()))
    throw std::out_of_range("ModuleMorphism: arity " + std::to_string(n) + " outside the window");
  return maps_[n].cols.at(b);
}

ValidationReport validate_morphism(const ArityMap& f, int up_to) {
  ValidationReport rep;
  const auto& src = f.source();
  const auto& tgt = f.target();
  Reporter r{rep, src, {}};
  const bool lambda = src.has_restrictions() && tgt.has_restrictions();
  for (int n = 0; n <= up_to; ++n) {
    for (std::size_t b = 0; b < src.dim(n); ++b) {
      SparseVec fb = f.apply(n, b);
      r.check(degree_ok(tgt, n, fb, src.degree(n, b)), "morphism preserves degree", n, b);
      r.check(tgt.differential(n, fb) == f.apply(n, src.differential(n, b)), "morphism commutes with d", n, b);
      for (int a = 0; a + 1 < n; ++a) {
        Perm t = transposition(n, a, a + 1);
        r.check(tgt.act(n, t, fb) == f.apply(n, src.act(n, t, b)), "morphism is equivariant", n, b,
                "s" + std::to_string(a + 1));
      }
      if (!lambda || n == 0) continue;
      for (int i = 0; i < n; ++i) {
        SparseVec lhs = tgt.restrict(n, fb, i);
        SparseVec low = src.restrict(n, b, i);
        SparseVec rhs = (n == 1 && src.dim(0) == 0) ? low : f.apply(n - 1, low);
        r.check(lhs == rhs, "morphism commutes with restrictions", n, b, "delta" + std::to_string(i + 1));
      }
    }
  }
  return rep;
}

ArityComplex module_complex(const SigmaModuleView& m, int n) {
  ArityComplex c;
  for (std::size_t b = 0; b < m.dim(n); ++b) {
    c.degrees.push_back(m.degree(n, b));
    c.d.push_back(m.differential(n, b));
  }
  return c;
}

QVector DegreeCohomology::project(const SparseVec& cocycle) const {
  std::unordered_map<std::size_t, std::size_t> local;
  for (std::size_t k = 0; k < basis.size(); ++k) local[basis[k]] = k;
  std::vector<SparseVec::Entry> e;
  for (const auto& [i, c] : cocycle.entries()) {
    auto it = local.find(i);
    if (it == local.end()) throw LinalgError("project: vector has a component outside degree " + std::to_string(degree));
    e.emplace_back(it->second, c);
  }
  return h.project(SparseVec::from_entries(std::move(e)));
}

std::map<int, std::size_t> GradedCohomology::dims() const {
  std::map<int, std::size_t> d;
  for (const auto& [deg, h] : by_degree) d[deg] = h.dim();
  return d;
}

std::size_t GradedCohomology::total() const {
  std::size_t t = 0;
  for (const auto& [deg, h] : by_degree) t += h.dim();
  return t;
}

namespace {

struct Graded {
  std::map<int, std::vector<std::size_t>> basis;
  std::unordered_map<std::size_t, std::size_t> local;
};

Graded split(const ArityComplex& c) {
  Graded g;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto& v = g.basis[c.degrees[i]];
    g.local[i] = v.size();
    v.push_back(i);
  }
  return g;
}

SparseVec to_local(const Graded& g, const ArityComplex& c, const SparseVec& v, int deg) {
  std::vector<SparseVec::Entry> e;
  for (const auto& [i, x] : v.entries()) {
    if (c.degrees.at(i) != deg)
      throw LinalgError("differential does not raise degree by one (lands in degree " +
                        std::to_string(c.degrees.at(i)) + ", expected " + std::to_string(deg) + ")");
    e.emplace_back(g.local.at(i), x);
  }
  return SparseVec::from_entries(std::move(e));
}

std::vector<SparseVec> out_columns(const Graded& g, const ArityComplex& c, int deg) {
  std::vector<SparseVec> cols;
  auto it = g.basis.find(deg);
  if (it == g.basis.end()) return cols;
  for (auto i : it->second) cols.push_back(to_local(g, c, c.d[i], deg + 1));
  return cols;
}

}  // namespace

GradedCohomology cohomology_of(const ArityComplex& c, PivotStrategy strategy) {
  Graded g = split(c);
  GradedCohomology res;
  for (const auto& [deg, basis] : g.basis) {
    auto dout = out_columns(g, c, deg);
    auto din = out_columns(g, c, deg - 1);
    DegreeCohomology dc;
    dc.degree = deg;
    dc.basis = basis;
    dc.h = sparse_cohomology(din, dout, basis.size(), strategy);
    if (dc.h.h == 0) continue;
    for (const auto& r : dc.h.reps) {
      std::vector<SparseVec::Entry> e;
      for (const auto& [i, x] : r.entries()) e.emplace_back(basis[i], x);
      dc.reps.push_back(SparseVec::from_entries(std::move(e)));
    }
    res.by_degree.emplace(deg, std::move(dc));
  }
  return res;
}

std::map<int, std::size_t> cohomology_dims(const ArityComplex& c) {
  Graded g = split(c);
  std::map<int, std::size_t> rk;
  for (const auto& [deg, basis] : g.basis) rk[deg] = sparse_rank(out_columns(g, c, deg));
  std::map<int, std::size_t> h;
  for (const auto& [deg, basis] : g.basis) {
    std::size_t below = rk.count(deg - 1) ? rk[deg - 1] : 0;
    std::size_t v = basis.size() - rk[deg] - below;
    if (v) h[deg] = v;
  }
  return h;
}

Cone::Cone(const ArityMap& phi, int n)
    : phi_(phi), n_(n), s_(phi.source().dim(n)), t_(phi.target().dim(n)) {
  for (std::size_t i = 0; i < s_ + t_; ++i) {
    complex_.degrees.push_back(degree(i));
    complex_.d.push_back(differential(i));
  }
}

int Cone::degree(std::size_t idx) const {
  return idx < s_ ? phi_.source().degree(n_, idx) - 1 : phi_.target().degree(n_, idx - s_);
}

SparseVec Cone::differential(std::size_t idx) const {
  if (idx < s_) return join(-phi_.source().differential(n_, idx), -phi_.apply(n_, idx));
  return join({}, phi_.target().differential(n_, idx - s_));
}

SparseVec Cone::differential(const SparseVec& v) const {
  SparseVec x = source_part(v), y = target_part(v);
  return join(-phi_.source().differential(n_, x), phi_.target().differential(n_, y) - phi_.apply(n_, x));
}

SparseVec Cone::act(const Perm& sigma, const SparseVec& v) const {
  return join(phi_.source().act(n_, sigma, source_part(v)), phi_.target().act(n_, sigma, target_part(v)));
}

SparseVec Cone::source_part(const SparseVec& v) const {
  std::vector<SparseVec::Entry> e;
  for (const auto& [i, c] : v.entries())
    if (i < s_) e.emplace_back(i, c);
  return SparseVec::from_entries(std::move(e));
}

SparseVec Cone::target_part(const SparseVec& v) const {
  std::vector<SparseVec::Entry> e;
  for (const auto& [i, c] : v.entries())
    if (i >= s_) e.emplace_back(i - s_, c);
  return SparseVec::from_entries(std::move(e));
}

SparseVec Cone::join(const SparseVec& x, const SparseVec& y) const {
  std::vector<SparseVec::Entry> e(x.entries().begin(), x.entries().end());
  for (const auto& [i, c] : y.entries()) e.emplace_back(i + s_, c);
  return SparseVec::from_entries(std::move(e));
}

GradedCohomology relative_cohomology(const ArityMap& phi, int n, PivotStrategy strategy) {
  Cone c(phi, n);
  return cohomology_of(c.complex(), strategy);
}

std::vector<QMatrix> induced_lambda_on_H(const SigmaModuleView& m, int n, const DegreeCohomology& hn,
                                         const DegreeCohomology* hn1) {
  std::vector<QMatrix> out;
  for (int i = 0; i < n; ++i) {
    const std::size_t rows = hn1 ? hn1->dim() : 1;
    QMatrix q(rows, hn.dim());
    for (std::size_t j = 0; j < hn.dim(); ++j) {
      SparseVec v = m.restrict(n, hn.reps[j], i);
      if (!hn1) {
        q(0, j) = v.get(0);
        continue;
      }
      QVector c = v.empty() ? QVector(rows) : hn1->project(v);
      for (std::size_t r = 0; r < rows; ++r) q(r, j) = c[r];
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<QMatrix> induced_action_on_H(const SigmaModuleView& m, int n, const DegreeCohomology& hn) {
  std::vector<QMatrix> out;
  for (int a = 0; a + 1 < n; ++a) {
    Perm t = transposition(n, a, a + 1);
    QMatrix q(hn.dim(), hn.dim());
    for (std::size_t j = 0; j < hn.dim(); ++j) {
      QVector c = hn.project(m.act(n, t, hn.reps[j]));
      for (std::size_t r = 0; r < hn.dim(); ++r) q(r, j) = c[r];
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace opmin
