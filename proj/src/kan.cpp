#include "opmin/kan.hpp"

#include <numeric>

namespace opmin {

OperadHost::OperadHost(OperadPtr p, SparseVec m2) : p_(std::move(p)), m2_(std::move(m2)) {
  if (!p_->has_restrictions()) throw KanError(p_->name() + ": faces need restriction operations");
}

OperadHost::OperadHost(OperadPtr p) : p_(std::move(p)) {
  if (!p_->has_restrictions()) throw KanError(p_->name() + ": faces need restriction operations");
  auto m = p_->multiplication();
  if (!m) throw KanError(p_->name() + ": no unitary multiplication");
  m2_ = *m;
}

SparseVec OperadHost::face(int n, const SparseVec& w, int i) const {
  if (i < 0 || i >= n) throw KanError("face index " + std::to_string(i + 1) + " out of range for arity " + std::to_string(n));
  return p_->restrict(n, w, i);
}

SparseVec OperadHost::degeneracy(int n, const SparseVec& w, int i) const {
  if (i < 0 || i >= n)
    throw KanError("degeneracy index " + std::to_string(i + 1) + " out of range for arity " + std::to_string(n));
  if (n + 1 > p_->max_arity()) throw KanError(p_->name() + ": degeneracy overflows the arity window");
  return p_->compose(n, w, i, 2, m2_);
}

SparseVec OperadHost::extra_degeneracy(int n, const SparseVec& w) const {
  if (n + 1 > p_->max_arity()) throw KanError(p_->name() + ": degeneracy overflows the arity window");
  if (n == 0) return p_->restrict(2, m2_, 0) * w.get(0);
  return p_->compose(2, m2_, 0, n, w);
}

SparseVec OperadHost::act(int n, const Perm& sigma, const SparseVec& w) const {
  if (n <= 1) return w;
  return p_->act(n, sigma, w);
}

SparseVec OperadHost::differential(int n, const SparseVec& w) const {
  if (n == 0 && !p_->unitary()) return {};
  return p_->differential(n, w);
}

ConeHost::ConeHost(std::shared_ptr<const OperadMorphism> rho, OperadPtr source, OperadPtr target, SparseVec m_source)
    : rho_(std::move(rho)), src_host_(source, m_source), tgt_host_(target, rho_->apply(2, m_source)) {}

std::string ConeHost::name() const { return "cone(" + src_host_.name() + " -> " + tgt_host_.name() + ")"; }

int ConeHost::max_arity() const { return std::min(src_host_.max_arity(), tgt_host_.max_arity()); }

int ConeHost::degree(int n, std::size_t b) const {
  const std::size_t s = sdim(n);
  return b < s ? src_host_.degree(n, b) - 1 : tgt_host_.degree(n, b - s);
}

std::pair<SparseVec, SparseVec> ConeHost::split(int n, const SparseVec& w) const {
  const std::size_t s = sdim(n);
  std::vector<SparseVec::Entry> x, y;
  for (const auto& [i, c] : w.entries()) (i < s ? x : y).emplace_back(i < s ? i : i - s, c);
  return {SparseVec::from_entries(std::move(x)), SparseVec::from_entries(std::move(y))};
}

SparseVec ConeHost::join(int n, const SparseVec& x, const SparseVec& y) const {
  const std::size_t s = sdim(n);
  std::vector<SparseVec::Entry> e(x.entries().begin(), x.entries().end());
  for (const auto& [i, c] : y.entries()) e.emplace_back(i + s, c);
  return SparseVec::from_entries(std::move(e));
}

template <class F>
SparseVec ConeHost::both(int n, int n_out, const SparseVec& w, F f) const {
  auto [x, y] = split(n, w);
  return join(n_out, f(src_host_, x), f(tgt_host_, y));
}

SparseVec ConeHost::face(int n, const SparseVec& w, int i) const {
  return both(n, n - 1, w, [&](const OperadHost& h, const SparseVec& v) { return h.face(n, v, i); });
}

SparseVec ConeHost::degeneracy(int n, const SparseVec& w, int i) const {
  return both(n, n + 1, w, [&](const OperadHost& h, const SparseVec& v) { return h.degeneracy(n, v, i); });
}

SparseVec ConeHost::extra_degeneracy(int n, const SparseVec& w) const {
  return both(n, n + 1, w, [&](const OperadHost& h, const SparseVec& v) { return h.extra_degeneracy(n, v); });
}

SparseVec ConeHost::act(int n, const Perm& sigma, const SparseVec& w) const {
  return both(n, n, w, [&](const OperadHost& h, const SparseVec& v) { return h.act(n, sigma, v); });
}

SparseVec ConeHost::differential(int n, const SparseVec& w) const {
  auto [x, y] = split(n, w);
  SparseVec rx = n == 0 ? x : rho_->apply(n, x);
  return join(n, -src_host_.differential(n, x), tgt_host_.differential(n, y) - rx);
}

std::optional<std::pair<int, int>> kan_violation(const SimplicialHost& h, const KanFamily& f) {
  const int n = f.n;
  if (static_cast<int>(f.members.size()) != n)
    throw KanError("family of arity " + std::to_string(n) + " needs " + std::to_string(n) + " members");
  if (n < 2) return std::nullopt;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (h.face(n - 1, f.members[j], i) != h.face(n - 1, f.members[i], j - 1)) return std::make_pair(i + 1, j + 1);
  return std::nullopt;
}

bool is_kan(const SimplicialHost& h, const KanFamily& f) { return !kan_violation(h, f); }

KanFamily faces_of(const SimplicialHost& h, int n, const SparseVec& w) {
  KanFamily f{n, {}};
  for (int i = 0; i < n; ++i) f.members.push_back(h.face(n, w, i));
  return f;
}

namespace {

std::optional<int> common_degree(const SimplicialHost& h, const KanFamily& f) {
  std::optional<int> deg;
  for (int i = 0; i < f.n; ++i)
    for (const auto& [b, c] : f.members[i].entries()) {
      const int d = h.degree(f.n - 1, b);
      if (deg && *deg != d)
        throw KanError("family members mix degrees " + std::to_string(*deg) + " and " + std::to_string(d));
      deg = d;
    }
  return deg;
}

}  // namespace

SparseVec fill(const SimplicialHost& h, const KanFamily& f) {
  const int n = f.n;
  if (n < 1) throw KanError("fillers start in arity 1");
  if (n > h.max_arity()) throw KanError("arity " + std::to_string(n) + " outside the host window");
  if (auto v = kan_violation(h, f))
    throw KanError("Kan-like condition fails at (i, j) = (" + std::to_string(v->first) + ", " +
                       std::to_string(v->second) + ")",
                   v->first, v->second);
  common_degree(h, f);
  auto lift = [&](int r, const SparseVec& z) {
    // r is the 0-based face being corrected; the last one needs the extra degeneracy
    return r < n - 1 ? h.degeneracy(n - 1, z, r) : h.extra_degeneracy(n - 1, z);
  };
  SparseVec u = lift(0, f.members[0]);
  for (int r = 1; r < n; ++r) {
    SparseVec z = f.members[r] - h.face(n, u, r);
    if (!z.empty()) u = u + lift(r, z);
  }
  return u;
}

ValidationReport check_simplicial(const SimplicialHost& h, int up_to) {
  ValidationReport rep;
  const int N = std::min(up_to, h.max_arity());
  std::map<std::string, int> shown;
  auto fail = [&](const std::string& check, int n, int deg, const std::string& detail) {
    if (shown[check]++ < 5) rep.add({check, n, deg, detail});
    else if (shown[check] == 6) rep.add({check, n, deg, "further violations suppressed"});
  };
  for (int n = 0; n <= N; ++n) {
    for (std::size_t b = 0; b < h.dim(n); ++b) {
      const SparseVec w = SparseVec::unit(b);
      const int deg = h.degree(n, b);
      const std::string at = "basis " + std::to_string(b);
      std::vector<SparseVec> faces;
      for (int i = 0; i < n; ++i) faces.push_back(h.face(n, w, i));
      // (i) delta_i delta_j = delta_{j-1} delta_i, i < j
      for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
          ++rep.checks;
          if (h.face(n - 1, faces[j], i) != h.face(n - 1, faces[i], j - 1))
            fail("delta_i delta_j = delta_{j-1} delta_i", n, deg, at + " i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1));
        }
      ++rep.checks;
      for (int i = 0; i < n; ++i) {
        if (h.face(n, h.differential(n, w), i) != h.differential(n - 1, faces[i]))
          fail("faces commute with d", n, deg, at + " i=" + std::to_string(i + 1));
      }
      if (n + 1 > N) continue;
      std::vector<SparseVec> degs;
      for (int j = 0; j < n; ++j) degs.push_back(h.degeneracy(n, w, j));
      SparseVec t = h.extra_degeneracy(n, w);
      for (int j = 0; j < n; ++j) {
        const std::string js = " j=" + std::to_string(j + 1);
        ++rep.checks;
        if (h.degeneracy(n, h.differential(n, w), j) != h.differential(n + 1, degs[j]))
          fail("degeneracies commute with d", n, deg, at + js);
        for (int i = 0; i <= n; ++i) {
          SparseVec lhs = h.face(n + 1, degs[j], i);
          SparseVec rhs;
          std::string check;
          if (i < j) {
            rhs = h.degeneracy(n - 1, faces[i], j - 1);
            check = "delta_i s_j = s_{j-1} delta_i, i < j";
          } else if (i == j || i == j + 1) {
            rhs = w;
            check = "delta_j s_j = id = delta_{j+1} s_j";
          } else {
            rhs = h.degeneracy(n - 1, faces[i - 1], j);
            check = "delta_i s_j = s_j delta_{i-1}, i > j+1";
          }
          ++rep.checks;
          if (lhs != rhs) fail(check, n, deg, at + " i=" + std::to_string(i + 1) + js);
        }
      }
      for (int i = 0; i < n; ++i) {
        ++rep.checks;
        if (h.face(n + 1, t, i) != h.extra_degeneracy(n - 1, faces[i]))
          fail("delta_i t = t delta_i", n, deg, at + " i=" + std::to_string(i + 1));
      }
      ++rep.checks;
      if (h.face(n + 1, t, n) != w) fail("delta_{n+1} t = id", n, deg, at);
      if (n + 2 > N) continue;
      // (ii) s_i s_j = s_{j+1} s_i, i <= j
      for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
          ++rep.checks;
          if (h.degeneracy(n + 1, degs[j], i) != h.degeneracy(n + 1, degs[i], j + 1))
            fail("s_i s_j = s_{j+1} s_i, i <= j", n, deg, at + " i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1));
        }
    }
  }
  return rep;
}

std::optional<std::string> twist_violation(const SimplicialHost& h, int n, const GroupAction& e_action,
                                           const std::vector<std::vector<SparseVec>>& family) {
  const std::size_t k = e_action.dim();
  if (family.size() != k) throw KanError("family map needs one family per basis element of E");
  for (int a = 0; a + 1 < n; ++a) {
    Perm s = transposition(n, a, a + 1);
    const QMatrix& M = e_action.generators()[a];
    for (std::size_t e = 0; e < k; ++e)
      for (int i = 0; i < n; ++i) {
        SparseVec lhs;
        for (std::size_t r = 0; r < k; ++r)
          if (!is_zero(M(r, e))) lhs.axpy(M(r, e), family[r][i]);
        const int si = inverse(s)[i];
        SparseVec rhs = h.act(n - 1, restrict_perm(s, i), family[e][si]);
        if (lhs != rhs)
          return "omega_" + std::to_string(i + 1) + "(s" + std::to_string(a + 1) + " . e" + std::to_string(e) +
                 ") differs from the twisted face";
      }
  }
  return std::nullopt;
}

std::vector<SparseVec> fill_equivariant(const SimplicialHost& h, int n, const GroupAction& e_action,
                                        const std::vector<std::vector<SparseVec>>& family) {
  const std::size_t k = e_action.dim();
  if (family.size() != k) throw KanError("family map needs one family per basis element of E");
  if (auto v = twist_violation(h, n, e_action, family)) throw KanError("family map is not equivariant: " + *v);
  std::vector<SparseVec> raw;
  for (std::size_t e = 0; e < k; ++e) {
    try {
      raw.push_back(fill(h, KanFamily{n, family[e]}));
    } catch (const KanError& err) {
      throw KanError("generator " + std::to_string(e) + ": " + err.what(), err.i, err.j);
    }
  }
  if (n <= 1) return raw;
  std::vector<VecBuilder> acc(k);
  Rational count = 0;
  for (const Perm& sigma : all_perms(n)) {
    QMatrix Minv = e_action.matrix(inverse(sigma));
    count += 1;
    for (std::size_t e = 0; e < k; ++e) {
      // sigma . f(sigma^{-1} . e)
      SparseVec inner;
      for (std::size_t r = 0; r < k; ++r)
        if (!is_zero(Minv(r, e))) inner.axpy(Minv(r, e), raw[r]);
      acc[e].add(h.act(n, sigma, inner));
    }
  }
  std::vector<SparseVec> out;
  for (std::size_t e = 0; e < k; ++e) out.push_back(acc[e].build() * (1 / count));
  for (std::size_t e = 0; e < k; ++e)
    for (int i = 0; i < n; ++i)
      if (h.face(n, out[e], i) != family[e][i])
        throw KanError("averaged filler misses face " + std::to_string(i + 1) + " of generator " + std::to_string(e));
  return out;
}

void SubmoduleWitness::add(int m, const SparseVec& v) {
  if (m < lo_ || m > hi_) throw KanError("arity outside the witness range");
  if (spans_[m].insert(v)) gens_[m].push_back(v);
}

bool SubmoduleWitness::contains(int m, const SparseVec& v) const {
  if (v.empty()) return true;
  auto it = spans_.find(m);
  return it != spans_.end() && it->second.contains(v);
}

std::size_t SubmoduleWitness::dim(int m) const {
  auto it = spans_.find(m);
  return it == spans_.end() ? 0 : it->second.rank();
}

SubmoduleWitness SubmoduleWitness::generated_by(const SimplicialHost& h, const KanFamily& f, bool with_action) {
  const int n = f.n;
  SubmoduleWitness w(n - 1, n);
  std::vector<std::pair<int, SparseVec>> queue;
  auto push = [&](int m, const SparseVec& v) {
    if (v.empty() || w.contains(m, v)) return;
    w.add(m, v);
    queue.emplace_back(m, v);
  };
  for (const auto& v : f.members) push(n - 1, v);
  while (!queue.empty()) {
    auto [m, v] = queue.back();
    queue.pop_back();
    if (m == n - 1) {
      for (int j = 0; j < m; ++j) push(n, h.degeneracy(m, v, j));
      push(n, h.extra_degeneracy(m, v));
    } else {
      for (int i = 0; i < m; ++i) push(n - 1, h.face(m, v, i));
    }
    if (with_action && m >= 2)
      for (int a = 0; a + 1 < m; ++a) push(m, h.act(m, transposition(m, a, a + 1), v));
  }
  return w;
}

ValidationReport SubmoduleWitness::check_closed(const SimplicialHost& h, bool with_action) const {
  ValidationReport rep;
  for (const auto& [m, gens] : gens_) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const std::string at = "spanning vector " + std::to_string(g);
      if (m - 1 >= lo_)
        for (int i = 0; i < m; ++i) {
          ++rep.checks;
          if (!contains(m - 1, h.face(m, gens[g], i))) rep.add({"closed under faces", m, 0, at + " i=" + std::to_string(i + 1)});
        }
      if (m + 1 <= hi_) {
        for (int j = 0; j < m; ++j) {
          ++rep.checks;
          if (!contains(m + 1, h.degeneracy(m, gens[g], j)))
            rep.add({"closed under degeneracies", m, 0, at + " j=" + std::to_string(j + 1)});
        }
        ++rep.checks;
        if (!contains(m + 1, h.extra_degeneracy(m, gens[g]))) rep.add({"closed under the extra degeneracy", m, 0, at});
      }
      if (with_action)
        for (int a = 0; a + 1 < m; ++a) {
          ++rep.checks;
          if (!contains(m, h.act(m, transposition(m, a, a + 1), gens[g])))
            rep.add({"closed under the symmetric group", m, 0, at + " s" + std::to_string(a + 1)});
        }
    }
  }
  return rep;
}

}  // namespace opmin
