#include "opmin/operad.hpp"

namespace opmin {

SparseVec Operad::compose(int m, const SparseVec& a, int slot, int k, const SparseVec& b) const {
  SparseVec out;
  if (a.empty() || b.empty()) return out;
  std::vector<SparseVec::Entry> acc;
  for (const auto& [i, x] : a.entries())
    for (const auto& [j, y] : b.entries()) {
      SparseVec r = compose(m, i, slot, k, j);
      Rational c = x * y;
      for (const auto& [t, z] : r.entries()) acc.emplace_back(t, c * z);
    }
  return SparseVec::from_entries(std::move(acc));
}

TableOperad::TableOperad(std::string name, DgSigmaModule carrier,
                         std::map<std::pair<int, int>, std::vector<SparseVec>> comps, SparseVec unit,
                         std::optional<SparseVec> m2, bool unitary)
    : name_(std::move(name)),
      carrier_(std::move(carrier)),
      comps_(std::move(comps)),
      unit_(std::move(unit)),
      m2_(std::move(m2)),
      unitary_(unitary) {
  if (carrier_.max_arity() < 1) throw OperadError(name_ + ": the window must contain arity 1");
  if (unitary_ && carrier_.dim(0) != 1) throw OperadError(name_ + ": a unitary operad needs P(0) of dimension 1");
  if (unitary_ && !carrier_.has_restrictions()) throw OperadError(name_ + ": a unitary operad needs restriction maps");
  for (const auto& [mk, v] : comps_) {
    auto [m, k] = mk;
    if (m < 1 || k < 1 || m + k - 1 > max_arity())
      throw OperadError(name_ + ": composition table entry (" + std::to_string(m) + "," + std::to_string(k) +
                        ") outside the arity window");
    if (v.size() != static_cast<std::size_t>(m) * carrier_.dim(m) * carrier_.dim(k))
      throw OperadError(name_ + ": composition table (" + std::to_string(m) + "," + std::to_string(k) +
                        ") has wrong size");
  }
}

std::size_t TableOperad::dim(int n) const {
  if (n == 0 && !unitary_) return 0;
  return carrier_.dim(n);
}

int TableOperad::degree(int n, std::size_t b) const { return carrier_.degree(n, b); }
std::string TableOperad::label(int n, std::size_t b) const { return carrier_.label(n, b); }
SparseVec TableOperad::differential(int n, std::size_t b) const { return carrier_.differential(n, b); }
SparseVec TableOperad::act(int n, const Perm& sigma, std::size_t b) const { return carrier_.act(n, sigma, b); }
SparseVec TableOperad::restrict(int n, std::size_t b, int i) const { return carrier_.restrict(n, b, i); }

SparseVec TableOperad::compose(int m, std::size_t a, int slot, int k, std::size_t b) const {
  if (slot < 0 || slot >= m) throw OperadError(name_ + ": slot " + std::to_string(slot + 1) + " out of range");
  if (k == 0) {
    if (!unitary_) throw OperadError(name_ + ": no arity 0 in a non-unitary operad");
    return carrier_.restrict(m, a, slot);
  }
  if (m + k - 1 > max_arity())
    throw OperadError(name_ + ": composition of arities " + std::to_string(m) + " and " + std::to_string(k) +
                      " overflows the arity window " + std::to_string(max_arity()));
  auto it = comps_.find({m, k});
  if (it == comps_.end()) return {};
  return it->second.at((static_cast<std::size_t>(slot) * carrier_.dim(m) + a) * carrier_.dim(k) + b);
}

std::shared_ptr<const Operad> TableOperad::unitary_variant(bool unitary) const {
  if (unitary && (!carrier_.has_restrictions() || carrier_.dim(0) != 1))
    throw OperadError(name_ + ": no restriction data to extend by a unit");
  return std::make_shared<TableOperad>(name_ + (unitary ? "+" : "-trunc"), carrier_, comps_, unit_, m2_, unitary);
}

OperadPtr truncate(const OperadPtr& p) {
  if (!p->unitary()) throw OperadError("truncate: " + p->name() + " is not unitary");
  return p->unitary_variant(false);
}

OperadPtr unitary_extension(const OperadPtr& p) {
  if (p->unitary()) throw OperadError("unitary_extension: " + p->name() + " is already unitary");
  if (!p->has_restrictions()) throw OperadError("unitary_extension: " + p->name() + " has no restriction data");
  return p->unitary_variant(true);
}

std::shared_ptr<TableOperad> to_table(const Operad& p, int max_arity, const std::string& name) {
  max_arity = std::min(max_arity, p.max_arity());
  DgSigmaModule carrier = materialize(p, max_arity);
  if (p.has_restrictions() && !p.unitary()) {
    // keep the augmentation target
    std::vector<ArityData> a = carrier.arities();
    a[0].degrees = {0};
    a[0].labels = {"1"};
    a[0].differential = SparseMap{1, {SparseVec{}}};
    carrier = DgSigmaModule(std::move(a), true);
  }
  std::map<std::pair<int, int>, std::vector<SparseVec>> comps;
  for (int m = 1; m <= max_arity; ++m)
    for (int k = 1; m + k - 1 <= max_arity; ++k) {
      std::vector<SparseVec> v;
      v.reserve(m * p.dim(m) * p.dim(k));
      for (int i = 0; i < m; ++i)
        for (std::size_t a = 0; a < p.dim(m); ++a)
          for (std::size_t b = 0; b < p.dim(k); ++b) v.push_back(p.compose(m, a, i, k, b));
      comps[{m, k}] = std::move(v);
    }
  return std::make_shared<TableOperad>(name.empty() ? p.name() : name, std::move(carrier), std::move(comps), p.unit(),
                                       p.multiplication(), p.unitary());
}

std::shared_ptr<TableOperad> cohomology_operad(const Operad& p, int max_arity) {
  max_arity = std::min(max_arity, p.max_arity());
  // representatives and coordinates per arity
  struct H {
    GradedCohomology g;
    std::vector<SparseVec> reps;
    std::vector<int> degrees;
    std::map<int, std::size_t> offset;
    SparseVec project(const SparseVec& v, const Operad& p, int n) const {
      std::map<int, VecBuilder> parts;
      std::map<int, bool> seen;
      for (const auto& [i, c] : v.entries()) {
        parts[p.degree(n, i)].add(i, c);
        seen[p.degree(n, i)] = true;
      }
      VecBuilder out;
      for (auto& [d, b] : parts) {
        SparseVec piece = b.build();
        auto it = g.by_degree.find(d);
        if (it == g.by_degree.end()) continue;  // cocycle in an acyclic degree is a coboundary
        QVector c = it->second.project(piece);
        for (std::size_t r = 0; r < c.size(); ++r) out.add(offset.at(d) + r, c[r]);
      }
      return out.build();
    }
  };
  const bool keep_zero = p.has_restrictions();
  std::vector<H> hs(max_arity + 1);
  std::vector<ArityData> arities(max_arity + 1);
  for (int n = 0; n <= max_arity; ++n) {
    auto& h = hs[n];
    if (n == 0 && p.dim(0) == 0) {
      if (keep_zero) {
        arities[0].degrees = {0};
        arities[0].labels = {"1"};
        arities[0].differential = SparseMap{1, {SparseVec{}}};
      }
      continue;
    }
    h.g = cohomology_of(module_complex(p, n));
    for (const auto& [d, dc] : h.g.by_degree) {
      h.offset[d] = h.reps.size();
      for (std::size_t r = 0; r < dc.dim(); ++r) {
        h.reps.push_back(dc.reps[r]);
        h.degrees.push_back(d);
        arities[n].labels.push_back("[" + std::to_string(d) + "." + std::to_string(r) + "]");
      }
    }
    arities[n].degrees = h.degrees;
    arities[n].differential = SparseMap{h.reps.size(), std::vector<SparseVec>(h.reps.size())};
  }
  auto dim_of = [&](int n) { return arities[n].degrees.size(); };
  for (int n = 2; n <= max_arity; ++n)
    for (int a = 0; a + 1 < n; ++a) {
      SparseMap s{dim_of(n), {}};
      Perm t = transposition(n, a, a + 1);
      for (const auto& r : hs[n].reps) s.cols.push_back(hs[n].project(p.act(n, t, r), p, n));
      arities[n].adjacent.push_back(std::move(s));
    }
  if (p.has_restrictions())
    for (int n = 1; n <= max_arity; ++n)
      for (int i = 0; i < n; ++i) {
        SparseMap rmap{dim_of(n - 1), {}};
        for (const auto& r : hs[n].reps) {
          SparseVec v = p.restrict(n, r, i);
          rmap.cols.push_back(n == 1 ? v : hs[n - 1].project(v, p, n - 1));
        }
        arities[n].restrictions.push_back(std::move(rmap));
      }
  DgSigmaModule carrier(std::move(arities), p.has_restrictions());
  std::map<std::pair<int, int>, std::vector<SparseVec>> comps;
  for (int m = 1; m <= max_arity; ++m)
    for (int k = 1; m + k - 1 <= max_arity; ++k) {
      std::vector<SparseVec> v;
      for (int i = 0; i < m; ++i)
        for (const auto& ra : hs[m].reps)
          for (const auto& rb : hs[k].reps) v.push_back(hs[m + k - 1].project(p.compose(m, ra, i, k, rb), p, m + k - 1));
      comps[{m, k}] = std::move(v);
    }
  SparseVec unit = hs[1].project(p.unit(), p, 1);
  std::optional<SparseVec> m2;
  if (p.multiplication() && max_arity >= 2) m2 = hs[2].project(*p.multiplication(), p, 2);
  return std::make_shared<TableOperad>("H(" + p.name() + ")", std::move(carrier), std::move(comps), unit, m2,
                                       p.unitary());
}

namespace {

struct Checker {
  ValidationReport& rep;
  const Operad& p;
  std::map<std::string, int> counts;
  void check(bool ok, const std::string& what, int n, int deg, const std::string& detail) {
    ++rep.checks;
    if (ok || counts[what]++ >= 5) return;
    rep.add({what, n, deg, detail});
  }
};

std::string lab(const Operad& p, int n, std::size_t b) { return p.label(n, b) + "@" + std::to_string(n); }

// restriction with an arity-0 result kept as a coefficient; composition with such elements
SparseVec compose_any(const Operad& p, int m, const SparseVec& a, int slot, int k, const SparseVec& b) {
  if (k == 0) {
    if (p.unitary()) return p.compose(m, a, slot, 0, b);
    return p.restrict(m, a, slot) * b.get(0);
  }
  return p.compose(m, a, slot, k, b);
}

}  // namespace

ValidationReport check_operad_axioms(const Operad& p, int up_to) {
  ValidationReport rep = validate(p, up_to);
  Checker c{rep, p, {}};
  up_to = std::min(up_to, p.max_arity());
  const SparseVec id = p.unit();
  c.check(p.dim(1) > 0 && !id.empty(), "unit exists", 1, 0, "");
  c.check(p.differential(1, id).empty(), "d(id) = 0", 1, 0, "");
  for (const auto& [i, x] : id.entries()) c.check(p.degree(1, i) == 0, "unit has degree 0", 1, p.degree(1, i), "");
  for (int n = 1; n <= up_to; ++n)
    for (std::size_t a = 0; a < p.dim(n); ++a) {
      const SparseVec ea = SparseVec::unit(a);
      c.check(p.compose(1, id, 0, n, ea) == ea, "left unit", n, p.degree(n, a), lab(p, n, a));
      for (int i = 0; i < n; ++i)
        c.check(p.compose(n, ea, i, 1, id) == ea, "right unit", n, p.degree(n, a), lab(p, n, a) + " slot " + std::to_string(i + 1));
    }
  const int lowk = p.unitary() ? 0 : 1;
  for (int m = 1; m <= up_to; ++m)
    for (int k = lowk; m + k - 1 <= up_to; ++k) {
      const int r = m + k - 1;
      for (std::size_t a = 0; a < p.dim(m); ++a)
        for (std::size_t b = 0; b < p.dim(k); ++b) {
          const SparseVec ea = SparseVec::unit(a), eb = SparseVec::unit(b);
          const int da = p.degree(m, a), db = p.degree(k, b);
          const std::string what = lab(p, m, a) + " o " + lab(p, k, b);
          for (int i = 0; i < m; ++i) {
            SparseVec ab = p.compose(m, a, i, k, b);
            for (const auto& [t, x] : ab.entries())
              c.check(p.degree(r, t) == da + db, "composition is additive in degree", r, da + db, what);
            SparseVec lhs = p.differential(r, ab);
            SparseVec rhs = p.compose(m, p.differential(m, ea), i, k, eb);
            rhs.axpy(da % 2 ? -1 : 1, p.compose(m, ea, i, k, p.differential(k, eb)));
            c.check(lhs == rhs, "Leibniz rule", r, da + db, what + " slot " + std::to_string(i + 1));
            for (int s = 0; s + 1 < m; ++s) {
              Perm t = transposition(m, s, s + 1);
              Perm blk = block_perm(t, i, identity_perm(k));
              c.check(p.compose(m, p.act(m, t, ea), t[i], k, eb) == p.act(r, blk, ab), "equivariance in the outer input",
                      r, da + db, what + " s" + std::to_string(s + 1));
            }
            for (int s = 0; s + 1 < k; ++s) {
              Perm t = transposition(k, s, s + 1);
              Perm blk = block_perm(identity_perm(m), i, t);
              c.check(p.compose(m, ea, i, k, p.act(k, t, eb)) == p.act(r, blk, ab), "equivariance in the inner input",
                      r, da + db, what + " s" + std::to_string(s + 1));
            }
          }
        }
    }
  // associativity on triples
  for (int m = 1; m <= up_to; ++m)
    for (int k = 1; m + k - 1 <= up_to; ++k)
      for (int l = lowk; m + k + l - 2 <= up_to; ++l)
        for (std::size_t a = 0; a < p.dim(m); ++a)
          for (std::size_t b = 0; b < p.dim(k); ++b)
            for (std::size_t g = 0; g < p.dim(l); ++g) {
              const SparseVec ea = SparseVec::unit(a), eb = SparseVec::unit(b), eg = SparseVec::unit(g);
              const int r = m + k + l - 2;
              const int deg = p.degree(m, a) + p.degree(k, b) + p.degree(l, g);
              const std::string what = lab(p, m, a) + ", " + lab(p, k, b) + ", " + lab(p, l, g);
              for (int i = 0; i < m; ++i) {
                SparseVec ab = p.compose(m, a, i, k, b);
                for (int j = 0; j < k; ++j)
                  c.check(p.compose(m + k - 1, ab, i + j, l, eg) == p.compose(m, ea, i, k + l - 1, p.compose(k, b, j, l, g)),
                          "sequential associativity", r, deg, what);
                for (int j = i + 1; j < m; ++j) {
                  int sgn = (p.degree(k, b) * p.degree(l, g)) % 2 ? -1 : 1;
                  SparseVec lhs = p.compose(m + k - 1, ab, j + k - 1, l, eg);
                  SparseVec rhs = p.compose(m + l - 1, p.compose(m, a, j, l, g), i, k, eb) * sgn;
                  c.check(lhs == rhs, "parallel associativity", r, deg, what);
                }
              }
            }
  // restrictions against composition, including the truncated case
  if (p.has_restrictions()) {
    c.check(p.restrict(1, id, 0) == SparseVec::unit(0), "augmentation of the unit", 1, 0, "");
    for (int m = 1; m <= up_to; ++m)
      for (int k = 1; m + k - 1 <= up_to; ++k) {
        const int r = m + k - 1;
        for (std::size_t a = 0; a < p.dim(m); ++a)
          for (std::size_t b = 0; b < p.dim(k); ++b) {
            const SparseVec ea = SparseVec::unit(a), eb = SparseVec::unit(b);
            const std::string what = lab(p, m, a) + " o " + lab(p, k, b);
            const int deg = p.degree(m, a) + p.degree(k, b);
            for (int i = 0; i < m; ++i) {
              SparseVec ab = p.compose(m, a, i, k, b);
              for (int s = 0; s < r; ++s) {
                SparseVec lhs = p.restrict(r, ab, s);
                SparseVec rhs;
                if (r == 1) {
                  rhs = SparseVec::unit(0, p.restrict(1, ea, 0).get(0) * p.restrict(1, eb, 0).get(0));
                } else if (s < i) {
                  rhs = compose_any(p, m - 1, p.restrict(m, ea, s), i - 1, k, eb);
                } else if (s < i + k) {
                  rhs = compose_any(p, m, ea, i, k - 1, p.restrict(k, eb, s - i));
                } else {
                  rhs = compose_any(p, m - 1, p.restrict(m, ea, s - k + 1), i, k, eb);
                }
                c.check(lhs == rhs, "restriction of a composite", r, deg, what + " delta" + std::to_string(s + 1));
              }
            }
          }
      }
  }
  return rep;
}

ValidationReport check_unitary_multiplication(const Operad& p, const SparseVec& m2, bool require_associative) {
  ValidationReport rep;
  Checker c{rep, p, {}};
  for (const auto& [i, x] : m2.entries()) c.check(p.degree(2, i) == 0, "multiplication has degree 0", 2, p.degree(2, i), "");
  if (require_associative && p.max_arity() >= 3)
    c.check(p.compose(2, m2, 0, 2, m2) == p.compose(2, m2, 1, 2, m2), "(a) m2 o1 m2 = m2 o2 m2", 3, 0, "");
  if (!p.has_restrictions()) {
    c.check(false, "(b') restrictions of m2", 2, 0, "operad has no restriction maps");
  } else {
    c.check(p.restrict(2, m2, 0) == p.unit(), "(b') delta1 m2 = id", 2, 0, "");
    c.check(p.restrict(2, m2, 1) == p.unit(), "(b') delta2 m2 = id", 2, 0, "");
  }
  c.check(p.differential(2, m2).empty(), "(c) d m2 = 0", 2, 0, "");
  return rep;
}

ValidationReport validate_operad_morphism(const OperadMorphism& f, int up_to) {
  ValidationReport rep = validate_morphism(f, up_to);
  const Operad& s = f.source_operad();
  const Operad& t = f.target_operad();
  Checker c{rep, s, {}};
  c.check(f.apply(1, s.unit()) == t.unit(), "morphism preserves the unit", 1, 0, "");
  for (int m = 1; m <= up_to; ++m)
    for (int k = 1; m + k - 1 <= up_to; ++k)
      for (std::size_t a = 0; a < s.dim(m); ++a) {
        SparseVec fa = f.apply(m, a);
        for (std::size_t b = 0; b < s.dim(k); ++b) {
          SparseVec fb = f.apply(k, b);
          for (int i = 0; i < m; ++i)
            c.check(f.apply(m + k - 1, s.compose(m, a, i, k, b)) == t.compose(m, fa, i, k, fb),
                    "morphism preserves composition", m + k - 1, s.degree(m, a) + s.degree(k, b),
                    lab(s, m, a) + " o" + std::to_string(i + 1) + " " + lab(s, k, b));
        }
      }
  return rep;
}

}  // namespace opmin
