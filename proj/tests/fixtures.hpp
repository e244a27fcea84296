#pragma once
// Synthetic operads and morphisms shared by the sullivan tests and the acceptance run.

#include <map>
#include <random>
#include <sstream>

#include "opmin/sullivan.hpp"
#include "oracles.hpp"

namespace fx {

using namespace opmin;

// Word reversal x_{w1}..x_{wn} -> x_{wn}..x_{w1} on Ass or Ass+, an automorphism.
class Reverse : public OperadMorphism {
 public:
  explicit Reverse(OperadPtr p) : p_(std::move(p)) {
    for (int n = 0; n <= p_->max_arity(); ++n) {
      std::map<std::string, std::size_t> ix;
      for (std::size_t b = 0; b < p_->dim(n); ++b) ix[p_->label(n, b)] = b;
      std::vector<std::size_t> img;
      for (std::size_t b = 0; b < p_->dim(n); ++b) img.push_back(ix.at(reversed(p_->label(n, b))));
      map_.push_back(std::move(img));
    }
  }
  const Operad& source_operad() const override { return *p_; }
  const Operad& target_operad() const override { return *p_; }
  SparseVec apply(int n, std::size_t b) const override { return SparseVec::unit(map_.at(n).at(b)); }
  using ArityMap::apply;

 private:
  static std::string reversed(const std::string& w) {
    std::vector<std::string> letters;
    for (std::size_t k = 0; k < w.size();) {
      std::size_t e = w.find('x', k + 1);
      if (e == std::string::npos) e = w.size();
      letters.push_back(w.substr(k, e - k));
      k = e;
    }
    std::string r;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) r += *it;
    return r;
  }
  OperadPtr p_;
  std::vector<std::vector<std::size_t>> map_;
};

inline SparseVec random_in_degree(const Operad& p, int n, int d, std::mt19937& rng, int spread = 2) {
  std::uniform_int_distribution<int> c(-spread, spread);
  VecBuilder b;
  for (std::size_t i : p.basis_in_degree(n, d)) b.add(i, Rational(c(rng)));
  return b.build();
}

// equivariant family indexed by the batch basis, starting from random values
inline std::vector<SparseVec> random_equivariant(const Operad& p, const GeneratorBatch& B, int d, std::mt19937& rng) {
  std::vector<std::size_t> members(B.size());
  for (std::size_t k = 0; k < B.size(); ++k) members[k] = k;
  std::vector<SparseVec> f;
  for (std::size_t k = 0; k < B.size(); ++k) f.push_back(random_in_degree(p, B.arity, d, rng));
  return equivariant_average(B.arity, batch_action(B, members), f,
                             [&](const Perm& s, const SparseVec& v) { return p.act(B.arity, s, v); });
}

inline std::optional<SparseVec> carried_multiplication(const FreeOperad& from, const FreeOperad& to) {
  auto m = from.multiplication();
  if (!m || from.max_arity() < 2) return std::nullopt;
  return to.to_vector(2, from.to_trees(2, *m));
}

struct AcyclicExtension {
  std::shared_ptr<FreeOperad> q;       // model plus generators y, x with dx = y
  std::shared_ptr<FreeMorphism> proj;  // q -> model, x -> a, y -> da
};

// Q = M plus a contractible pair (x, y = dx) of arity p with x in degree deg and Sigma_p-module rep.
// With image, rho(x) is a random equivariant a in M(p)^deg rather than 0; restrictions follow delta a.
inline AcyclicExtension acyclic_extension(std::shared_ptr<const FreeOperad> m, int p, int deg, const std::string& rep,
                                          bool image, std::mt19937& rng) {
  GeneratorBatch y = batch_from_rep(p, deg + 1, rep, "y");
  GeneratorBatch x = batch_from_rep(p, deg, rep, "x");
  std::vector<SparseVec> a(x.size());
  if (image) a = random_equivariant(*m, x, deg, rng);
  const int gy = static_cast<int>(m->generator_count());
  for (std::size_t j = 0; j < x.size(); ++j) {
    Tree t;
    t.leaves = p;
    TreeVertex v;
    v.decoration = gy + static_cast<int>(j);
    for (int l = 0; l < p; ++l) v.children.push_back(leaf_code(l));
    t.vertices.push_back(v);
    x.d[j] = TreeSum::single(t);
  }
  if (m->has_restrictions()) {
    x.delta.assign(x.size(), {});
    y.delta.assign(y.size(), {});
    for (std::size_t j = 0; j < x.size(); ++j)
      for (int i = 0; i < p; ++i) {
        x.delta[j].push_back(m->to_trees(p - 1, m->restrict(p, a[j], i)));
        y.delta[j].push_back(m->to_trees(p - 1, m->restrict(p, m->differential(p, a[j]), i)));
      }
  }
  std::vector<GeneratorBatch> batches = m->batches();
  batches.push_back(y);
  batches.push_back(x);
  auto q = std::make_shared<FreeOperad>(m->name() + "+C", batches, m->max_arity(),
                                        m->unitary() ? FreeFlavor::Unitary : FreeFlavor::NonUnitary,
                                        m->has_restrictions());
  q->set_multiplication(carried_multiplication(*m, *q));
  std::vector<SparseVec> images;
  for (std::size_t g = 0; g < m->generator_count(); ++g) images.push_back(SparseVec::unit(m->corolla_index(g)));
  for (std::size_t j = 0; j < y.size(); ++j) images.push_back(m->differential(p, a[j]));
  for (std::size_t j = 0; j < x.size(); ++j) images.push_back(a[j]);
  return {q, std::make_shared<FreeMorphism>(q, m, images)};
}

inline std::shared_ptr<FreeOperad> empty_like(const FreeOperad& m) {
  return std::make_shared<FreeOperad>("empty", std::vector<GeneratorBatch>{}, m.max_arity(),
                                      m.unitary() ? FreeFlavor::Unitary : FreeFlavor::NonUnitary,
                                      m.has_restrictions());
}

inline std::shared_ptr<FreeOperad> prefix(const FreeOperad& m, std::size_t batches) {
  std::vector<GeneratorBatch> b(m.batches().begin(), m.batches().begin() + batches);
  auto p = std::make_shared<FreeOperad>(m.name() + "_" + std::to_string(batches), b, m.max_arity(),
                                        m.unitary() ? FreeFlavor::Unitary : FreeFlavor::NonUnitary,
                                        m.has_restrictions());
  p->set_multiplication(carried_multiplication(m, *p));
  return p;
}

// automorphism alpha of the model with rho alpha = reverse rho, by lifting
inline std::shared_ptr<FreeMorphism> reversal_automorphism(const MinimalModelResult& r) {
  auto rev = std::make_shared<Reverse>(r.target);
  auto psi = r.rho->then(*rev, r.target);
  auto none = std::make_shared<FreeMorphism>(empty_like(*r.model), r.model, std::vector<SparseVec>{});
  return lift_through_extension({none, r.model, psi, r.rho, r.model}, r.flavor);
}

struct NewGenerator {
  int arity = 3;
  int degree = -1;
  std::string rep = "triv";
};

// X = M plus generators z with dz = dc, delta z = delta c for random equivariant c in M;
// psi on z is base(c), where base : M -> R.
struct Extension {
  std::shared_ptr<FreeOperad> x;
  std::shared_ptr<FreeMorphism> psi;
};

inline Extension extend_model(std::shared_ptr<const FreeOperad> m, std::shared_ptr<const FreeMorphism> base,
                              const std::vector<NewGenerator>& gens, std::mt19937& rng) {
  std::vector<GeneratorBatch> batches = m->batches();
  std::vector<SparseVec> images = base->images();
  int k = 0;
  for (const auto& g : gens) {
    GeneratorBatch z = batch_from_rep(g.arity, g.degree, g.rep, "z" + std::to_string(++k));
    auto c = random_equivariant(*m, z, g.degree, rng);
    for (std::size_t j = 0; j < z.size(); ++j) z.d[j] = m->to_trees(g.arity, m->differential(g.arity, c[j]));
    if (m->has_restrictions()) {
      z.delta.assign(z.size(), {});
      for (std::size_t j = 0; j < z.size(); ++j)
        for (int i = 0; i < g.arity; ++i) z.delta[j].push_back(m->to_trees(g.arity - 1, m->restrict(g.arity, c[j], i)));
    }
    for (std::size_t j = 0; j < z.size(); ++j) images.push_back(base->apply(g.arity, c[j]));
    batches.push_back(std::move(z));
  }
  auto x = std::make_shared<FreeOperad>(m->name() + "+Z", batches, m->max_arity(),
                                        m->unitary() ? FreeFlavor::Unitary : FreeFlavor::NonUnitary,
                                        m->has_restrictions());
  x->set_multiplication(carried_multiplication(*m, *x));
  return {x, std::make_shared<FreeMorphism>(x, base->target_ptr(), images)};
}

// Outcome of one lifting fixture.
struct LiftCheck {
  bool phi_triangle = true;   // psi' restricted to P equals phi
  bool rho_triangle = true;   // rho psi' = psi
  bool restrictions = true;   // psi' commutes with delta_i (unitary flavour)
  bool morphism = true;       // generator-level morphism checks
  std::string detail;
  bool ok() const { return phi_triangle && rho_triangle && restrictions && morphism; }
};

inline LiftCheck check_lift(const LiftingSquare& sq, const FreeMorphism& lifted, bool unitary) {
  LiftCheck c;
  const FreeOperad& P = *sq.phi->source_ptr();
  const FreeOperad& X = *sq.extension;
  const int W = X.max_arity();
  for (int n = 1; n <= W; ++n)
    for (std::size_t b = 0; b < P.dim(n); ++b)
      if (lifted.evaluate(P.tree(n, b)) != sq.phi->apply(n, b)) {
        c.phi_triangle = false;
        c.detail = "psi' o iota != phi in arity " + std::to_string(n);
      }
  for (int n = unitary ? 0 : 1; n <= W; ++n)
    for (std::size_t b = 0; b < X.dim(n); ++b) {
      if (sq.rho->apply(n, lifted.apply(n, b)) != sq.psi->apply(n, b)) {
        c.rho_triangle = false;
        c.detail = "rho psi' != psi in arity " + std::to_string(n);
      }
      if (unitary && n >= 1)
        for (int i = 0; i < n; ++i)
          if (sq.q->restrict(n, lifted.apply(n, b), i) != lifted.apply(n - 1, X.restrict(n, b, i))) {
            c.restrictions = false;
            c.detail = "delta_" + std::to_string(i + 1) + " psi' != psi' delta in arity " + std::to_string(n);
          }
    }
  auto v = validate_free_morphism(lifted);
  if (!v.ok()) {
    c.morphism = false;
    c.detail = v.summary();
  }
  return c;
}

// standard representation of Sigma_n on f_k = e_k - e_{k+1}
inline GeneratorBatch standard_batch(int n, int degree, const std::string& prefix) {
  std::vector<QMatrix> adj;
  for (int a = 0; a + 1 < n; ++a) {
    QMatrix m = QMatrix::identity(n - 1);
    m(a, a) = -1;
    if (a >= 1) m(a, a - 1) = 1;
    if (a + 1 < n - 1) m(a, a + 1) = 1;
    adj.push_back(m);
  }
  return make_batch(n, std::vector<int>(n - 1, degree), adj, prefix);
}

inline GeneratorBatch irreducible_batch(int n, int degree, const std::string& rep, const std::string& prefix) {
  return rep == "std" ? standard_batch(n, degree, prefix) : batch_from_rep(n, degree, rep, prefix);
}

// zero differential and, when asked, zero restrictions
inline void zero_structure(GeneratorBatch& b, bool restrictions) {
  b.d.assign(b.size(), TreeSum{});
  if (restrictions) b.delta.assign(b.size(), std::vector<TreeSum>(b.arity));
}

// generator module M in arities 2..4 of total dimension <= 3 per arity, degrees in [-2, 2],
// together with a homogeneous E of arity p
struct RandomModule {
  std::vector<GeneratorBatch> m;
  GeneratorBatch e;
  int p = 2;
  std::string describe;
};

inline RandomModule random_module(std::mt19937& rng, bool restrictions) {
  std::uniform_int_distribution<int> deg(-2, 2), ar(2, 4), coin(0, 3);
  RandomModule r;
  int k = 0;
  auto pick = [&](int n, int room) -> std::string {
    std::vector<std::string> opts{"triv", "sgn"};
    if (n == 2 && room >= 2) opts.push_back("reg");
    if (n > 2 && room >= n - 1) opts.push_back("std");
    return opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)];
  };
  for (int n = 2; n <= 4; ++n) {
    int room = 3;
    while (room > 0 && coin(rng)) {
      std::string rep = pick(n, room);
      GeneratorBatch b = irreducible_batch(n, deg(rng), rep, "m" + std::to_string(++k));
      room -= static_cast<int>(b.size());
      zero_structure(b, restrictions);
      r.describe += rep + "(" + std::to_string(n) + "," + std::to_string(b.degrees[0]) + ") ";
      r.m.push_back(std::move(b));
    }
  }
  r.p = ar(rng);
  std::string rep = pick(r.p, 3);
  r.e = irreducible_batch(r.p, deg(rng), rep, "e");
  zero_structure(r.e, restrictions);
  r.describe += "E=" + rep + "(" + std::to_string(r.p) + "," + std::to_string(r.e.degrees[0]) + ")";
  return r;
}

inline std::map<int, long> degree_dims(const Operad& p, int l) {
  std::map<int, long> d;
  for (std::size_t b = 0; b < p.dim(l); ++b) ++d[p.degree(l, b)];
  return d;
}

inline std::map<int, std::map<int, long>> oracle_generators(const std::vector<GeneratorBatch>& batches) {
  std::map<int, std::map<int, long>> g;
  for (const auto& b : batches)
    for (int x : b.degrees) ++g[b.arity][x];
  return g;
}

// the dimension identities of the arity-wise structure of Gamma(M) and Gamma(M + E), per degree,
// against brute-force tree counts; empty string on success
inline std::string free_dimension_identities(const RandomModule& r, FreeFlavor flavor, int L) {
  const bool unit = flavor == FreeFlavor::Unitary;
  std::vector<GeneratorBatch> me = r.m;
  me.push_back(r.e);
  FreeOperad gm("M", r.m, L, flavor, unit ? std::optional<bool>(true) : std::nullopt);
  FreeOperad gme("ME", me, L, flavor, unit ? std::optional<bool>(true) : std::nullopt);
  std::ostringstream err;
  // (a) arity 0 and 1
  for (const FreeOperad* g : {&gm, &gme}) {
    if (g->dim(0) != (unit ? 1u : 0u)) err << "dim " << g->name() << "(0) = " << g->dim(0) << "; ";
    if (g->dim(1) != 1 || g->degree(1, 0) != 0) err << "dim " << g->name() << "(1) != 1; ";
    if (unit && g->degree(0, 0) != 0) err << g->name() << "(0) not in degree 0; ";
  }
  auto gens_m = oracle_generators(r.m), gens_me = oracle_generators(me);
  for (int l = 2; l <= L; ++l) {
    auto a = degree_dims(gm, l), b = degree_dims(gme, l);
    // (a) away from 0 and 1 both flavours are the tree sum
    if (a != oracle::free_dims(l, gens_m)) err << "Gamma(M)(" << l << ") differs from the tree count; ";
    if (b != oracle::free_dims(l, gens_me)) err << "Gamma(M+E)(" << l << ") differs from the tree count; ";
    // (b)
    if (l < r.p && a != b) err << "Gamma(M+E)(" << l << ") != Gamma(M)(" << l << "); ";
    if (l == r.p) {
      for (int x : r.e.degrees) ++a[x];
      if (a != b) err << "Gamma(M+E)(p) != Gamma(M)(p) + E; ";
    }
  }
  return err.str();
}

inline std::vector<std::size_t> host_basis(const SimplicialHost& h, int n, int d) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < h.dim(n); ++b)
    if (h.degree(n, b) == d) out.push_back(b);
  return out;
}

inline SparseVec random_from(const std::vector<std::size_t>& basis, std::mt19937& rng, int spread = 2) {
  std::uniform_int_distribution<int> c(-spread, spread);
  VecBuilder b;
  for (std::size_t i : basis) b.add(i, Rational(c(rng)));
  return b.build();
}

// random element of the solution space of delta_i omega_j = delta_{j-1} omega_i (i < j), members
// in arity n-1 and degree d
inline KanFamily random_kan_closure(const SimplicialHost& h, int n, int d, std::mt19937& rng) {
  const auto basis = host_basis(h, n - 1, d);
  const std::size_t D = basis.size();
  std::vector<std::pair<int, int>> pairs;
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i < j; ++i) pairs.push_back({i, j});
  const std::size_t below = n >= 2 ? h.dim(n - 2) : 0;
  std::vector<SparseVec> cols;
  for (int k = 1; k <= n; ++k)
    for (std::size_t b : basis) {
      VecBuilder col;
      const SparseVec e = SparseVec::unit(b);
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto [i, j] = pairs[q];
        if (k == j) {
          const SparseVec f = h.face(n - 1, e, i - 1);
          for (const auto& [r, x] : f.entries()) col.add(q * below + r, x);
        }
        if (k == i) {
          const SparseVec f = h.face(n - 1, e, j - 2);
          for (const auto& [r, x] : f.entries()) col.add(q * below + r, -x);
        }
      }
      cols.push_back(col.build());
    }
  std::uniform_int_distribution<int> c(-2, 2);
  VecBuilder pick;
  for (const auto& v : sparse_kernel(cols)) pick.add(v * Rational(c(rng)));
  const SparseVec sol = pick.build();
  KanFamily f{n, std::vector<SparseVec>(n)};
  for (const auto& [idx, x] : sol.entries()) f.members[idx / D].axpy(x, SparseVec::unit(basis[idx % D]));
  return f;
}

// basis of ker f in arity n and degree d
inline std::vector<SparseVec> kernel_in_degree(const ArityMap& f, int n, int d) {
  const auto basis = f.source().basis_in_degree(n, d);
  std::vector<SparseVec> cols;
  for (std::size_t b : basis) cols.push_back(f.apply(n, b));
  std::vector<SparseVec> out;
  for (const auto& v : sparse_kernel(cols)) {
    VecBuilder g;
    for (const auto& [i, x] : v.entries()) g.add(basis[i], x);
    out.push_back(g.build());
  }
  return out;
}

inline bool is_coboundary(const Operad& p, int n, const SparseVec& w) {
  if (w.empty()) return true;
  const int d = p.degree(n, w.entries()[0].first);
  std::vector<SparseVec> cols;
  for (std::size_t b : p.basis_in_degree(n, d - 1)) cols.push_back(p.differential(n, b));
  return sparse_solve(cols, w).has_value();
}

// rho sigma = id on the model, sigma a morphism and, when unitary, compatible with restrictions;
// empty string on success
inline std::string check_section(const OperadMorphism& rho, const FreeMorphism& sigma, bool unitary) {
  const FreeOperad& M = *sigma.source_ptr();
  const Operad& Q = *sigma.target_ptr();
  std::ostringstream err;
  for (int n = unitary ? 0 : 1; n <= M.max_arity(); ++n)
    for (std::size_t b = 0; b < M.dim(n); ++b) {
      if (rho.apply(n, sigma.apply(n, b)) != SparseVec::unit(b)) {
        err << "rho sigma != id in arity " << n << "; ";
        break;
      }
      if (unitary && n >= 1)
        for (int i = 0; i < n; ++i)
          if (Q.restrict(n, sigma.apply(n, b), i) != sigma.apply(n - 1, M.restrict(n, b, i)))
            err << "sigma misses delta_" << i + 1 << " in arity " << n << "; ";
    }
  auto v = validate_free_morphism(sigma);
  if (!v.ok()) err << v.summary();
  auto w = validate_operad_morphism(sigma, M.max_arity());
  if (!w.ok()) err << w.summary();
  return err.str();
}

}  // namespace fx
