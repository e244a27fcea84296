#include "opmin/sullivan.hpp"

#include <chrono>
#include <set>
#include <sstream>

namespace opmin {

std::size_t DimensionTable::at(int n, int d) const {
  auto it = dims.find(n);
  if (it == dims.end()) return 0;
  auto jt = it->second.find(d);
  return jt == it->second.end() ? 0 : jt->second;
}

bool DimensionTable::operator==(const DimensionTable& o) const { return dims == o.dims; }

std::string DimensionTable::to_string() const {
  if (dims.empty()) return "(no generators)\n";
  std::ostringstream s;
  for (const auto& [n, by] : dims) {
    s << "E(" << n << "):";
    for (const auto& [d, k] : by) s << "  deg " << d << ": " << k;
    s << "\n";
  }
  return s.str();
}

std::optional<int> QuisReport::first_failure() const {
  if (relative.empty()) return std::nullopt;
  return relative.begin()->first;
}

std::string QuisReport::to_string() const {
  std::ostringstream s;
  for (int n : arities) {
    s << "arity " << n << ": ";
    auto it = relative.find(n);
    if (it == relative.end()) {
      s << "H(cone) = 0\n";
      continue;
    }
    s << "H(cone) nonzero:";
    for (const auto& [d, k] : it->second) s << " deg " << d << " dim " << k << ";";
    s << "\n";
  }
  return s.str();
}

QuisReport verify_quis(const OperadMorphism& phi, int up_to) {
  const auto& src = phi.source_operad();
  const auto& tgt = phi.target_operad();
  const int window = std::min(src.max_arity(), tgt.max_arity());
  if (up_to > window)
    throw OperadError("verify_quis: arity " + std::to_string(up_to) + " exceeds the window " + std::to_string(window));
  QuisReport r;
  const bool arity0 = src.dim(0) > 0 || tgt.dim(0) > 0;
  for (int n = arity0 ? 0 : 1; n <= up_to; ++n) {
    r.arities.push_back(n);
    Cone c(phi, n);
    auto dims = cohomology_dims(c.complex());
    if (!dims.empty()) r.relative[n] = dims;
  }
  return r;
}

DimensionTable MinimalModelResult::table() const {
  DimensionTable t;
  if (!model) return t;
  for (std::size_t g = 0; g < model->generator_count(); ++g)
    ++t.dims[model->generator_arity(g)][model->generator_degree(g)];
  return t;
}

std::map<int, std::map<int, std::size_t>> cohomology_table(const Operad& p, int N) {
  std::map<int, std::map<int, std::size_t>> t;
  for (int n = 0; n <= std::min(N, p.max_arity()); ++n) {
    if (p.dim(n) == 0) continue;
    t[n] = cohomology_dims(module_complex(p, n));
  }
  return t;
}

namespace {

std::string format_table(const std::map<int, std::map<int, std::size_t>>& t) {
  std::ostringstream s;
  for (const auto& [n, by] : t) {
    s << "  HP(" << n << "):";
    if (by.empty()) s << " 0";
    for (const auto& [d, k] : by) s << " deg " << d << " dim " << k << ";";
    s << "\n";
  }
  return s.str();
}

// sigma action on a set of generators of one arity, in the order given
GroupAction generators_action(const FreeOperad& p, int n, const std::vector<int>& gens) {
  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k < gens.size(); ++k) pos[gens[k]] = k;
  std::vector<QMatrix> mats;
  for (int a = 0; a + 1 < n; ++a) {
    QMatrix M(gens.size(), gens.size());
    for (std::size_t k = 0; k < gens.size(); ++k)
      for (const auto& [h, c] : p.act_generator(gens[k], transposition(n, a, a + 1))) {
        auto it = pos.find(h);
        if (it == pos.end()) throw SullivanError("generator set is not closed under the symmetric group");
        M(it->second, k) = c;
      }
    mats.push_back(std::move(M));
  }
  return GroupAction(n, gens.size(), std::move(mats));
}

// generators of arity n grouped by degree
std::map<int, std::vector<int>> generators_by_degree(const FreeOperad& p, int n) {
  std::map<int, std::vector<int>> out;
  for (std::size_t g = 0; g < p.generator_count(); ++g)
    if (p.generator_arity(g) == n) out[p.generator_degree(g)].push_back(static_cast<int>(g));
  return out;
}

std::vector<SparseVec> columns_in_degree(const ArityComplex& c, int deg) {
  std::vector<SparseVec> cols;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.degrees[i] == deg) cols.push_back(c.d[i]);
  return cols;
}

std::string gen_label(int n, std::size_t j, std::size_t count) {
  if (count == 1) return "e" + std::to_string(n);
  return "e" + std::to_string(n) + "_" + std::to_string(j + 1);
}

}  // namespace

std::vector<SparseVec> equivariant_average(int n, const GroupAction& e_action, std::vector<SparseVec> f,
                                           const std::function<SparseVec(const Perm&, const SparseVec&)>& act) {
  const std::size_t k = f.size();
  if (k != e_action.dim()) throw SullivanError("equivariant_average: size mismatch");
  for (int m = 2; m <= n; ++m) {
    std::vector<SparseVec> next = f;
    for (int a = 0; a < m - 1; ++a) {
      Perm g = transposition(n, a, m - 1);
      QMatrix G = e_action.matrix(g);
      for (std::size_t e = 0; e < k; ++e) {
        SparseVec inner;
        for (std::size_t r = 0; r < k; ++r)
          if (!is_zero(G(r, e))) inner.axpy(G(r, e), f[r]);
        next[e].axpy(1, act(g, inner));
      }
    }
    const Rational inv = Rational(1, m);
    for (auto& v : next) v = v * inv;
    f = std::move(next);
  }
  return f;
}

GroupAction batch_action(const GeneratorBatch& b, const std::vector<std::size_t>& members) {
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t k = 0; k < members.size(); ++k) pos[members[k]] = k;
  std::vector<QMatrix> mats;
  for (const auto& s : b.adjacent) {
    QMatrix M(members.size(), members.size());
    for (std::size_t k = 0; k < members.size(); ++k)
      for (const auto& [i, c] : s.cols.at(members[k]).entries()) {
        auto it = pos.find(i);
        if (it == pos.end()) throw SullivanError("batch members are not closed under the symmetric group");
        M(it->second, k) = c;
      }
    mats.push_back(std::move(M));
  }
  return GroupAction(b.arity, members.size(), std::move(mats));
}

void check_hypotheses(const Operad& p, int N, FreeFlavor flavor) {
  if (N < 1) throw HypothesisError("the arity window must contain arity 1");
  if (p.max_arity() < N)
    throw HypothesisError(p.name() + " is only known through arity " + std::to_string(p.max_arity()) +
                          ", below the requested " + std::to_string(N));
  auto table = cohomology_table(p, std::min(N, 2));
  const std::string shown = "cohomology of " + p.name() + ":\n" + format_table(table);
  auto h1 = table.count(1) ? table.at(1) : std::map<int, std::size_t>{};
  if (h1 != std::map<int, std::size_t>{{0, 1}})
    throw HypothesisError("HP(1) is not the ground field in degree 0 (cohomologically connected fails)\n" + shown);
  {
    SparseVec u = p.unit();
    if (!p.differential(1, u).empty()) throw HypothesisError("the unit of " + p.name() + " is not a cocycle\n" + shown);
    auto c = module_complex(p, 1);
    if (SpanSolver(columns_in_degree(c, -1)).contains(u))
      throw HypothesisError("the class of id vanishes in HP(1)\n" + shown);
  }
  auto h0 = table.count(0) ? table.at(0) : std::map<int, std::size_t>{};
  if (flavor == FreeFlavor::NonUnitary) {
    if (p.unitary() && !h0.empty())
      throw HypothesisError("HP(0) is nonzero, so " + p.name() +
                            " is not cohomologically non-unitary (use its truncation or the unitary flavour)\n" + shown);
    return;
  }
  if (!p.unitary()) throw HypothesisError(p.name() + " has no arity 0; the unitary flavour needs P(0) = k and a unitary multiplication m2\n" + shown);
  if (h0 != std::map<int, std::size_t>{{0, 1}})
    throw HypothesisError("HP(0) is not the ground field concentrated in degree 0\n" + shown);
  auto m = p.multiplication();
  if (!m) {
    // nothing above arity 1: no stage needs rectifying
    bool empty = true;
    for (int n = 2; n <= N; ++n) empty = empty && p.dim(n) == 0;
    if (empty) return;
    throw HypothesisError(p.name() + " has no unitary multiplication m2 (operad with unitary multiplication required)");
  }
  if (N < 2) return;
  auto r = check_unitary_multiplication(p, *m, true);
  if (!r.ok()) throw HypothesisError("unitary multiplication check fails: " + r.summary());
}

MinimalModelResult minimal_model(OperadPtr p, int N, FreeFlavor flavor, const MinimalModelOptions& opt) {
  check_hypotheses(*p, N, flavor);
  bool lam = flavor == FreeFlavor::Unitary;
  std::optional<SparseVec> mP;
  if (!lam) {
    bool avail = p->has_restrictions() && p->multiplication() && N >= 2 &&
                 check_unitary_multiplication(*p, *p->multiplication(), false).ok();
    if (opt.lambda.value_or(avail) && !avail)
      throw HypothesisError(p->name() + ": restrictions requested but there is no compatible unitary multiplication");
    lam = opt.lambda.value_or(avail);
  }
  if (lam && N >= 2) mP = p->multiplication();

  MinimalModelResult res;
  res.target = p;
  res.flavor = flavor;
  res.max_arity = N;
  res.lambda = lam;
  res.target_cohomology = cohomology_table(*p, N);

  const std::string mname = p->name() + "_inf";
  std::shared_ptr<FreeOperad> model = std::make_shared<FreeOperad>(mname, std::vector<GeneratorBatch>{}, N, flavor, lam);
  std::vector<SparseVec> images;
  auto rho = std::make_shared<FreeMorphism>(model, p, images);

  // HP(1) in degree 0 for the induced restrictions on E(2)
  std::optional<DegreeCohomology> h1;
  Rational unit_coord = 1;
  if (lam) {
    auto g = cohomology_of(module_complex(*p, 1), opt.strategy);
    h1 = g.by_degree.at(0);
    unit_coord = h1->project(p->unit()).at(0);
  }

  for (int n = 2; n <= N; ++n) {
    auto t0 = std::chrono::steady_clock::now();
    StageReport st;
    st.arity = n;
    Cone cone(*rho, n);
    st.cone_size = cone.size();
    GradedCohomology H = cohomology_of(cone.complex(), opt.strategy);

    GeneratorBatch batch;
    batch.arity = n;
    std::vector<QMatrix> blocks_adj(n - 1);
    std::vector<SparseVec> new_images;
    std::size_t total = 0;
    for (const auto& [deg, dc] : H.by_degree) total += dc.dim();
    for (int a = 0; a + 1 < n; ++a) blocks_adj[a] = QMatrix(total, total);
    std::size_t offset = 0;
    std::map<int, std::size_t> block_start;

    for (const auto& [deg, dc] : H.by_degree) {
      const std::size_t h = dc.dim();
      block_start[deg] = offset;
      st.generators[deg] = h;
      std::vector<QMatrix> mats;
      for (int a = 0; a + 1 < n; ++a) {
        Perm s = transposition(n, a, a + 1);
        QMatrix M(h, h);
        for (std::size_t j = 0; j < h; ++j) {
          QVector col = dc.project(cone.act(s, dc.reps[j]));
          for (std::size_t i = 0; i < h; ++i) M(i, j) = col[i];
        }
        mats.push_back(std::move(M));
      }
      GroupAction EA(n, h, mats);
      std::vector<SparseVec> s = equivariant_average(
          n, EA, dc.reps, [&](const Perm& g, const SparseVec& v) { return cone.act(g, v); });
      std::vector<std::vector<TreeSum>> delta(h);

      if (lam && n == 2) {
        OperadHost host(p, *mP);
        std::vector<std::vector<SparseVec>> fam(h);
        std::vector<std::vector<Rational>> cs(h);
        for (std::size_t e = 0; e < h; ++e) {
          SparseVec fe = cone.target_part(s[e]);
          for (int i = 0; i < 2; ++i) {
            SparseVec di = p->restrict(2, fe, i);
            Rational c = deg == 0 ? h1->project(di).at(0) / unit_coord : Rational(0);
            cs[e].push_back(c);
            fam[e].push_back(di - p->unit() * c);
          }
        }
        auto W = fill_equivariant(host, 2, EA, fam);
        SpanSolver bound(columns_in_degree(module_complex(*p, 2), deg - 1));
        for (std::size_t e = 0; e < h; ++e) {
          if (!bound.contains(W[e])) throw SullivanError("arity 2 rectification is not a coboundary");
          s[e] = cone.join({}, cone.target_part(s[e]) - W[e]);
          for (int i = 0; i < 2; ++i)
            delta[e].push_back(cs[e][i] == 0 ? TreeSum{} : TreeSum::single(Tree{}, cs[e][i]));
        }
        st.rectified = true;
      } else if (lam) {
        ConeHost host(rho, model, p, *model->multiplication());
        std::vector<std::vector<SparseVec>> fam(h);
        for (std::size_t e = 0; e < h; ++e)
          for (int i = 0; i < n; ++i) fam[e].push_back(host.face(n, s[e], i));
        auto X = fill_equivariant(host, n, EA, fam);
        SpanSolver bound(columns_in_degree(cone.complex(), deg - 1));
        for (std::size_t e = 0; e < h; ++e) {
          if (!bound.contains(X[e])) throw SullivanError("rectification in arity " + std::to_string(n) + " is not a coboundary");
          s[e] = s[e] - X[e];
          delta[e].assign(n, TreeSum{});
        }
        st.rectified = true;
      }

      for (std::size_t e = 0; e < h; ++e) {
        batch.degrees.push_back(deg);
        batch.labels.push_back("");
        batch.d.push_back(model->to_trees(n, cone.source_part(s[e])));
        new_images.push_back(cone.target_part(s[e]));
        if (lam) batch.delta.push_back(delta[e]);
      }
      for (int a = 0; a + 1 < n; ++a)
        for (std::size_t i = 0; i < h; ++i)
          for (std::size_t j = 0; j < h; ++j) blocks_adj[a](offset + i, offset + j) = mats[a](i, j);
      offset += h;
    }
    for (std::size_t j = 0; j < total; ++j) batch.labels[j] = gen_label(n, j, total);
    for (const auto& M : blocks_adj) batch.adjacent.push_back(SparseMap::from_dense(M));

    if (total > 0) {
      model = principal_extend(*model, std::move(batch), mname);
      images.insert(images.end(), new_images.begin(), new_images.end());
      if (n == 2 && lam) {
        // m_inf represents the class of m2
        const auto& dc = H.by_degree.at(0);
        QVector coords = dc.project(cone.join({}, *mP));
        SparseVec m;
        const int first = model->first_generator(static_cast<int>(model->batches().size()) - 1);
        for (std::size_t j = 0; j < coords.size(); ++j)
          if (!is_zero(coords[j]))
            m.axpy(coords[j], SparseVec::unit(model->corolla_index(first + static_cast<int>(block_start.at(0) + j))));
        model->set_multiplication(m);
      }
      rho = std::make_shared<FreeMorphism>(model, p, images);
    }
    st.model_dim = model->dim(n);
    if (opt.verify_stages) {
      st.quis = verify_quis(*rho, n);
      if (!st.quis.ok()) throw SullivanError("stage " + std::to_string(n) + " is not a quis:\n" + st.quis.to_string());
      auto vr = validate_free_morphism(*rho);
      if (!vr.ok()) throw SullivanError("stage " + std::to_string(n) + " morphism check fails: " + vr.summary());
    }
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opt.on_stage) opt.on_stage(st);
    res.stages.push_back(std::move(st));
  }
  res.model = model;
  res.rho = rho;
  return res;
}

std::shared_ptr<FreeMorphism> lift_through_extension(const LiftingSquare& sq, FreeFlavor flavor, PivotStrategy) {
  const FreeOperad& X = *sq.extension;
  const Operad& Q = *sq.q;
  const OperadMorphism& rho = *sq.rho;
  const Operad& R = rho.target_operad();
  const FreeOperad& P = *sq.phi->source_ptr();
  const std::size_t start = P.generator_count();
  if (X.generator_count() < start) throw SullivanError("lift: the extension is smaller than P");
  for (std::size_t g = 0; g < start; ++g)
    if (X.generator_arity(g) != P.generator_arity(g) || X.generator_degree(g) != P.generator_degree(g))
      throw SullivanError("lift: the extension does not start with the generators of P");
  const int W = X.max_arity();
  if (W > Q.max_arity() || W > R.max_arity()) throw SullivanError("lift: arity window exceeds Q or R");
  // rho surjective and a quis
  for (int n = 0; n <= W; ++n) {
    if (R.dim(n) == 0 || (n == 0 && !R.unitary())) continue;
    for (int d : R.degrees(n)) {
      std::vector<SparseVec> cols;
      for (std::size_t b : Q.basis_in_degree(n, d)) cols.push_back(rho.apply(n, b));
      if (sparse_rank(cols) != R.basis_in_degree(n, d).size())
        throw SullivanError("lift: rho is not surjective in arity " + std::to_string(n) + " degree " + std::to_string(d));
    }
  }
  auto q = verify_quis(rho, W);
  if (!q.ok()) throw SullivanError("lift: rho is not a quasi-isomorphism\n" + q.to_string());
  for (std::size_t g = 0; g < start; ++g) {
    const int r = P.generator_arity(g);
    if (r > W) continue;
    if (rho.apply(r, sq.phi->images()[g]) != sq.psi->apply(r, X.corolla_index(g)))
      throw SullivanError("lift: the square does not commute on generator " + P.generator_label(g));
  }
  const bool unital = flavor == FreeFlavor::Unitary;
  std::optional<OperadHost> host;
  if (unital) {
    if (!Q.has_restrictions() || !Q.multiplication() || !X.has_restrictions())
      throw SullivanError("lift: the unitary flavour needs restrictions and a unitary multiplication on Q");
    host.emplace(sq.q, *Q.multiplication());
  }

  std::vector<SparseVec> images = sq.phi->images();
  images.resize(X.generator_count());
  for (std::size_t b = 0; b < X.batches().size(); ++b) {
    const int first = X.first_generator(static_cast<int>(b));
    if (static_cast<std::size_t>(first) < start) continue;
    const auto& B = X.batches()[b];
    const int n = B.arity;
    if (n > W) continue;
    auto cur = std::make_shared<FreeMorphism>(sq.extension, sq.q, images);
    Cone cone(rho, n);
    std::map<int, std::vector<std::size_t>> by_deg;
    for (std::size_t j = 0; j < B.size(); ++j) by_deg[B.degrees[j]].push_back(j);
    for (const auto& [deg, members] : by_deg) {
      SpanSolver cone_solver(columns_in_degree(cone.complex(), deg - 1));
      std::vector<std::size_t> qb = Q.basis_in_degree(n, deg - 1);
      std::vector<SparseVec> rcols;
      for (std::size_t i : qb) rcols.push_back(rho.apply(n, i));
      SpanSolver rho_solver(rcols);
      std::vector<SparseVec> f;
      for (std::size_t j : members) {
        SparseVec qv = cur->apply(n, X.to_vector(n, B.d[j]));
        SparseVec rv = sq.psi->apply(n, X.corolla_index(first + static_cast<int>(j)));
        auto sol = cone_solver.solve(cone.join(qv, rv));
        if (!sol) throw SullivanError("lift: relative cocycle is not a coboundary (rho not a quis?)");
        // solution coordinates are on the degree deg-1 cone basis
        std::vector<std::size_t> cb;
        for (std::size_t i = 0; i < cone.size(); ++i)
          if (cone.complex().degrees[i] == deg - 1) cb.push_back(i);
        std::vector<SparseVec::Entry> ent;
        for (const auto& [i, c] : sol->entries()) ent.emplace_back(cb[i], c);
        SparseVec ab = SparseVec::from_entries(std::move(ent));
        SparseVec a = cone.source_part(ab), bb = cone.target_part(ab);
        auto csol = rho_solver.solve(bb);
        if (!csol) throw SullivanError("lift: rho is not surjective");
        SparseVec c;
        for (const auto& [i, x] : csol->entries()) c.axpy(x, SparseVec::unit(qb[i]));
        f.push_back(Q.differential(n, c) - a);
      }
      GroupAction EA = batch_action(B, members);
      f = equivariant_average(n, EA, f, [&](const Perm& s, const SparseVec& v) { return Q.act(n, s, v); });
      if (unital) {
        std::vector<std::vector<SparseVec>> fam(members.size());
        for (std::size_t e = 0; e < members.size(); ++e)
          for (int i = 0; i < n; ++i)
            fam[e].push_back(Q.restrict(n, f[e], i) - cur->apply(n - 1, X.to_vector(n - 1, B.delta[members[e]][i])));
        auto om = fill_equivariant(*host, n, EA, fam);
        for (std::size_t e = 0; e < members.size(); ++e) {
          if (!Q.differential(n, om[e]).empty() || !rho.apply(n, om[e]).empty())
            throw SullivanError("lift: restriction correction leaves Z(Q) or ker rho");
          f[e] = f[e] - om[e];
        }
      }
      for (std::size_t e = 0; e < members.size(); ++e) images[first + members[e]] = f[e];
    }
  }
  auto out = std::make_shared<FreeMorphism>(sq.extension, sq.q, images);
  auto vr = validate_free_morphism(*out);
  if (!vr.ok()) throw SullivanError("lift: result fails the morphism checks: " + vr.summary());
  for (std::size_t g = start; g < X.generator_count(); ++g) {
    const int r = X.generator_arity(g);
    if (r > W) continue;
    if (rho.apply(r, images[g]) != sq.psi->apply(r, X.corolla_index(g)))
      throw SullivanError("lift: rho psi' differs from psi on " + X.generator_label(g));
  }
  return out;
}

std::shared_ptr<FreeMorphism> construct_section(std::shared_ptr<const OperadMorphism> rho, OperadPtr q,
                                                std::shared_ptr<const FreeOperad> model, FreeFlavor flavor,
                                                PivotStrategy strategy) {
  const int W = model->max_arity();
  if (q->max_arity() < W) throw SullivanError("section: Q is known on a smaller arity window");
  auto qr = verify_quis(*rho, W);
  if (!qr.ok()) throw SullivanError("section: rho is not a quasi-isomorphism\n" + qr.to_string());
  const bool unital = flavor == FreeFlavor::Unitary;
  std::optional<OperadHost> host;
  if (unital) {
    if (!q->has_restrictions() || !q->multiplication() || !model->has_restrictions())
      throw SullivanError("section: the unitary flavour needs restrictions and a unitary multiplication on Q");
    host.emplace(q, *q->multiplication());
  }
  std::vector<SparseVec> images(model->generator_count());
  for (int n = 2; n <= W; ++n) {
    auto groups = generators_by_degree(*model, n);
    if (groups.empty()) continue;
    auto prev = std::make_shared<FreeMorphism>(model, q, images);
    std::set<std::size_t> corollas;
    for (const auto& [d, gs] : groups)
      for (int g : gs) corollas.insert(model->corolla_index(g));
    for (const auto& [deg, gens] : groups) {
      const std::size_t h = gens.size();
      std::vector<SparseVec> cols;
      std::vector<std::size_t> qbasis = q->basis_in_degree(n, deg);
      for (std::size_t b : qbasis) cols.push_back(q->differential(n, b));
      for (std::size_t b : model->basis_in_degree(n, deg + 1))
        if (!corollas.count(b)) cols.push_back(-prev->apply(n, b));
      std::vector<SparseVec> V;
      for (const auto& k : sparse_kernel(cols)) {
        SparseVec v;
        for (const auto& [i, c] : k.entries())
          if (i < qbasis.size()) v.axpy(c, SparseVec::unit(qbasis[i]));
        if (!v.empty()) V.push_back(std::move(v));
      }
      QMatrix C(h, V.size());
      for (std::size_t v = 0; v < V.size(); ++v) {
        SparseVec img = rho->apply(n, V[v]);
        for (std::size_t e = 0; e < h; ++e) C(e, v) = img.get(model->corolla_index(gens[e]));
      }
      if (rank(C) != h) throw SullivanError("section: no lift of E(" + std::to_string(n) + ") (rho not a quis?)");
      QMatrix S = linear_section(C, strategy);
      std::vector<SparseVec> f;
      for (std::size_t e = 0; e < h; ++e) {
        SparseVec qe;
        for (std::size_t v = 0; v < V.size(); ++v)
          if (!is_zero(S(v, e))) qe.axpy(S(v, e), V[v]);
        SparseVec rest = rho->apply(n, qe) - SparseVec::unit(model->corolla_index(gens[e]));
        for (std::size_t c : corollas)
          if (!is_zero(rest.get(c))) throw SullivanError("section: lift has stray generator coordinates");
        f.push_back(qe - prev->apply(n, rest));
      }
      GroupAction EA = generators_action(*model, n, gens);
      f = equivariant_average(n, EA, f, [&](const Perm& s, const SparseVec& v) { return q->act(n, s, v); });
      if (unital) {
        std::vector<std::vector<SparseVec>> fam(h);
        for (std::size_t e = 0; e < h; ++e) {
          const auto& B = model->batches()[model->generator_batch(gens[e])];
          for (int i = 0; i < n; ++i) {
            SparseVec sd = prev->apply(n - 1, model->to_vector(n - 1, B.delta[model->generator_local(gens[e])][i]));
            fam[e].push_back(q->restrict(n, f[e], i) - sd);
          }
        }
        auto om = fill_equivariant(*host, n, EA, fam);
        for (std::size_t e = 0; e < h; ++e) {
          if (!q->differential(n, om[e]).empty() || !rho->apply(n, om[e]).empty())
            throw SullivanError("section: restriction correction leaves Z(Q) or ker rho");
          f[e] = f[e] - om[e];
        }
      }
      for (std::size_t e = 0; e < h; ++e) images[gens[e]] = f[e];
    }
  }
  auto sigma = std::make_shared<FreeMorphism>(model, q, images);
  auto vr = validate_free_morphism(*sigma);
  if (!vr.ok()) throw SullivanError("section: result fails the morphism checks: " + vr.summary());
  for (int n = 1; n <= W; ++n)
    for (std::size_t b = 0; b < model->dim(n); ++b)
      if (rho->apply(n, sigma->apply(n, b)) != SparseVec::unit(b))
        throw SullivanError("section: rho sigma differs from id in arity " + std::to_string(n));
  return sigma;
}

std::string CompareReport::to_string() const {
  std::ostringstream s;
  s << "model A:\n" << a.to_string() << "model B:\n" << b.to_string();
  for (const auto& m : messages) s << m << "\n";
  s << (ok ? "identical" : "different") << "\n";
  return s.str();
}

CompareReport compare_tables(const DimensionTable& a, const DimensionTable& b) {
  CompareReport r;
  r.a = a;
  r.b = b;
  std::set<std::pair<int, int>> keys;
  for (const auto* t : {&a, &b})
    for (const auto& [n, by] : t->dims)
      for (const auto& [d, k] : by) keys.insert({n, d});
  for (const auto& [n, d] : keys)
    if (a.at(n, d) != b.at(n, d)) {
      r.ok = false;
      r.messages.push_back("dim E(" + std::to_string(n) + ")^" + std::to_string(d) + ": " + std::to_string(a.at(n, d)) +
                           " != " + std::to_string(b.at(n, d)));
    }
  return r;
}

CompareReport compare_models(const MinimalModelResult& a, const MinimalModelResult& b) {
  CompareReport r = compare_tables(a.table(), b.table());
  if (a.max_arity != b.max_arity) {
    r.ok = false;
    r.messages.insert(r.messages.begin(), "arity windows differ: " + std::to_string(a.max_arity) + " vs " +
                                              std::to_string(b.max_arity));
  }
  return r;
}

ValidationReport compare_structure(const Operad& a, const Operad& b, int N) {
  ValidationReport rep;
  std::map<std::string, int> shown;
  auto fail = [&](const std::string& what, int n, const std::string& detail) {
    if (shown[what]++ < 5) rep.add({what, n, 0, detail});
  };
  N = std::min({N, a.max_arity(), b.max_arity()});
  for (int n = 0; n <= N; ++n) {
    ++rep.checks;
    if (a.dim(n) != b.dim(n)) {
      fail("dimensions agree", n, std::to_string(a.dim(n)) + " vs " + std::to_string(b.dim(n)));
      return rep;
    }
  }
  for (int n = 0; n <= N; ++n) {
    const bool lam = a.has_restrictions() && b.has_restrictions() && n >= 1;
    for (std::size_t x = 0; x < a.dim(n); ++x) {
      const std::string at = "basis " + std::to_string(x);
      ++rep.checks;
      if (a.degree(n, x) != b.degree(n, x)) fail("degrees agree", n, at);
      ++rep.checks;
      if (a.differential(n, x) != b.differential(n, x)) fail("differentials agree", n, at);
      for (int s = 0; s + 1 < n; ++s) {
        ++rep.checks;
        Perm t = transposition(n, s, s + 1);
        if (a.act(n, t, x) != b.act(n, t, x)) fail("actions agree", n, at + " s" + std::to_string(s + 1));
      }
      if (lam)
        for (int i = 0; i < n; ++i) {
          ++rep.checks;
          if (a.restrict(n, x, i) != b.restrict(n, x, i)) fail("restrictions agree", n, at + " delta" + std::to_string(i + 1));
        }
    }
  }
  for (int m = 1; m <= N; ++m)
    for (int k = 1; m + k - 1 <= N; ++k)
      for (int i = 0; i < m; ++i)
        for (std::size_t x = 0; x < a.dim(m); ++x)
          for (std::size_t y = 0; y < a.dim(k); ++y) {
            ++rep.checks;
            if (a.compose(m, x, i, k, y) != b.compose(m, x, i, k, y))
              fail("compositions agree", m + k - 1,
                   std::to_string(x) + " o_" + std::to_string(i + 1) + " " + std::to_string(y) + " (arities " +
                       std::to_string(m) + ", " + std::to_string(k) + ")");
          }
  ++rep.checks;
  if (a.unit() != b.unit()) fail("units agree", 1, "");
  ++rep.checks;
  if (a.multiplication() != b.multiplication()) fail("multiplications agree", 2, "");
  return rep;
}

ValidationReport check_strict_units(const MinimalModelResult& m) {
  ValidationReport rep;
  const FreeOperad& P = *m.model;
  if (!P.has_restrictions()) {
    rep.add({"model carries restrictions", -1, 0, P.name()});
    return rep;
  }
  const Operad& T = *m.target;
  std::optional<DegreeCohomology> h1;
  Rational u = 1;
  auto g1 = cohomology_of(module_complex(T, 1));
  if (g1.by_degree.count(0)) {
    h1 = g1.by_degree.at(0);
    u = h1->project(T.unit()).at(0);
  }
  for (std::size_t g = 0; g < P.generator_count(); ++g) {
    const int n = P.generator_arity(g);
    if (n > P.max_arity()) continue;
    SparseVec c = SparseVec::unit(P.corolla_index(g));
    for (int i = 0; i < n; ++i) {
      SparseVec lhs = P.restrict(n, c, i);
      SparseVec rhs;
      if (n == 2 && P.generator_degree(g) == 0 && h1) {
        Rational k = h1->project(T.restrict(2, m.rho->images()[g], i)).at(0) / u;
        rhs = P.unit() * k;
      }
      ++rep.checks;
      if (lhs != rhs)
        rep.add({n == 2 ? "arity 2 restrictions are induced from HP(2) -> HP(1)" : "restrictions vanish above arity 2",
                 n, P.generator_degree(g), P.generator_label(g) + " delta" + std::to_string(i + 1)});
    }
  }
  if (auto mm = P.multiplication())
    for (int i = 0; i < 2; ++i) {
      ++rep.checks;
      if (P.restrict(2, *mm, i) != P.unit()) rep.add({"mu2 o_i 1 = id", 2, 0, "i=" + std::to_string(i + 1)});
    }
  return rep;
}

ValidationReport check_decomposable(const FreeOperad& p) {
  ValidationReport rep;
  for (std::size_t g = 0; g < p.generator_count(); ++g) {
    const int n = p.generator_arity(g);
    if (n > p.max_arity()) continue;
    SparseVec d = p.differential(n, p.corolla_index(g));
    ++rep.checks;
    for (const auto& [i, c] : d.entries())
      if (p.tree(n, i).vertex_count() < 2) {
        rep.add({"generator differential is decomposable", n, p.generator_degree(g), p.generator_label(g)});
        break;
      }
  }
  return rep;
}

CompareReport unitary_compatibility_check(const MinimalModelResult& m, const MinimalModelResult& mp) {
  CompareReport r;
  r.a = m.table();
  r.b = mp.table();
  auto fail = [&](const std::string& s) {
    r.ok = false;
    r.messages.push_back(s);
  };
  if (m.flavor != FreeFlavor::NonUnitary || mp.flavor != FreeFlavor::Unitary) {
    fail("precondition: expected a non-unitary model and a unitary model");
    return r;
  }
  const int N = std::min(m.max_arity, mp.max_arity);
  auto trunc = truncate(mp.target);
  auto pre = compare_structure(*m.target, *trunc, N);
  if (!pre.ok()) {
    fail("precondition: " + m.target->name() + " is not the truncation of " + mp.target->name() + " (" +
         pre.violations.front().to_string() + ")");
    return r;
  }
  auto t = compare_tables(r.a, r.b);
  if (!t.ok) {
    r.ok = false;
    for (auto& s : t.messages) r.messages.push_back(s);
  }
  if (!m.lambda) {
    fail("the non-unitary model carries no restriction data");
    return r;
  }
  auto su = check_strict_units(mp);
  if (!su.ok()) fail("restriction data of the unitary model: " + su.summary());
  auto ext = unitary_extension(m.model);
  auto st = compare_structure(*ext, *mp.model, N);
  if (!st.ok()) fail("unitary extension of the non-unitary model differs: " + st.violations.front().to_string());
  if (m.rho->images() != mp.rho->images()) fail("generator images differ");
  if (r.ok) r.messages.push_back("(P_inf)+ and (P+)_inf coincide through arity " + std::to_string(N));
  return r;
}

}  // namespace opmin
