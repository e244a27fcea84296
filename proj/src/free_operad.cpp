#include "opmin/free_operad.hpp"

#include <algorithm>
#include <functional>

namespace opmin {

FreeOperad::FreeOperad(std::string name, std::vector<GeneratorBatch> batches, int max_arity, FreeFlavor flavor,
                       std::optional<bool> lambda)
    : name_(std::move(name)), batches_(std::move(batches)), max_arity_(max_arity), flavor_(flavor) {
  if (max_arity_ < 1) throw OperadError(name_ + ": the arity window must contain arity 1");
  bool all_delta = true;
  for (std::size_t b = 0; b < batches_.size(); ++b) {
    auto& B = batches_[b];
    if (B.arity < 2)
      throw OperadError(name_ + ": generators of arity " + std::to_string(B.arity) +
                        " are not allowed (reduced trees need arity >= 2)");
    const std::size_t k = B.degrees.size();
    if (B.labels.empty())
      for (std::size_t j = 0; j < k; ++j) B.labels.push_back("g" + std::to_string(b) + "_" + std::to_string(j));
    if (B.labels.size() != k) throw OperadError(name_ + ": label count mismatch in batch " + std::to_string(b));
    if (B.adjacent.size() != static_cast<std::size_t>(B.arity - 1))
      throw OperadError(name_ + ": batch " + std::to_string(b) + " needs " + std::to_string(B.arity - 1) +
                        " transposition matrices");
    for (const auto& s : B.adjacent)
      if (s.rows != k || s.cols.size() != k) throw OperadError(name_ + ": action matrix shape in batch " + std::to_string(b));
    if (B.d.empty()) B.d.assign(k, TreeSum{});
    if (B.d.size() != k) throw OperadError(name_ + ": differential count mismatch in batch " + std::to_string(b));
    if (B.delta.empty()) {
      all_delta = all_delta && k == 0;
    } else {
      if (B.delta.size() != k) throw OperadError(name_ + ": restriction count mismatch in batch " + std::to_string(b));
      for (const auto& dj : B.delta)
        if (dj.size() != static_cast<std::size_t>(B.arity))
          throw OperadError(name_ + ": each generator needs " + std::to_string(B.arity) + " restrictions");
    }
    batch_first_.push_back(static_cast<int>(gen_arity_.size()));
    for (std::size_t j = 0; j < k; ++j) {
      gen_arity_.push_back(B.arity);
      gen_degree_.push_back(B.degrees[j]);
      gen_batch_.push_back(static_cast<int>(b));
      gen_local_.push_back(static_cast<int>(j));
    }
  }
  lambda_ = lambda.value_or(all_delta);
  if (lambda_ && !all_delta) throw OperadError(name_ + ": restrictions requested but some generators lack them");
  if (flavor_ == FreeFlavor::Unitary && !lambda_)
    throw OperadError(name_ + ": the unitary flavour needs restrictions on every generator");
  bases_.resize(max_arity_ + 1);
}

std::shared_ptr<FreeOperad> FreeOperad::extend(GeneratorBatch batch, const std::string& name) const {
  auto b = batches_;
  b.push_back(std::move(batch));
  auto p = std::make_shared<FreeOperad>(name.empty() ? name_ : name, std::move(b), max_arity_, flavor_);
  p->m2_ = m2_;
  return p;
}

std::shared_ptr<FreeOperad> FreeOperad::with_max_arity(int max_arity) const {
  auto p = std::make_shared<FreeOperad>(name_, batches_, max_arity, flavor_, lambda_);
  p->m2_ = max_arity >= 2 ? m2_ : std::nullopt;
  return p;
}

std::shared_ptr<const Operad> FreeOperad::unitary_variant(bool unitary) const {
  if (unitary && !lambda_) throw OperadError(name_ + ": no restriction data to extend by a unit");
  auto p = std::make_shared<FreeOperad>(name_ + (unitary ? "+" : "-trunc"), batches_, max_arity_,
                                        unitary ? FreeFlavor::Unitary : FreeFlavor::NonUnitary, lambda_);
  p->m2_ = m2_;
  return p;
}

std::string FreeOperad::generator_label(int g) const {
  return batches_.at(gen_batch_.at(g)).labels.at(gen_local_.at(g));
}

const FreeOperad::ArityBasis& FreeOperad::basis(int n) const {
  if (n < 0 || n > max_arity_)
    throw OperadError(name_ + ": arity " + std::to_string(n) + " outside the window 0.." + std::to_string(max_arity_));
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (bases_[n]) return *bases_[n];
  auto B = std::make_unique<ArityBasis>();
  auto add = [&](Tree t, int deg) {
    B->index[serialize(t)] = B->trees.size();
    B->by_degree[deg].push_back(B->trees.size());
    B->trees.push_back(std::move(t));
    B->degrees.push_back(deg);
  };
  if (n == 0) {
    if (unitary()) {
      Tree cork;
      cork.leaves = 0;
      add(cork, 0);
    }
  } else if (n == 1) {
    add(Tree{}, 0);
  } else {
    std::set<int> arities;
    std::map<int, std::vector<int>> gens_of;
    for (std::size_t g = 0; g < gen_arity_.size(); ++g) {
      if (gen_arity_[g] > n) continue;
      arities.insert(gen_arity_[g]);
      gens_of[gen_arity_[g]].push_back(static_cast<int>(g));
    }
    if (!arities.empty()) {
      for (const Tree& shape : enumerate_shapes(n, arities)) {
        const int V = shape.vertex_count();
        std::vector<const std::vector<int>*> opts(V);
        for (int v = 0; v < V; ++v) opts[v] = &gens_of[shape.arity_of(v)];
        std::vector<std::size_t> idx(V, 0);
        while (true) {
          Tree t = shape;
          int deg = 0;
          for (int v = 0; v < V; ++v) {
            t.vertices[v].decoration = (*opts[v])[idx[v]];
            deg += gen_degree_[t.vertices[v].decoration];
          }
          add(std::move(t), deg);
          int v = V - 1;
          while (v >= 0 && ++idx[v] == opts[v]->size()) idx[v--] = 0;
          if (v < 0) break;
        }
      }
    }
  }
  B->d_cache.resize(B->trees.size());
  bases_[n] = std::move(B);
  return *bases_[n];
}

std::size_t FreeOperad::dim(int n) const {
  if (n < 0 || n > max_arity_) return 0;
  return basis(n).trees.size();
}

int FreeOperad::degree(int n, std::size_t b) const { return basis(n).degrees.at(b); }

const Tree& FreeOperad::tree(int n, std::size_t b) const { return basis(n).trees.at(b); }

std::vector<std::size_t> FreeOperad::basis_in_degree(int n, int d) const {
  const auto& B = basis(n);
  auto it = B.by_degree.find(d);
  return it == B.by_degree.end() ? std::vector<std::size_t>{} : it->second;
}

std::string FreeOperad::label(int n, std::size_t b) const {
  const Tree& t = tree(n, b);
  if (n == 0) return "1";
  if (t.is_unit()) return "id";
  std::function<std::string(int)> rec = [&](int code) -> std::string {
    if (is_leaf(code)) return std::to_string(leaf_label(code) + 1);
    const auto& v = t.vertices[code];
    std::string s = generator_label(v.decoration) + "(";
    for (std::size_t k = 0; k < v.children.size(); ++k) s += (k ? "," : "") + rec(v.children[k]);
    return s + ")";
  };
  return rec(0);
}

std::optional<std::size_t> FreeOperad::index_of(const Tree& canonical) const {
  if (canonical.leaves > max_arity_) return std::nullopt;
  const auto& B = basis(canonical.leaves);
  auto it = B.index.find(canonical.leaves == 0 ? "1" : serialize(canonical));
  if (canonical.leaves == 0) return B.trees.empty() ? std::nullopt : std::optional<std::size_t>(0);
  if (it == B.index.end()) return std::nullopt;
  return it->second;
}

Tree FreeOperad::corolla(int g) const {
  Tree t;
  t.leaves = gen_arity_.at(g);
  t.vertices.push_back({g, {}});
  for (int l = 0; l < t.leaves; ++l) t.vertices[0].children.push_back(leaf_code(l));
  return t;
}

std::size_t FreeOperad::corolla_index(int g) const {
  auto i = index_of(corolla(g));
  if (!i) throw OperadError(name_ + ": corolla of " + generator_label(g) + " outside the arity window");
  return *i;
}

std::vector<std::pair<int, Rational>> FreeOperad::act_generator(int g, const Perm& sigma) const {
  const auto& B = batches_.at(gen_batch_.at(g));
  const int first = batch_first_.at(gen_batch_.at(g));
  SparseVec v = SparseVec::unit(gen_local_.at(g));
  auto w = adjacent_word(sigma);
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = B.adjacent[*it].apply(v);
  std::vector<std::pair<int, Rational>> out;
  for (const auto& [j, c] : v.entries()) out.emplace_back(first + static_cast<int>(j), c);
  return out;
}

SparseVec FreeOperad::normalize(const Tree& planar, int root) const {
  if (planar.leaves > max_arity_)
    throw OperadError(name_ + ": result of arity " + std::to_string(planar.leaves) + " overflows the arity window " +
                      std::to_string(max_arity_));
  if (planar.vertices.empty()) {
    auto i = index_of(planar);
    return i ? SparseVec::unit(*i) : SparseVec{};
  }
  CanonicalForm cf = canonical_form(planar, root);
  const int V = cf.tree.vertex_count();
  // Koszul sign of moving the decorations from storage order into preorder
  int sgn = 1;
  for (int a = 0; a < V; ++a) {
    if (gen_degree_[cf.tree.vertices[a].decoration] % 2 == 0) continue;
    for (int b = a + 1; b < V; ++b)
      if (gen_degree_[cf.tree.vertices[b].decoration] % 2 != 0 && cf.records[a].original > cf.records[b].original)
        sgn = -sgn;
  }
  std::vector<std::vector<std::pair<int, Rational>>> opts(V);
  for (int v = 0; v < V; ++v) {
    const auto& order = cf.records[v].order;
    Perm tau = inverse(Perm(order.begin(), order.end()));
    const int g = cf.tree.vertices[v].decoration;
    if (is_identity(tau))
      opts[v] = {{g, Rational(1)}};
    else
      opts[v] = act_generator(g, tau);
    if (opts[v].empty()) return {};
  }
  std::vector<SparseVec::Entry> acc;
  std::vector<std::size_t> idx(V, 0);
  Tree t = cf.tree;
  const auto& B = basis(planar.leaves);
  while (true) {
    Rational c = sgn;
    for (int v = 0; v < V; ++v) {
      t.vertices[v].decoration = opts[v][idx[v]].first;
      c *= opts[v][idx[v]].second;
    }
    auto it = B.index.find(serialize(t));
    if (it == B.index.end()) throw OperadError(name_ + ": tree " + serialize(t) + " missing from the basis");
    acc.emplace_back(it->second, c);
    int v = V - 1;
    while (v >= 0 && ++idx[v] == opts[v].size()) idx[v--] = 0;
    if (v < 0) break;
  }
  return SparseVec::from_entries(std::move(acc));
}

SparseVec FreeOperad::to_vector(int n, const TreeSum& s) const {
  SparseVec out;
  for (const auto& [c, t] : s.terms) {
    if (t.leaves != n)
      throw OperadError(name_ + ": tree " + serialize(t) + " has arity " + std::to_string(t.leaves) + ", expected " +
                        std::to_string(n));
    out.axpy(c, normalize(t));
  }
  return out;
}

TreeSum FreeOperad::to_trees(int n, const SparseVec& v) const {
  TreeSum s;
  for (const auto& [i, c] : v.entries()) s.terms.emplace_back(c, tree(n, i));
  return s;
}

SparseVec FreeOperad::unit() const { return SparseVec::unit(0); }

SparseVec FreeOperad::compose(int m, std::size_t a, int slot, int k, std::size_t b) const {
  if (slot < 0 || slot >= m) throw OperadError(name_ + ": slot " + std::to_string(slot + 1) + " out of range");
  if (k == 0) {
    if (!unitary()) throw OperadError(name_ + ": no arity 0 in a non-unitary operad");
    return restrict(m, a, slot);
  }
  if (m + k - 1 > max_arity_)
    throw OperadError(name_ + ": composition of arities " + std::to_string(m) + " and " + std::to_string(k) +
                      " overflows the arity window " + std::to_string(max_arity_));
  const Tree& A = tree(m, a);
  const Tree& Bt = tree(k, b);
  if (A.is_unit()) return SparseVec::unit(b);
  if (Bt.is_unit()) return SparseVec::unit(a);
  return normalize(graft(A, slot, Bt).planar);
}

SparseVec FreeOperad::act(int n, const Perm& sigma, std::size_t b) const {
  if (static_cast<int>(sigma.size()) != n) throw OperadError(name_ + ": permutation of the wrong size");
  if (n <= 1 || is_identity(sigma)) return SparseVec::unit(b);
  Tree t = tree(n, b);
  for (auto& v : t.vertices)
    for (auto& c : v.children)
      if (is_leaf(c)) c = leaf_code(sigma[leaf_label(c)]);
  return normalize(t);
}

SparseVec FreeOperad::substitute(const Tree& t, int v, const TreeSum& s, const std::vector<int>& child_codes,
                                 int drop_leaf, const Rational& scale) const {
  SparseVec out;
  const int V = t.vertex_count();
  for (const auto& [c, S] : s.terms) {
    const int sv = S.vertex_count();
    if (S.leaves != static_cast<int>(child_codes.size()))
      throw OperadError(name_ + ": substituted tree has " + std::to_string(S.leaves) + " leaves, expected " +
                        std::to_string(child_codes.size()));
    auto map_leaf = [&](int code) {
      int l = leaf_label(code);
      return leaf_code(drop_leaf >= 0 && l > drop_leaf ? l - 1 : l);
    };
    std::function<int(int)> map_code = [&](int code) -> int {
      if (is_leaf(code)) return map_leaf(code);
      if (code < v) return code;
      if (code > v) return code - 1 + sv;
      // the substituted vertex itself
      if (sv > 0) return v;
      return map_code(child_codes[0]);
    };
    Tree p;
    p.leaves = t.leaves - (drop_leaf >= 0 ? 1 : 0);
    for (int u = 0; u < v; ++u) {
      TreeVertex nv{t.vertices[u].decoration, {}};
      for (int ch : t.vertices[u].children) nv.children.push_back(map_code(ch));
      p.vertices.push_back(std::move(nv));
    }
    for (const auto& sv_vertex : S.vertices) {
      TreeVertex nv{sv_vertex.decoration, {}};
      for (int ch : sv_vertex.children)
        nv.children.push_back(is_leaf(ch) ? map_code(child_codes[leaf_label(ch)]) : ch + v);
      p.vertices.push_back(std::move(nv));
    }
    for (int u = v + 1; u < V; ++u) {
      TreeVertex nv{t.vertices[u].decoration, {}};
      for (int ch : t.vertices[u].children) nv.children.push_back(map_code(ch));
      p.vertices.push_back(std::move(nv));
    }
    int root = map_code(0);
    if (is_leaf(root)) {
      // everything collapsed to the unit tree
      Tree u;
      out.axpy(c * scale, normalize(u));
      continue;
    }
    out.axpy(c * scale, normalize(p, root));
  }
  return out;
}

SparseVec FreeOperad::differential(int n, std::size_t b) const {
  const auto& B = basis(n);
  {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    if (B.d_cache.at(b)) return *B.d_cache[b];
  }
  SparseVec out;
  const Tree& t = B.trees[b];
  int before = 0;
  for (int v = 0; v < t.vertex_count(); ++v) {
    const int g = t.vertices[v].decoration;
    const auto& dg = batches_[gen_batch_[g]].d[gen_local_[g]];
    if (!dg.empty()) out.axpy(1, substitute(t, v, dg, t.vertices[v].children, -1, before % 2 ? -1 : 1));
    before += gen_degree_[g];
  }
  std::lock_guard<std::recursive_mutex> lock(mu_);
  const_cast<ArityBasis&>(B).d_cache[b] = out;
  return out;
}

SparseVec FreeOperad::restrict(int n, std::size_t b, int i) const {
  if (!lambda_) return SigmaModuleView::restrict(n, b, i);
  if (n < 1 || i < 0 || i >= n) throw OperadError(name_ + ": restriction index out of range");
  const Tree& t = tree(n, b);
  if (t.is_unit()) return SparseVec::unit(0);
  for (int v = 0; v < t.vertex_count(); ++v) {
    const auto& ch = t.vertices[v].children;
    for (std::size_t j = 0; j < ch.size(); ++j) {
      if (ch[j] != leaf_code(i)) continue;
      const int g = t.vertices[v].decoration;
      const auto& dl = batches_[gen_batch_[g]].delta[gen_local_[g]][j];
      std::vector<int> rest;
      for (std::size_t q = 0; q < ch.size(); ++q)
        if (q != j) rest.push_back(ch[q]);
      return substitute(t, v, dl, rest, i, 1);
    }
  }
  throw OperadError(name_ + ": leaf not found in tree");
}

ValidationReport validate_batch(const FreeOperad& p, int batch) {
  ValidationReport rep;
  const auto& B = p.batches().at(batch);
  const int r = B.arity;
  const int first = p.first_generator(batch);
  auto fail = [&](const std::string& what, int j, const std::string& detail) {
    rep.add({what, r, B.degrees[j], B.labels[j] + (detail.empty() ? "" : " (" + detail + ")")});
  };
  auto gen_vec = [&](int g) { return SparseVec::unit(p.corolla_index(g)); };
  auto comb = [&](const std::vector<std::pair<int, Rational>>& c) {
    SparseVec v;
    for (const auto& [g, x] : c) v.axpy(x, gen_vec(g));
    return v;
  };
  if (r > p.max_arity()) return rep;
  for (std::size_t j = 0; j < B.size(); ++j) {
    const int g = first + static_cast<int>(j);
    SparseVec e = gen_vec(g);
    SparseVec de = p.to_vector(r, B.d[j]);
    ++rep.checks;
    for (const auto& [i, c] : de.entries())
      if (p.degree(r, i) != B.degrees[j] + 1) {
        fail("generator differential raises degree by one", j, "");
        break;
      }
    ++rep.checks;
    if (!p.differential(r, de).empty()) fail("generator differential squares to zero", j, "");
    for (int a = 0; a + 1 < r; ++a) {
      Perm t = transposition(r, a, a + 1);
      auto te = p.act_generator(g, t);
      ++rep.checks;
      if (comb(p.act_generator(g, t)).empty() || p.act(r, t, comb(te)) != e)
        fail("generator action squares to one", j, "s" + std::to_string(a + 1));
      ++rep.checks;
      if (p.differential(r, comb(te)) != p.act(r, t, de)) fail("generator differential is equivariant", j, "s" + std::to_string(a + 1));
      if (a + 1 < r - 1) {
        Perm t2 = transposition(r, a + 1, a + 2);
        SparseVec x = e;
        for (int q = 0; q < 3; ++q) x = p.act(r, t, p.act(r, t2, x));
        ++rep.checks;
        if (x != e) fail("generator action braid relation", j, "s" + std::to_string(a + 1));
      }
    }
    if (!p.has_restrictions()) continue;
    for (int i = 0; i < r; ++i) {
      SparseVec di = p.to_vector(r - 1, B.delta[j][i]);
      ++rep.checks;
      for (const auto& [q, c] : di.entries())
        if (p.degree(r - 1, q) != B.degrees[j]) {
          fail("generator restriction preserves degree", j, "delta" + std::to_string(i + 1));
          break;
        }
      ++rep.checks;
      if (p.differential(r - 1, di) != p.restrict(r, de, i))
        fail("generator restriction commutes with d", j, "delta" + std::to_string(i + 1));
    }
  }
  return rep;
}

GeneratorBatch make_batch(int arity, const std::vector<int>& degrees, const std::vector<QMatrix>& adjacent,
                          const std::string& prefix) {
  GeneratorBatch b;
  b.arity = arity;
  b.degrees = degrees;
  for (std::size_t j = 0; j < degrees.size(); ++j)
    b.labels.push_back(prefix + (degrees.size() > 1 ? "_" + std::to_string(j + 1) : ""));
  for (const auto& m : adjacent) b.adjacent.push_back(SparseMap::from_dense(m));
  b.d.assign(degrees.size(), TreeSum{});
  return b;
}

GeneratorBatch batch_from_rep(int arity, int degree, const std::string& rep, const std::string& prefix) {
  GroupAction a;
  if (rep == "triv")
    a = GroupAction::trivial(arity, 1);
  else if (rep == "sgn")
    a = GroupAction::sign(arity);
  else if (rep == "reg")
    a = GroupAction::regular(arity);
  else
    throw OperadError("unknown representation '" + rep + "' (use triv, sgn or reg)");
  return make_batch(arity, std::vector<int>(a.dim(), degree), a.generators(), prefix);
}

std::vector<Tree> free_basis(const FreeOperad& p, int l) {
  std::vector<Tree> out;
  for (std::size_t b = 0; b < p.dim(l); ++b) out.push_back(p.tree(l, b));
  return out;
}

SparseMap leibniz_differential(const FreeOperad& p, int n) {
  SparseMap m{p.dim(n), {}};
  for (std::size_t b = 0; b < p.dim(n); ++b) m.cols.push_back(p.differential(n, b));
  return m;
}

std::shared_ptr<FreeOperad> principal_extend(const FreeOperad& p, GeneratorBatch e, const std::string& name) {
  auto q = p.extend(std::move(e), name);
  ValidationReport r = validate_batch(*q, static_cast<int>(q->batches().size()) - 1);
  if (!r.ok()) throw OperadError("principal extension rejected: " + r.summary());
  return q;
}

FreeMorphism::FreeMorphism(FreeOperadPtr source, OperadPtr target, std::vector<SparseVec> images)
    : src_(std::move(source)), tgt_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != src_->generator_count())
    throw OperadError("FreeMorphism: " + std::to_string(images_.size()) + " images for " +
                      std::to_string(src_->generator_count()) + " generators");
}

SparseVec FreeMorphism::evaluate(const Tree& t) const {
  if (t.leaves == 0) return SparseVec::unit(0);
  if (t.is_unit()) return tgt_->unit();
  std::function<std::pair<SparseVec, int>(int)> rec = [&](int v) -> std::pair<SparseVec, int> {
    const auto& vert = t.vertices[v];
    SparseVec x = images_.at(vert.decoration);
    int cur = src_->generator_arity(vert.decoration);
    int shift = 0;
    for (std::size_t j = 0; j < vert.children.size(); ++j) {
      int c = vert.children[j];
      if (is_leaf(c)) continue;
      auto [y, k] = rec(c);
      x = tgt_->compose(cur, x, static_cast<int>(j) + shift, k, y);
      cur += k - 1;
      shift += k - 1;
    }
    return {x, cur};
  };
  auto [x, n] = rec(0);
  std::vector<int> leaves = planar_leaves(t);
  return tgt_->act(n, Perm(leaves.begin(), leaves.end()), x);
}

SparseVec FreeMorphism::apply(int n, std::size_t b) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find({n, b});
    if (it != cache_.end()) return it->second;
  }
  SparseVec v = evaluate(src_->tree(n, b));
  std::lock_guard<std::mutex> lock(mu_);
  cache_[{n, b}] = v;
  return v;
}

std::shared_ptr<FreeMorphism> FreeMorphism::restricted_to(FreeOperadPtr smaller) const {
  if (smaller->generator_count() > images_.size()) throw OperadError("restricted_to: not a sub-free-operad");
  std::vector<SparseVec> im(images_.begin(), images_.begin() + smaller->generator_count());
  return std::make_shared<FreeMorphism>(std::move(smaller), tgt_, std::move(im));
}

std::shared_ptr<FreeMorphism> FreeMorphism::then(const OperadMorphism& g, OperadPtr new_target) const {
  std::vector<SparseVec> im;
  for (std::size_t k = 0; k < images_.size(); ++k) im.push_back(g.apply(src_->generator_arity(k), images_[k]));
  return std::make_shared<FreeMorphism>(src_, std::move(new_target), std::move(im));
}

ValidationReport validate_free_morphism(const FreeMorphism& f) {
  ValidationReport rep;
  const FreeOperad& s = *f.source_ptr();
  const Operad& t = f.target_operad();
  for (std::size_t g = 0; g < s.generator_count(); ++g) {
    const int r = s.generator_arity(g);
    if (r > s.max_arity() || r > t.max_arity()) continue;
    const int deg = s.generator_degree(g);
    const SparseVec& img = f.images()[g];
    const std::string lab = s.generator_label(g);
    ++rep.checks;
    for (const auto& [i, c] : img.entries())
      if (t.degree(r, i) != deg) {
        rep.add({"image of a generator has its degree", r, deg, lab});
        break;
      }
    const auto& B = s.batches()[s.generator_batch(g)];
    SparseVec de = s.to_vector(r, B.d[s.generator_local(g)]);
    ++rep.checks;
    if (t.differential(r, img) != f.apply(r, de)) rep.add({"d f(e) = f(d e)", r, deg, lab});
    for (int a = 0; a + 1 < r; ++a) {
      Perm tr = transposition(r, a, a + 1);
      SparseVec lhs;
      for (const auto& [h, c] : s.act_generator(static_cast<int>(g), tr)) lhs.axpy(c, f.images()[h]);
      ++rep.checks;
      if (lhs != t.act(r, tr, img)) rep.add({"generator images are equivariant", r, deg, lab + " s" + std::to_string(a + 1)});
    }
    if (s.has_restrictions() && t.has_restrictions())
      for (int i = 0; i < r; ++i) {
        SparseVec di = s.to_vector(r - 1, B.delta[s.generator_local(g)][i]);
        ++rep.checks;
        if (t.restrict(r, img, i) != f.apply(r - 1, di))
          rep.add({"generator images commute with restrictions", r, deg, lab + " delta" + std::to_string(i + 1)});
      }
  }
  return rep;
}

}  // namespace opmin
