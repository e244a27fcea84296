#include <map>

#include "opmin/operad.hpp"

namespace opmin {

namespace {

// Words in the letters 0..n-1 without repetition; a word w stands for x_{w1} ... x_{wn}.
struct Words {
  std::vector<std::vector<Perm>> by_arity;
  std::vector<std::map<Perm, std::size_t>> index;
  explicit Words(int n_max) {
    for (int n = 0; n <= n_max; ++n) {
      by_arity.push_back(all_perms(n));
      std::map<Perm, std::size_t> ix;
      for (std::size_t k = 0; k < by_arity.back().size(); ++k) ix[by_arity.back()[k]] = k;
      index.push_back(std::move(ix));
    }
  }
};

std::string word_label(const Perm& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int x : w) s += "x" + std::to_string(x + 1);
  return s;
}

Perm delete_letter(const Perm& w, int i) {
  Perm r;
  for (int x : w)
    if (x != i) r.push_back(x < i ? x : x - 1);
  return r;
}

OperadPtr make_ass(int N, bool unitary, bool lambda) {
  Words W(N);
  std::vector<ArityData> arities(N + 1);
  for (int n = 0; n <= N; ++n) {
    auto& d = arities[n];
    const auto& ws = W.by_arity[n];
    const bool present = n > 0 || lambda;
    const std::size_t k = present ? ws.size() : 0;
    d.degrees.assign(k, 0);
    for (std::size_t b = 0; b < k; ++b) d.labels.push_back(word_label(ws[b]));
    d.differential = SparseMap{k, std::vector<SparseVec>(k)};
    for (int a = 0; a + 1 < n; ++a) {
      SparseMap s{k, {}};
      Perm t = transposition(n, a, a + 1);
      for (const auto& w : ws) {
        Perm img(w.size());
        for (std::size_t x = 0; x < w.size(); ++x) img[x] = t[w[x]];
        s.cols.push_back(SparseVec::unit(W.index[n].at(img)));
      }
      d.adjacent.push_back(std::move(s));
    }
    if (lambda && n >= 1)
      for (int i = 0; i < n; ++i) {
        SparseMap r{W.by_arity[n - 1].size(), {}};
        for (const auto& w : ws) r.cols.push_back(SparseVec::unit(W.index[n - 1].at(delete_letter(w, i))));
        d.restrictions.push_back(std::move(r));
      }
  }
  std::map<std::pair<int, int>, std::vector<SparseVec>> comps;
  for (int m = 1; m <= N; ++m)
    for (int k = 1; m + k - 1 <= N; ++k) {
      std::vector<SparseVec> v;
      for (int i = 0; i < m; ++i)
        for (const auto& w : W.by_arity[m])
          for (const auto& u : W.by_arity[k]) {
            Perm r;
            for (int x : w) {
              if (x < i)
                r.push_back(x);
              else if (x == i)
                for (int y : u) r.push_back(i + y);
              else
                r.push_back(x + k - 1);
            }
            v.push_back(SparseVec::unit(W.index[m + k - 1].at(r)));
          }
      comps[{m, k}] = std::move(v);
    }
  std::optional<SparseVec> m2;
  if (N >= 2) m2 = SparseVec::unit(W.index[2].at(Perm{0, 1}));
  return std::make_shared<TableOperad>(unitary ? "Ass+" : "Ass", DgSigmaModule(std::move(arities), lambda),
                                       std::move(comps), SparseVec::unit(0), lambda ? m2 : std::nullopt, unitary);
}

// one basis element per arity in [lo, hi] (hi < 0: unbounded)
OperadPtr make_line(const std::string& name, int N, int lo, int hi, bool unitary, bool lambda) {
  std::vector<ArityData> arities(N + 1);
  auto present = [&](int n) { return n >= (lambda ? 0 : lo) && (hi < 0 || n <= hi); };
  for (int n = 0; n <= N; ++n) {
    auto& d = arities[n];
    const std::size_t k = present(n) ? 1 : 0;
    d.degrees.assign(k, 0);
    if (k) d.labels.push_back(n == 0 ? "1" : "mu" + std::to_string(n));
    d.differential = SparseMap{k, std::vector<SparseVec>(k)};
    for (int a = 0; a + 1 < n; ++a) d.adjacent.push_back(SparseMap::identity(k));
    if (lambda && n >= 1)
      for (int i = 0; i < n; ++i) {
        const std::size_t below = present(n - 1) ? 1 : 0;
        SparseMap r{below, {}};
        for (std::size_t b = 0; b < k; ++b) r.cols.push_back(below ? SparseVec::unit(0) : SparseVec{});
        d.restrictions.push_back(std::move(r));
      }
  }
  std::map<std::pair<int, int>, std::vector<SparseVec>> comps;
  for (int m = 1; m <= N; ++m)
    for (int k = 1; m + k - 1 <= N; ++k) {
      if (!present(m) || !present(k) || !present(m + k - 1)) continue;
      comps[{m, k}] = std::vector<SparseVec>(m, SparseVec::unit(0));
    }
  std::optional<SparseVec> m2;
  if (lambda && present(2)) m2 = SparseVec::unit(0);
  return std::make_shared<TableOperad>(name, DgSigmaModule(std::move(arities), lambda), std::move(comps),
                                       SparseVec::unit(0), m2, unitary);
}

}  // namespace

std::vector<std::string> builtin_names() { return {"Ass", "Ass+", "Com", "Com+", "I", "I+"}; }

OperadPtr builtin(const std::string& name, int max_arity) {
  if (max_arity < 1) throw OperadError("builtin: the arity window must contain arity 1");
  if (name == "Ass") return make_ass(max_arity, false, false);
  if (name == "Ass+") return make_ass(max_arity, true, true);
  if (name == "Com") return make_line("Com", max_arity, 1, -1, false, false);
  if (name == "Com+") return make_line("Com+", max_arity, 1, -1, true, true);
  if (name == "I" || name == "I0") return make_line("I", max_arity, 1, 1, false, false);
  if (name == "I+") return make_line("I+", max_arity, 1, 1, true, true);
  throw OperadError("unknown builtin operad '" + name + "'");
}

}  // namespace opmin
