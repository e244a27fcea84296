#include "opmin/trees.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>

namespace opmin {

bool Tree::operator==(const Tree& o) const {
  if (leaves != o.leaves || vertices.size() != o.vertices.size()) return false;
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (vertices[v].decoration != o.vertices[v].decoration || vertices[v].children != o.vertices[v].children)
      return false;
  return true;
}

bool Tree::operator<(const Tree& o) const { return serialize(*this) < serialize(o); }

namespace {

int min_leaf(const Tree& t, int code, std::vector<int>& memo) {
  if (is_leaf(code)) return leaf_label(code);
  if (memo[code] >= 0) return memo[code];
  int m = t.leaves;
  for (int c : t.vertices[code].children) m = std::min(m, min_leaf(t, c, memo));
  return memo[code] = m;
}

}  // namespace

CanonicalForm canonical_form(const Tree& t, int root) {
  CanonicalForm out;
  out.tree.leaves = t.leaves;
  if (t.vertices.empty()) return out;
  std::vector<int> memo(t.vertices.size(), -1);
  std::function<int(int)> rec = [&](int v) -> int {
    const int idx = static_cast<int>(out.tree.vertices.size());
    out.tree.vertices.push_back({t.vertices[v].decoration, {}});
    out.records.push_back({v, {}});
    const auto& ch = t.vertices[v].children;
    std::vector<int> order(ch.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> keys(ch.size());
    for (std::size_t k = 0; k < ch.size(); ++k) keys[k] = min_leaf(t, ch[k], memo);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    std::vector<int> codes;
    for (int k : order) {
      int c = ch[k];
      codes.push_back(is_leaf(c) ? c : rec(c));
    }
    out.tree.vertices[idx].children = std::move(codes);
    out.records[idx].order = std::move(order);
    return idx;
  };
  rec(root);
  return out;
}

bool is_canonical(const Tree& t) { return canonical_form(t).tree == t; }

void validate_tree(const Tree& t) {
  if (t.vertices.empty()) {
    if (t.leaves != 1) throw TreeError("unit tree must have exactly one leaf");
    return;
  }
  std::vector<int> seen_leaf(t.leaves, 0), seen_vertex(t.vertices.size(), 0);
  std::function<void(int)> rec = [&](int v) {
    if (seen_vertex[v]++) throw TreeError("vertex reached twice");
    if (t.vertices[v].children.size() < 2)
      throw TreeError("vertex " + std::to_string(v) + " has fewer than two inputs");
    for (int c : t.vertices[v].children) {
      if (is_leaf(c)) {
        int l = leaf_label(c);
        if (l >= t.leaves) throw TreeError("leaf label " + std::to_string(l + 1) + " out of range");
        if (seen_leaf[l]++) throw TreeError("leaf label " + std::to_string(l + 1) + " repeated");
      } else {
        if (c >= static_cast<int>(t.vertices.size())) throw TreeError("child vertex index out of range");
        rec(c);
      }
    }
  };
  rec(0);
  for (int l = 0; l < t.leaves; ++l)
    if (!seen_leaf[l]) throw TreeError("leaf label " + std::to_string(l + 1) + " missing");
  for (std::size_t v = 0; v < t.vertices.size(); ++v)
    if (!seen_vertex[v]) throw TreeError("vertex " + std::to_string(v) + " unreachable");
}

GraftResult graft(const Tree& outer, int slot, const Tree& inner) {
  if (slot < 0 || slot >= outer.leaves) throw TreeError("graft: slot out of range");
  const int k = inner.leaves;
  Tree p;
  p.leaves = outer.leaves + k - 1;
  auto outer_leaf = [&](int l) { return l < slot ? l : l + k - 1; };
  if (outer.vertices.empty()) {
    p = inner;
    return GraftResult{canonical_form(p), p, 0};
  }
  const int off = static_cast<int>(outer.vertices.size());
  for (const auto& v : outer.vertices) {
    TreeVertex nv{v.decoration, {}};
    for (int c : v.children) {
      if (!is_leaf(c)) {
        nv.children.push_back(c);
      } else if (leaf_label(c) != slot) {
        nv.children.push_back(leaf_code(outer_leaf(leaf_label(c))));
      } else if (inner.vertices.empty()) {
        nv.children.push_back(leaf_code(slot));
      } else {
        nv.children.push_back(off);
      }
    }
    p.vertices.push_back(std::move(nv));
  }
  for (const auto& v : inner.vertices) {
    TreeVertex nv{v.decoration, {}};
    for (int c : v.children) nv.children.push_back(is_leaf(c) ? leaf_code(slot + leaf_label(c)) : c + off);
    p.vertices.push_back(std::move(nv));
  }
  return GraftResult{canonical_form(p), p, off};
}

namespace {

void write(const Tree& t, int code, std::string& s) {
  if (is_leaf(code)) {
    s += std::to_string(leaf_label(code) + 1);
    return;
  }
  const auto& v = t.vertices[code];
  if (v.decoration >= 0) s += "#" + std::to_string(v.decoration);
  s += "(";
  for (std::size_t k = 0; k < v.children.size(); ++k) {
    if (k) s += ",";
    write(t, v.children[k], s);
  }
  s += ")";
}

}  // namespace

std::string serialize(const Tree& t) {
  if (t.vertices.empty()) return "1";
  std::string s;
  write(t, 0, s);
  return s;
}

Tree parse_tree(const std::string& text) {
  std::size_t pos = 0;
  Tree t;
  int max_leaf = -1;
  auto fail = [&](const std::string& why) {
    throw TreeError("cannot parse tree '" + text + "' at offset " + std::to_string(pos) + ": " + why);
  };
  auto number = [&]() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected a number");
    return std::stoi(text.substr(start, pos - start));
  };
  std::function<int()> node = [&]() -> int {
    int dec = -1;
    if (pos < text.size() && text[pos] == '#') {
      ++pos;
      dec = number();
    }
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      int idx = static_cast<int>(t.vertices.size());
      t.vertices.push_back({dec, {}});
      std::vector<int> ch;
      while (true) {
        ch.push_back(node());
        if (pos >= text.size()) fail("unterminated vertex");
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        fail("unexpected character");
      }
      t.vertices[idx].children = std::move(ch);
      return idx;
    }
    if (dec >= 0) fail("decoration without vertex");
    int l = number();
    if (l < 1) fail("leaf labels start at 1");
    max_leaf = std::max(max_leaf, l - 1);
    return leaf_code(l - 1);
  };
  int root = node();
  if (pos != text.size()) fail("trailing characters");
  if (is_leaf(root)) {
    if (leaf_label(root) != 0) fail("unit tree must be '1'");
    t.leaves = 1;
    return t;
  }
  t.leaves = max_leaf + 1;
  validate_tree(t);
  return t;
}

std::vector<int> vertex_arities(const Tree& t) {
  std::vector<int> a;
  for (const auto& v : t.vertices) a.push_back(static_cast<int>(v.children.size()));
  return a;
}

std::vector<int> planar_leaves(const Tree& t) {
  std::vector<int> out;
  if (t.vertices.empty()) return {0};
  std::function<void(int)> rec = [&](int code) {
    if (is_leaf(code)) {
      out.push_back(leaf_label(code));
      return;
    }
    for (int c : t.vertices[code].children) rec(c);
  };
  rec(0);
  return out;
}

namespace {

// trees on the given sorted leaf set, as standalone planar trees with root at vertex 0
void shapes_on(const std::vector<int>& leaves, const std::set<int>& arities, std::vector<Tree>& out);

// set partitions of items into exactly k blocks, blocks ordered by smallest element
void partitions(const std::vector<int>& items, std::size_t k, std::vector<std::vector<int>>& cur,
                std::vector<std::vector<std::vector<int>>>& out, std::size_t pos) {
  if (pos == items.size()) {
    if (cur.size() == k) out.push_back(cur);
    return;
  }
  if (cur.size() + (items.size() - pos) < k) return;
  for (std::size_t b = 0; b < cur.size(); ++b) {
    cur[b].push_back(items[pos]);
    partitions(items, k, cur, out, pos + 1);
    cur[b].pop_back();
  }
  if (cur.size() < k) {
    cur.push_back({items[pos]});
    partitions(items, k, cur, out, pos + 1);
    cur.pop_back();
  }
}

Tree attach(const std::vector<Tree>& subtrees, int leaves) {
  Tree t;
  t.leaves = leaves;
  t.vertices.push_back({-1, {}});
  for (const auto& s : subtrees) {
    if (s.vertices.empty()) {
      t.vertices[0].children.push_back(leaf_code(s.leaves));  // leaf label stashed in leaves
      continue;
    }
    const int off = static_cast<int>(t.vertices.size());
    t.vertices[0].children.push_back(off);
    for (const auto& v : s.vertices) {
      TreeVertex nv{v.decoration, {}};
      for (int c : v.children) nv.children.push_back(is_leaf(c) ? c : c + off);
      t.vertices.push_back(std::move(nv));
    }
  }
  return t;
}

void shapes_on(const std::vector<int>& leaves, const std::set<int>& arities, std::vector<Tree>& out) {
  if (leaves.size() == 1) {
    Tree leaf;
    leaf.leaves = leaves[0];  // marker consumed by attach
    out.push_back(leaf);
    return;
  }
  for (int k : arities) {
    if (k < 2 || k > static_cast<int>(leaves.size())) continue;
    std::vector<std::vector<std::vector<int>>> parts;
    std::vector<std::vector<int>> cur;
    partitions(leaves, k, cur, parts, 0);
    for (const auto& part : parts) {
      std::vector<std::vector<Tree>> options;
      bool ok = true;
      for (const auto& block : part) {
        std::vector<Tree> sub;
        shapes_on(block, arities, sub);
        if (sub.empty()) ok = false;
        options.push_back(std::move(sub));
      }
      if (!ok) continue;
      std::vector<std::size_t> idx(options.size(), 0);
      while (true) {
        std::vector<Tree> pick;
        for (std::size_t b = 0; b < options.size(); ++b) pick.push_back(options[b][idx[b]]);
        out.push_back(attach(pick, 0));
        std::size_t b = 0;
        while (b < idx.size() && ++idx[b] == options[b].size()) idx[b++] = 0;
        if (b == idx.size()) break;
      }
    }
  }
}

}  // namespace

std::vector<Tree> enumerate_shapes(int l, const std::set<int>& arities) {
  if (l < 2) throw TreeError("enumerate_shapes: need at least two leaves, got " + std::to_string(l));
  std::vector<int> leaves(l);
  std::iota(leaves.begin(), leaves.end(), 0);
  std::vector<Tree> raw;
  shapes_on(leaves, arities, raw);
  std::vector<std::pair<std::pair<int, std::string>, Tree>> keyed;
  for (auto& t : raw) {
    t.leaves = l;
    Tree c = canonical_form(t).tree;
    keyed.push_back({{c.vertex_count(), serialize(c)}, std::move(c)});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Tree> out;
  for (auto& k : keyed) out.push_back(std::move(k.second));
  return out;
}

}  // namespace opmin
