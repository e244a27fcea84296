#include <random>
#include <set>

#include "doctest.h"
#include "opmin/trees.hpp"
#include "oracles.hpp"

using namespace opmin;

namespace {

Tree corolla(int k) {
  Tree t;
  t.leaves = k;
  TreeVertex v;
  for (int l = 0; l < k; ++l) v.children.push_back(leaf_code(l));
  t.vertices.push_back(v);
  return t;
}

long oracle_shapes(int l, const std::set<int>& arities) {
  std::map<int, oracle::DegreeCount> g;
  for (int k : arities) g[k] = {{0, 1}};
  auto d = oracle::free_dims(l, g);
  return d.count(0) ? d.at(0) : 0;
}

// random planar tree with leaves in random order
Tree random_planar(std::mt19937& rng, int l) {
  std::vector<int> labels(l);
  for (int i = 0; i < l; ++i) labels[i] = i;
  std::shuffle(labels.begin(), labels.end(), rng);
  Tree t;
  t.leaves = l;
  std::function<int(int, int)> build = [&](int lo, int hi) -> int {  // returns code
    if (hi - lo == 1) return leaf_code(labels[lo]);
    std::uniform_int_distribution<int> k(2, std::min(4, hi - lo));
    int parts = k(rng);
    std::vector<int> cuts{lo, hi};
    while (static_cast<int>(cuts.size()) < parts + 1) {
      std::uniform_int_distribution<int> c(lo + 1, hi - 1);
      int x = c(rng);
      if (std::find(cuts.begin(), cuts.end(), x) == cuts.end()) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    int me = static_cast<int>(t.vertices.size());
    t.vertices.push_back({});
    std::vector<int> kids;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) kids.push_back(build(cuts[i], cuts[i + 1]));
    t.vertices[me].children = kids;
    return me;
  };
  if (l >= 2) build(0, l);
  return t;
}

}  // namespace

TEST_CASE("enumerate_shapes small cases") {
  auto s2 = enumerate_shapes(2, {2});
  REQUIRE(s2.size() == 1);
  CHECK(serialize(s2[0]) == "(1,2)");
  auto s3 = enumerate_shapes(3, {2});
  CHECK(s3.size() == 3);
  std::set<std::string> names;
  for (const auto& t : s3) names.insert(serialize(t));
  CHECK(names == std::set<std::string>{"((1,2),3)", "((1,3),2)", "(1,(2,3))"});
  CHECK(enumerate_shapes(3, {2, 3}).size() == 4);
  CHECK_THROWS_AS(enumerate_shapes(1, {2}), TreeError);
  CHECK_THROWS_AS(enumerate_shapes(0, {2}), TreeError);
}

TEST_CASE("shape counts match the set-partition oracle") {
  for (const std::set<int>& ar : std::vector<std::set<int>>{{2}, {3}, {2, 3}, {2, 4}, {2, 3, 4}, {2, 3, 4, 5, 6}})
    for (int l = 2; l <= 6; ++l) {
      auto shapes = enumerate_shapes(l, ar);
      CHECK(static_cast<long>(shapes.size()) == oracle_shapes(l, ar));
      std::set<std::string> distinct;
      for (const auto& t : shapes) {
        CHECK(is_canonical(t));
        CHECK_NOTHROW(validate_tree(t));
        for (int k : vertex_arities(t)) CHECK(ar.count(k));
        distinct.insert(serialize(t));
      }
      CHECK(distinct.size() == shapes.size());
    }
}

TEST_CASE("canonical_form records") {
  Tree c = corolla(2);
  auto same = canonical_form(c);
  CHECK(same.tree == c);
  CHECK(same.records[0].order == std::vector<int>{0, 1});

  Tree swapped = c;
  std::swap(swapped.vertices[0].children[0], swapped.vertices[0].children[1]);
  auto f = canonical_form(swapped);
  CHECK(f.tree == c);
  CHECK(f.records[0].order == std::vector<int>{1, 0});

  // ((3,2),1) -> (1,(2,3)): both vertices reorder
  Tree t = parse_tree("((3,2),1)");
  CHECK_FALSE(is_canonical(t));
  auto g = canonical_form(t);
  CHECK(serialize(g.tree) == "(1,(2,3))");
  CHECK(g.records[0].order == std::vector<int>{1, 0});
  CHECK(g.records[1].order == std::vector<int>{1, 0});
}

TEST_CASE("canonical form is idempotent and ignores planar order") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> L(2, 7);
    Tree t = random_planar(rng, L(rng));
    auto f = canonical_form(t);
    CHECK(is_canonical(f.tree));
    CHECK(canonical_form(f.tree).tree == f.tree);
    CHECK(parse_tree(serialize(f.tree)) == f.tree);
    // shuffling children gives the same canonical tree
    Tree u = t;
    for (auto& v : u.vertices) std::shuffle(v.children.begin(), v.children.end(), rng);
    CHECK(canonical_form(u).tree == f.tree);
    CHECK(vertex_arities(f.tree).size() == t.vertices.size());
  }
}

TEST_CASE("graft small cases") {
  Tree y2 = corolla(2), y3 = corolla(3);
  CHECK(serialize(graft(y2, 0, y2).form.tree) == "((1,2),3)");
  CHECK(serialize(graft(y2, 1, y2).form.tree) == "(1,(2,3))");
  Tree unit;
  CHECK(graft(y2, 1, unit).form.tree == y2);
  CHECK(graft(unit, 0, y3).form.tree == y3);
  auto g = graft(y2, 1, y3);
  CHECK(g.form.tree.leaves == 4);
  CHECK(serialize(g.form.tree) == "(1,(2,3,4))");
  CHECK_THROWS_AS(graft(y2, 2, y2), TreeError);
}

TEST_CASE("graft leaf bookkeeping") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> L(2, 4);
    Tree a = canonical_form(random_planar(rng, L(rng))).tree;
    Tree b = canonical_form(random_planar(rng, L(rng))).tree;
    std::uniform_int_distribution<int> S(0, a.leaves - 1);
    int slot = S(rng);
    auto g = graft(a, slot, b);
    CHECK(g.form.tree.leaves == a.leaves + b.leaves - 1);
    CHECK(g.form.tree.vertex_count() == a.vertex_count() + b.vertex_count());
    CHECK_NOTHROW(validate_tree(g.form.tree));
    CHECK(is_canonical(g.form.tree));
    // in planar order the inner leaves occupy a consecutive block
    auto pl = planar_leaves(g.planar);
    auto it = std::find(pl.begin(), pl.end(), slot);
    REQUIRE(it != pl.end());
    for (int k = 0; k < b.leaves; ++k) {
      auto want = std::find(pl.begin(), pl.end(), slot + k);
      CHECK(want != pl.end());
    }
  }
}

TEST_CASE("serialization and validation") {
  Tree d = parse_tree("#3(1,#0(2,3))");
  CHECK(d.vertices[0].decoration == 3);
  CHECK(d.vertices[1].decoration == 0);
  CHECK(serialize(d) == "#3(1,#0(2,3))");
  CHECK(parse_tree("1").is_unit());
  CHECK_THROWS_AS(parse_tree("(1,"), TreeError);
  CHECK_THROWS_AS(parse_tree("(1,3)"), TreeError);
  CHECK_THROWS_AS(parse_tree("(1,1)"), TreeError);
  Tree bad = corolla(2);
  bad.vertices[0].children = {leaf_code(0)};
  CHECK_THROWS_AS(validate_tree(bad), TreeError);
  Tree dup = corolla(3);
  dup.vertices[0].children[2] = leaf_code(0);
  CHECK_THROWS_AS(validate_tree(dup), TreeError);
}
