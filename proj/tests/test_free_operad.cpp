#include "doctest.h"
#include "fixtures.hpp"

using namespace opmin;

namespace {

std::shared_ptr<FreeOperad> gamma_mu(const std::string& rep, int N, FreeFlavor flavor = FreeFlavor::NonUnitary) {
  GeneratorBatch mu = batch_from_rep(2, 0, rep, "mu");
  if (flavor == FreeFlavor::Unitary) mu.delta.assign(mu.size(), {TreeSum::single(Tree{}), TreeSum::single(Tree{})});
  return std::make_shared<FreeOperad>("G", std::vector<GeneratorBatch>{mu}, N, flavor);
}

// nu in the regular representation of Sigma_3 with d nu = mu o1 mu - mu o2 mu
GeneratorBatch associator_batch(const FreeOperad& g) {
  const SparseVec mu = SparseVec::unit(g.corolla_index(0));
  const SparseVec assoc = g.compose(2, mu, 0, 2, mu) - g.compose(2, mu, 1, 2, mu);
  GeneratorBatch nu = batch_from_rep(3, -1, "reg", "nu");
  const auto perms = all_perms(3);
  for (std::size_t k = 0; k < nu.size(); ++k) nu.d[k] = g.to_trees(3, g.act(3, perms[k], assoc));
  return nu;
}

}  // namespace

TEST_CASE("free bases in small arities") {
  auto triv = gamma_mu("triv", 4);
  CHECK(free_basis(*triv, 1).size() == 1);
  CHECK(free_basis(*triv, 1)[0].is_unit());
  CHECK(free_basis(*triv, 2).size() == 1);
  CHECK(serialize(free_basis(*triv, 2)[0]) == "#0(1,2)");
  CHECK(free_basis(*triv, 3).size() == 3);
  CHECK(free_basis(*triv, 4).size() == 15);
  auto reg = gamma_mu("reg", 4);
  CHECK(reg->dim(2) == 2);
  CHECK(reg->dim(3) == 12);
  CHECK(reg->dim(4) == 120);
  CHECK(reg->dim(0) == 0);
  auto u = gamma_mu("triv", 3, FreeFlavor::Unitary);
  CHECK(u->dim(0) == 1);
  CHECK(free_basis(*u, 0)[0].leaves == 0);
  for (int l = 1; l <= 4; ++l)
    for (std::size_t b = 0; b < reg->dim(l); ++b) {
      CHECK(is_canonical(reg->tree(l, b)));
      CHECK(reg->index_of(reg->tree(l, b)) == b);
    }
}

TEST_CASE("dimension identities for random generator modules") {
  std::mt19937 rng(31);
  for (int t = 0; t < 30; ++t) {
    auto r = fx::random_module(rng, true);
    for (auto flavor : {FreeFlavor::NonUnitary, FreeFlavor::Unitary}) {
      const std::string err = fx::free_dimension_identities(r, flavor, 4);
      INFO(r.describe);
      CHECK(err.empty());
    }
  }
}

TEST_CASE("compositions of the free generator") {
  auto g = gamma_mu("triv", 4);
  const SparseVec mu = SparseVec::unit(g->corolla_index(0));
  const SparseVec a = g->compose(2, mu, 0, 2, mu), b = g->compose(2, mu, 1, 2, mu);
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  CHECK(serialize(g->tree(3, a.entries()[0].first)) == "#0(#0(1,2),3)");
  CHECK(serialize(g->tree(3, b.entries()[0].first)) == "#0(1,#0(2,3))");
  // mu symmetric: (1 3) sends mu o1 mu to mu o2 mu
  CHECK(g->act(3, transposition(3, 0, 2), a) == b);
  // parallel associativity: (mu o1 mu) o3 mu = (mu o2 mu) o1 mu
  CHECK(g->compose(3, a, 2, 2, mu) == g->compose(3, b, 0, 2, mu));
  // odd generators pick up Koszul signs
  GeneratorBatch e = batch_from_rep(2, 1, "triv", "e");
  FreeOperad odd("O", {e}, 4, FreeFlavor::NonUnitary);
  const SparseVec x = SparseVec::unit(odd.corolla_index(0));
  const SparseVec xx = odd.compose(2, x, 0, 2, x);
  // (x o1 x) o3 x = -(x o2 x) o1 x
  const SparseVec lhs = odd.compose(3, xx, 2, 2, x);
  const SparseVec rhs = odd.compose(3, odd.compose(2, x, 1, 2, x), 0, 2, x);
  CHECK(lhs.size() == 1);
  CHECK(lhs == rhs * Rational(-1));
  CHECK(check_operad_axioms(odd, 4).ok());
}

TEST_CASE("principal extension by the associator") {
  auto g = gamma_mu("reg", 4);
  auto q = principal_extend(*g, associator_batch(*g));
  CHECK(q->dim(3) == 18);
  CHECK(q->generator_count() == 8);
  CHECK(check_operad_axioms(*q, 4).ok());
  CHECK(validate(*q, 4).ok());
  // d^2 = 0 and Leibniz, against the matrices directly
  for (int n = 2; n <= 4; ++n) {
    SparseMap d = leibniz_differential(*q, n);
    for (const auto& c : d.cols) CHECK(d.apply(c).empty());
  }
  for (std::size_t a = 0; a < q->dim(3); ++a)
    for (int i = 0; i < 3; ++i)
      for (std::size_t b = 0; b < q->dim(2); ++b) {
        const SparseVec ab = q->compose(3, a, i, 2, b);
        const SparseVec rhs = q->compose(3, q->differential(3, a), i, 2, SparseVec::unit(b)) +
                              q->compose(3, SparseVec::unit(a), i, 2, q->differential(2, b)) *
                                  Rational(q->degree(3, a) % 2 ? -1 : 1);
        CHECK(q->differential(4, ab) == rhs);
      }
  // a non-invariant differential on a trivial generator is rejected
  GeneratorBatch bad = batch_from_rep(3, -1, "triv", "z");
  const SparseVec mu = SparseVec::unit(g->corolla_index(0));
  bad.d[0] = g->to_trees(3, g->compose(2, mu, 0, 2, mu));
  CHECK_THROWS_AS(principal_extend(*g, bad), OperadError);
  // a differential of the wrong degree is rejected
  GeneratorBatch bad2 = batch_from_rep(3, 0, "triv", "z");
  bad2.d[0] = g->to_trees(3, g->compose(2, mu, 0, 2, mu));
  CHECK_THROWS_AS(principal_extend(*g, bad2), OperadError);
}

TEST_CASE("restrictions in the unitary flavour") {
  auto u = gamma_mu("triv", 4, FreeFlavor::Unitary);
  const SparseVec mu = SparseVec::unit(u->corolla_index(0));
  const SparseVec a = u->compose(2, mu, 0, 2, mu);
  for (int i = 0; i < 3; ++i) CHECK(u->restrict(3, a, i) == mu);
  CHECK(u->restrict(2, mu, 0) == u->unit());
  CHECK(u->restrict(1, u->unit(), 0) == SparseVec::unit(0));
  for (int i = 0; i < 3; ++i) CHECK(u->compose(3, a, i, 0, SparseVec::unit(0)) == u->restrict(3, a, i));
  CHECK(validate(*u, 4).ok());
  CHECK(check_operad_axioms(*u, 4).ok());
  // zero restrictions on a higher generator
  GeneratorBatch z = batch_from_rep(3, -1, "sgn", "z");
  z.delta.assign(1, std::vector<TreeSum>(3));
  auto v = u->extend(z);
  const SparseVec zc = SparseVec::unit(v->corolla_index(1));
  for (int i = 0; i < 3; ++i) CHECK(v->restrict(3, zc, i).empty());
  CHECK(validate(*v, 4).ok());
  // missing restriction data is refused in the unitary flavour
  GeneratorBatch w = batch_from_rep(3, -1, "sgn", "w");
  CHECK_THROWS_AS(u->extend(w), OperadError);
}

TEST_CASE("morphisms out of free operads") {
  auto g = gamma_mu("reg", 4);
  auto ass = builtin("Ass", 4);
  FreeMorphism f(g, ass, {SparseVec::unit(0), SparseVec::unit(1)});
  CHECK(validate_free_morphism(f).ok());
  CHECK(validate_operad_morphism(f, 4).ok());
  const SparseVec mu = SparseVec::unit(g->corolla_index(0));
  CHECK(f.apply(3, g->compose(2, mu, 0, 2, mu)) == SparseVec::unit(0));
  CHECK(f.evaluate(g->tree(2, g->corolla_index(1))) == SparseVec::unit(1));
  // not equivariant
  FreeMorphism bad(g, ass, {SparseVec::unit(0), SparseVec::unit(0)});
  CHECK_FALSE(validate_free_morphism(bad).ok());
  // post-composition with the reversal swaps the two images
  auto rev = std::make_shared<fx::Reverse>(ass);
  auto fr = f.then(*rev, ass);
  CHECK(fr->images()[0] == SparseVec::unit(1));
  CHECK(validate_free_morphism(*fr).ok());
  // restriction to a smaller window
  auto g3 = g->with_max_arity(3);
  auto f3 = f.restricted_to(g3);
  for (std::size_t b = 0; b < g3->dim(3); ++b) CHECK(f3->apply(3, b) == f.apply(3, b));
  CHECK_THROWS_AS(FreeMorphism(g, ass, {SparseVec::unit(0)}), OperadError);
}
