#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "opmin/operad.hpp"
#include "opmin/trees.hpp"

namespace opmin {

// Linear combination of decorated trees; vertex decorations are global generator ids.
struct TreeSum {
  std::vector<std::pair<Rational, Tree>> terms;
  bool empty() const { return terms.empty(); }
  static TreeSum single(const Tree& t, const Rational& c = 1) { return TreeSum{{{c, t}}}; }
};

// Sigma_p-module of generators in one arity with its structure data. d and the restrictions
// are elements of the operad generated by earlier batches (or this one, for d).
struct GeneratorBatch {
  int arity = 2;
  std::vector<int> degrees;
  std::vector<std::string> labels;
  std::vector<SparseMap> adjacent;            // Sigma_arity on the batch, arity-1 matrices
  std::vector<TreeSum> d;                     // one per generator, may be empty
  std::vector<std::vector<TreeSum>> delta;    // delta[j][i]; empty when absent
  std::size_t size() const { return degrees.size(); }
};

enum class FreeFlavor { NonUnitary, Unitary };

// Free operad on reduced trees. Unitary flavour adds P(0) = k and restrictions built from
// the generator restrictions. A non-unitary operad whose batches all carry restrictions is
// a Lambda-operad (its truncation).
class FreeOperad : public Operad {
 public:
  // lambda defaults to: every batch carries restrictions (always required when unitary)
  FreeOperad(std::string name, std::vector<GeneratorBatch> batches, int max_arity, FreeFlavor flavor,
             std::optional<bool> lambda = std::nullopt);

  // principal extension by one more batch
  std::shared_ptr<FreeOperad> extend(GeneratorBatch batch, const std::string& name = "") const;
  std::shared_ptr<FreeOperad> with_max_arity(int max_arity) const;

  std::string name() const override { return name_; }
  bool unitary() const override { return flavor_ == FreeFlavor::Unitary; }
  int max_arity() const override { return max_arity_; }
  std::size_t dim(int n) const override;
  int degree(int n, std::size_t b) const override;
  std::string label(int n, std::size_t b) const override;
  SparseVec differential(int n, std::size_t b) const override;
  SparseVec act(int n, const Perm& sigma, std::size_t b) const override;
  bool has_restrictions() const override { return lambda_; }
  SparseVec restrict(int n, std::size_t b, int i) const override;
  std::vector<std::size_t> basis_in_degree(int n, int d) const override;
  SparseVec compose(int m, std::size_t a, int slot, int k, std::size_t b) const override;
  SparseVec unit() const override;
  std::optional<SparseVec> multiplication() const override { return m2_; }
  std::shared_ptr<const Operad> unitary_variant(bool unitary) const override;
  using Operad::act;
  using Operad::compose;
  using Operad::differential;
  using Operad::restrict;

  void set_multiplication(std::optional<SparseVec> m2) { m2_ = std::move(m2); }

  const std::vector<GeneratorBatch>& batches() const { return batches_; }
  std::size_t generator_count() const { return gen_arity_.size(); }
  int generator_arity(int g) const { return gen_arity_.at(g); }
  int generator_degree(int g) const { return gen_degree_.at(g); }
  int generator_batch(int g) const { return gen_batch_.at(g); }
  int generator_local(int g) const { return gen_local_.at(g); }
  int first_generator(int batch) const { return batch_first_.at(batch); }
  std::string generator_label(int g) const;

  const Tree& tree(int n, std::size_t b) const;
  std::optional<std::size_t> index_of(const Tree& canonical) const;
  // corolla of generator g as a basis element of its arity
  std::size_t corolla_index(int g) const;
  Tree corolla(int g) const;

  // expands decoration actions and Koszul signs of a planar tree whose tensor order is the
  // vertex storage order (root at vertex 0)
  SparseVec normalize(const Tree& planar, int root = 0) const;
  SparseVec to_vector(int n, const TreeSum& s) const;
  TreeSum to_trees(int n, const SparseVec& v) const;

  // sigma acting on generator g (as a combination of global generator ids)
  std::vector<std::pair<int, Rational>> act_generator(int g, const Perm& sigma) const;

 private:
  struct ArityBasis {
    std::vector<Tree> trees;
    std::vector<int> degrees;
    std::unordered_map<std::string, std::size_t> index;
    std::map<int, std::vector<std::size_t>> by_degree;
    std::vector<std::optional<SparseVec>> d_cache;
  };
  const ArityBasis& basis(int n) const;
  SparseVec substitute(const Tree& t, int v, const TreeSum& s, const std::vector<int>& child_codes, int drop_leaf,
                       const Rational& scale) const;

  std::string name_;
  std::vector<GeneratorBatch> batches_;
  int max_arity_;
  FreeFlavor flavor_;
  bool lambda_ = false;
  std::optional<SparseVec> m2_;
  std::vector<int> gen_arity_, gen_degree_, gen_batch_, gen_local_, batch_first_;
  mutable std::recursive_mutex mu_;
  mutable std::vector<std::unique_ptr<ArityBasis>> bases_;
};

using FreeOperadPtr = std::shared_ptr<const FreeOperad>;

// Checks and assembles generator data: action matrices satisfy the Coxeter relations, d raises
// degree by one and squares to zero, d is equivariant, and restrictions (if any) are compatible.
ValidationReport validate_batch(const FreeOperad& p, int batch);

// generator batch with a given Sigma_p-action and no differential
GeneratorBatch make_batch(int arity, const std::vector<int>& degrees, const std::vector<QMatrix>& adjacent,
                          const std::string& prefix);
// generators given as (arity, degree, rep) where rep is "triv", "sgn" or "reg"
GeneratorBatch batch_from_rep(int arity, int degree, const std::string& rep, const std::string& prefix);

// The basis of Gamma(M) in arity l; l = 1 gives only id, l = 0 the unit of the unitary flavour.
std::vector<Tree> free_basis(const FreeOperad& p, int l);

// Leibniz extension of the generator differential, as a matrix on the arity-n basis.
SparseMap leibniz_differential(const FreeOperad& p, int n);

// P sqcup_d Gamma(E)
std::shared_ptr<FreeOperad> principal_extend(const FreeOperad& p, GeneratorBatch e, const std::string& name = "");

// Morphism out of a free operad fixed by generator images.
class FreeMorphism : public OperadMorphism {
 public:
  FreeMorphism(FreeOperadPtr source, OperadPtr target, std::vector<SparseVec> images);

  const Operad& source_operad() const override { return *src_; }
  const Operad& target_operad() const override { return *tgt_; }
  SparseVec apply(int n, std::size_t b) const override;
  using ArityMap::apply;

  const FreeOperadPtr& source_ptr() const { return src_; }
  const OperadPtr& target_ptr() const { return tgt_; }
  const std::vector<SparseVec>& images() const { return images_; }
  SparseVec evaluate(const Tree& t) const;

  // restriction to the sub-free-operad on the first generators of a smaller free operad
  std::shared_ptr<FreeMorphism> restricted_to(FreeOperadPtr smaller) const;
  // post-composition with a morphism out of the target
  std::shared_ptr<FreeMorphism> then(const OperadMorphism& g, OperadPtr new_target) const;

 private:
  FreeOperadPtr src_;
  OperadPtr tgt_;
  std::vector<SparseVec> images_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, std::size_t>, SparseVec> cache_;
};

// Generator-level checks: degree, d f(e) = f(d e), equivariance on generators and restrictions.
ValidationReport validate_free_morphism(const FreeMorphism& f);

// Identity-like morphism of a table operad.
class IdentityMorphism : public OperadMorphism {
 public:
  explicit IdentityMorphism(OperadPtr p) : p_(std::move(p)) {}
  const Operad& source_operad() const override { return *p_; }
  const Operad& target_operad() const override { return *p_; }
  SparseVec apply(int, std::size_t b) const override { return SparseVec::unit(b); }
  using ArityMap::apply;

 private:
  OperadPtr p_;
};

}  // namespace opmin
