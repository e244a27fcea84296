#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "opmin/sigma_lambda.hpp"

namespace opmin {

class OperadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dg operad over Q on a graded basis per arity. Unitary operads expose P(0) = k (one basis
// element of degree 0); composing with it is the restriction. Slots are 0-based.
class Operad : public SigmaModuleView {
 public:
  virtual std::string name() const = 0;
  virtual bool unitary() const = 0;
  virtual SparseVec compose(int m, std::size_t a, int slot, int k, std::size_t b) const = 0;
  virtual SparseVec unit() const = 0;
  virtual std::optional<SparseVec> multiplication() const { return std::nullopt; }
  // same data with P(0) exposed or hidden; throws when impossible
  virtual std::shared_ptr<const Operad> unitary_variant(bool unitary) const = 0;

  SparseVec compose(int m, const SparseVec& a, int slot, int k, const SparseVec& b) const;
  using SigmaModuleView::act;
  using SigmaModuleView::differential;
  using SigmaModuleView::restrict;
};

using OperadPtr = std::shared_ptr<const Operad>;

// Operad given by structure constants. compositions[(m,k)] holds the result of a o_i b at
// position (i*dim(m) + a)*dim(k) + b.
class TableOperad : public Operad {
 public:
  TableOperad(std::string name, DgSigmaModule carrier, std::map<std::pair<int, int>, std::vector<SparseVec>> comps,
              SparseVec unit, std::optional<SparseVec> m2, bool unitary);

  std::string name() const override { return name_; }
  bool unitary() const override { return unitary_; }
  int max_arity() const override { return carrier_.max_arity(); }
  std::size_t dim(int n) const override;
  int degree(int n, std::size_t b) const override;
  std::string label(int n, std::size_t b) const override;
  SparseVec differential(int n, std::size_t b) const override;
  SparseVec act(int n, const Perm& sigma, std::size_t b) const override;
  bool has_restrictions() const override { return carrier_.has_restrictions(); }
  SparseVec restrict(int n, std::size_t b, int i) const override;
  SparseVec compose(int m, std::size_t a, int slot, int k, std::size_t b) const override;
  SparseVec unit() const override { return unit_; }
  std::optional<SparseVec> multiplication() const override { return m2_; }
  std::shared_ptr<const Operad> unitary_variant(bool unitary) const override;
  using Operad::act;
  using Operad::compose;
  using Operad::differential;
  using Operad::restrict;

  const DgSigmaModule& carrier() const { return carrier_; }
  const std::map<std::pair<int, int>, std::vector<SparseVec>>& compositions() const { return comps_; }

 private:
  std::string name_;
  DgSigmaModule carrier_;  // arity 0 entry present (possibly empty)
  std::map<std::pair<int, int>, std::vector<SparseVec>> comps_;
  SparseVec unit_;
  std::optional<SparseVec> m2_;
  bool unitary_;
};

// Ass, Ass+, Com, Com+, I, I+ through the given arity.
OperadPtr builtin(const std::string& name, int max_arity);
std::vector<std::string> builtin_names();

OperadPtr truncate(const OperadPtr& p);
OperadPtr unitary_extension(const OperadPtr& p);

// Materialises the structure constants of any operad through max_arity.
std::shared_ptr<TableOperad> to_table(const Operad& p, int max_arity, const std::string& name = "");

// Induced operad structure on cohomology, on representatives chosen degreewise.
std::shared_ptr<TableOperad> cohomology_operad(const Operad& p, int max_arity);

// Module axioms, unit, sequential and parallel associativity, equivariance, Leibniz rule and
// compatibility of restrictions with composition, on basis elements with results up to up_to.
ValidationReport check_operad_axioms(const Operad& p, int up_to);

// (a) associativity of m2, (b') delta_1 m2 = id = delta_2 m2, (c) d m2 = 0.
ValidationReport check_unitary_multiplication(const Operad& p, const SparseVec& m2, bool require_associative = true);

// A morphism of operads viewed arity-wise.
class OperadMorphism : public ArityMap {
 public:
  virtual const Operad& source_operad() const = 0;
  virtual const Operad& target_operad() const = 0;
  const SigmaModuleView& source() const override { return source_operad(); }
  const SigmaModuleView& target() const override { return target_operad(); }
};

// Checks compatibility with composition on basis pairs, in addition to validate_morphism.
ValidationReport validate_operad_morphism(const OperadMorphism& f, int up_to);

}  // namespace opmin
