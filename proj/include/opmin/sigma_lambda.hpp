#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "opmin/permutation.hpp"
#include "opmin/sparse.hpp"

namespace opmin {

// Graded Sigma-module (optionally with restrictions delta_i) seen through a basis in each arity.
// Permutations act on the left: sigma renames input x to sigma(x).
class SigmaModuleView {
 public:
  virtual ~SigmaModuleView() = default;

  virtual int max_arity() const = 0;
  virtual std::size_t dim(int n) const = 0;
  virtual int degree(int n, std::size_t b) const = 0;
  virtual std::string label(int, std::size_t b) const { return std::to_string(b); }
  virtual SparseVec differential(int n, std::size_t b) const = 0;
  virtual SparseVec act(int n, const Perm& sigma, std::size_t b) const = 0;

  virtual bool has_restrictions() const { return false; }
  // delta_i : M(n) -> M(n-1), i 0-based. From arity 1 the value lands in a one-dimensional
  // arity 0 (index 0) even when dim(0) reports 0.
  virtual SparseVec restrict(int n, std::size_t b, int i) const;

  virtual std::vector<std::size_t> basis_in_degree(int n, int d) const;
  std::set<int> degrees(int n) const;
  std::size_t restriction_target_dim(int n) const { return n == 0 ? 1 : dim(n); }

  SparseVec differential(int n, const SparseVec& v) const;
  SparseVec act(int n, const Perm& sigma, const SparseVec& v) const;
  SparseVec restrict(int n, const SparseVec& v, int i) const;
};

struct Violation {
  std::string check;
  int arity = -1;
  int degree = 0;
  std::string detail;
  std::string to_string() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t checks = 0;
  bool ok() const { return violations.empty(); }
  void add(Violation v) { violations.push_back(std::move(v)); }
  void merge(const ValidationReport& o);
  std::string summary() const;
};

struct ArityData {
  std::vector<int> degrees;
  std::vector<std::string> labels;
  std::vector<SparseMap> adjacent;      // s_0..s_{n-2}
  SparseMap differential;               // degree +1
  std::vector<SparseMap> restrictions;  // delta_0..delta_{n-1}, into arity n-1
};

class DgSigmaModule : public SigmaModuleView {
 public:
  DgSigmaModule() = default;
  DgSigmaModule(std::vector<ArityData> arities, bool lambda);

  int max_arity() const override { return static_cast<int>(a_.size()) - 1; }
  std::size_t dim(int n) const override;
  int degree(int n, std::size_t b) const override { return data(n).degrees.at(b); }
  std::string label(int n, std::size_t b) const override;
  SparseVec differential(int n, std::size_t b) const override { return data(n).differential.cols.at(b); }
  SparseVec act(int n, const Perm& sigma, std::size_t b) const override;
  bool has_restrictions() const override { return lambda_; }
  SparseVec restrict(int n, std::size_t b, int i) const override;
  using SigmaModuleView::act;
  using SigmaModuleView::differential;
  using SigmaModuleView::restrict;

  const ArityData& data(int n) const;
  ArityData& mutable_data(int n);
  const std::vector<ArityData>& arities() const { return a_; }

 private:
  std::vector<ArityData> a_;
  bool lambda_ = false;
};

// A DgSigmaModule that carries restrictions.
class DgLambdaModule : public DgSigmaModule {
 public:
  DgLambdaModule() = default;
  explicit DgLambdaModule(std::vector<ArityData> arities) : DgSigmaModule(std::move(arities), true) {}
};

// Copies the structure maps of any view in arities 0..up_to.
DgSigmaModule materialize(const SigmaModuleView& m, int up_to);

// Coxeter relations, degree bookkeeping, d^2 = 0, equivariance of d and, with restrictions,
// the simplicial identities, delta d = d delta and twisted equivariance of delta.
ValidationReport validate(const SigmaModuleView& m, int up_to);

// Arity-wise linear map between two views.
class ArityMap {
 public:
  virtual ~ArityMap() = default;
  virtual const SigmaModuleView& source() const = 0;
  virtual const SigmaModuleView& target() const = 0;
  virtual SparseVec apply(int n, std::size_t b) const = 0;
  SparseVec apply(int n, const SparseVec& v) const;
};

class ModuleMorphism : public ArityMap {
 public:
  ModuleMorphism(std::shared_ptr<const SigmaModuleView> src, std::shared_ptr<const SigmaModuleView> tgt,
                 std::vector<SparseMap> maps);
  const SigmaModuleView& source() const override { return *src_; }
  const SigmaModuleView& target() const override { return *tgt_; }
  SparseVec apply(int n, std::size_t b) const override;
  using ArityMap::apply;

 private:
  std::shared_ptr<const SigmaModuleView> src_, tgt_;
  std::vector<SparseMap> maps_;
};

// Degree preservation, chain map, equivariance and (if both sides have them) restrictions.
ValidationReport validate_morphism(const ArityMap& f, int up_to);

// Single-arity cochain complex on a finite graded basis.
struct ArityComplex {
  std::vector<int> degrees;
  std::vector<SparseVec> d;  // columns, into the same basis
  std::size_t size() const { return degrees.size(); }
};

ArityComplex module_complex(const SigmaModuleView& m, int n);

struct DegreeCohomology {
  int degree = 0;
  std::vector<std::size_t> basis;  // global indices of the degree-d piece
  SparseCohomology h;
  std::vector<SparseVec> reps;  // in global indices
  QVector project(const SparseVec& cocycle) const;
  std::size_t dim() const { return h.h; }
};

struct GradedCohomology {
  std::map<int, DegreeCohomology> by_degree;  // only nonzero pieces
  std::map<int, std::size_t> dims() const;
  std::size_t total() const;
};

GradedCohomology cohomology_of(const ArityComplex& c, PivotStrategy strategy = PivotStrategy::FirstPivot);
// Dimensions only, from ranks.
std::map<int, std::size_t> cohomology_dims(const ArityComplex& c);

// Mapping cone of phi in arity n: degree d is M(n)^{d+1} + N(n)^d with differential
// (x, y) -> (-dx, -phi x + dy). Global index: source basis first, then target basis.
class Cone {
 public:
  Cone(const ArityMap& phi, int n);

  int arity() const { return n_; }
  std::size_t source_dim() const { return s_; }
  std::size_t size() const { return s_ + t_; }
  int degree(std::size_t idx) const;
  SparseVec differential(std::size_t idx) const;
  SparseVec differential(const SparseVec& v) const;
  SparseVec act(const Perm& sigma, const SparseVec& v) const;
  const ArityComplex& complex() const { return complex_; }

  SparseVec source_part(const SparseVec& v) const;
  SparseVec target_part(const SparseVec& v) const;
  SparseVec join(const SparseVec& x, const SparseVec& y) const;

 private:
  const ArityMap& phi_;
  int n_;
  std::size_t s_, t_;
  ArityComplex complex_;
};

GradedCohomology relative_cohomology(const ArityMap& phi, int n, PivotStrategy strategy = PivotStrategy::FirstPivot);

// Matrices of the induced delta_i : H(M(n)) -> H(M(n-1)) in the representative bases of one degree.
// hn1 == nullptr means the target is the one-dimensional arity 0.
std::vector<QMatrix> induced_lambda_on_H(const SigmaModuleView& m, int n, const DegreeCohomology& hn,
                                         const DegreeCohomology* hn1);

// Matrices of the adjacent transpositions on H(M(n)) in one degree.
std::vector<QMatrix> induced_action_on_H(const SigmaModuleView& m, int n, const DegreeCohomology& hn);

}  // namespace opmin
