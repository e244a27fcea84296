#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opmin/operad.hpp"

namespace opmin {

class KanError : public std::runtime_error {
 public:
  KanError(const std::string& what, int i = -1, int j = -1) : std::runtime_error(what), i(i), j(j) {}
  int i, j;  // first failing pair of the Kan-like condition, 1-based; -1 if not applicable
};

// Augmented simplicial structure: faces delta_i : H(n) -> H(n-1), degeneracies s_i : H(n) -> H(n+1)
// and the extra degeneracy t(z) = m2 o_1 z with delta_{n+1} t = id. Indices are 0-based.
class SimplicialHost {
 public:
  virtual ~SimplicialHost() = default;
  virtual std::string name() const = 0;
  virtual int max_arity() const = 0;
  virtual std::size_t dim(int n) const = 0;  // dim(0) is the augmentation target
  virtual int degree(int n, std::size_t b) const = 0;
  virtual SparseVec face(int n, const SparseVec& w, int i) const = 0;
  virtual SparseVec degeneracy(int n, const SparseVec& w, int i) const = 0;
  virtual SparseVec extra_degeneracy(int n, const SparseVec& w) const = 0;
  virtual SparseVec act(int n, const Perm& sigma, const SparseVec& w) const = 0;
  virtual SparseVec differential(int n, const SparseVec& w) const = 0;
};

// faces are restrictions, s_i(w) = w o_i m2
class OperadHost : public SimplicialHost {
 public:
  OperadHost(OperadPtr p, SparseVec m2);
  explicit OperadHost(OperadPtr p);  // uses p->multiplication()

  std::string name() const override { return p_->name(); }
  int max_arity() const override { return p_->max_arity(); }
  std::size_t dim(int n) const override { return p_->restriction_target_dim(n); }
  int degree(int n, std::size_t b) const override { return n == 0 ? 0 : p_->degree(n, b); }
  SparseVec face(int n, const SparseVec& w, int i) const override;
  SparseVec degeneracy(int n, const SparseVec& w, int i) const override;
  SparseVec extra_degeneracy(int n, const SparseVec& w) const override;
  SparseVec act(int n, const Perm& sigma, const SparseVec& w) const override;
  SparseVec differential(int n, const SparseVec& w) const override;

  const Operad& operad() const { return *p_; }
  const SparseVec& m2() const { return m2_; }

 private:
  OperadPtr p_;
  SparseVec m2_;
};

// Mapping cone of rho : M -> N with faces delta + delta and degeneracies built from m in M(2)
// on the source and rho(m) on the target. Cone degree d is M^{d+1} + N^d.
class ConeHost : public SimplicialHost {
 public:
  ConeHost(std::shared_ptr<const OperadMorphism> rho, OperadPtr source, OperadPtr target, SparseVec m_source);

  std::string name() const override;
  int max_arity() const override;
  std::size_t dim(int n) const override { return sdim(n) + tdim(n); }
  int degree(int n, std::size_t b) const override;
  SparseVec face(int n, const SparseVec& w, int i) const override;
  SparseVec degeneracy(int n, const SparseVec& w, int i) const override;
  SparseVec extra_degeneracy(int n, const SparseVec& w) const override;
  SparseVec act(int n, const Perm& sigma, const SparseVec& w) const override;
  SparseVec differential(int n, const SparseVec& w) const override;

  std::size_t sdim(int n) const { return src_host_.dim(n); }
  std::size_t tdim(int n) const { return tgt_host_.dim(n); }
  std::pair<SparseVec, SparseVec> split(int n, const SparseVec& w) const;
  SparseVec join(int n, const SparseVec& x, const SparseVec& y) const;

 private:
  template <class F>
  SparseVec both(int n, int n_out, const SparseVec& w, F f) const;
  std::shared_ptr<const OperadMorphism> rho_;
  OperadHost src_host_, tgt_host_;
};

struct KanFamily {
  int n = 1;
  std::vector<SparseVec> members;  // omega_1..omega_n in arity n-1
};

// first (i, j), i < j 1-based, with delta_i omega_j != delta_{j-1} omega_i
std::optional<std::pair<int, int>> kan_violation(const SimplicialHost& h, const KanFamily& f);
bool is_kan(const SimplicialHost& h, const KanFamily& f);

// {delta_i w}
KanFamily faces_of(const SimplicialHost& h, int n, const SparseVec& w);

// omega in arity n with delta_i omega = omega_i; throws KanError on a non-Kan family
SparseVec fill(const SimplicialHost& h, const KanFamily& f);

// Simplicial identities, unit and extra degeneracy identities on every basis element of
// arity <= up_to, plus commutation of faces and degeneracies with the differential.
ValidationReport check_simplicial(const SimplicialHost& h, int up_to);

// delta_i(sigma.e) = sigma|_i . delta_{sigma^{-1}(i)}(e) on generators of the E-action
std::optional<std::string> twist_violation(const SimplicialHost& h, int n, const GroupAction& e_action,
                                           const std::vector<std::vector<SparseVec>>& family);

// Fills each family (indexed by the basis of E) and averages over all of Sigma_n.
std::vector<SparseVec> fill_equivariant(const SimplicialHost& h, int n, const GroupAction& e_action,
                                        const std::vector<std::vector<SparseVec>>& family);

// Subspaces B(m) for m in [lo, hi], stored as spanning sets.
class SubmoduleWitness {
 public:
  SubmoduleWitness(int lo, int hi) : lo_(lo), hi_(hi) {}

  // smallest subspace of arities n-1, n containing the members and closed under faces,
  // degeneracies, the extra degeneracy and (optionally) the symmetric group action
  static SubmoduleWitness generated_by(const SimplicialHost& h, const KanFamily& f, bool with_action = false);

  void add(int m, const SparseVec& v);
  bool contains(int m, const SparseVec& v) const;
  std::size_t dim(int m) const;
  int lo() const { return lo_; }
  int hi() const { return hi_; }

  // closure under faces n -> n-1 and degeneracies n-1 -> n within [lo, hi]
  ValidationReport check_closed(const SimplicialHost& h, bool with_action = false) const;

 private:
  int lo_, hi_;
  std::map<int, EchelonBasis> spans_;
  std::map<int, std::vector<SparseVec>> gens_;
};

}  // namespace opmin
