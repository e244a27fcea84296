#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opmin/free_operad.hpp"
#include "opmin/kan.hpp"

namespace opmin {

// The cohomological hypotheses fail; the message carries the offending table.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SullivanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// dim E(n)^d
struct DimensionTable {
  std::map<int, std::map<int, std::size_t>> dims;  // arity -> degree -> dim
  std::size_t at(int n, int d) const;
  bool operator==(const DimensionTable& o) const;
  std::string to_string() const;
};

struct QuisReport {
  std::map<int, std::map<int, std::size_t>> relative;  // arity -> degree -> dim H(cone), nonzero only
  std::vector<int> arities;                            // arities checked
  bool ok() const { return relative.empty(); }
  std::optional<int> first_failure() const;
  std::string to_string() const;
};

// relative cohomology of phi in arities 0 (when present on both sides) .. up_to
QuisReport verify_quis(const OperadMorphism& phi, int up_to);

struct StageReport {
  int arity = 0;
  std::map<int, std::size_t> generators;  // degree -> dim E(n)
  std::size_t cone_size = 0;
  std::size_t model_dim = 0;  // dim P_n(n)
  bool rectified = false;     // restrictions made compatible at this stage
  QuisReport quis;            // rho_n in arities <= n
  double seconds = 0;
};

struct MinimalModelOptions {
  PivotStrategy strategy = PivotStrategy::FirstPivot;
  // carry restrictions through a non-unitary run; default: when the target has them and m2
  std::optional<bool> lambda;
  bool verify_stages = true;
  std::function<void(const StageReport&)> on_stage;
};

struct MinimalModelResult {
  OperadPtr target;
  FreeFlavor flavor = FreeFlavor::NonUnitary;
  int max_arity = 0;
  bool lambda = false;
  std::shared_ptr<const FreeOperad> model;
  std::shared_ptr<const FreeMorphism> rho;
  std::vector<StageReport> stages;
  std::map<int, std::map<int, std::size_t>> target_cohomology;  // arity -> degree -> dim HP

  DimensionTable table() const;
};

// The cohomology of P(n) by degree, for n = 0..N.
std::map<int, std::map<int, std::size_t>> cohomology_table(const Operad& p, int N);

// Checks the hypotheses and throws HypothesisError naming the failure.
void check_hypotheses(const Operad& p, int N, FreeFlavor flavor);

MinimalModelResult minimal_model(OperadPtr p, int N, FreeFlavor flavor, const MinimalModelOptions& opt = {});

// (1/n!) sum over sigma of sigma . f(sigma^{-1} e), computed along the cosets of Sigma_{m-1} in Sigma_m.
std::vector<SparseVec> equivariant_average(
    int n, const GroupAction& e_action, std::vector<SparseVec> f,
    const std::function<SparseVec(const Perm&, const SparseVec&)>& act);

// Sigma action on the degree-d generators of one batch
GroupAction batch_action(const GeneratorBatch& b, const std::vector<std::size_t>& members);

// Generators of the extension not in phi's source are lifted batch by batch.
struct LiftingSquare {
  std::shared_ptr<const FreeMorphism> phi;        // P -> Q
  std::shared_ptr<const FreeOperad> extension;    // P followed by new batches
  std::shared_ptr<const OperadMorphism> psi;      // extension -> R
  std::shared_ptr<const OperadMorphism> rho;      // Q -> R, surjective quis
  OperadPtr q;                                    // Q
};

// psi' : extension -> Q with psi' = phi on P and rho psi' = psi. With the unitary flavour
// psi' also commutes with the restrictions; Q needs a unitary multiplication.
std::shared_ptr<FreeMorphism> lift_through_extension(const LiftingSquare& sq, FreeFlavor flavor,
                                                     PivotStrategy strategy = PivotStrategy::FirstPivot);

// sigma : model -> Q with rho sigma = id, for a quis rho onto a minimal free operad.
std::shared_ptr<FreeMorphism> construct_section(std::shared_ptr<const OperadMorphism> rho, OperadPtr q,
                                                std::shared_ptr<const FreeOperad> model, FreeFlavor flavor,
                                                PivotStrategy strategy = PivotStrategy::FirstPivot);

struct CompareReport {
  DimensionTable a, b;
  bool ok = true;
  std::vector<std::string> messages;
  std::string to_string() const;
};

CompareReport compare_tables(const DimensionTable& a, const DimensionTable& b);
CompareReport compare_models(const MinimalModelResult& a, const MinimalModelResult& b);

// Same structure constants through max_arity: dims, degrees, d, action, restrictions, compositions.
ValidationReport compare_structure(const Operad& a, const Operad& b, int max_arity);

// m over P (carrying restrictions) and mp over P+: identical tables, the restriction data of mp
// as induced on HP+(2) and zero above, and unitary_extension(m.model) equal to mp.model.
CompareReport unitary_compatibility_check(const MinimalModelResult& m, const MinimalModelResult& mp);

// Strict-unit equations on the generators of a unitary model: delta_i of an arity-2 corolla is
// its induced class times id, every other generator restricts to 0.
ValidationReport check_strict_units(const MinimalModelResult& m);

// Every generator differential lies in trees with at least two vertices.
ValidationReport check_decomposable(const FreeOperad& p);

}  // namespace opmin
