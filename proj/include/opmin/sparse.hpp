#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "opmin/qlinalg.hpp"
#include "opmin/rational.hpp"

namespace opmin {

// Sorted (index, coefficient) pairs without zero coefficients.
class SparseVec {
 public:
  using Entry = std::pair<std::size_t, Rational>;

  SparseVec() = default;
  static SparseVec unit(std::size_t i, const Rational& c = 1);
  static SparseVec from_dense(const QVector& v);
  // accepts unsorted input with repeats
  static SparseVec from_entries(std::vector<Entry> entries);

  QVector to_dense(std::size_t n) const;
  const std::vector<Entry>& entries() const { return e_; }
  std::size_t size() const { return e_.size(); }
  bool empty() const { return e_.empty(); }
  Rational get(std::size_t i) const;
  std::size_t max_index_plus_one() const { return e_.empty() ? 0 : e_.back().first + 1; }

  void axpy(const Rational& c, const SparseVec& other);  // this += c * other
  SparseVec operator+(const SparseVec& o) const;
  SparseVec operator-(const SparseVec& o) const;
  SparseVec operator-() const;
  SparseVec operator*(const Rational& c) const;
  bool operator==(const SparseVec& o) const { return e_ == o.e_; }
  bool operator!=(const SparseVec& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  std::vector<Entry> e_;
  friend class VecBuilder;
};

// Accumulates terms in any order.
class VecBuilder {
 public:
  void add(std::size_t i, const Rational& c);
  void add(const SparseVec& v, const Rational& c = 1);
  SparseVec build();

 private:
  std::map<std::size_t, Rational> acc_;
};

// Linear map stored as sparse columns.
struct SparseMap {
  std::size_t rows = 0;
  std::vector<SparseVec> cols;

  std::size_t ncols() const { return cols.size(); }
  SparseVec apply(const SparseVec& v) const;
  SparseMap then(const SparseMap& after) const;  // after o this
  QMatrix to_dense() const;
  static SparseMap from_dense(const QMatrix& m);
  static SparseMap identity(std::size_t n);
  bool is_zero() const;
};

// Incremental row echelon form keyed on the smallest index. Optionally records each
// stored row as a combination of tagged inputs; untagged inputs contribute nothing,
// so coordinates come out modulo the span of untagged inputs.
class EchelonBasis {
 public:
  explicit EchelonBasis(bool track = false) : track_(track) {}

  // Remainder after elimination; zero iff v lies in the span.
  SparseVec reduce(SparseVec v, SparseVec* combo = nullptr) const;
  bool insert(const SparseVec& v, std::optional<std::size_t> tag = std::nullopt);
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  std::size_t rank() const { return rows_.size(); }

 private:
  bool track_;
  std::unordered_map<std::size_t, std::size_t> pivot_row_;
  std::vector<SparseVec> rows_;
  std::vector<SparseVec> combos_;
};

std::size_t sparse_rank(const std::vector<SparseVec>& cols);
// Kernel basis matching kernel_basis on the dense matrix with these columns.
std::vector<SparseVec> sparse_kernel(const std::vector<SparseVec>& cols);
std::optional<SparseVec> sparse_solve(const std::vector<SparseVec>& cols, const SparseVec& b);

// Solver reusing one elimination for many right-hand sides.
class SpanSolver {
 public:
  explicit SpanSolver(const std::vector<SparseVec>& cols);
  std::optional<SparseVec> solve(const SparseVec& b) const;
  bool contains(const SparseVec& b) const { return basis_.contains(b); }
  std::size_t rank() const { return basis_.rank(); }

 private:
  EchelonBasis basis_{true};
};

struct SparseCohomology {
  std::size_t h = 0;
  std::vector<SparseVec> reps;
  EchelonBasis coords{true};  // coboundaries untagged, reps tagged 0..h-1
  bool reversed = false;
  std::size_t ambient = 0;
  // coordinates of a cocycle on reps; throws if v is not a cocycle combination
  QVector project(const SparseVec& cocycle) const;
};

// Cohomology of V --d_in--> W --d_out--> X. With LastPivot the coordinates of W are
// processed in reverse order. ambient is dim W.
SparseCohomology sparse_cohomology(const std::vector<SparseVec>& d_in, const std::vector<SparseVec>& d_out,
                                   std::size_t ambient, PivotStrategy strategy = PivotStrategy::FirstPivot);

}  // namespace opmin
