#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opmin/permutation.hpp"
#include "opmin/rational.hpp"

namespace opmin {

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static QMatrix identity(std::size_t n);
  static QMatrix from_columns(std::size_t rows, const std::vector<QVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  QVector column(std::size_t c) const;
  QVector row(std::size_t r) const;
  QMatrix transpose() const;
  bool is_zero() const;

  QMatrix operator*(const QMatrix& o) const;
  QVector operator*(const QVector& v) const;
  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  QMatrix& operator*=(const Rational& c);
  bool operator==(const QMatrix& o) const;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

enum class PivotStrategy { FirstPivot, LastPivot };

struct RrefResult {
  QMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RrefResult rref(const QMatrix& m);
std::size_t rank(const QMatrix& m);

struct Subspace {
  std::size_t ambient_dim = 0;
  std::vector<QVector> basis;

  std::size_t dim() const { return basis.size(); }
  bool contains(const QVector& v) const;
};

// One basis vector per free column of rref(m), with a 1 in that column.
Subspace kernel_basis(const QMatrix& m);

std::optional<QVector> solve(const QMatrix& a, const QVector& b);

struct CohomologyResult {
  std::size_t h_dim = 0;
  Subspace representatives;  // cocycles completing a basis of the coboundaries
  QMatrix projector;         // h_dim x ambient, valid on cocycles
  QVector project(const QVector& cocycle) const { return projector * cocycle; }
};

// H at the middle of V --d_in--> W --d_out--> X; throws unless d_out * d_in == 0.
CohomologyResult cohomology(const QMatrix& d_in, const QMatrix& d_out,
                            PivotStrategy strategy = PivotStrategy::FirstPivot);

// sigma with p * sigma == id for surjective p; supported on pivot columns.
QMatrix linear_section(const QMatrix& p, PivotStrategy strategy = PivotStrategy::FirstPivot);

// Linear Sigma_n-representation given by the matrices of adjacent transpositions.
class GroupAction {
 public:
  GroupAction() = default;
  GroupAction(int n, std::size_t dim, std::vector<QMatrix> adjacent);

  static GroupAction trivial(int n, std::size_t dim);
  static GroupAction regular(int n);
  static GroupAction sign(int n);

  int arity() const { return n_; }
  std::size_t dim() const { return dim_; }
  const std::vector<QMatrix>& generators() const { return adjacent_; }
  QMatrix matrix(const Perm& sigma) const;

 private:
  int n_ = 0;
  std::size_t dim_ = 0;
  std::vector<QMatrix> adjacent_;
};

// (1/n!) sum_sigma tgt(sigma) * raw * src(sigma)^{-1}
QMatrix average(const GroupAction& src_action, const GroupAction& tgt_action, const QMatrix& raw);

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opmin
