#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace trafficflow {

using Vector = std::vector<double>;

/// Sorted, duplicate-free list of 0-based node indices.
using NodeSet = std::vector<std::size_t>;

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds a matrix from nested rows; all rows must have equal length.
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const { return data_; }

  double row_sum(std::size_t i) const;
  bool is_zero() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& m);

/// Row vector times matrix: (x M)_j = sum_i x_i m_ij.
Vector left_multiply(std::span<const double> x, const DenseMatrix& m);

double max_norm(std::span<const double> v);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
/// Induced infinity norm (max absolute row sum).
double inf_norm(const DenseMatrix& m);

/// Keeps rows listed in `keep`, zeroes the rest (P_A in the usual notation).
DenseMatrix mask_rows(const DenseMatrix& m, const NodeSet& keep);

/// Extracts rows `a` and columns `b` in ascending order ([P]_AB).
DenseMatrix submatrix(const DenseMatrix& m, const NodeSet& a, const NodeSet& b);

/// Pivot magnitude below this times the row scale counts as singular.
inline constexpr double kPivotTolerance = 1e-12;
/// A row whose sum is within this distance of one counts as a full row.
inline constexpr double kFullRowTolerance = 1e-14;
/// Residual threshold separating consistent from inconsistent singular systems.
inline constexpr double kConsistencyTolerance = 1e-9;

struct LinearSolveResult {
  enum class Kind { Unique, SingularConsistent, SingularInconsistent };

  Kind kind = Kind::Unique;
  /// Unique: the solution. SingularConsistent: one particular solution
  /// (free variables set to zero). Empty when inconsistent.
  Vector x;
  /// Basis of { y : y A = 0 } for singular systems.
  std::vector<Vector> null_basis;
  /// Ratio of largest to smallest accepted pivot magnitude.
  double condition_estimate = 0.0;
  /// ||x A - b||_inf of the returned x (or of the basic solution when
  /// inconsistent).
  double residual = 0.0;

  bool unique() const { return kind == Kind::Unique; }
};

/// Solves the row-vector system x A = b by Gaussian elimination with partial
/// pivoting on the transposed system. Throws std::invalid_argument when A is
/// not square or b has the wrong length.
LinearSolveResult solve_left(const DenseMatrix& a, std::span<const double> b);

struct SpectralRadius {
  double value = 0.0;
  /// True when some communicating block of the matrix has all row sums equal
  /// to one, which proves the radius is at least one. When the matrix is also
  /// substochastic, value is exactly 1.
  bool certified_one = false;
};

/// Spectral radius of a nonnegative square matrix from the Gelfand limit
/// ||A^k||^(1/k), evaluated by repeated squaring with renormalization.
/// Throws std::invalid_argument for negative entries or non-square input.
SpectralRadius spectral_radius(const DenseMatrix& m);

}  // namespace trafficflow
