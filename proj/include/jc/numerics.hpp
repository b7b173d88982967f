#pragma once

#include <initializer_list>
#include <vector>

#include "jc/errors.hpp"

namespace jc {

/// Small dense row-major matrix. The whole library works at dimensions
/// below ~50, so everything here favors accuracy over asymptotics.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static DenseMatrix identity(int n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  DenseMatrix transposed() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_finite() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> operator*(const DenseMatrix& a, const std::vector<double>& x);

/// Symmetric eigendecomposition, m = V diag(values) V^T, values descending.
struct SymEig {
  std::vector<double> values;
  DenseMatrix vectors;  // orthonormal columns
};

/// Cyclic Jacobi sweeps; converges when the off-diagonal Frobenius norm
/// drops below 1e-13 * ||m||_F. Throws NonSymmetricError if the input is
/// asymmetric beyond 1e-12 relative, NonFiniteError on NaN/Inf.
SymEig sym_eig(const DenseMatrix& m);

/// Full SVD, m = U diag(sigma) V^T with U (rows x rows) and V (cols x cols)
/// orthogonal and sigma nonnegative descending of length min(rows, cols).
struct Svd {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;
};

/// One-sided Jacobi on the taller orientation; zero singular directions are
/// completed to an orthonormal basis.
Svd svd(const DenseMatrix& m);

/// Matrix exponential by scaling-and-squaring around a truncated series.
DenseMatrix mat_exp(const DenseMatrix& m);

// Solves a x = b by Gaussian elimination with partial pivoting.
// Returns false when the system is numerically singular.
bool solve_linear(DenseMatrix a, std::vector<double> b, std::vector<double>& x);

}  // namespace jc
