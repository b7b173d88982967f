#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jc/numerics.hpp"

namespace jc {

// Euclidean Jordan algebra core for products of Real, Sym(n) and Spin(n)
// factors. Elements are stored in an orthonormal basis of the canonical
// trace inner product:
//   Real    -> the scalar itself
//   Sym(n)  -> E_ii and (E_ij + E_ji)/sqrt(2), upper triangle row-wise
//   Spin(n) -> coordinates scaled by sqrt(2)
// so that <x,y>_tr is the plain coordinate dot product, L_a is a symmetric
// matrix, and automorphisms are orthogonal.

enum class FactorKind { Real, Sym, Spin };

struct SimpleFactor {
  FactorKind kind = FactorKind::Real;
  int n = 1;  // Sym: matrix side (>= 2); Spin: ambient dimension (>= 3)

  int dim() const;
  int rank() const;
  bool operator==(const SimpleFactor&) const = default;
};

class AlgebraDescriptor {
 public:
  AlgebraDescriptor() = default;
  explicit AlgebraDescriptor(std::vector<SimpleFactor> factors);

  static AlgebraDescriptor real_power(int k);  // R^k
  static AlgebraDescriptor sym(int n);
  static AlgebraDescriptor spin(int n);

  const std::vector<SimpleFactor>& factors() const { return factors_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }
  int dim() const { return offsets_.back(); }
  int rank() const { return rank_offsets_.back(); }
  int offset(int f) const { return offsets_[f]; }
  int rank_offset(int f) const { return rank_offsets_[f]; }

  // R^k, a single Sym factor, or a single Spin factor.
  bool essentially_simple() const;

  bool operator==(const AlgebraDescriptor& other) const { return factors_ == other.factors_; }

 private:
  std::vector<SimpleFactor> factors_;
  std::vector<int> offsets_{0};
  std::vector<int> rank_offsets_{0};
};

class Element {
 public:
  Element() = default;
  Element(AlgebraDescriptor algebra, std::vector<double> coords);

  static Element zero(const AlgebraDescriptor& a);
  static Element unit(const AlgebraDescriptor& a);
  static Element basis(const AlgebraDescriptor& a, int i);

  const AlgebraDescriptor& algebra() const { return algebra_; }
  const std::vector<double>& coords() const { return coords_; }
  std::vector<double>& coords() { return coords_; }
  std::span<const double> block(int f) const;
  double norm() const;

 private:
  AlgebraDescriptor algebra_;
  std::vector<double> coords_;
};

Element operator+(Element x, const Element& y);
Element operator-(Element x, const Element& y);
Element operator*(double s, Element x);

// Natural (user-facing) block encodings: Real [t]; Sym(n) upper triangle of
// the matrix row-wise; Spin(n) [x0, xbar...].
Element element_from_blocks(const AlgebraDescriptor& a, const std::vector<std::vector<double>>& blocks);
std::vector<std::vector<double>> natural_blocks(const Element& x);

// Sym factor codec between orthonormal coordinates and the actual matrix.
DenseMatrix sym_block_matrix(const Element& x, int f);
DenseMatrix sym_coords_to_matrix(int n, std::span<const double> coords);
void sym_matrix_to_coords(const DenseMatrix& m, std::span<double> coords);

Element jordan_product(const Element& x, const Element& y);
double inner(const Element& x, const Element& y);
double trace(const Element& x);

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // descending, length rank
  std::vector<Element> frame;       // Jordan frame, same order
};

SpectralDecomposition spectral_decompose(const Element& x);
std::vector<double> eigenvalue_map(const Element& x);

// Sum_i coeffs[i] * frame[i].
Element combine(const std::vector<Element>& frame, const std::vector<double>& coeffs);

struct LinearMap {
  AlgebraDescriptor algebra;
  DenseMatrix matrix;  // dim x dim over the orthonormal basis
};

Element apply(const LinearMap& map, const Element& x);
LinearMap compose(const LinearMap& a, const LinearMap& b);  // a after b

/// Matrix of x -> a o x; symmetric in the canonical basis.
LinearMap lmap(const Element& a);

/// ||L_a L_b - L_b L_a||_F / (1 + ||L_a||_F ||L_b||_F); zero iff a and b
/// operator commute.
double commute_residual(const Element& a, const Element& b);

struct SimultaneousFrame {
  std::vector<Element> frame;
  std::vector<double> a_coeffs;
  std::vector<double> b_coeffs;
};

/// Common Jordan frame of an operator-commuting pair, built by decomposing
/// a + eps*b for a generic small eps and verified by reconstruction.
/// Empty when commute_residual(a, b) > tol or no verified frame is found.
std::optional<SimultaneousFrame> simultaneous_frame(const Element& a, const Element& b, double tol = 1e-8);

// Throws InvalidFrameError unless frame is a Jordan frame of its algebra
// (idempotent, pairwise orthogonal, summing to the unit) within tol.
void validate_frame(const std::vector<Element>& frame, double tol = 1e-8);

void require_same_algebra(const Element& x, const Element& y, const char* where);

}  // namespace jc
