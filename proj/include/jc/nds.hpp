#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jc/algebra.hpp"

namespace jc {

// Normal decomposition systems (X, G, gamma) in three instantiations:
//   EJA        — an essentially simple algebra, G = Aut(V), gamma places the
//                sorted eigenvalues on a fixed reference frame
//   SignedPerm — R^n under signed permutations, gamma(x) = |x| sorted desc
//   Rect       — m x n matrices under X -> U X V^T, gamma(X) = diag of
//                singular values sorted desc
// Points are flat coordinate vectors in all three systems (row-major for
// Rect); the inner product is the plain dot product throughout.

using Point = std::vector<double>;

class NDSystem {
 public:
  enum class Kind { EJA, SignedPerm, Rect };

  static NDSystem eja(AlgebraDescriptor algebra);  // rejects non-essentially-simple algebras
  static NDSystem signed_perm(int n);
  static NDSystem rect(int rows, int cols);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const AlgebraDescriptor& algebra() const { return algebra_; }
  const std::vector<Element>& reference_frame() const { return reference_frame_; }
  int n() const { return n_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Element to_element(const Point& x) const;  // EJA only
  Point from_element(const Element& x) const;

 private:
  Kind kind_ = Kind::SignedPerm;
  int dim_ = 0;
  AlgebraDescriptor algebra_;
  std::vector<Element> reference_frame_;
  int n_ = 0, rows_ = 0, cols_ = 0;
};

double nds_inner(const Point& x, const Point& y);
double nds_norm(const Point& x);

Point gamma(const NDSystem& sys, const Point& x);

/// max over A in G of <Ax, w>, which equals <gamma(x), gamma(w)>.
double max_inner_over_group(const NDSystem& sys, const Point& x, const Point& w);

/// <gamma(x), gamma(w)> - <x, w>; nonnegative by the system axioms.
double tvn_gap(const NDSystem& sys, const Point& x, const Point& w);

struct NdsCommuteCertificate {
  bool commutes = false;
  double gap = 0.0;
  double tol = 0.0;
  // EJA: joint Jordan frame carrying both points with descending coefficients.
  std::optional<std::vector<Element>> joint_frame;
  std::vector<double> x_coeffs, w_coeffs;
  // SignedPerm (n <= 4): witness A with x = A gamma(x), w = A gamma(w).
  std::optional<DenseMatrix> witness;
  // Rect: joint orthogonal pair (U, V).
  std::optional<DenseMatrix> joint_u, joint_v;
  double reconstruction_residual = 0.0;  // worst of the two points, when a certificate exists
};

/// Equality form of the max-inner-product identity: commutes iff the
/// trace-inequality gap is within tol (default 1e-8 * (1 + ||gamma x|| ||gamma w||)).
NdsCommuteCertificate nds_commute(const NDSystem& sys, const Point& x, const Point& w, double tol = -1.0);

struct OrbitMinimum {
  double value = 0.0;
  Point argmin;
};

/// Minimizes <b, x> over conv{A a : A in G} by enumerating orbit vertices;
/// SignedPerm with n <= 4 only.
OrbitMinimum orbit_linear_minimize(const NDSystem& sys, const Point& b, const Point& a);

struct AxiomReport {
  int trials = 0;
  double invariance_residual = 0.0;  // axiom (a): max ||gamma(Ax) - gamma(x)||
  double reach_residual = 0.0;       // axiom (b): max ||x - A gamma(x)|| with the constructed A
  double min_gap = 0.0;              // axiom (c): min of tvn_gap over sampled pairs
};

AxiomReport axiom_check(const NDSystem& sys, std::uint64_t seed, int trials);

struct PairingReport {
  bool holds = false;
  int samples = 0;
  double min_nonzero_pairing = 0.0;
};

/// Definiteness of the gamma pairing on SignedPerm and Rect systems: it
/// is strictly positive for two nonzero points (so it vanishes only when one
/// point is zero). Throws UnsupportedSystemError for EJA systems, where the
/// property fails.
PairingReport definite_gamma_pairing_check(const NDSystem& sys, int samples, std::uint64_t seed);

// Enumeration of the signed permutation group (n small). Each matrix acts
// as y_i = sign_i * x_{perm_i}.
std::vector<DenseMatrix> signed_permutations(int n);

}  // namespace jc
