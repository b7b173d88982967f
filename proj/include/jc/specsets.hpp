#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "jc/algebra.hpp"
#include "jc/autos.hpp"

namespace jc {

// Weakly spectral set grammar over eigenvalues, Euclidean projection for the
// convex variants, an automorphism-invariance sampler, and the
// non-spectrality witness check.

struct SpectralSetSpec {
  enum class Kind { WholeSpace, SymmetricCone, SortedBox, TraceAffine, ProductPerFactor, PrimitiveCross };

  Kind kind = Kind::WholeSpace;
  std::vector<double> lower, upper;   // SortedBox: bounds on the sorted eigenvalue vector
  std::vector<double> trace_coeffs;   // TraceAffine: one coefficient per factor trace
  double trace_constant = 0.0;        // TraceAffine: sum_f coeff_f * tr(x_f) = constant
  std::vector<SpectralSetSpec> children;  // ProductPerFactor: per factor; TraceAffine: the intersected set
  int cross_factor = 0;               // PrimitiveCross: factor carrying the primitive idempotents

  static SpectralSetSpec whole_space();
  static SpectralSetSpec symmetric_cone();
  static SpectralSetSpec sorted_box(std::vector<double> lower, std::vector<double> upper);
  static SpectralSetSpec trace_affine(std::vector<double> coeffs, double constant, SpectralSetSpec of);
  static SpectralSetSpec product(std::vector<SpectralSetSpec> per_factor);
  static SpectralSetSpec primitive_cross(int factor = 0);

  bool convex() const;
};

// Shape checks against an algebra; throws SchemaError on mismatch.
void validate_spec(const SpectralSetSpec& spec, const AlgebraDescriptor& algebra);

/// How far x is from satisfying the membership conditions (0 when inside).
double contains_residual(const SpectralSetSpec& spec, const Element& x);
bool contains(const SpectralSetSpec& spec, const Element& x, double tol = 1e-8);

/// Euclidean projection for the convex variants. Eigenvalue-space
/// projections reuse x's own frame; TraceAffine over a nontrivial child
/// falls back to Dykstra alternation. Throws NonConvexSpecError for
/// PrimitiveCross.
Element project(const SpectralSetSpec& spec, const Element& x);

struct InvarianceReport {
  int trials = 0;
  int violations = 0;
  double max_residual = 0.0;
};

/// Samples points of the set and random automorphisms, counting membership
/// violations of A(x). Deterministic per seed.
InvarianceReport sampled_invariance(const SpectralSetSpec& spec, const AlgebraDescriptor& algebra,
                                    std::uint64_t seed, int trials, double tol = 1e-8);

/// Same machinery against a caller-supplied membership residual and point
/// sampler (used to demonstrate detection on non-invariant sets).
InvarianceReport sampled_invariance(const AlgebraDescriptor& algebra,
                                    const std::function<double(const Element&)>& membership_residual,
                                    const std::function<Element(Rng&)>& sample_point, std::uint64_t seed,
                                    int trials, double tol = 1e-8);

/// True iff lambda(x) == lambda(y) within tol, x is in the set and y is not:
/// a certificate that the set is not of the form lambda^{-1}(Q).
bool nonspectrality_witness(const SpectralSetSpec& spec, const Element& x, const Element& y, double tol = 1e-8);

// Symmetric functions of the eigenvalue vector and their recombined
// gradients F'(x) = sum_i df/dt_i (lambda(x)) c_i.
struct SpectralFunctionSpec {
  enum class Kind { Linear, Quadratic, PowerSum, LogBarrier, Custom };

  Kind kind = Kind::Quadratic;
  double power = 2.0;   // PowerSum exponent (integer >= 1)
  double weight = 1.0;  // overall multiplier
  std::function<double(const std::vector<double>&)> custom_f;
  std::function<std::vector<double>(const std::vector<double>&)> custom_grad;

  static SpectralFunctionSpec linear(double weight = 1.0);
  static SpectralFunctionSpec quadratic(double weight = 1.0);
  static SpectralFunctionSpec power_sum(double p, double weight = 1.0);
  static SpectralFunctionSpec log_barrier(double weight = 1.0);
};

/// f on a plain value vector (also used by the NDS layer).
double spectral_function_values(const SpectralFunctionSpec& fs, const std::vector<double>& t);
std::vector<double> spectral_function_grad_values(const SpectralFunctionSpec& fs, const std::vector<double>& t);

double spectral_function_eval(const SpectralFunctionSpec& fs, const Element& x);
Element spectral_function_grad(const SpectralFunctionSpec& fs, const Element& x);

}  // namespace jc
