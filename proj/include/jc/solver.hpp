#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "jc/nds.hpp"
#include "jc/specsets.hpp"

namespace jc {

// Optimization and equilibrium layer: projected-gradient minimization of
// Theta + F over a convex spectral set, extragradient VI/CP solving, and
// NDS minimization. Every solve emits a machine-checkable commutation
// certificate for its converged point.

struct ThetaSpec {
  enum class Kind { Linear, QuadraticDistance, LinearPlusQuadratic, Custom };

  Kind kind = Kind::QuadraticDistance;
  std::vector<double> c;      // Linear / LinearPlusQuadratic
  std::vector<double> d;      // QuadraticDistance anchor
  double quad_weight = 1.0;   // LinearPlusQuadratic: <c,x> + (w/2)||x||^2
  std::function<double(const std::vector<double>&)> custom_f;
  std::function<std::vector<double>(const std::vector<double>&)> custom_grad;

  static ThetaSpec linear(std::vector<double> c);
  static ThetaSpec quadratic_distance(std::vector<double> d);
  static ThetaSpec linear_plus_quadratic(std::vector<double> c, double quad_weight = 1.0);
};

double theta_eval(const ThetaSpec& t, const std::vector<double>& x);
std::vector<double> theta_grad(const ThetaSpec& t, const std::vector<double>& x);

struct Objective {
  ThetaSpec theta;
  std::optional<SpectralFunctionSpec> fspec;  // F = f o lambda
};

struct SolveOptions {
  double stop_tol = 1e-9;       // projected-gradient stationarity
  int max_iterations = 10000;
  double armijo_c = 1e-4;
  double initial_step = 1.0;
  double certificate_tol = 1e-6;
  std::uint64_t seed = 42;      // dual-margin sampling in cp_solve
};

struct Solution {
  Element point;
  double value = 0.0;
  double stationarity = 0.0;  // ||x - P(x - g)|| at the returned point
  int iterations = 0;
  bool converged = false;
};

struct CommutationCertificate {
  Element a, b;
  double residual = 0.0;  // commute_residual(a, b)
  double eigen_alignment = 0.0;  // sum_i lambda_i(a) lambda_{n+1-i}(b)
  std::optional<SimultaneousFrame> joint_frame;  // attached when it verifies at 1e-8
};

CommutationCertificate make_certificate(const Element& a, const Element& b, double tol = 1e-6);

struct MinimizeResult {
  Solution solution;
  CommutationCertificate certificate;  // pairs a with Theta'(a)
};

/// Projected gradient with Armijo backtracking over a convex spec.
MinimizeResult minimize(const AlgebraDescriptor& algebra, const SpectralSetSpec& spec, const Objective& obj,
                        const SolveOptions& opts = {}, const std::optional<Element>& start = std::nullopt);

using GOracle = std::function<Element(const Element&)>;

struct ViResult {
  Solution solution;
  CommutationCertificate certificate;  // pairs a with G(a)
};

/// Extragradient iteration with an adaptive step ratio test; monotonicity
/// of G is the caller's responsibility.
ViResult vi_solve(const AlgebraDescriptor& algebra, const SpectralSetSpec& spec, const GOracle& g,
                  const SolveOptions& opts = {}, const std::optional<Element>& start = std::nullopt);

struct CpResult {
  Solution solution;
  CommutationCertificate certificate;
  double complementarity = 0.0;  // <a, G(a)>
  double dual_margin = 0.0;      // min <G(a), k> over sampled cone directions
  int dual_samples = 0;
};

/// Cone complementarity through vi_solve over a weakly spectral cone spec.
CpResult cp_solve(const AlgebraDescriptor& algebra, const SpectralSetSpec& cone_spec, const GOracle& g,
                  const SolveOptions& opts = {}, const std::optional<Element>& start = std::nullopt);

// G-invariant constraint sets on an NDS.
struct NdsOmega {
  enum class Kind { WholeSpace, NormBall, OrbitPolytope };
  Kind kind = Kind::WholeSpace;
  double radius = 1.0;  // NormBall
  Point vertex;         // OrbitPolytope generator a0 (SignedPerm only)

  static NdsOmega whole_space();
  static NdsOmega norm_ball(double r);
  static NdsOmega orbit_polytope(Point a0);
};

// Convex G-invariant term weight * ||x||^power (power >= 2); weight 0 is F = 0.
struct NdsInvariantFn {
  double weight = 0.0;
  double power = 2.0;
};

Point project_omega(const NDSystem& sys, const NdsOmega& omega, const Point& x);

struct NdsSolution {
  Point point;
  double value = 0.0;
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct NdsMinimizeResult {
  NdsSolution solution;
  NdsCommuteCertificate certificate;  // nds_commute(a, -Theta'(a))
  Point minus_theta_grad;
};

NdsMinimizeResult nds_minimize(const NDSystem& sys, const NdsOmega& omega, const ThetaSpec& theta,
                               const NdsInvariantFn& f = {}, const SolveOptions& opts = {},
                               const std::optional<Point>& start = std::nullopt);

struct ComplementaryPairResult {
  Element a, b;
  double pairing = 0.0;  // <a, b>
  CommutationCertificate certificate;
};

/// Builds a complementary pair supported on disjoint subsets of a Jordan
/// frame (positive random coefficients) and certifies commutation plus the
/// anti-aligned eigenvalue pairing.
ComplementaryPairResult complementary_pair_commutes(const std::vector<Element>& frame,
                                                    const std::vector<int>& support_a,
                                                    const std::vector<int>& support_b,
                                                    std::uint64_t seed = 42);

}  // namespace jc
