#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "jc/algebra.hpp"
#include "jc/rng.hpp"

namespace jc {

// Derivations D = [L_u, L_v], automorphisms e^{tD}, validity checks and the
// product-structure (factor-coupling) diagnostics.

struct Derivation {
  LinearMap map;  // skew-symmetric in the orthonormal basis
  std::optional<std::pair<Element, Element>> generators;
};

Derivation derivation_from_pair(const Element& u, const Element& v);

LinearMap exp_derivation(const Derivation& d, double t);

struct AutomorphismCheck {
  bool ok = false;
  double residual = 0.0;       // max(orthogonality, multiplicativity)
  double orth_residual = 0.0;  // ||A^T A - I||_F
  double mult_residual = 0.0;  // max over basis pairs of ||A(bi o bj) - Abi o Abj||
};

/// Orthogonality plus multiplicativity over the full basis-pair grid.
AutomorphismCheck is_automorphism(const LinearMap& a, double tol = 1e-9);

/// Deterministic sampler: composes exponentials of random commutator
/// derivations and, for groups of isomorphic factors, a random factor
/// permutation. Sampled maps are automorphisms; no claim of covering the
/// whole group.
LinearMap random_automorphism(const AlgebraDescriptor& algebra, std::uint64_t seed);
LinearMap random_automorphism(const AlgebraDescriptor& algebra, Rng& rng);

/// Indices of factors grouped by isomorphism class (same kind and size),
/// in order of first appearance.
std::vector<std::vector<int>> isomorphism_groups(const AlgebraDescriptor& algebra);

/// Frobenius norms of the blocks of `a` under the isomorphism-group
/// partition; entry (i, j) couples group i rows with group j columns.
DenseMatrix coupling_norms(const LinearMap& a);

/// Automorphism mapping frame f1 onto f2 slot by slot. The algebra must be
/// essentially simple (R^k, one Sym factor, or one Spin factor).
LinearMap frame_transport(const std::vector<Element>& f1, const std::vector<Element>& f2);

// Random element with independent standard normal coordinates.
Element random_element(const AlgebraDescriptor& algebra, Rng& rng);

}  // namespace jc
