#include "jc/autos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jc {

Element random_element(const AlgebraDescriptor& algebra, Rng& rng) {
  std::vector<double> c(algebra.dim());
  for (double& v : c) v = rng.normal();
  return Element(algebra, std::move(c));
}

Derivation derivation_from_pair(const Element& u, const Element& v) {
  require_same_algebra(u, v, "derivation_from_pair");
  const DenseMatrix lu = lmap(u).matrix;
  const DenseMatrix lv = lmap(v).matrix;
  Derivation d{LinearMap{u.algebra(), lu * lv - lv * lu}, std::make_pair(u, v)};
  return d;
}

LinearMap exp_derivation(const Derivation& d, double t) {
  return LinearMap{d.map.algebra, mat_exp(t * d.map.matrix)};
}

AutomorphismCheck is_automorphism(const LinearMap& a, double tol) {
  const int dim = a.algebra.dim();
  if (a.matrix.rows() != dim || a.matrix.cols() != dim)
    throw DimensionMismatchError("is_automorphism: matrix does not match algebra dimension");

  AutomorphismCheck out;
  const DenseMatrix gram = a.matrix.transposed() * a.matrix;
  out.orth_residual = (gram - DenseMatrix::identity(dim)).frobenius_norm();

  std::vector<Element> images;
  images.reserve(dim);
  for (int i = 0; i < dim; ++i) images.push_back(apply(a, Element::basis(a.algebra, i)));
  for (int i = 0; i < dim; ++i) {
    const Element bi = Element::basis(a.algebra, i);
    for (int j = i; j < dim; ++j) {
      const Element prod = jordan_product(bi, Element::basis(a.algebra, j));
      const double r = (apply(a, prod) - jordan_product(images[i], images[j])).norm();
      out.mult_residual = std::max(out.mult_residual, r);
    }
  }
  out.residual = std::max(out.orth_residual, out.mult_residual);
  out.ok = out.residual <= tol;
  return out;
}

std::vector<std::vector<int>> isomorphism_groups(const AlgebraDescriptor& algebra) {
  std::vector<std::vector<int>> groups;
  std::vector<SimpleFactor> reps;
  for (int f = 0; f < algebra.factor_count(); ++f) {
    const auto& fac = algebra.factors()[f];
    bool placed = false;
    for (std::size_t g = 0; g < reps.size(); ++g) {
      if (reps[g] == fac) {
        groups[g].push_back(f);
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps.push_back(fac);
      groups.push_back({f});
    }
  }
  return groups;
}

namespace {

// Coordinate permutation swapping factor blocks according to `perm` inside
// one isomorphism group (all blocks have identical layout).
DenseMatrix factor_permutation_matrix(const AlgebraDescriptor& algebra, const std::vector<int>& group,
                                      const std::vector<int>& perm) {
  DenseMatrix p = DenseMatrix::identity(algebra.dim());
  const int bdim = algebra.factors()[group[0]].dim();
  for (std::size_t k = 0; k < group.size(); ++k) {
    const int dst = algebra.offset(group[k]);
    const int src = algebra.offset(group[perm[k]]);
    for (int i = 0; i < bdim; ++i) {
      p(dst + i, dst + i) = 0.0;
      p(dst + i, src + i) = 0.0;
    }
  }
  for (std::size_t k = 0; k < group.size(); ++k) {
    const int dst = algebra.offset(group[k]);
    const int src = algebra.offset(group[perm[k]]);
    for (int i = 0; i < bdim; ++i) p(dst + i, src + i) = 1.0;
  }
  return p;
}

}  // namespace

LinearMap random_automorphism(const AlgebraDescriptor& algebra, Rng& rng) {
  DenseMatrix m = DenseMatrix::identity(algebra.dim());
  for (int rep = 0; rep < 2; ++rep) {
    const Element u = random_element(algebra, rng);
    const Element v = random_element(algebra, rng);
    const Derivation d = derivation_from_pair(u, v);
    const double t = rng.uniform(-1.0, 1.0);
    m = exp_derivation(d, t).matrix * m;
  }
  // e^{tD} stays in the identity component; factor swaps reach the rest of
  // the product structure for repeated isomorphic factors.
  for (const auto& group : isomorphism_groups(algebra)) {
    if (group.size() < 2) continue;
    std::vector<int> perm(group.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.below(i + 1)]);
    m = factor_permutation_matrix(algebra, group, perm) * m;
  }
  return LinearMap{algebra, std::move(m)};
}

LinearMap random_automorphism(const AlgebraDescriptor& algebra, std::uint64_t seed) {
  Rng rng(seed);
  return random_automorphism(algebra, rng);
}

DenseMatrix coupling_norms(const LinearMap& a) {
  const auto& algebra = a.algebra;
  if (a.matrix.rows() != algebra.dim() || a.matrix.cols() != algebra.dim())
    throw DimensionMismatchError("coupling_norms: matrix does not match algebra dimension");
  const auto groups = isomorphism_groups(algebra);
  const int g = static_cast<int>(groups.size());
  DenseMatrix norms(g, g);
  for (int gi = 0; gi < g; ++gi)
    for (int gj = 0; gj < g; ++gj) {
      double s = 0.0;
      for (int fi : groups[gi])
        for (int fj : groups[gj]) {
          const int ro = algebra.offset(fi), co = algebra.offset(fj);
          const int rd = algebra.factors()[fi].dim(), cd = algebra.factors()[fj].dim();
          for (int i = 0; i < rd; ++i)
            for (int j = 0; j < cd; ++j) s += a.matrix(ro + i, co + j) * a.matrix(ro + i, co + j);
        }
      norms(gi, gj) = std::sqrt(s);
    }
  return norms;
}

namespace {

// Unit eigenvector of a rank-one projector given in Sym coordinates.
std::vector<double> projector_axis(const DenseMatrix& m) {
  const int n = m.rows();
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (m(i, i) > m(best, best)) best = i;
  const double d = std::sqrt(std::max(m(best, best), 0.0));
  std::vector<double> q(n, 0.0);
  if (d <= 0.0) throw InvalidFrameError("frame: idempotent has no positive diagonal");
  for (int i = 0; i < n; ++i) q[i] = m(i, best) / d;
  return q;
}

// Axis of a primitive spin idempotent c = (1/2)(1, u): natural block times 2.
std::vector<double> spin_axis(const Element& c, int f) {
  const auto blk = c.block(f);
  const int n = static_cast<int>(blk.size());
  std::vector<double> u(n - 1);
  for (int i = 1; i < n; ++i) u[i - 1] = blk[i] * 1.4142135623730950488;  // 2 * natural
  double nrm = 0.0;
  for (double v : u) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (std::abs(nrm - 1.0) > 1e-6) throw InvalidFrameError("frame: spin idempotent axis is not unit length");
  for (double& v : u) v /= nrm;
  return u;
}

// Householder reflection H with H u = w (orthogonal; identity when u == w).
DenseMatrix reflection_taking(const std::vector<double>& u, const std::vector<double>& w) {
  const int n = static_cast<int>(u.size());
  std::vector<double> v(n);
  double vnorm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = u[i] - w[i];
    vnorm2 += v[i] * v[i];
  }
  DenseMatrix h = DenseMatrix::identity(n);
  if (vnorm2 <= 1e-28) return h;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) -= 2.0 * v[i] * v[j] / vnorm2;
  return h;
}

}  // namespace

LinearMap frame_transport(const std::vector<Element>& f1, const std::vector<Element>& f2) {
  validate_frame(f1);
  validate_frame(f2);
  const auto& algebra = f1[0].algebra();
  if (!(f2[0].algebra() == algebra)) throw AlgebraMismatchError("frame_transport: frames on different algebras");
  if (!algebra.essentially_simple())
    throw NotEssentiallySimpleError("frame_transport: algebra is not essentially simple");

  const int dim = algebra.dim();
  const SimpleFactor fac = algebra.factors()[0];

  if (fac.kind == FactorKind::Real) {
    // R^k: frames are permutations of the coordinate idempotents.
    auto slot_of = [&](const Element& c) {
      for (int i = 0; i < dim; ++i)
        if (std::abs(c.coords()[i] - 1.0) < 1e-6) return i;
      throw InvalidFrameError("frame_transport: real frame element is not a coordinate idempotent");
    };
    DenseMatrix p(dim, dim);
    for (std::size_t i = 0; i < f1.size(); ++i) p(slot_of(f2[i]), slot_of(f1[i])) = 1.0;
    return LinearMap{algebra, std::move(p)};
  }

  if (fac.kind == FactorKind::Sym) {
    const int n = fac.n;
    DenseMatrix q1(n, n), q2(n, n);
    for (int k = 0; k < n; ++k) {
      const auto a1 = projector_axis(sym_block_matrix(f1[k], 0));
      const auto a2 = projector_axis(sym_block_matrix(f2[k], 0));
      for (int i = 0; i < n; ++i) {
        q1(i, k) = a1[i];
        q2(i, k) = a2[i];
      }
    }
    const DenseMatrix u = q2 * q1.transposed();
    // matrix of X -> U X U^T in the orthonormal coordinates
    DenseMatrix m(dim, dim);
    const DenseMatrix ut = u.transposed();
    for (int j = 0; j < dim; ++j) {
      const DenseMatrix bj = sym_coords_to_matrix(n, Element::basis(algebra, j).coords());
      const DenseMatrix img = u * bj * ut;
      std::vector<double> col(dim);
      sym_matrix_to_coords(img, col);
      for (int i = 0; i < dim; ++i) m(i, j) = col[i];
    }
    return LinearMap{algebra, std::move(m)};
  }

  // Spin: rotate the axis of the first frame element onto its target; the
  // second element is e - first, so it follows along.
  const auto u_axis = spin_axis(f1[0], 0);
  const auto w_axis = spin_axis(f2[0], 0);
  const DenseMatrix r = reflection_taking(u_axis, w_axis);
  DenseMatrix m(dim, dim);
  m(0, 0) = 1.0;
  for (int i = 0; i < dim - 1; ++i)
    for (int j = 0; j < dim - 1; ++j) m(1 + i, 1 + j) = r(i, j);
  return LinearMap{algebra, std::move(m)};
}

}  // namespace jc
