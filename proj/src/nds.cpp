#include "jc/nds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jc/autos.hpp"

namespace jc {

NDSystem NDSystem::eja(AlgebraDescriptor algebra) {
  if (!algebra.essentially_simple())
    throw NotEssentiallySimpleError("nds: EJA system requires an essentially simple algebra");
  NDSystem sys;
  sys.kind_ = Kind::EJA;
  sys.dim_ = algebra.dim();
  sys.algebra_ = std::move(algebra);
  // Reference frame: the natural coordinate/diagonal frame, in index order.
  const auto& a = sys.algebra_;
  if (a.factors()[0].kind == FactorKind::Real) {
    for (int i = 0; i < a.dim(); ++i) sys.reference_frame_.push_back(Element::basis(a, i));
  } else if (a.factors()[0].kind == FactorKind::Sym) {
    const int n = a.factors()[0].n;
    for (int k = 0; k < n; ++k) {
      DenseMatrix e(n, n);
      e(k, k) = 1.0;
      std::vector<double> c(a.dim(), 0.0);
      sym_matrix_to_coords(e, c);
      sys.reference_frame_.push_back(Element(a, std::move(c)));
    }
  } else {
    const int n = a.factors()[0].n;
    for (int sgn : {+1, -1}) {
      std::vector<double> blk(n, 0.0);
      blk[0] = 0.5;
      blk[1] = sgn * 0.5;
      sys.reference_frame_.push_back(element_from_blocks(a, {blk}));
    }
  }
  return sys;
}

NDSystem NDSystem::signed_perm(int n) {
  if (n < 1) throw SchemaError("nds: signed_perm needs n >= 1");
  NDSystem sys;
  sys.kind_ = Kind::SignedPerm;
  sys.dim_ = n;
  sys.n_ = n;
  return sys;
}

NDSystem NDSystem::rect(int rows, int cols) {
  if (rows < 1 || cols < 1) throw SchemaError("nds: rect needs positive dimensions");
  NDSystem sys;
  sys.kind_ = Kind::Rect;
  sys.dim_ = rows * cols;
  sys.rows_ = rows;
  sys.cols_ = cols;
  return sys;
}

Element NDSystem::to_element(const Point& x) const {
  if (kind_ != Kind::EJA) throw UnsupportedSystemError("nds: points are elements only in EJA systems");
  return Element(algebra_, x);
}

Point NDSystem::from_element(const Element& x) const { return x.coords(); }

double nds_inner(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw DimensionMismatchError("nds_inner: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double nds_norm(const Point& x) { return std::sqrt(nds_inner(x, x)); }

namespace {

void require_point(const NDSystem& sys, const Point& x, const char* where) {
  if (static_cast<int>(x.size()) != sys.dim())
    throw DimensionMismatchError(std::string(where) + ": point does not match system dimension");
}

DenseMatrix point_to_matrix(const NDSystem& sys, const Point& x) {
  DenseMatrix m(sys.rows(), sys.cols());
  m.data() = x;
  return m;
}

Point matrix_to_point(const DenseMatrix& m) { return m.data(); }

}  // namespace

Point gamma(const NDSystem& sys, const Point& x) {
  require_point(sys, x, "gamma");
  switch (sys.kind()) {
    case NDSystem::Kind::EJA: {
      const auto values = eigenvalue_map(sys.to_element(x));
      Element g = combine(sys.reference_frame(), values);
      return g.coords();
    }
    case NDSystem::Kind::SignedPerm: {
      Point g(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::abs(x[i]);
      std::sort(g.begin(), g.end(), std::greater<double>());
      return g;
    }
    case NDSystem::Kind::Rect: {
      const Svd s = svd(point_to_matrix(sys, x));
      DenseMatrix g(sys.rows(), sys.cols());
      for (std::size_t k = 0; k < s.sigma.size(); ++k) g(static_cast<int>(k), static_cast<int>(k)) = s.sigma[k];
      return matrix_to_point(g);
    }
  }
  throw Error("gamma: unreachable");
}

double max_inner_over_group(const NDSystem& sys, const Point& x, const Point& w) {
  require_point(sys, x, "max_inner_over_group");
  require_point(sys, w, "max_inner_over_group");
  return nds_inner(gamma(sys, x), gamma(sys, w));
}

double tvn_gap(const NDSystem& sys, const Point& x, const Point& w) {
  return max_inner_over_group(sys, x, w) - nds_inner(x, w);
}

std::vector<DenseMatrix> signed_permutations(int n) {
  std::vector<DenseMatrix> out;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int mask = 0; mask < (1 << n); ++mask) {
      DenseMatrix a(n, n);
      for (int i = 0; i < n; ++i) a(i, perm[i]) = (mask >> i) & 1 ? -1.0 : 1.0;
      out.push_back(std::move(a));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

NdsCommuteCertificate nds_commute(const NDSystem& sys, const Point& x, const Point& w, double tol) {
  require_point(sys, x, "nds_commute");
  require_point(sys, w, "nds_commute");
  const Point gx = gamma(sys, x);
  const Point gw = gamma(sys, w);

  NdsCommuteCertificate cert;
  cert.gap = nds_inner(gx, gw) - nds_inner(x, w);
  cert.tol = tol >= 0.0 ? tol : 1e-8 * (1.0 + nds_norm(gx) * nds_norm(gw));
  cert.commutes = cert.gap <= cert.tol;
  if (!cert.commutes) return cert;

  const double scale = 1.0 + nds_norm(x) + nds_norm(w);
  switch (sys.kind()) {
    case NDSystem::Kind::EJA: {
      // Joint frame from x + eps*w; both coefficient vectors must come out
      // descending and reconstruct their point.
      const Element xe = sys.to_element(x);
      const Element we = sys.to_element(w);
      const double eps_scale = (1.0 + xe.norm()) / (1.0 + we.norm());
      for (double eps_rel : {1.37e-2, 4.93e-2, 7.81e-3}) {
        const SpectralDecomposition sd = spectral_decompose(xe + (eps_rel * eps_scale) * we);
        std::vector<double> xc(sd.frame.size()), wc(sd.frame.size());
        for (std::size_t i = 0; i < sd.frame.size(); ++i) {
          xc[i] = inner(xe, sd.frame[i]);
          wc[i] = inner(we, sd.frame[i]);
        }
        const double res = std::max((xe - combine(sd.frame, xc)).norm(), (we - combine(sd.frame, wc)).norm());
        bool descending = true;
        for (std::size_t i = 1; i < xc.size(); ++i)
          if (xc[i - 1] < xc[i] - 1e-7 * scale || wc[i - 1] < wc[i] - 1e-7 * scale) descending = false;
        if (res <= 1e-8 * scale && descending) {
          cert.joint_frame = sd.frame;
          cert.x_coeffs = std::move(xc);
          cert.w_coeffs = std::move(wc);
          cert.reconstruction_residual = res;
          return cert;
        }
      }
      cert.commutes = false;  // gap passed but no verifiable joint frame
      return cert;
    }
    case NDSystem::Kind::SignedPerm: {
      if (sys.n() > 4) return cert;  // witness search is optional and brute-force only
      double best = std::numeric_limits<double>::infinity();
      for (const auto& a : signed_permutations(sys.n())) {
        const Point ax = a * gx;
        const Point aw = a * gw;
        double res = 0.0;
        for (int i = 0; i < sys.n(); ++i)
          res = std::max({res, std::abs(ax[i] - x[i]), std::abs(aw[i] - w[i])});
        if (res < best) {
          best = res;
          cert.witness = a;
        }
      }
      cert.reconstruction_residual = best;
      if (best > 1e-8 * scale) {
        cert.witness.reset();
        cert.commutes = false;
      }
      return cert;
    }
    case NDSystem::Kind::Rect: {
      const double xn = nds_norm(x), wn = nds_norm(w);
      const double eps = 1.37e-2 * (1.0 + xn) / (1.0 + wn);
      DenseMatrix z = point_to_matrix(sys, x);
      const DenseMatrix wm = point_to_matrix(sys, w);
      z += eps * wm;
      const Svd s = svd(z);
      const DenseMatrix xm = point_to_matrix(sys, x);
      const DenseMatrix dx = s.u.transposed() * xm * s.v;
      const DenseMatrix dw = s.u.transposed() * wm * s.v;
      DenseMatrix rx(sys.rows(), sys.cols()), rw(sys.rows(), sys.cols());
      for (int k = 0; k < std::min(sys.rows(), sys.cols()); ++k) {
        rx(k, k) = dx(k, k);
        rw(k, k) = dw(k, k);
      }
      const double res = std::max((xm - s.u * rx * s.v.transposed()).frobenius_norm(),
                                  (wm - s.u * rw * s.v.transposed()).frobenius_norm());
      cert.reconstruction_residual = res;
      if (res <= 1e-8 * scale) {
        cert.joint_u = s.u;
        cert.joint_v = s.v;
      } else {
        cert.commutes = false;
      }
      return cert;
    }
  }
  return cert;
}

OrbitMinimum orbit_linear_minimize(const NDSystem& sys, const Point& b, const Point& a) {
  if (sys.kind() != NDSystem::Kind::SignedPerm || sys.n() > 4)
    throw UnsupportedSystemError("orbit_linear_minimize: only SignedPerm with n <= 4 is enumerable");
  require_point(sys, b, "orbit_linear_minimize");
  require_point(sys, a, "orbit_linear_minimize");
  OrbitMinimum out;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& g : signed_permutations(sys.n())) {
    const Point v = g * a;
    const double val = nds_inner(b, v);
    if (val < out.value) {
      out.value = val;
      out.argmin = v;
    }
  }
  return out;
}

namespace {

// Random orthogonal matrix as the exponential of a random skew matrix.
DenseMatrix random_orthogonal(int n, Rng& rng) {
  DenseMatrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = rng.normal();
      s(i, j) = v;
      s(j, i) = -v;
    }
  return mat_exp(s);
}

Point random_point(const NDSystem& sys, Rng& rng) {
  Point x(sys.dim());
  for (double& v : x) v = rng.normal();
  return x;
}

}  // namespace

AxiomReport axiom_check(const NDSystem& sys, std::uint64_t seed, int trials) {
  if (trials < 1) throw SchemaError("axiom_check: trials must be >= 1");
  Rng rng(seed);
  AxiomReport report;
  report.trials = trials;
  report.min_gap = std::numeric_limits<double>::infinity();

  for (int t = 0; t < trials; ++t) {
    const Point x = random_point(sys, rng);
    const Point gx = gamma(sys, x);

    // (a) gamma is G-invariant
    Point ax;
    switch (sys.kind()) {
      case NDSystem::Kind::EJA: {
        const LinearMap a = random_automorphism(sys.algebra(), rng);
        ax = a.matrix * x;
        break;
      }
      case NDSystem::Kind::SignedPerm: {
        Point y(x.size());
        std::vector<int> perm(sys.n());
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = sys.n() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        for (int i = 0; i < sys.n(); ++i) y[i] = (rng.below(2) ? -1.0 : 1.0) * x[perm[i]];
        ax = std::move(y);
        break;
      }
      case NDSystem::Kind::Rect: {
        const DenseMatrix u = random_orthogonal(sys.rows(), rng);
        const DenseMatrix v = random_orthogonal(sys.cols(), rng);
        ax = matrix_to_point(u * point_to_matrix(sys, x) * v.transposed());
        break;
      }
    }
    const Point gax = gamma(sys, ax);
    double inv = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) inv = std::max(inv, std::abs(gax[i] - gx[i]));
    report.invariance_residual = std::max(report.invariance_residual, inv);

    // (b) x = A gamma(x) for a constructed A
    double reach = 0.0;
    switch (sys.kind()) {
      case NDSystem::Kind::EJA: {
        const SpectralDecomposition sd = spectral_decompose(sys.to_element(x));
        const LinearMap a = frame_transport(sys.reference_frame(), sd.frame);
        Point rebuilt = a.matrix * gx;
        for (std::size_t i = 0; i < x.size(); ++i) reach = std::max(reach, std::abs(rebuilt[i] - x[i]));
        break;
      }
      case NDSystem::Kind::SignedPerm: {
        std::vector<int> idx(sys.n());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int i, int j) { return std::abs(x[i]) > std::abs(x[j]); });
        Point rebuilt(x.size(), 0.0);
        for (int k = 0; k < sys.n(); ++k)
          rebuilt[idx[k]] = (x[idx[k]] < 0.0 ? -1.0 : 1.0) * gx[k];
        for (std::size_t i = 0; i < x.size(); ++i) reach = std::max(reach, std::abs(rebuilt[i] - x[i]));
        break;
      }
      case NDSystem::Kind::Rect: {
        const Svd s = svd(point_to_matrix(sys, x));
        const DenseMatrix rebuilt = s.u * point_to_matrix(sys, gx) * s.v.transposed();
        reach = (rebuilt - point_to_matrix(sys, x)).frobenius_norm();
        break;
      }
    }
    report.reach_residual = std::max(report.reach_residual, reach);

    // (c) trace inequality
    const Point w = random_point(sys, rng);
    report.min_gap = std::min(report.min_gap, tvn_gap(sys, x, w));
  }
  return report;
}

PairingReport definite_gamma_pairing_check(const NDSystem& sys, int samples, std::uint64_t seed) {
  if (sys.kind() == NDSystem::Kind::EJA)
    throw UnsupportedSystemError("definite_gamma_pairing_check: gamma is indefinite on EJA systems");
  Rng rng(seed);
  PairingReport report;
  report.samples = samples;
  report.holds = true;
  report.min_nonzero_pairing = std::numeric_limits<double>::infinity();
  for (int t = 0; t < samples; ++t) {
    Point x = random_point(sys, rng);
    Point y = random_point(sys, rng);
    // gamma components are nonnegative and sorted, so the pairing dominates
    // gamma_1(x) * gamma_1(y) > 0 for nonzero points.
    const Point gx = gamma(sys, x);
    const Point gy = gamma(sys, y);
    const double pairing = nds_inner(gx, gy);
    if (pairing < gx[0] * gy[0] - 1e-12 * (1.0 + std::abs(pairing))) report.holds = false;
    if (gx[0] <= 0.0 && nds_norm(x) > 0.0) report.holds = false;
    if (pairing > 0.0) report.min_nonzero_pairing = std::min(report.min_nonzero_pairing, pairing);
    if (nds_norm(x) > 1e-8 && nds_norm(y) > 1e-8 && pairing <= 0.0) report.holds = false;
  }
  return report;
}

}  // namespace jc
