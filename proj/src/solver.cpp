#include "jc/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "jc/autos.hpp"
#include "jc/rng.hpp"

namespace jc {

ThetaSpec ThetaSpec::linear(std::vector<double> c) {
  ThetaSpec t;
  t.kind = Kind::Linear;
  t.c = std::move(c);
  return t;
}

ThetaSpec ThetaSpec::quadratic_distance(std::vector<double> d) {
  ThetaSpec t;
  t.kind = Kind::QuadraticDistance;
  t.d = std::move(d);
  return t;
}

ThetaSpec ThetaSpec::linear_plus_quadratic(std::vector<double> c, double quad_weight) {
  ThetaSpec t;
  t.kind = Kind::LinearPlusQuadratic;
  t.c = std::move(c);
  t.quad_weight = quad_weight;
  return t;
}

double theta_eval(const ThetaSpec& t, const std::vector<double>& x) {
  switch (t.kind) {
    case ThetaSpec::Kind::Linear: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += t.c[i] * x[i];
      return s;
    }
    case ThetaSpec::Kind::QuadraticDistance: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - t.d[i]) * (x[i] - t.d[i]);
      return 0.5 * s;
    }
    case ThetaSpec::Kind::LinearPlusQuadratic: {
      double s = 0.0, q = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        s += t.c[i] * x[i];
        q += x[i] * x[i];
      }
      return s + 0.5 * t.quad_weight * q;
    }
    case ThetaSpec::Kind::Custom:
      return t.custom_f(x);
  }
  return 0.0;
}

std::vector<double> theta_grad(const ThetaSpec& t, const std::vector<double>& x) {
  std::vector<double> g(x.size(), 0.0);
  switch (t.kind) {
    case ThetaSpec::Kind::Linear:
      g = t.c;
      break;
    case ThetaSpec::Kind::QuadraticDistance:
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] - t.d[i];
      break;
    case ThetaSpec::Kind::LinearPlusQuadratic:
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = t.c[i] + t.quad_weight * x[i];
      break;
    case ThetaSpec::Kind::Custom:
      g = t.custom_grad(x);
      break;
  }
  return g;
}

CommutationCertificate make_certificate(const Element& a, const Element& b, double tol) {
  CommutationCertificate cert;
  cert.a = a;
  cert.b = b;
  cert.residual = commute_residual(a, b);
  const auto la = eigenvalue_map(a);
  const auto lb = eigenvalue_map(b);
  const std::size_t n = la.size();
  for (std::size_t i = 0; i < n; ++i) cert.eigen_alignment += la[i] * lb[n - 1 - i];
  if (cert.residual <= tol) cert.joint_frame = simultaneous_frame(a, b, std::max(tol, 10.0 * cert.residual));
  return cert;
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec axpy(const Vec& x, double s, const Vec& y) {  // x + s*y
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + s * y[i];
  return r;
}

struct PgOut {
  Vec x;
  double value = 0.0;
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
};

PgOut projected_gradient(Vec x0, const std::function<Vec(const Vec&)>& proj,
                         const std::function<double(const Vec&)>& eval,
                         const std::function<Vec(const Vec&)>& grad, const SolveOptions& opts) {
  PgOut out;
  Vec x = proj(std::move(x0));
  double fx = eval(x);
  double step = opts.initial_step;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Vec g = grad(x);
    out.stationarity = norm(axpy(x, -1.0, proj(axpy(x, -1.0, g))));  // ||x - P(x - g)||
    if (out.stationarity <= opts.stop_tol) {
      out.converged = true;
      break;
    }
    step = std::min(step * 2.0, 1e8);
    bool accepted = false;
    while (step > 1e-18) {
      const Vec xc = proj(axpy(x, -step, g));
      const double fc = eval(xc);
      const double dxg = dot(g, axpy(xc, -1.0, x));
      const bool measurable = std::abs(dxg) > 1e-12 * (1.0 + std::abs(fx));
      if (measurable) {
        if (fc <= fx + opts.armijo_c * dxg) {
          x = xc;
          fx = fc;
          accepted = true;
          break;
        }
      } else if (fc <= fx + 2e-14 * (1.0 + std::abs(fx))) {
        // Objective differences below double resolution cannot drive Armijo;
        // accept on gradient-map contraction instead, guarding against any
        // real objective increase.
        const Vec gc = grad(xc);
        const double stat_c = norm(axpy(xc, -1.0, proj(axpy(xc, -1.0, gc))));
        if (stat_c <= 0.999 * out.stationarity) {
          x = xc;
          fx = fc;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no progress measurable; report the best iterate
  }
  out.x = std::move(x);
  out.value = fx;
  out.iterations = it;
  return out;
}

}  // namespace

MinimizeResult minimize(const AlgebraDescriptor& algebra, const SpectralSetSpec& spec, const Objective& obj,
                        const SolveOptions& opts, const std::optional<Element>& start) {
  validate_spec(spec, algebra);
  if (!spec.convex()) throw NonConvexSpecError("minimize: spec is not convex");

  auto proj = [&](const Vec& v) { return project(spec, Element(algebra, v)).coords(); };
  auto eval = [&](const Vec& v) {
    double s = theta_eval(obj.theta, v);
    if (obj.fspec) s += spectral_function_eval(*obj.fspec, Element(algebra, v));
    return s;
  };
  auto grad = [&](const Vec& v) {
    Vec g = theta_grad(obj.theta, v);
    if (obj.fspec) {
      const Element fg = spectral_function_grad(*obj.fspec, Element(algebra, v));
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += fg.coords()[i];
    }
    return g;
  };

  const Vec x0 = start ? start->coords() : Vec(algebra.dim(), 0.0);
  PgOut pg = projected_gradient(x0, proj, eval, grad, opts);

  MinimizeResult res{
      Solution{Element(algebra, pg.x), pg.value, pg.stationarity, pg.iterations, pg.converged},
      make_certificate(Element(algebra, pg.x), Element(algebra, theta_grad(obj.theta, pg.x)),
                       opts.certificate_tol)};
  return res;
}

ViResult vi_solve(const AlgebraDescriptor& algebra, const SpectralSetSpec& spec, const GOracle& g,
                  const SolveOptions& opts, const std::optional<Element>& start) {
  validate_spec(spec, algebra);
  if (!spec.convex()) throw NonConvexSpecError("vi_solve: spec is not convex");

  auto proj = [&](const Element& v) { return project(spec, v); };
  Element x = proj(start ? *start : Element::zero(algebra));
  double tau = opts.initial_step;
  double stationarity = std::numeric_limits<double>::infinity();
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Element gx = g(x);
    stationarity = (x - proj(x - gx)).norm();
    if (stationarity <= opts.stop_tol) {
      converged = true;
      break;
    }
    for (int attempt = 0; attempt < 60; ++attempt) {
      const Element y = proj(x - tau * gx);
      const Element gy = g(y);
      const double dxy = (y - x).norm();
      if (dxy <= 1e-300 || tau * (gy - gx).norm() <= 0.9 * dxy) {
        x = proj(x - tau * gy);
        tau = std::min(tau * 1.05, 1e6);
        break;
      }
      tau *= 0.7;
    }
  }

  const Element ga = g(x);
  ViResult res{Solution{x, 0.0, stationarity, it, converged},
               make_certificate(x, ga, opts.certificate_tol)};
  res.solution.value = inner(ga, x);  // <G(a), a>, the VI's natural scalar
  return res;
}

CpResult cp_solve(const AlgebraDescriptor& algebra, const SpectralSetSpec& cone_spec, const GOracle& g,
                  const SolveOptions& opts, const std::optional<Element>& start) {
  ViResult vi = vi_solve(algebra, cone_spec, g, opts, start);
  CpResult res{vi.solution, vi.certificate, 0.0, std::numeric_limits<double>::infinity(), 0};
  const Element& a = res.solution.point;
  const Element ga = g(a);
  res.complementarity = inner(a, ga);
  Rng rng(opts.seed);
  for (int s = 0; s < 64; ++s) {
    Element k = project(cone_spec, random_element(algebra, rng));
    const double kn = k.norm();
    if (kn <= 1e-12) continue;
    res.dual_margin = std::min(res.dual_margin, inner(ga, (1.0 / kn) * k));
    ++res.dual_samples;
  }
  if (res.dual_samples == 0) res.dual_margin = 0.0;
  return res;
}

NdsOmega NdsOmega::whole_space() { return NdsOmega{}; }

NdsOmega NdsOmega::norm_ball(double r) {
  NdsOmega o;
  o.kind = Kind::NormBall;
  o.radius = r;
  return o;
}

NdsOmega NdsOmega::orbit_polytope(Point a0) {
  NdsOmega o;
  o.kind = Kind::OrbitPolytope;
  o.vertex = std::move(a0);
  return o;
}

namespace {

// Projection of z (sorted descending, nonnegative) onto
//   { y : y_1 >= ... >= y_n >= 0,  sum_{i<=k} y_i <= sigma_k  for all k },
// which is the fundamental region of conv{A a0 : A signed permutation}.
// Solved exactly as a tiny QP by enumerating KKT active sets.
Vec project_majorization_region(const Vec& z, const Vec& sigma) {
  const int n = static_cast<int>(z.size());
  const int m = 2 * n;  // (n-1) monotonicity + 1 nonnegativity + n partial sums
  DenseMatrix gmat(m, n);
  Vec h(m, 0.0);
  for (int k = 0; k + 1 < n; ++k) {
    gmat(k, k) = -1.0;
    gmat(k, k + 1) = 1.0;
  }
  gmat(n - 1, n - 1) = -1.0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i <= k; ++i) gmat(n + k, i) = 1.0;
    h[n + k] = sigma[k];
  }

  const double tol = 1e-10 * (1.0 + norm(z));
  auto feasible = [&](const Vec& y) {
    for (int r = 0; r < m; ++r) {
      double s = -h[r];
      for (int j = 0; j < n; ++j) s += gmat(r, j) * y[j];
      if (s > tol) return false;
    }
    return true;
  };
  if (feasible(z)) return z;

  // subsets ordered by popcount so small active sets are found first
  std::vector<int> masks;
  for (int mask = 1; mask < (1 << m); ++mask)
    if (std::popcount(static_cast<unsigned>(mask)) <= n) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](int a, int b) {
    return std::popcount(static_cast<unsigned>(a)) < std::popcount(static_cast<unsigned>(b));
  });

  for (int mask : masks) {
    std::vector<int> rows;
    for (int r = 0; r < m; ++r)
      if (mask & (1 << r)) rows.push_back(r);
    const int s = static_cast<int>(rows.size());
    DenseMatrix gg(s, s);
    Vec rhs(s, 0.0);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        double v = 0.0;
        for (int c = 0; c < n; ++c) v += gmat(rows[i], c) * gmat(rows[j], c);
        gg(i, j) = v;
      }
      double gz = 0.0;
      for (int c = 0; c < n; ++c) gz += gmat(rows[i], c) * z[c];
      rhs[i] = gz - h[rows[i]];
    }
    Vec nu;
    if (!solve_linear(gg, rhs, nu)) continue;
    bool dual_ok = true;
    for (double v : nu)
      if (v < -tol) dual_ok = false;
    if (!dual_ok) continue;
    Vec y = z;
    for (int i = 0; i < s; ++i)
      for (int c = 0; c < n; ++c) y[c] -= nu[i] * gmat(rows[i], c);
    if (feasible(y)) return y;
  }
  throw Error("orbit polytope projection: no KKT active set found");
}

}  // namespace

Point project_omega(const NDSystem& sys, const NdsOmega& omega, const Point& x) {
  switch (omega.kind) {
    case NdsOmega::Kind::WholeSpace:
      return x;
    case NdsOmega::Kind::NormBall: {
      const double nx = nds_norm(x);
      if (nx <= omega.radius) return x;
      Point y = x;
      for (double& v : y) v *= omega.radius / nx;
      return y;
    }
    case NdsOmega::Kind::OrbitPolytope: {
      if (sys.kind() != NDSystem::Kind::SignedPerm)
        throw UnsupportedOmegaError("orbit polytope constraints require a SignedPerm system");
      if (sys.n() > 6) throw UnsupportedOmegaError("orbit polytope projection is enumerative; n <= 6 only");
      if (static_cast<int>(omega.vertex.size()) != sys.n())
        throw DimensionMismatchError("orbit polytope generator has wrong dimension");
      const int n = sys.n();
      const Point ga = gamma(sys, omega.vertex);
      Vec sigma(n, 0.0);
      double cum = 0.0;
      for (int k = 0; k < n; ++k) {
        cum += ga[k];
        sigma[k] = cum;
      }
      // reduce by symmetry: project gamma(x) in the fundamental region, then
      // carry the result back with the signed permutation aligning x
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](int i, int j) { return std::abs(x[i]) > std::abs(x[j]); });
      Vec z(n);
      for (int k = 0; k < n; ++k) z[k] = std::abs(x[idx[k]]);
      const Vec y = project_majorization_region(z, sigma);
      Point out(n, 0.0);
      for (int k = 0; k < n; ++k) out[idx[k]] = (x[idx[k]] < 0.0 ? -1.0 : 1.0) * y[k];
      return out;
    }
  }
  throw Error("project_omega: unreachable");
}

NdsMinimizeResult nds_minimize(const NDSystem& sys, const NdsOmega& omega, const ThetaSpec& theta,
                               const NdsInvariantFn& f, const SolveOptions& opts,
                               const std::optional<Point>& start) {
  if (f.weight != 0.0 && f.power < 2.0)
    throw UnsupportedOmegaError("nds_minimize: invariant term needs power >= 2 for a smooth gradient");

  auto proj = [&](const Vec& v) { return project_omega(sys, omega, v); };
  auto eval = [&](const Vec& v) {
    double s = theta_eval(theta, v);
    if (f.weight != 0.0) s += f.weight * std::pow(nds_norm(v), f.power);
    return s;
  };
  auto grad = [&](const Vec& v) {
    Vec g = theta_grad(theta, v);
    if (f.weight != 0.0) {
      const double nv = nds_norm(v);
      const double scale = nv == 0.0 && f.power <= 2.0 ? f.weight * f.power
                                                       : f.weight * f.power * std::pow(nv, f.power - 2.0);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * v[i];
    }
    return g;
  };

  const Vec x0 = start ? *start : Vec(sys.dim(), 0.0);
  PgOut pg = projected_gradient(x0, proj, eval, grad, opts);

  NdsMinimizeResult res;
  res.solution = NdsSolution{pg.x, pg.value, pg.stationarity, pg.iterations, pg.converged};
  Vec b = theta_grad(theta, pg.x);
  for (double& v : b) v = -v;
  res.minus_theta_grad = b;
  const double cert_scale = 1.0 + nds_norm(gamma(sys, pg.x)) * nds_norm(gamma(sys, b));
  res.certificate = nds_commute(sys, pg.x, b, opts.certificate_tol * cert_scale);
  return res;
}

ComplementaryPairResult complementary_pair_commutes(const std::vector<Element>& frame,
                                                    const std::vector<int>& support_a,
                                                    const std::vector<int>& support_b, std::uint64_t seed) {
  validate_frame(frame);
  const int rank = static_cast<int>(frame.size());
  for (int i : support_a)
    for (int j : support_b)
      if (i == j) throw OverlappingSupportsError("complementary_pair_commutes: supports overlap");
  for (int i : support_a)
    if (i < 0 || i >= rank) throw SchemaError("complementary_pair_commutes: support index out of range");
  for (int i : support_b)
    if (i < 0 || i >= rank) throw SchemaError("complementary_pair_commutes: support index out of range");

  Rng rng(seed);
  const auto& algebra = frame[0].algebra();
  Element a = Element::zero(algebra);
  Element b = Element::zero(algebra);
  for (int i : support_a) a = a + rng.uniform(0.5, 1.5) * frame[i];
  for (int i : support_b) b = b + rng.uniform(0.5, 1.5) * frame[i];

  ComplementaryPairResult out{a, b, inner(a, b), make_certificate(a, b, 1e-8)};
  return out;
}

}  // namespace jc
