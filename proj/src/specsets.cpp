#include "jc/specsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jc {

SpectralSetSpec SpectralSetSpec::whole_space() { return SpectralSetSpec{}; }

SpectralSetSpec SpectralSetSpec::symmetric_cone() {
  SpectralSetSpec s;
  s.kind = Kind::SymmetricCone;
  return s;
}

SpectralSetSpec SpectralSetSpec::sorted_box(std::vector<double> lower, std::vector<double> upper) {
  SpectralSetSpec s;
  s.kind = Kind::SortedBox;
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  return s;
}

SpectralSetSpec SpectralSetSpec::trace_affine(std::vector<double> coeffs, double constant, SpectralSetSpec of) {
  SpectralSetSpec s;
  s.kind = Kind::TraceAffine;
  s.trace_coeffs = std::move(coeffs);
  s.trace_constant = constant;
  s.children.push_back(std::move(of));
  return s;
}

SpectralSetSpec SpectralSetSpec::product(std::vector<SpectralSetSpec> per_factor) {
  SpectralSetSpec s;
  s.kind = Kind::ProductPerFactor;
  s.children = std::move(per_factor);
  return s;
}

SpectralSetSpec SpectralSetSpec::primitive_cross(int factor) {
  SpectralSetSpec s;
  s.kind = Kind::PrimitiveCross;
  s.cross_factor = factor;
  return s;
}

bool SpectralSetSpec::convex() const {
  switch (kind) {
    case Kind::WholeSpace:
    case Kind::SymmetricCone:
    case Kind::SortedBox:
      return true;
    case Kind::TraceAffine:
      return children[0].convex();
    case Kind::ProductPerFactor: {
      for (const auto& c : children)
        if (!c.convex()) return false;
      return true;
    }
    case Kind::PrimitiveCross:
      return false;
  }
  return false;
}

namespace {

AlgebraDescriptor single_factor_algebra(const AlgebraDescriptor& a, int f) {
  return AlgebraDescriptor({a.factors()[f]});
}

Element sub_element(const Element& x, int f) {
  const auto blk = x.block(f);
  return Element(single_factor_algebra(x.algebra(), f), std::vector<double>(blk.begin(), blk.end()));
}

Element embed_factor(const AlgebraDescriptor& a, int f, const Element& sub) {
  std::vector<double> c(a.dim(), 0.0);
  std::copy(sub.coords().begin(), sub.coords().end(), c.begin() + a.offset(f));
  return Element(a, std::move(c));
}

double factor_trace(const Element& x, int f) { return trace(sub_element(x, f)); }

bool sorted_desc(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] < v[i]) return false;
  return true;
}

}  // namespace

void validate_spec(const SpectralSetSpec& spec, const AlgebraDescriptor& algebra) {
  switch (spec.kind) {
    case SpectralSetSpec::Kind::WholeSpace:
    case SpectralSetSpec::Kind::SymmetricCone:
      return;
    case SpectralSetSpec::Kind::SortedBox: {
      const int n = algebra.rank();
      if (static_cast<int>(spec.lower.size()) != n || static_cast<int>(spec.upper.size()) != n)
        throw SchemaError("sorted_box: bound length differs from algebra rank");
      if (!sorted_desc(spec.lower) || !sorted_desc(spec.upper))
        throw SchemaError("sorted_box: bounds must be sorted descending");
      for (int i = 0; i < n; ++i)
        if (spec.lower[i] > spec.upper[i]) throw SchemaError("sorted_box: lower bound exceeds upper bound");
      return;
    }
    case SpectralSetSpec::Kind::TraceAffine: {
      if (static_cast<int>(spec.trace_coeffs.size()) != algebra.factor_count())
        throw SchemaError("trace_affine: one coefficient per factor required");
      if (spec.children.size() != 1) throw SchemaError("trace_affine: exactly one intersected set required");
      double g2 = 0.0;
      for (double c : spec.trace_coeffs) g2 += c * c;
      if (g2 == 0.0) throw SchemaError("trace_affine: zero coefficient vector");
      validate_spec(spec.children[0], algebra);
      return;
    }
    case SpectralSetSpec::Kind::ProductPerFactor: {
      if (static_cast<int>(spec.children.size()) != algebra.factor_count())
        throw SchemaError("product: one child per factor required");
      for (int f = 0; f < algebra.factor_count(); ++f)
        validate_spec(spec.children[f], single_factor_algebra(algebra, f));
      return;
    }
    case SpectralSetSpec::Kind::PrimitiveCross: {
      if (spec.cross_factor < 0 || spec.cross_factor >= algebra.factor_count())
        throw SchemaError("primitive_cross: factor index out of range");
      return;
    }
  }
}

double contains_residual(const SpectralSetSpec& spec, const Element& x) {
  const auto& algebra = x.algebra();
  switch (spec.kind) {
    case SpectralSetSpec::Kind::WholeSpace:
      return 0.0;
    case SpectralSetSpec::Kind::SymmetricCone: {
      const auto values = eigenvalue_map(x);
      return std::max(0.0, -values.back());
    }
    case SpectralSetSpec::Kind::SortedBox: {
      const auto values = eigenvalue_map(x);
      double r = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i)
        r = std::max({r, spec.lower[i] - values[i], values[i] - spec.upper[i]});
      return r;
    }
    case SpectralSetSpec::Kind::TraceAffine: {
      double t = -spec.trace_constant;
      for (int f = 0; f < algebra.factor_count(); ++f) t += spec.trace_coeffs[f] * factor_trace(x, f);
      return std::max(std::abs(t), contains_residual(spec.children[0], x));
    }
    case SpectralSetSpec::Kind::ProductPerFactor: {
      double r = 0.0;
      for (int f = 0; f < algebra.factor_count(); ++f)
        r = std::max(r, contains_residual(spec.children[f], sub_element(x, f)));
      return r;
    }
    case SpectralSetSpec::Kind::PrimitiveCross: {
      double r = 0.0;
      for (int f = 0; f < algebra.factor_count(); ++f) {
        if (f == spec.cross_factor) {
          const auto values = eigenvalue_map(sub_element(x, f));
          for (std::size_t i = 0; i < values.size(); ++i)
            r = std::max(r, std::abs(values[i] - (i == 0 ? 1.0 : 0.0)));
        } else {
          r = std::max(r, sub_element(x, f).norm());
        }
      }
      return r;
    }
  }
  return 0.0;
}

bool contains(const SpectralSetSpec& spec, const Element& x, double tol) {
  return contains_residual(spec, x) <= tol;
}

namespace {

// Projection of a sorted-descending vector onto {t : t >= 0, sum t = s}
// (waterfilling); the result stays sorted.
std::vector<double> project_simplex_like(const std::vector<double>& lam, double s) {
  const int n = static_cast<int>(lam.size());
  double cum = 0.0;
  double tau = 0.0;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    cum += lam[i];
    const double cand = (cum - s) / (i + 1);
    if (i + 1 == n || lam[i + 1] <= cand) {
      tau = cand;
      k = i + 1;
      break;
    }
  }
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < k; ++i) out[i] = std::max(lam[i] - tau, 0.0);
  return out;
}

Element project_hyperplane(const Element& x, const Element& g, double c) {
  const double g2 = inner(g, g);
  const double shift = (inner(g, x) - c) / g2;
  return x - shift * g;
}

Element trace_direction(const AlgebraDescriptor& algebra, const std::vector<double>& coeffs) {
  Element g = Element::zero(algebra);
  for (int f = 0; f < algebra.factor_count(); ++f) {
    const Element ef = embed_factor(algebra, f, Element::unit(single_factor_algebra(algebra, f)));
    g = g + coeffs[f] * ef;
  }
  return g;
}

bool uniform_coeffs(const std::vector<double>& c) {
  for (double v : c)
    if (std::abs(v - c[0]) > 0.0) return false;
  return c[0] != 0.0;
}

}  // namespace

Element project(const SpectralSetSpec& spec, const Element& x) {
  const auto& algebra = x.algebra();
  validate_spec(spec, algebra);
  switch (spec.kind) {
    case SpectralSetSpec::Kind::WholeSpace:
      return x;
    case SpectralSetSpec::Kind::SymmetricCone: {
      const SpectralDecomposition sd = spectral_decompose(x);
      std::vector<double> clipped(sd.eigenvalues.size());
      for (std::size_t i = 0; i < clipped.size(); ++i) clipped[i] = std::max(sd.eigenvalues[i], 0.0);
      return combine(sd.frame, clipped);
    }
    case SpectralSetSpec::Kind::SortedBox: {
      const SpectralDecomposition sd = spectral_decompose(x);
      std::vector<double> clipped(sd.eigenvalues.size());
      for (std::size_t i = 0; i < clipped.size(); ++i)
        clipped[i] = std::min(spec.upper[i], std::max(spec.lower[i], sd.eigenvalues[i]));
      return combine(sd.frame, clipped);
    }
    case SpectralSetSpec::Kind::TraceAffine: {
      const SpectralSetSpec& child = spec.children[0];
      if (!child.convex()) throw NonConvexSpecError("project: trace_affine over a non-convex set");
      const Element g = trace_direction(algebra, spec.trace_coeffs);
      if (child.kind == SpectralSetSpec::Kind::WholeSpace) return project_hyperplane(x, g, spec.trace_constant);
      if (child.kind == SpectralSetSpec::Kind::SymmetricCone && uniform_coeffs(spec.trace_coeffs)) {
        const double s = spec.trace_constant / spec.trace_coeffs[0];
        if (s < 0.0) throw Error("project: empty intersection of cone and trace constraint");
        const SpectralDecomposition sd = spectral_decompose(x);
        return combine(sd.frame, project_simplex_like(sd.eigenvalues, s));
      }
      // Dykstra alternation between the hyperplane and the child set.
      Element z = x;
      Element p = Element::zero(algebra), q = Element::zero(algebra);
      const double scale = 1.0 + x.norm();
      Element y = x;
      for (int it = 0; it < 20000; ++it) {
        y = project(child, z + p);
        p = (z + p) - y;
        const Element zn = project_hyperplane(y + q, g, spec.trace_constant);
        q = (y + q) - zn;
        const double gap = (zn - y).norm();
        z = zn;
        if (gap <= 1e-11 * scale) break;
      }
      return z;
    }
    case SpectralSetSpec::Kind::ProductPerFactor: {
      Element out = Element::zero(algebra);
      for (int f = 0; f < algebra.factor_count(); ++f)
        out = out + embed_factor(algebra, f, project(spec.children[f], sub_element(x, f)));
      return out;
    }
    case SpectralSetSpec::Kind::PrimitiveCross:
      throw NonConvexSpecError("project: primitive_cross has no convex projection");
  }
  throw Error("project: unreachable");
}

namespace {

Element sample_point_of(const SpectralSetSpec& spec, const AlgebraDescriptor& algebra, Rng& rng) {
  switch (spec.kind) {
    case SpectralSetSpec::Kind::PrimitiveCross: {
      const auto sub_alg = single_factor_algebra(algebra, spec.cross_factor);
      const SpectralDecomposition sd = spectral_decompose(random_element(sub_alg, rng));
      const Element idem = sd.frame[rng.below(static_cast<int>(sd.frame.size()))];
      return embed_factor(algebra, spec.cross_factor, idem);
    }
    case SpectralSetSpec::Kind::ProductPerFactor: {
      Element out = Element::zero(algebra);
      for (int f = 0; f < algebra.factor_count(); ++f) {
        const auto sub_alg = single_factor_algebra(algebra, f);
        out = out + embed_factor(algebra, f, sample_point_of(spec.children[f], sub_alg, rng));
      }
      return out;
    }
    default: {
      const double spread = rng.uniform(0.5, 2.0);
      return project(spec, spread * random_element(algebra, rng));
    }
  }
}

}  // namespace

InvarianceReport sampled_invariance(const SpectralSetSpec& spec, const AlgebraDescriptor& algebra,
                                    std::uint64_t seed, int trials, double tol) {
  validate_spec(spec, algebra);
  return sampled_invariance(
      algebra, [&](const Element& x) { return contains_residual(spec, x); },
      [&](Rng& rng) { return sample_point_of(spec, algebra, rng); }, seed, trials, tol);
}

InvarianceReport sampled_invariance(const AlgebraDescriptor& algebra,
                                    const std::function<double(const Element&)>& membership_residual,
                                    const std::function<Element(Rng&)>& sample_point, std::uint64_t seed,
                                    int trials, double tol) {
  if (trials < 1) throw SchemaError("sampled_invariance: trials must be >= 1");
  InvarianceReport report;
  report.trials = trials;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Element x = sample_point(rng);
    const LinearMap a = random_automorphism(algebra, Rng::derive(seed, static_cast<std::uint64_t>(t) + 1));
    const double r = membership_residual(apply(a, x));
    report.max_residual = std::max(report.max_residual, r);
    if (r > tol) ++report.violations;
  }
  return report;
}

bool nonspectrality_witness(const SpectralSetSpec& spec, const Element& x, const Element& y, double tol) {
  require_same_algebra(x, y, "nonspectrality_witness");
  const auto lx = eigenvalue_map(x);
  const auto ly = eigenvalue_map(y);
  double d = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) d = std::max(d, std::abs(lx[i] - ly[i]));
  return d <= tol && contains(spec, x, tol) && !contains(spec, y, tol);
}

SpectralFunctionSpec SpectralFunctionSpec::linear(double weight) {
  SpectralFunctionSpec f;
  f.kind = Kind::Linear;
  f.weight = weight;
  return f;
}

SpectralFunctionSpec SpectralFunctionSpec::quadratic(double weight) {
  SpectralFunctionSpec f;
  f.kind = Kind::Quadratic;
  f.weight = weight;
  return f;
}

SpectralFunctionSpec SpectralFunctionSpec::power_sum(double p, double weight) {
  if (p < 1.0 || p != std::floor(p)) throw SchemaError("power_sum: exponent must be an integer >= 1");
  SpectralFunctionSpec f;
  f.kind = Kind::PowerSum;
  f.power = p;
  f.weight = weight;
  return f;
}

SpectralFunctionSpec SpectralFunctionSpec::log_barrier(double weight) {
  SpectralFunctionSpec f;
  f.kind = Kind::LogBarrier;
  f.weight = weight;
  return f;
}

namespace {

double ipow(double base, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= base;
  return r;
}

}  // namespace

double spectral_function_values(const SpectralFunctionSpec& fs, const std::vector<double>& t) {
  double s = 0.0;
  switch (fs.kind) {
    case SpectralFunctionSpec::Kind::Linear:
      for (double v : t) s += v;
      break;
    case SpectralFunctionSpec::Kind::Quadratic:
      for (double v : t) s += v * v;
      break;
    case SpectralFunctionSpec::Kind::PowerSum:
      for (double v : t) s += ipow(v, static_cast<int>(fs.power));
      break;
    case SpectralFunctionSpec::Kind::LogBarrier:
      for (double v : t) {
        if (v <= 0.0) return std::numeric_limits<double>::infinity();
        s -= std::log(v);
      }
      break;
    case SpectralFunctionSpec::Kind::Custom:
      if (!fs.custom_f) throw SchemaError("custom spectral function without an evaluator");
      s = fs.custom_f(t);
      break;
  }
  return fs.weight * s;
}

std::vector<double> spectral_function_grad_values(const SpectralFunctionSpec& fs, const std::vector<double>& t) {
  std::vector<double> g(t.size(), 0.0);
  switch (fs.kind) {
    case SpectralFunctionSpec::Kind::Linear:
      std::fill(g.begin(), g.end(), 1.0);
      break;
    case SpectralFunctionSpec::Kind::Quadratic:
      for (std::size_t i = 0; i < t.size(); ++i) g[i] = 2.0 * t[i];
      break;
    case SpectralFunctionSpec::Kind::PowerSum:
      for (std::size_t i = 0; i < t.size(); ++i)
        g[i] = fs.power * ipow(t[i], static_cast<int>(fs.power) - 1);
      break;
    case SpectralFunctionSpec::Kind::LogBarrier:
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] <= 0.0) throw NonSmoothPointError("log barrier gradient outside the interior");
        g[i] = -1.0 / t[i];
      }
      break;
    case SpectralFunctionSpec::Kind::Custom:
      if (!fs.custom_grad) throw NonSmoothPointError("custom spectral function has no gradient here");
      g = fs.custom_grad(t);
      break;
  }
  for (double& v : g) v *= fs.weight;
  return g;
}

double spectral_function_eval(const SpectralFunctionSpec& fs, const Element& x) {
  return spectral_function_values(fs, eigenvalue_map(x));
}

Element spectral_function_grad(const SpectralFunctionSpec& fs, const Element& x) {
  const SpectralDecomposition sd = spectral_decompose(x);
  return combine(sd.frame, spectral_function_grad_values(fs, sd.eigenvalues));
}

}  // namespace jc
