#include "jc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "jc/autos.hpp"
#include "jc/json_io.hpp"
#include "jc/solver.hpp"

namespace jc {

namespace {

class SuiteBuilder {
 public:
  SuiteBuilder(std::string name, std::uint64_t seed) : start_(std::chrono::steady_clock::now()) {
    result_.name = std::move(name);
    result_.seed = seed;
  }

  // Every check asserts value <= threshold.
  void check(std::string name, double value, double threshold) {
    CheckLine line{std::move(name), value, threshold, value <= threshold};
    result_.checks.push_back(std::move(line));
  }

  void check_true(std::string name, bool ok) { check(std::move(name), ok ? 0.0 : 1.0, 0.0); }

  SuiteResult finish() {
    result_.passed = true;
    for (const auto& c : result_.checks)
      if (!c.passed) result_.passed = false;
    result_.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return result_;
  }

 private:
  SuiteResult result_;
  std::chrono::steady_clock::time_point start_;
};

AlgebraDescriptor real_sym2() {
  return AlgebraDescriptor({{FactorKind::Real, 1}, {FactorKind::Sym, 2}});
}

AlgebraDescriptor mixed_algebra() {
  return AlgebraDescriptor({{FactorKind::Real, 1}, {FactorKind::Sym, 2}, {FactorKind::Spin, 3}});
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace

SuiteResult criterion_remark2(std::uint64_t seed) {
  SuiteBuilder suite("remark2", seed);
  const AlgebraDescriptor a = real_sym2();
  const Element x = element_from_blocks(a, {{1.0}, {-1.0, 0.0, 2.0}});
  const Element y = element_from_blocks(a, {{-1.0}, {1.0, 0.0, 2.0}});
  const SpectralSetSpec omega =
      SpectralSetSpec::product({SpectralSetSpec::symmetric_cone(), SpectralSetSpec::whole_space()});

  const std::vector<double> expected{2.0, 1.0, -1.0};
  suite.check("lambda(x) = (2,1,-1)", max_abs_diff(eigenvalue_map(x), expected), 1e-10);
  suite.check("lambda(y) = (2,1,-1)", max_abs_diff(eigenvalue_map(y), expected), 1e-10);
  suite.check("x in Omega", contains_residual(omega, x), 1e-8);
  suite.check_true("y not in Omega", !contains(omega, y));
  suite.check_true("nonspectrality witness accepted", nonspectrality_witness(omega, x, y, 1e-8));
  const InvarianceReport inv = sampled_invariance(omega, a, seed, 200);
  suite.check("invariance violations over 200 automorphisms", inv.violations, 0.0);
  suite.check("invariance max membership residual", inv.max_residual, 1e-8);
  return suite.finish();
}

SuiteResult criterion_remark7(std::uint64_t seed) {
  SuiteBuilder suite("remark7", seed);
  const NDSystem sys = NDSystem::signed_perm(2);
  const Point a{-1.0, 1.0};
  const Point b{3.0, -2.0};
  const Point minus_b{-3.0, 2.0};

  const OrbitMinimum om = orbit_linear_minimize(sys, b, a);
  suite.check("orbit minimum value = -5", std::abs(om.value - (-5.0)), 1e-12);
  suite.check("orbit minimum attained at a = (-1,1)", max_abs_diff(om.argmin, a), 1e-12);
  suite.check("gap(a, -b) = 0", std::abs(tvn_gap(sys, a, minus_b)), 1e-12);
  suite.check("gap(a, b) = 10", std::abs(tvn_gap(sys, a, b) - 10.0), 1e-12);
  suite.check_true("a commutes with -b", nds_commute(sys, a, minus_b).commutes);
  suite.check_true("a does not commute with b", !nds_commute(sys, a, b).commutes);
  return suite.finish();
}

namespace {

struct PropertyCounters {
  int total = 0;
  int converged = 0;
  double max_certificate_residual = 0.0;
};

SpectralSetSpec pick_spec(const AlgebraDescriptor& algebra, int i, Rng& rng) {
  switch (i % 3) {
    case 0:
      return SpectralSetSpec::symmetric_cone();
    case 1: {
      const double lo = rng.uniform(-2.0, -0.5);
      const double hi = rng.uniform(0.5, 2.0);
      return SpectralSetSpec::sorted_box(std::vector<double>(algebra.rank(), lo),
                                         std::vector<double>(algebra.rank(), hi));
    }
    default: {
      const double target = rng.uniform(0.5, static_cast<double>(algebra.rank()));
      SpectralSetSpec child =
          i % 2 ? SpectralSetSpec::symmetric_cone() : SpectralSetSpec::whole_space();
      return SpectralSetSpec::trace_affine(std::vector<double>(algebra.factor_count(), 1.0), target,
                                           std::move(child));
    }
  }
}

bool spec_is_compact(const SpectralSetSpec& spec) {
  if (spec.kind == SpectralSetSpec::Kind::SortedBox) return true;
  return spec.kind == SpectralSetSpec::Kind::TraceAffine &&
         spec.children[0].kind == SpectralSetSpec::Kind::SymmetricCone;
}

}  // namespace

SuiteResult criterion_theorem2(std::uint64_t seed) {
  SuiteBuilder suite("theorem2", seed);
  const std::vector<AlgebraDescriptor> algebras{AlgebraDescriptor::sym(3), AlgebraDescriptor::spin(4),
                                                mixed_algebra()};
  const std::vector<std::string> names{"Sym(3)", "Spin(4)", "Real x Sym(2) x Spin(3)"};

  for (std::size_t ai = 0; ai < algebras.size(); ++ai) {
    const AlgebraDescriptor& algebra = algebras[ai];
    PropertyCounters counters;
    for (int i = 0; i < 100; ++i) {
      Rng rng(Rng::derive(seed, ai * 1000 + i));
      const SpectralSetSpec spec = pick_spec(algebra, i, rng);

      Objective obj;
      const Element d = random_element(algebra, rng);
      const Element c = random_element(algebra, rng);
      switch (i % 3) {
        case 0:
          obj.theta = ThetaSpec::quadratic_distance(d.coords());
          break;
        case 1:
          obj.theta = ThetaSpec::linear_plus_quadratic(c.coords(), rng.uniform(0.5, 2.0));
          break;
        default:
          obj.theta = spec_is_compact(spec) ? ThetaSpec::linear(c.coords())
                                            : ThetaSpec::quadratic_distance(d.coords());
          break;
      }
      switch ((i / 3) % 3) {
        case 0:
          break;
        case 1:
          obj.fspec = SpectralFunctionSpec::quadratic(rng.uniform(0.1, 1.0));
          break;
        default:
          obj.fspec = SpectralFunctionSpec::power_sum(4.0, rng.uniform(0.01, 0.2));
          break;
      }

      const MinimizeResult res = minimize(algebra, spec, obj, {}, random_element(algebra, rng));
      ++counters.total;
      if (res.solution.converged) {
        ++counters.converged;
        counters.max_certificate_residual =
            std::max(counters.max_certificate_residual, res.certificate.residual);
      }
    }
    suite.check(names[ai] + ": convergence fraction >= 0.95",
                0.95 - static_cast<double>(counters.converged) / counters.total, 0.0);
    suite.check(names[ai] + ": max commute_residual(a, Theta'(a)) over converged runs",
                counters.max_certificate_residual, 1e-6);
  }
  return suite.finish();
}

SuiteResult criterion_cp(std::uint64_t seed) {
  SuiteBuilder suite("cp", seed);
  const std::vector<AlgebraDescriptor> algebras{
      AlgebraDescriptor::sym(3), AlgebraDescriptor({{FactorKind::Real, 1}, {FactorKind::Spin, 3}})};
  const std::vector<std::string> names{"Sym(3)", "Real x Spin(3)"};

  // 50 affine complementarity problems split over the two cones.
  double max_comp = 0.0, max_residual = 0.0;
  int converged = 0, total = 0;
  for (std::size_t ai = 0; ai < algebras.size(); ++ai) {
    const AlgebraDescriptor& algebra = algebras[ai];
    const SpectralSetSpec cone = SpectralSetSpec::symmetric_cone();
    const int d = algebra.dim();
    for (int i = 0; i < 25; ++i) {
      Rng rng(Rng::derive(seed, 7000 + ai * 500 + i));
      DenseMatrix a(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = rng.normal() / std::sqrt(static_cast<double>(d));
      DenseMatrix m = a.transposed() * a;
      for (int r = 0; r < d; ++r) m(r, r) += 0.5;
      const Element q = random_element(algebra, rng);
      GOracle g = [&algebra, m, q](const Element& x) { return Element(algebra, m * x.coords()) + q; };

      const CpResult res = cp_solve(algebra, cone, g, {});
      ++total;
      if (!res.solution.converged) continue;
      ++converged;
      const Element ga = g(res.solution.point);
      const double scale = 1.0 + res.solution.point.norm() * ga.norm();
      max_comp = std::max(max_comp, std::abs(res.complementarity) / scale);
      max_residual = std::max(max_residual, res.certificate.residual);
    }
  }
  suite.check("all 50 affine CP instances converged", 50 - converged, 0.0);
  suite.check("max |<a, G(a)>| / scale", max_comp, 1e-7);
  suite.check("max commute_residual(a, G(a))", max_residual, 1e-6);
  (void)total;

  // 50 constructed complementary pairs on disjoint frame supports.
  double max_pairing = 0.0, max_pair_residual = 0.0, max_alignment = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(Rng::derive(seed, 9000 + i));
    const AlgebraDescriptor& algebra = algebras[i % 2];
    const SpectralDecomposition sd = spectral_decompose(random_element(algebra, rng));
    const int rank = static_cast<int>(sd.frame.size());
    std::vector<int> idx(rank);
    for (int k = 0; k < rank; ++k) idx[k] = k;
    for (int k = rank - 1; k > 0; --k) std::swap(idx[k], idx[rng.below(k + 1)]);
    const int na = 1 + rng.below(rank - 1);
    const int nb = 1 + rng.below(rank - na);
    const std::vector<int> support_a(idx.begin(), idx.begin() + na);
    const std::vector<int> support_b(idx.begin() + na, idx.begin() + na + nb);

    const ComplementaryPairResult pair =
        complementary_pair_commutes(sd.frame, support_a, support_b, rng.next_u64());
    max_pairing = std::max(max_pairing, std::abs(pair.pairing));
    max_pair_residual = std::max(max_pair_residual, pair.certificate.residual);
    max_alignment = std::max(max_alignment, std::abs(pair.certificate.eigen_alignment));
  }
  suite.check("constructed pairs: max |<a, b>|", max_pairing, 1e-10);
  suite.check("constructed pairs: max commute residual", max_pair_residual, 1e-9);
  suite.check("constructed pairs: max |sum lambda_i(a) lambda_{n+1-i}(b)|", max_alignment, 1e-9);
  return suite.finish();
}

SuiteResult criterion_theorem3(std::uint64_t seed) {
  SuiteBuilder suite("theorem3", seed);
  std::vector<NDSystem> systems{NDSystem::signed_perm(2), NDSystem::signed_perm(3), NDSystem::signed_perm(4),
                                NDSystem::eja(AlgebraDescriptor::sym(3))};
  int total = 0, converged = 0, commuting = 0;
  double max_gap_over_tol = 0.0;
  for (std::size_t si = 0; si < systems.size(); ++si) {
    const NDSystem& sys = systems[si];
    for (int i = 0; i < 25; ++i) {
      Rng rng(Rng::derive(seed, 20000 + si * 100 + i));
      Point rnd(sys.dim());
      for (double& v : rnd) v = rng.normal();

      NdsOmega omega;
      if (sys.kind() == NDSystem::Kind::SignedPerm && i % 2 == 0) {
        Point a0(sys.dim());
        for (double& v : a0) v = rng.normal();
        omega = NdsOmega::orbit_polytope(a0);
      } else {
        omega = NdsOmega::norm_ball(rng.uniform(0.5, 2.0));
      }

      ThetaSpec theta;
      Point c(sys.dim()), d(sys.dim());
      for (double& v : c) v = rng.normal();
      for (double& v : d) v = rng.normal();
      switch (i % 3) {
        case 0:
          theta = ThetaSpec::linear(c);
          break;
        case 1:
          theta = ThetaSpec::quadratic_distance(d);
          break;
        default:
          theta = ThetaSpec::linear_plus_quadratic(c, rng.uniform(0.5, 2.0));
          break;
      }
      NdsInvariantFn f;
      if (i % 4 == 1) f = NdsInvariantFn{rng.uniform(0.1, 0.5), 2.0};
      if (i % 4 == 3) f = NdsInvariantFn{rng.uniform(0.05, 0.2), 4.0};

      const NdsMinimizeResult res = nds_minimize(sys, omega, theta, f, {}, rnd);
      ++total;
      if (!res.solution.converged) continue;
      ++converged;
      if (res.certificate.commutes) ++commuting;
      if (res.certificate.tol > 0.0)
        max_gap_over_tol = std::max(max_gap_over_tol, res.certificate.gap / res.certificate.tol);
    }
  }
  suite.check("convergence fraction >= 0.9", 0.9 - static_cast<double>(converged) / total, 0.0);
  suite.check("converged runs failing nds_commute(a, -Theta'(a))", converged - commuting, 0.0);
  suite.check("max gap / (1e-6 scale) over converged runs", max_gap_over_tol, 1.0);
  return suite.finish();
}

namespace {

struct TvnSystemName {
  NDSystem sys;
  std::string name;
};

Point constructed_commuting_partner(const NDSystem& sys, Rng& rng, Point& x_out) {
  // Builds x = A s, w = A t from two gamma-shaped (sorted) vectors and a
  // shared group element, so the pair commutes by construction.
  const int n = sys.dim();
  Point s(n, 0.0), t(n, 0.0);
  switch (sys.kind()) {
    case NDSystem::Kind::SignedPerm: {
      for (double& v : s) v = std::abs(rng.normal());
      for (double& v : t) v = std::abs(rng.normal());
      std::sort(s.begin(), s.end(), std::greater<double>());
      std::sort(t.begin(), t.end(), std::greater<double>());
      const auto group = signed_permutations(sys.n());
      const DenseMatrix& a = group[rng.below(static_cast<int>(group.size()))];
      x_out = a * s;
      return a * t;
    }
    case NDSystem::Kind::EJA: {
      std::vector<double> sv(sys.algebra().rank()), tv(sys.algebra().rank());
      for (double& v : sv) v = rng.normal();
      for (double& v : tv) v = rng.normal();
      std::sort(sv.begin(), sv.end(), std::greater<double>());
      std::sort(tv.begin(), tv.end(), std::greater<double>());
      const LinearMap a = random_automorphism(sys.algebra(), rng);
      x_out = a.matrix * combine(sys.reference_frame(), sv).coords();
      return a.matrix * combine(sys.reference_frame(), tv).coords();
    }
    case NDSystem::Kind::Rect: {
      const int k = std::min(sys.rows(), sys.cols());
      std::vector<double> sv(k), tv(k);
      for (double& v : sv) v = std::abs(rng.normal());
      for (double& v : tv) v = std::abs(rng.normal());
      std::sort(sv.begin(), sv.end(), std::greater<double>());
      std::sort(tv.begin(), tv.end(), std::greater<double>());
      DenseMatrix skew_u(sys.rows(), sys.rows()), skew_v(sys.cols(), sys.cols());
      for (int i = 0; i < sys.rows(); ++i)
        for (int j = i + 1; j < sys.rows(); ++j) {
          const double v = rng.normal();
          skew_u(i, j) = v;
          skew_u(j, i) = -v;
        }
      for (int i = 0; i < sys.cols(); ++i)
        for (int j = i + 1; j < sys.cols(); ++j) {
          const double v = rng.normal();
          skew_v(i, j) = v;
          skew_v(j, i) = -v;
        }
      const DenseMatrix u = mat_exp(skew_u);
      const DenseMatrix v = mat_exp(skew_v);
      DenseMatrix sm(sys.rows(), sys.cols()), tm(sys.rows(), sys.cols());
      for (int i = 0; i < k; ++i) {
        sm(i, i) = sv[i];
        tm(i, i) = tv[i];
      }
      x_out = (u * sm * v.transposed()).data();
      return (u * tm * v.transposed()).data();
    }
  }
  throw Error("unreachable");
}

}  // namespace

SuiteResult criterion_tvn(std::uint64_t seed) {
  SuiteBuilder suite("tvn", seed);
  std::vector<TvnSystemName> systems;
  systems.push_back({NDSystem::signed_perm(2), "SignedPerm(2)"});
  systems.push_back({NDSystem::signed_perm(3), "SignedPerm(3)"});
  systems.push_back({NDSystem::signed_perm(4), "SignedPerm(4)"});
  systems.push_back({NDSystem::eja(AlgebraDescriptor::sym(3)), "EJA(Sym(3))"});
  systems.push_back({NDSystem::rect(2, 3), "Rect(2,3)"});

  for (std::size_t si = 0; si < systems.size(); ++si) {
    const NDSystem& sys = systems[si].sys;
    Rng rng(Rng::derive(seed, 40000 + si));
    double min_gap = std::numeric_limits<double>::infinity();
    double max_brute_diff = 0.0;
    int iff_mismatches = 0;

    auto check_iff = [&](const Point& x, const Point& w) {
      const NdsCommuteCertificate cert = nds_commute(sys, x, w, 1e-10);
      const bool equality = cert.gap <= 1e-10;
      const double scale = 1.0 + nds_norm(x) + nds_norm(w);
      const bool reconstructs = cert.commutes && cert.reconstruction_residual <= 1e-8 * scale;
      if (equality != reconstructs) ++iff_mismatches;
    };

    for (int i = 0; i < 1000; ++i) {
      Point x(sys.dim()), w(sys.dim());
      for (double& v : x) v = rng.normal();
      for (double& v : w) v = rng.normal();
      const double gap = tvn_gap(sys, x, w);
      min_gap = std::min(min_gap, gap);
      if (sys.kind() == NDSystem::Kind::SignedPerm) {
        double brute = -std::numeric_limits<double>::infinity();
        for (const auto& a : signed_permutations(sys.n())) brute = std::max(brute, nds_inner(a * x, w));
        max_brute_diff = std::max(max_brute_diff, std::abs(brute - max_inner_over_group(sys, x, w)));
      }
      check_iff(x, w);
    }
    for (int i = 0; i < 100; ++i) {
      Point x;
      const Point w = constructed_commuting_partner(sys, rng, x);
      check_iff(x, w);
    }

    suite.check(systems[si].name + ": min tvn_gap >= -1e-10", -min_gap, 1e-10);
    if (sys.kind() == NDSystem::Kind::SignedPerm)
      suite.check(systems[si].name + ": brute-force group max mismatch", max_brute_diff, 1e-12);
    suite.check(systems[si].name + ": equality-iff-certificate mismatches", iff_mismatches, 0.0);
  }
  return suite.finish();
}

SuiteResult criterion_automorphisms(std::uint64_t seed) {
  SuiteBuilder suite("theorem5", seed);
  const std::vector<AlgebraDescriptor> algebras{AlgebraDescriptor::sym(3), AlgebraDescriptor::spin(4),
                                                mixed_algebra()};
  const std::vector<std::string> names{"Sym(3)", "Spin(4)", "Real x Sym(2) x Spin(3)"};

  for (std::size_t ai = 0; ai < algebras.size(); ++ai) {
    const AlgebraDescriptor& algebra = algebras[ai];
    Rng rng(Rng::derive(seed, 60000 + ai));
    double max_auto_residual = 0.0;
    double max_eig_drift = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Derivation d = derivation_from_pair(random_element(algebra, rng), random_element(algebra, rng));
      const LinearMap a = exp_derivation(d, rng.uniform(-1.0, 1.0));
      max_auto_residual = std::max(max_auto_residual, is_automorphism(a, 1e-9).residual);
      for (int k = 0; k < 2; ++k) {
        const Element x = random_element(algebra, rng);
        max_eig_drift =
            std::max(max_eig_drift, max_abs_diff(eigenvalue_map(apply(a, x)), eigenvalue_map(x)));
      }
    }
    suite.check(names[ai] + ": max is_automorphism residual over 200 e^{tD}", max_auto_residual, 1e-9);
    suite.check(names[ai] + ": max eigenvalue drift under e^{tD}", max_eig_drift, 1e-8);
  }

  {
    const AlgebraDescriptor algebra = real_sym2();
    double max_off_group = 0.0;
    for (int i = 0; i < 200; ++i) {
      const LinearMap a = random_automorphism(algebra, Rng::derive(seed, 70000 + i));
      const DenseMatrix norms = coupling_norms(a);
      for (int r = 0; r < norms.rows(); ++r)
        for (int c = 0; c < norms.cols(); ++c)
          if (r != c) max_off_group = std::max(max_off_group, norms(r, c));
    }
    suite.check("Real x Sym(2): max off-group coupling norm over 200 automorphisms", max_off_group, 1e-9);
  }

  {
    const AlgebraDescriptor algebra({{FactorKind::Sym, 2}, {FactorKind::Spin, 3}});
    const SpectralSetSpec omega = SpectralSetSpec::primitive_cross(0);
    const Element x = element_from_blocks(algebra, {{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
    const Element y = element_from_blocks(algebra, {{0.0, 0.0, 0.0}, {0.5, 0.5, 0.0}});
    suite.check_true("primitive-cross witness accepted", nonspectrality_witness(omega, x, y, 1e-8));
    const InvarianceReport inv = sampled_invariance(omega, algebra, Rng::derive(seed, 80000), 200);
    suite.check("primitive cross invariance violations", inv.violations, 0.0);
  }
  return suite.finish();
}

SuiteResult criterion_substrate(std::uint64_t seed) {
  SuiteBuilder suite("axioms", seed);

  {
    Rng rng(Rng::derive(seed, 90000));
    double max_recon = 0.0, max_orth = 0.0;
    for (int i = 0; i < 500; ++i) {
      const int n = 2 + i % 19;  // 2..20
      DenseMatrix m(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) m(r, c) = m(c, r) = rng.normal();
      const SymEig eig = sym_eig(m);
      DenseMatrix lam(n, n);
      for (int k = 0; k < n; ++k) lam(k, k) = eig.values[k];
      const double recon =
          (m - eig.vectors * lam * eig.vectors.transposed()).frobenius_norm() / (1.0 + m.frobenius_norm());
      max_recon = std::max(max_recon, recon);
      max_orth = std::max(
          max_orth, (eig.vectors.transposed() * eig.vectors - DenseMatrix::identity(n)).frobenius_norm());
    }
    suite.check("sym_eig reconstruction over 500 matrices up to 20x20", max_recon, 1e-10);
    suite.check("sym_eig orthonormality", max_orth, 1e-10);
  }

  {
    Rng rng(Rng::derive(seed, 91000));
    const std::vector<AlgebraDescriptor> algebras{AlgebraDescriptor::sym(3), AlgebraDescriptor::spin(4),
                                                  mixed_algebra()};
    double max_rel = 0.0;
    for (int i = 0; i < 200; ++i) {
      const AlgebraDescriptor& algebra = algebras[i % algebras.size()];
      SpectralFunctionSpec fs;
      switch (i % 5) {
        case 0:
          fs = SpectralFunctionSpec::quadratic(rng.uniform(0.5, 2.0));
          break;
        case 1:
          fs = SpectralFunctionSpec::power_sum(4.0, rng.uniform(0.2, 1.0));
          break;
        case 2:
          fs = SpectralFunctionSpec::power_sum(3.0, rng.uniform(0.2, 1.0));
          break;
        case 3:
          fs = SpectralFunctionSpec::linear(rng.uniform(0.5, 2.0));
          break;
        default:
          fs = SpectralFunctionSpec::log_barrier(1.0);
          break;
      }
      Element x = random_element(algebra, rng);
      if (fs.kind == SpectralFunctionSpec::Kind::LogBarrier) {
        const auto values = eigenvalue_map(x);
        x = x + (std::abs(values.back()) + 1.0) * Element::unit(algebra);
      }
      const Element v = random_element(algebra, rng);
      const double h = 1e-5 * (1.0 + x.norm()) / (1.0 + v.norm());
      const double fd =
          (spectral_function_eval(fs, x + h * v) - spectral_function_eval(fs, x - h * v)) / (2.0 * h);
      const double an = inner(spectral_function_grad(fs, x), v);
      max_rel = std::max(max_rel, std::abs(fd - an) / (1.0 + std::abs(fd)));
    }
    suite.check("spectral gradient vs central differences over 200 points", max_rel, 1e-6);
  }

  {
    Rng rng(Rng::derive(seed, 92000));
    double max_err = 0.0;
    for (int i = 0; i < 100; ++i) {
      const int n = 2 + i % 9;
      DenseMatrix m(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = rng.normal();
      const double target = rng.uniform(0.1, 5.0);
      m *= target / m.frobenius_norm();
      DenseMatrix neg = m;
      neg *= -1.0;
      max_err = std::max(max_err, (mat_exp(m) * mat_exp(neg) - DenseMatrix::identity(n)).frobenius_norm());
    }
    suite.check("mat_exp(m) mat_exp(-m) = I for ||m|| <= 5", max_err, 1e-9);
  }

  // NDS axiom spot checks ride along in this suite.
  {
    const AxiomReport sp = axiom_check(NDSystem::signed_perm(3), Rng::derive(seed, 93000), 500);
    suite.check("SignedPerm(3) axiom (a) residual", sp.invariance_residual, 1e-10);
    suite.check("SignedPerm(3) axiom (b) residual", sp.reach_residual, 1e-10);
    suite.check("SignedPerm(3) axiom (c) min gap >= -1e-10", -sp.min_gap, 1e-10);
    const AxiomReport eja = axiom_check(NDSystem::eja(AlgebraDescriptor::sym(3)), Rng::derive(seed, 94000), 100);
    suite.check("EJA(Sym(3)) axiom (b) residual", eja.reach_residual, 1e-8);
    const AxiomReport rm = axiom_check(NDSystem::rect(2, 3), Rng::derive(seed, 95000), 500);
    suite.check("Rect(2,3) axiom (c) min gap >= -1e-10", -rm.min_gap, 1e-10);
  }
  return suite.finish();
}

std::vector<SuiteResult> run_suites(const std::string& which, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  const bool all = which == "all";
  bool known = all;
  if (all || which == "remark2") out.push_back(criterion_remark2(seed)), known = true;
  if (all || which == "remark7") out.push_back(criterion_remark7(seed)), known = true;
  if (all || which == "theorem2") {
    out.push_back(criterion_theorem2(seed));
    out.push_back(criterion_theorem3(seed));
    known = true;
  }
  if (all || which == "cp") out.push_back(criterion_cp(seed)), known = true;
  if (all || which == "tvn") out.push_back(criterion_tvn(seed)), known = true;
  if (all || which == "theorem5") out.push_back(criterion_automorphisms(seed)), known = true;
  if (all || which == "axioms") out.push_back(criterion_substrate(seed)), known = true;
  if (!known)
    throw SchemaError("unknown suite '" + which +
                      "' (expected all|remark2|remark7|theorem2|theorem5|tvn|cp|axioms)");
  return out;
}

nlohmann::json suites_to_json(const std::vector<SuiteResult>& suites, std::uint64_t seed) {
  nlohmann::json js = nlohmann::json::array();
  bool all_passed = true;
  for (const auto& s : suites) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : s.checks)
      checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
    js.push_back({{"name", s.name}, {"passed", s.passed}, {"checks", checks}});
    if (!s.passed) all_passed = false;
  }
  return nlohmann::json{{"version", kToolVersion}, {"seed", seed}, {"passed", all_passed}, {"suites", js}};
}

}  // namespace jc
