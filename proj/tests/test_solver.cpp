#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "jc/autos.hpp"
#include "jc/solver.hpp"

using namespace jc;

namespace {

const AlgebraDescriptor kSym2 = AlgebraDescriptor::sym(2);

Element sym2(double a, double b, double c) { return element_from_blocks(kSym2, {{a, b, c}}); }

}  // namespace

TEST_CASE("theta gradients match central finite differences") {
  Rng rng(211);
  for (int i = 0; i < 30; ++i) {
    const int n = 3 + i % 5;
    std::vector<double> c(n), d(n), x(n), v(n);
    for (auto* vec : {&c, &d, &x, &v})
      for (double& e : *vec) e = rng.normal();
    const std::vector<ThetaSpec> thetas{ThetaSpec::linear(c), ThetaSpec::quadratic_distance(d),
                                        ThetaSpec::linear_plus_quadratic(c, rng.uniform(0.5, 2.0))};
    for (const auto& theta : thetas) {
      const double h = 1e-6;
      std::vector<double> xp = x, xm = x;
      for (int k = 0; k < n; ++k) {
        xp[k] += h * v[k];
        xm[k] -= h * v[k];
      }
      const double fd = (theta_eval(theta, xp) - theta_eval(theta, xm)) / (2.0 * h);
      const auto g = theta_grad(theta, x);
      double an = 0.0;
      for (int k = 0; k < n; ++k) an += g[k] * v[k];
      CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("minimize: PSD projection in closed form") {
  // min (1/2)||x - d||^2 over the cone, d = diag(1,-1) -> a = diag(1,0)
  Objective obj;
  obj.theta = ThetaSpec::quadratic_distance(sym2(1, 0, -1).coords());
  const MinimizeResult res = minimize(kSym2, SpectralSetSpec::symmetric_cone(), obj);
  REQUIRE(res.solution.converged);
  const auto a = natural_blocks(res.solution.point)[0];
  CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(a[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(a[2] == doctest::Approx(0.0).scale(1.0));
  // Theta'(a) = a - d = diag(0, 1)
  const auto b = natural_blocks(res.certificate.b)[0];
  CHECK(b[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(b[2] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res.certificate.residual <= 1e-9);
  CHECK(res.certificate.joint_frame.has_value());
}

TEST_CASE("minimize: unconstrained quadratic lands on the anchor") {
  Rng rng(223);
  const AlgebraDescriptor a({{FactorKind::Real, 1}, {FactorKind::Sym, 2}, {FactorKind::Spin, 3}});
  const Element d = random_element(a, rng);
  Objective obj;
  obj.theta = ThetaSpec::quadratic_distance(d.coords());
  const MinimizeResult res = minimize(a, SpectralSetSpec::whole_space(), obj);
  REQUIRE(res.solution.converged);
  CHECK((res.solution.point - d).norm() <= 1e-8);
  CHECK(res.certificate.residual <= 1e-9);  // zero gradient commutes with everything
}

TEST_CASE("minimize over the half-line-times-matrices product set") {
  Rng rng(227);
  const AlgebraDescriptor a({{FactorKind::Real, 1}, {FactorKind::Sym, 2}});
  const SpectralSetSpec omega =
      SpectralSetSpec::product({SpectralSetSpec::symmetric_cone(), SpectralSetSpec::whole_space()});
  Objective obj;
  obj.theta = ThetaSpec::linear_plus_quadratic(random_element(a, rng).coords(), 1.0);
  obj.fspec = SpectralFunctionSpec::quadratic(0.5);
  const MinimizeResult res = minimize(a, omega, obj, {}, random_element(a, rng));
  REQUIRE(res.solution.converged);
  CHECK(res.certificate.residual <= 1e-6);
}

TEST_CASE("minimize rejects non-convex specs and infeasible caps flag non-convergence") {
  Objective obj;
  obj.theta = ThetaSpec::quadratic_distance(sym2(1, 0, -1).coords());
  CHECK_THROWS_AS(minimize(kSym2, SpectralSetSpec::primitive_cross(0), obj), NonConvexSpecError);

  SolveOptions opts;
  opts.max_iterations = 1;
  const MinimizeResult res =
      minimize(kSym2, SpectralSetSpec::symmetric_cone(), obj, opts, sym2(5, 3, 5));
  CHECK_FALSE(res.solution.converged);
  CHECK(res.solution.iterations <= 1);
}

TEST_CASE("descent: objective is non-increasing along accepted steps") {
  // re-run a representative instance and track values through the options cap
  Rng rng(229);
  Objective obj;
  obj.theta = ThetaSpec::linear_plus_quadratic(random_element(kSym2, rng).coords(), 1.0);
  obj.fspec = SpectralFunctionSpec::power_sum(4.0, 0.1);
  const SpectralSetSpec cone = SpectralSetSpec::symmetric_cone();
  double last = std::numeric_limits<double>::infinity();
  for (int cap = 1; cap <= 40; cap += 3) {
    SolveOptions opts;
    opts.max_iterations = cap;
    const MinimizeResult res = minimize(kSym2, cone, obj, opts, sym2(2, 1, 3));
    CHECK(res.solution.value <= last + 1e-12);
    last = res.solution.value;
  }
}

TEST_CASE("vi_solve: affine complementarity in closed form") {
  const AlgebraDescriptor a = kSym2;
  const Element d = sym2(1, 0, -1);
  const GOracle g = [&](const Element& x) { return x - d; };
  const ViResult res = vi_solve(a, SpectralSetSpec::symmetric_cone(), g);
  REQUIRE(res.solution.converged);
  const auto pa = natural_blocks(res.solution.point)[0];
  CHECK(pa[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(pa[2] == doctest::Approx(0.0).scale(1.0));
  CHECK(res.certificate.residual <= 1e-7);

  // G == 0: any start converges immediately with a trivial certificate
  const GOracle zero = [&](const Element& x) { return Element::zero(x.algebra()); };
  const ViResult z = vi_solve(a, SpectralSetSpec::symmetric_cone(), zero);
  CHECK(z.solution.converged);
  CHECK(z.certificate.residual <= 1e-12);

  // interior solution: G(x) = x - e vanishes at e
  const GOracle interior = [&](const Element& x) { return x - Element::unit(x.algebra()); };
  const ViResult ie = vi_solve(a, SpectralSetSpec::symmetric_cone(), interior);
  REQUIRE(ie.solution.converged);
  CHECK((ie.solution.point - Element::unit(a)).norm() <= 1e-7);
  CHECK(ie.certificate.b.norm() <= 1e-7);
}

TEST_CASE("cp_solve: complementary pair with commuting certificate") {
  // Sym(3) cone, affine monotone G
  Rng rng(233);
  const AlgebraDescriptor a = AlgebraDescriptor::sym(3);
  const Element d = random_element(a, rng);
  const GOracle g = [&](const Element& x) { return x - d; };
  const CpResult res = cp_solve(a, SpectralSetSpec::symmetric_cone(), g);
  REQUIRE(res.solution.converged);
  const double scale = 1.0 + res.solution.point.norm() * g(res.solution.point).norm();
  CHECK(std::abs(res.complementarity) <= 1e-7 * scale);
  CHECK(res.certificate.residual <= 1e-6);
  CHECK(res.dual_margin >= -1e-7);

  // trivial zero solution when G(0) lies in the dual cone
  const GOracle gpos = [&](const Element& x) { return x + Element::unit(x.algebra()); };
  const CpResult zero = cp_solve(a, SpectralSetSpec::symmetric_cone(), gpos);
  REQUIRE(zero.solution.converged);
  CHECK(zero.solution.point.norm() <= 1e-8);

  // spin cone with mixed-eigenvalue anchor: complementary commuting pair
  const AlgebraDescriptor spin = AlgebraDescriptor::spin(3);
  const Element ds = element_from_blocks(spin, {{0.5, 2.0, 0.0}});  // eigenvalues 2.5, -1.5
  const GOracle gs = [&](const Element& x) { return x - ds; };
  const CpResult sres = cp_solve(spin, SpectralSetSpec::symmetric_cone(), gs);
  REQUIRE(sres.solution.converged);
  CHECK(std::abs(sres.complementarity) <= 1e-7 * (1.0 + sres.solution.point.norm()));
  CHECK(sres.certificate.residual <= 1e-6);
  // a = lambda_+ c_+, G(a) = -lambda_- c_-: anti-aligned eigenvalue pairing
  CHECK(std::abs(sres.certificate.eigen_alignment) <= 1e-6);
}

TEST_CASE("nds_minimize: reference orbit-polytope instance returns the generator vertex") {
  const NDSystem sys = NDSystem::signed_perm(2);
  const NdsOmega omega = NdsOmega::orbit_polytope({-1.0, 1.0});
  const ThetaSpec theta = ThetaSpec::linear({3.0, -2.0});
  const NdsMinimizeResult res = nds_minimize(sys, omega, theta);
  REQUIRE(res.solution.converged);
  CHECK(res.solution.point[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(res.solution.point[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.certificate.commutes);          // a commutes with -Theta'(a) = -b
  CHECK(res.certificate.gap <= 1e-9);
  // and the sign matters: a does not commute with +b
  const NdsCommuteCertificate wrong_sign = nds_commute(sys, res.solution.point, {3.0, -2.0});
  CHECK_FALSE(wrong_sign.commutes);
  CHECK(wrong_sign.gap == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("nds_minimize: norm ball cases") {
  // quadratic over a ball centered at zero
  const NDSystem sys = NDSystem::signed_perm(3);
  const ThetaSpec theta = ThetaSpec::linear_plus_quadratic({0.0, 0.0, 0.0}, 1.0);
  const NdsMinimizeResult res = nds_minimize(sys, NdsOmega::norm_ball(1.0), theta);
  REQUIRE(res.solution.converged);
  CHECK(nds_norm(res.solution.point) <= 1e-9);
  CHECK(res.certificate.commutes);  // -Theta'(0) = 0 commutes with everything

  // linear objective over the ball in EJA(Sym(2)): minimizer is -c/||c||
  const NDSystem eja = NDSystem::eja(AlgebraDescriptor::sym(2));
  Rng rng(239);
  Point c(eja.dim());
  for (double& v : c) v = rng.normal();
  const NdsMinimizeResult lin = nds_minimize(eja, NdsOmega::norm_ball(1.0), ThetaSpec::linear(c));
  REQUIRE(lin.solution.converged);
  const double cn = nds_norm(c);
  for (int k = 0; k < eja.dim(); ++k)
    CHECK(lin.solution.point[k] == doctest::Approx(-c[k] / cn).epsilon(1e-6));
  CHECK(lin.certificate.commutes);
  CHECK(lin.certificate.gap <= 1e-8 * (1.0 + cn));
}

TEST_CASE("nds_minimize rejects orbit polytopes off SignedPerm") {
  const NDSystem eja = NDSystem::eja(AlgebraDescriptor::sym(2));
  CHECK_THROWS_AS(nds_minimize(eja, NdsOmega::orbit_polytope(Point(3, 1.0)), ThetaSpec::linear(Point(3, 1.0))),
                  UnsupportedOmegaError);
}

TEST_CASE("orbit polytope projection is exact on enumerable cases") {
  // projection results must lie in conv{Aa}: compare against a brute-force
  // quadratic-program-by-enumeration witness on the vertex hull
  Rng rng(241);
  const NDSystem sys = NDSystem::signed_perm(3);
  const Point a0{2.0, 1.0, 0.5};
  const NdsOmega omega = NdsOmega::orbit_polytope(a0);
  const auto group = signed_permutations(3);
  for (int i = 0; i < 40; ++i) {
    Point x(3);
    for (double& v : x) v = 3.0 * rng.normal();
    const Point p = project_omega(sys, omega, x);
    // feasibility: weak majorization of |p| by gamma(a0)
    Point gp = gamma(sys, p), ga = gamma(sys, a0);
    double cum_p = 0.0, cum_a = 0.0;
    for (int k = 0; k < 3; ++k) {
      cum_p += gp[k];
      cum_a += ga[k];
      CHECK(cum_p <= cum_a + 1e-9);
    }
    // optimality: no vertex direction improves (first-order check)
    for (const auto& g : group) {
      const Point v = g * a0;
      double dir = 0.0;
      for (int k = 0; k < 3; ++k) dir += (x[k] - p[k]) * (v[k] - p[k]);
      CHECK(dir <= 1e-8 * (1.0 + nds_norm(x)));
    }
  }
}

TEST_CASE("complementary_pair_commutes builds certified pairs") {
  Rng rng(251);
  const AlgebraDescriptor a = AlgebraDescriptor::sym(3);
  const SpectralDecomposition sd = spectral_decompose(random_element(a, rng));

  const ComplementaryPairResult pair = complementary_pair_commutes(sd.frame, {0}, {2}, 13);
  CHECK(std::abs(pair.pairing) <= 1e-10);
  CHECK(pair.certificate.residual <= 1e-9);
  CHECK(std::abs(pair.certificate.eigen_alignment) <= 1e-9);

  // empty second support: b = 0 commutes trivially
  const ComplementaryPairResult trivial = complementary_pair_commutes(sd.frame, {0, 1}, {}, 13);
  CHECK(trivial.b.norm() == 0.0);
  CHECK(trivial.certificate.residual <= 1e-12);

  CHECK_THROWS_AS(complementary_pair_commutes(sd.frame, {0, 1}, {1}, 13), OverlappingSupportsError);
  CHECK_THROWS_AS(complementary_pair_commutes(sd.frame, {0}, {7}, 13), SchemaError);

  // spin frame e_plus / e_minus supports
  const AlgebraDescriptor spin = AlgebraDescriptor::spin(3);
  const SpectralDecomposition ssd = spectral_decompose(element_from_blocks(spin, {{0.3, 1.0, 0.5}}));
  const ComplementaryPairResult spair = complementary_pair_commutes(ssd.frame, {0}, {1}, 17);
  CHECK(std::abs(spair.pairing) <= 1e-10);
  CHECK(spair.certificate.residual <= 1e-10);
}

TEST_CASE("commutation property sample: certificates at converged points") {
  // a thinned version of the acceptance sweep for fast unit feedback
  const std::vector<AlgebraDescriptor> algebras{AlgebraDescriptor::sym(3), AlgebraDescriptor::spin(4)};
  for (std::size_t ai = 0; ai < algebras.size(); ++ai) {
    const AlgebraDescriptor& a = algebras[ai];
    int converged = 0;
    for (int i = 0; i < 12; ++i) {
      Rng rng(Rng::derive(263, ai * 100 + i));
      Objective obj;
      obj.theta = i % 2 ? ThetaSpec::quadratic_distance(random_element(a, rng).coords())
                        : ThetaSpec::linear_plus_quadratic(random_element(a, rng).coords(), 1.0);
      if (i % 3 == 1) obj.fspec = SpectralFunctionSpec::quadratic(0.3);
      if (i % 3 == 2) obj.fspec = SpectralFunctionSpec::power_sum(4.0, 0.05);
      const SpectralSetSpec spec = i % 2 ? SpectralSetSpec::symmetric_cone()
                                         : SpectralSetSpec::sorted_box(std::vector<double>(a.rank(), -1.0),
                                                                       std::vector<double>(a.rank(), 1.0));
      const MinimizeResult res = minimize(a, spec, obj, {}, random_element(a, rng));
      if (res.solution.converged) {
        ++converged;
        CHECK(res.certificate.residual <= 1e-6);
      }
    }
    CHECK(converged >= 11);
  }
}
