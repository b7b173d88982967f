#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "jc/algebra.hpp"
#include "jc/autos.hpp"
#include "jc/rng.hpp"

using namespace jc;

namespace {

const AlgebraDescriptor kSym2 = AlgebraDescriptor::sym(2);
const AlgebraDescriptor kSpin3 = AlgebraDescriptor::spin(3);

Element sym2(double a, double b, double c) {  // [[a, b], [b, c]]
  return element_from_blocks(kSym2, {{a, b, c}});
}

Element spin3(double x0, double x1, double x2) { return element_from_blocks(kSpin3, {{x0, x1, x2}}); }

std::vector<AlgebraDescriptor> property_algebras() {
  return {AlgebraDescriptor::real_power(3), AlgebraDescriptor::sym(4), AlgebraDescriptor::spin(5),
          AlgebraDescriptor({{FactorKind::Real, 1}, {FactorKind::Sym, 2}, {FactorKind::Spin, 3}})};
}

}  // namespace

TEST_CASE("descriptor rank and dimension accounting") {
  const AlgebraDescriptor a({{FactorKind::Real, 1}, {FactorKind::Sym, 3}, {FactorKind::Spin, 4}});
  CHECK(a.dim() == 1 + 6 + 4);
  CHECK(a.rank() == 1 + 3 + 2);
  CHECK_FALSE(a.essentially_simple());
  CHECK(AlgebraDescriptor::real_power(4).essentially_simple());
  CHECK(AlgebraDescriptor::sym(3).essentially_simple());
  CHECK_THROWS_AS(AlgebraDescriptor(std::vector<SimpleFactor>{}), SchemaError);
  CHECK_THROWS_AS(AlgebraDescriptor::spin(2), SchemaError);
}

TEST_CASE("natural block round trip") {
  const AlgebraDescriptor a({{FactorKind::Real, 1}, {FactorKind::Sym, 2}, {FactorKind::Spin, 3}});
  const std::vector<std::vector<double>> blocks{{2.0}, {1.0, -0.5, 3.0}, {1.0, 2.0, -1.0}};
  const Element x = element_from_blocks(a, blocks);
  const auto back = natural_blocks(x);
  REQUIRE(back.size() == 3);
  for (std::size_t f = 0; f < blocks.size(); ++f)
    for (std::size_t i = 0; i < blocks[f].size(); ++i)
      CHECK(back[f][i] == doctest::Approx(blocks[f][i]).epsilon(1e-15));
}

TEST_CASE("jordan product hand oracles") {
  // Sym(2): diag(1,2) o offdiag(1) = offdiag(3/2)
  const Element p = jordan_product(sym2(1, 0, 2), sym2(0, 1, 0));
  const auto pb = natural_blocks(p)[0];
  CHECK(pb[0] == doctest::Approx(0.0));
  CHECK(pb[1] == doctest::Approx(1.5));
  CHECK(pb[2] == doctest::Approx(0.0));

  // Spin(3): (1,(1,0)) o (1,(1,0)) = (2,(2,0))
  const Element q = jordan_product(spin3(1, 1, 0), spin3(1, 1, 0));
  const auto qb = natural_blocks(q)[0];
  CHECK(qb[0] == doctest::Approx(2.0));
  CHECK(qb[1] == doctest::Approx(2.0));
  CHECK(qb[2] == doctest::Approx(0.0));

  CHECK_THROWS_AS(jordan_product(sym2(1, 0, 0), spin3(1, 0, 0)), AlgebraMismatchError);
}

TEST_CASE("unit law across factors") {
  Rng rng(31);
  for (const auto& a : property_algebras()) {
    const Element e = Element::unit(a);
    for (int i = 0; i < 20; ++i) {
      const Element x = random_element(a, rng);
      CHECK((jordan_product(x, e) - x).norm() <= 1e-12 * (1.0 + x.norm()));
    }
  }
}

TEST_CASE("trace inner product oracles") {
  CHECK(inner(sym2(1, 0, 2), sym2(3, 0, 4)) == doctest::Approx(11.0));
  CHECK(inner(spin3(1, 1, 0), spin3(1, 0, 1)) == doctest::Approx(2.0));
  for (const auto& a : property_algebras())
    CHECK(inner(Element::unit(a), Element::unit(a)) == doctest::Approx(static_cast<double>(a.rank())));
}

TEST_CASE("inner equals trace of the jordan product") {
  Rng rng(37);
  for (const auto& a : property_algebras()) {
    for (int i = 0; i < 25; ++i) {
      const Element x = random_element(a, rng);
      const Element y = random_element(a, rng);
      CHECK(inner(x, y) == doctest::Approx(trace(jordan_product(x, y))).epsilon(1e-11));
    }
  }
}

TEST_CASE("spectral decomposition componentwise cases") {
  // Real^3
  const AlgebraDescriptor r3 = AlgebraDescriptor::real_power(3);
  const Element x = element_from_blocks(r3, {{3.0}, {1.0}, {2.0}});
  const auto sd = spectral_decompose(x);
  CHECK(sd.eigenvalues == std::vector<double>{3.0, 2.0, 1.0});
  for (const auto& c : sd.frame) {
    CHECK((jordan_product(c, c) - c).norm() <= 1e-14);
  }

  // Spin(3): (1,(1,0)) -> eigenvalues (2, 0)
  const auto spin_sd = spectral_decompose(spin3(1, 1, 0));
  CHECK(spin_sd.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(spin_sd.eigenvalues[1] == doctest::Approx(0.0));
  const auto f0 = natural_blocks(spin_sd.frame[0])[0];
  CHECK(f0[0] == doctest::Approx(0.5));
  CHECK(f0[1] == doctest::Approx(0.5));
  // frame sums to the unit
  Element sum = spin_sd.frame[0] + spin_sd.frame[1];
  CHECK((sum - Element::unit(kSpin3)).norm() <= 1e-14);
}

TEST_CASE("reference eigenvalue pattern on Real x Sym(2)") {
  const AlgebraDescriptor a({{FactorKind::Real, 1}, {FactorKind::Sym, 2}});
  const Element x = element_from_blocks(a, {{1.0}, {-1.0, 0.0, 2.0}});
  const Element y = element_from_blocks(a, {{-1.0}, {1.0, 0.0, 2.0}});
  const std::vector<double> expected{2.0, 1.0, -1.0};
  const auto lx = eigenvalue_map(x);
  const auto ly = eigenvalue_map(y);
  for (int i = 0; i < 3; ++i) {
    CHECK(lx[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(ly[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalue map of unit and zero") {
  for (const auto& a : property_algebras()) {
    for (double v : eigenvalue_map(Element::unit(a))) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    for (double v : eigenvalue_map(Element::zero(a))) CHECK(v == 0.0);
  }
}

TEST_CASE("spin degenerate axis still yields a valid frame") {
  const auto sd = spectral_decompose(spin3(2.0, 0.0, 0.0));
  CHECK(sd.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(sd.eigenvalues[1] == doctest::Approx(2.0));
  CHECK((jordan_product(sd.frame[0], sd.frame[1])).norm() <= 1e-13);
  CHECK((sd.frame[0] + sd.frame[1] - Element::unit(kSpin3)).norm() <= 1e-13);
}

TEST_CASE("reconstruction and frame axioms on 1000 random elements") {
  Rng rng(41);
  for (const auto& a : property_algebras()) {
    for (int i = 0; i < 250; ++i) {
      const Element x = random_element(a, rng);
      const auto sd = spectral_decompose(x);
      CHECK((combine(sd.frame, sd.eigenvalues) - x).norm() <= 1e-9 * (1.0 + x.norm()));
      Element sum = Element::zero(a);
      for (std::size_t k = 0; k < sd.frame.size(); ++k) {
        sum = sum + sd.frame[k];
        CHECK((jordan_product(sd.frame[k], sd.frame[k]) - sd.frame[k]).norm() <= 1e-8);
        for (std::size_t l = k + 1; l < sd.frame.size(); ++l)
          CHECK(jordan_product(sd.frame[k], sd.frame[l]).norm() <= 1e-8);
      }
      CHECK((sum - Element::unit(a)).norm() <= 1e-9);
      // trace identity and the Theobald-von Neumann bound
      double lam_sum = 0.0;
      for (double v : sd.eigenvalues) lam_sum += v;
      CHECK(trace(x) == doctest::Approx(lam_sum).epsilon(1e-10).scale(1.0 + std::abs(lam_sum)));
    }
  }
}

TEST_CASE("Theobald-von Neumann inequality on samples") {
  Rng rng(43);
  for (const auto& a : property_algebras()) {
    for (int i = 0; i < 100; ++i) {
      const Element x = random_element(a, rng);
      const Element y = random_element(a, rng);
      const auto lx = eigenvalue_map(x);
      const auto ly = eigenvalue_map(y);
      double bound = 0.0;
      for (std::size_t k = 0; k < lx.size(); ++k) bound += lx[k] * ly[k];
      CHECK(inner(x, y) <= bound + 1e-9 * (1.0 + std::abs(bound)));
    }
  }
}

TEST_CASE("power associativity specialization") {
  Rng rng(47);
  for (const auto& a : property_algebras()) {
    for (int i = 0; i < 50; ++i) {
      const Element x = random_element(a, rng);
      const Element x2 = jordan_product(x, x);
      const Element lhs = jordan_product(x, jordan_product(x, x2));
      const Element rhs = jordan_product(x2, x2);
      CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }
  }
}

TEST_CASE("lmap unit, zero, and self-adjointness") {
  Rng rng(53);
  for (const auto& a : property_algebras()) {
    CHECK((lmap(Element::unit(a)).matrix - DenseMatrix::identity(a.dim())).frobenius_norm() <= 1e-13);
    CHECK(lmap(Element::zero(a)).matrix.frobenius_norm() == 0.0);
    const Element x = random_element(a, rng);
    const DenseMatrix m = lmap(x).matrix;
    CHECK((m - m.transposed()).frobenius_norm() <= 1e-10);
  }
}

TEST_CASE("commute_residual basics") {
  Rng rng(59);
  const Element a = sym2(1, 0, 2);
  CHECK(commute_residual(a, a) <= 1e-14);
  CHECK(commute_residual(a, sym2(5, 0, 7)) <= 1e-12);   // diagonal matrices commute
  CHECK(commute_residual(a, sym2(0, 1, 0)) > 0.01);     // diag vs offdiag do not

  // operator commutation in Sym(n) tracks matrix commutation
  const AlgebraDescriptor s3 = AlgebraDescriptor::sym(3);
  for (int i = 0; i < 30; ++i) {
    const Element x = random_element(s3, rng);
    const Element y = random_element(s3, rng);
    const DenseMatrix xm = sym_block_matrix(x, 0);
    const DenseMatrix ym = sym_block_matrix(y, 0);
    const double matrix_comm = (xm * ym - ym * xm).frobenius_norm();
    const double op_res = commute_residual(x, y);
    if (matrix_comm <= 1e-12)
      CHECK(op_res <= 1e-10);
    else
      CHECK(op_res > 1e-10);
  }
}

TEST_CASE("simultaneous frame for commuting pairs") {
  Rng rng(61);
  const AlgebraDescriptor a({{FactorKind::Real, 1}, {FactorKind::Sym, 2}});

  // unit commutes with everything; its coefficients are all ones
  const Element x = random_element(a, rng);
  const auto sf = simultaneous_frame(Element::unit(a), x);
  REQUIRE(sf.has_value());
  for (double c : sf->a_coeffs) CHECK(c == doctest::Approx(1.0).epsilon(1e-9));

  // Real^2 coordinate pair
  const AlgebraDescriptor r2 = AlgebraDescriptor::real_power(2);
  const Element e1 = element_from_blocks(r2, {{1.0}, {0.0}});
  const Element e2 = element_from_blocks(r2, {{0.0}, {1.0}});
  const auto sf2 = simultaneous_frame(e1, e2);
  REQUIRE(sf2.has_value());
  std::vector<double> ac = sf2->a_coeffs, bc = sf2->b_coeffs;
  std::sort(ac.begin(), ac.end());
  std::sort(bc.begin(), bc.end());
  CHECK(ac[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(ac[1] == doctest::Approx(1.0));
  CHECK(bc[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(bc[1] == doctest::Approx(1.0));

  // non-commuting pair yields nothing
  CHECK_FALSE(simultaneous_frame(sym2(1, 0, 2), sym2(0, 1, 0)).has_value());

  // constructed commuting pairs on Sym(3) reconstruct through a shared frame
  const AlgebraDescriptor s3 = AlgebraDescriptor::sym(3);
  for (int i = 0; i < 20; ++i) {
    const auto sd = spectral_decompose(random_element(s3, rng));
    std::vector<double> ca(3), cb(3);
    for (int k = 0; k < 3; ++k) {
      ca[k] = rng.normal();
      cb[k] = rng.normal();
    }
    const Element u = combine(sd.frame, ca);
    const Element v = combine(sd.frame, cb);
    const auto joint = simultaneous_frame(u, v);
    REQUIRE(joint.has_value());
    CHECK((combine(joint->frame, joint->a_coeffs) - u).norm() <= 1e-8 * (1.0 + u.norm()));
    CHECK((combine(joint->frame, joint->b_coeffs) - v).norm() <= 1e-8 * (1.0 + v.norm()));
  }
}

TEST_CASE("validate_frame rejects broken frames") {
  const auto sd = spectral_decompose(sym2(1, 0.3, -2));
  CHECK_NOTHROW(validate_frame(sd.frame));
  auto broken = sd.frame;
  broken[0] = 2.0 * broken[0];
  CHECK_THROWS_AS(validate_frame(broken), InvalidFrameError);
}

TEST_CASE("trace form is associative: <x o y, z> = <y, x o z>") {
  Rng rng(433);
  for (const auto& a : property_algebras()) {
    for (int i = 0; i < 40; ++i) {
      const Element x = random_element(a, rng);
      const Element y = random_element(a, rng);
      const Element z = random_element(a, rng);
      const double lhs = inner(jordan_product(x, y), z);
      const double rhs = inner(y, jordan_product(x, z));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
  }
}

TEST_CASE("non-finite inputs are rejected at element construction") {
  CHECK_THROWS_AS(element_from_blocks(kSym2, {{1.0, std::nan(""), 0.0}}), NonFiniteError);
  CHECK_THROWS_AS(Element(kSym2, {1.0, 2.0}), DimensionMismatchError);
}
