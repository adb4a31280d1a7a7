#include <cmath>

#include <doctest.h>

#include "quatspec/errors.hpp"
#include "quatspec/oracle.hpp"
#include "quatspec/quaternion.hpp"

using namespace quatspec;

namespace
{

// Left multiplication by a as a 4x4 real matrix acting on (w, x, y, z).
Quaternion left_mul_oracle(const Quaternion &a, const Quaternion &b)
{
  const double m[4][4] = {{a.w, -a.x, -a.y, -a.z},
                          {a.x, a.w, -a.z, a.y},
                          {a.y, a.z, a.w, -a.x},
                          {a.z, -a.y, a.x, a.w}};
  const double v[4] = {b.w, b.x, b.y, b.z};
  double r[4] = {0, 0, 0, 0};
  for (int i = 0; i < 4; i++)
  {
    for (int j = 0; j < 4; j++)
    {
      r[i] += m[i][j] * v[j];
    }
  }
  return {r[0], r[1], r[2], r[3]};
}

}  // namespace

TEST_CASE("basis products follow Hamilton's rules")
{
  const Quaternion i = Quaternion::i();
  const Quaternion j = Quaternion::j();
  const Quaternion k = Quaternion::k();
  CHECK(approx_equal(i * j, k, 0.0));
  CHECK(approx_equal(j * k, i, 0.0));
  CHECK(approx_equal(k * i, j, 0.0));
  CHECK(approx_equal(j * i, -k, 0.0));
  CHECK(approx_equal(i * i, Quaternion(-1.0), 0.0));
  CHECK(approx_equal(i * j * k, Quaternion(-1.0), 0.0));
}

TEST_CASE("product agrees with the real 4x4 representation")
{
  OracleGenerator gen(11);
  for (int t = 0; t < 200; t++)
  {
    const Quaternion a = gen.quaternion();
    const Quaternion b = gen.quaternion();
    CHECK(approx_equal(a * b, left_mul_oracle(a, b), 1e-15));
  }
}

TEST_CASE("algebra properties")
{
  OracleGenerator gen(12);
  for (int t = 0; t < 200; t++)
  {
    const Quaternion a = gen.quaternion();
    const Quaternion b = gen.quaternion();
    const Quaternion c = gen.quaternion();
    CHECK(approx_equal((a * b) * c, a * (b * c), 1e-14));
    CHECK(qabs(a * b) == doctest::Approx(qabs(a) * qabs(b)).epsilon(1e-14));
    CHECK(approx_equal(qconj(a * b), qconj(b) * qconj(a), 1e-15));
    CHECK(approx_equal(a * qinv(a), Quaternion(1.0), 1e-14));
    CHECK(approx_equal(qinv(a) * a, Quaternion(1.0), 1e-14));
    CHECK(approx_equal(a * (b + c), a * b + a * c, 1e-15));
  }
}

TEST_CASE("inverse of zero is a domain error")
{
  CHECK_THROWS_AS(qinv(Quaternion()), DomainError);
}

TEST_CASE("psi of basic quaternions")
{
  const SpherePoint p = psi(Quaternion(1.0, 0.0, 3.0, 4.0));
  CHECK(p.u == 1.0);
  CHECK(p.v == doctest::Approx(5.0));
  const SpherePoint r = psi(Quaternion(-2.0));
  CHECK(r.u == -2.0);
  CHECK(r.v == 0.0);
}

TEST_CASE("psi is invariant under conjugation by unit quaternions")
{
  OracleGenerator gen(13);
  for (int t = 0; t < 200; t++)
  {
    const Quaternion q = gen.quaternion();
    Quaternion h = gen.quaternion();
    h = h * (1.0 / qabs(h));
    const SpherePoint a = psi(q);
    const SpherePoint b = psi(h * q * qinv(h));
    CHECK(psi_distance(a, b) <= 1e-14);
    CHECK(psi_distance(a, psi(qconj(q))) <= 1e-15);
  }
}

TEST_CASE("slice_embed inverts psi on every slice")
{
  OracleGenerator gen(14);
  for (int t = 0; t < 100; t++)
  {
    const SpherePoint p{gen.uniform(-3, 3), gen.uniform(0, 3)};
    const SliceUnit slice(gen.unit_imaginary());
    CHECK(psi_distance(psi(slice_embed(p, slice)), p) <= 1e-14);
    CHECK(qabs(slice.unit() * slice.unit() + Quaternion(1.0)) <= 1e-15);
  }
  CHECK_THROWS_AS(SliceUnit(Quaternion(2.0)), DomainError);
}

TEST_CASE("slice embedding is a field homomorphism")
{
  OracleGenerator gen(15);
  const SliceUnit slice(gen.unit_imaginary());
  for (int t = 0; t < 100; t++)
  {
    const std::complex<double> a(gen.uniform(), gen.uniform());
    const std::complex<double> b(gen.uniform(), gen.uniform());
    CHECK(approx_equal(slice.embed(a * b), slice.embed(a) * slice.embed(b), 1e-15));
    CHECK(approx_equal(slice.embed(a + b), slice.embed(a) + slice.embed(b), 1e-15));
  }
}

TEST_CASE("sphere distance")
{
  // [i] and [2j] sit at (0, 1) and (0, 2).
  CHECK(sphere_distance(psi(Quaternion::i()), psi(2.0 * Quaternion::j())) == doctest::Approx(1.0));
  CHECK(sphere_distance({1.0, 0.0}, {1.0, 0.0}) == 0.0);
  CHECK(same_sphere(Quaternion::i(), Quaternion::k(), 1e-15));
  CHECK_FALSE(same_sphere(Quaternion::i(), Quaternion(0.0, 1.1), 1e-3));

  OracleGenerator gen(16);
  for (int t = 0; t < 300; t++)
  {
    const SpherePoint a{gen.uniform(-2, 2), gen.uniform(0, 2)};
    const SpherePoint b{gen.uniform(-2, 2), gen.uniform(0, 2)};
    const SpherePoint c{gen.uniform(-2, 2), gen.uniform(0, 2)};
    CHECK(sphere_distance(a, b) == doctest::Approx(sphere_distance(b, a)));
    CHECK(sphere_distance(a, c) <= sphere_distance(a, b) + sphere_distance(b, c) + 1e-14);
    // All pairings of upper half-plane points: the nearest is the direct one.
    CHECK(sphere_distance(a, b) == doctest::Approx(psi_distance(a, b)).epsilon(1e-14));
  }
}
