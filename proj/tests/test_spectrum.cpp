#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "quatspec/oracle.hpp"
#include "quatspec/spectrum.hpp"

using namespace quatspec;

namespace
{

using CL = std::complex<long double>;

// Characteristic polynomial coefficients (monic, highest first) by the
// Faddeev-LeVerrier recursion in extended precision.
std::vector<CL> char_poly(const CMatrix &a)
{
  const std::size_t n = static_cast<std::size_t>(a.rows());
  std::vector<std::vector<CL>> m(n, std::vector<CL>(n));
  std::vector<std::vector<CL>> am(n, std::vector<CL>(n));
  std::vector<CL> c(n + 1);
  c[0] = 1;
  for (std::size_t k = 1; k <= n; k++)
  {
    for (std::size_t r = 0; r < n; r++)
    {
      for (std::size_t s = 0; s < n; s++)
      {
        if (r == s)
        {
          m[r][s] += c[k - 1];
        }
      }
    }
    for (std::size_t r = 0; r < n; r++)
    {
      for (std::size_t s = 0; s < n; s++)
      {
        CL acc = 0;
        for (std::size_t t = 0; t < n; t++)
        {
          acc += CL(a(r, t).real(), a(r, t).imag()) * m[t][s];
        }
        am[r][s] = acc;
      }
    }
    CL trace = 0;
    for (std::size_t r = 0; r < n; r++)
    {
      trace += am[r][r];
    }
    c[k] = -trace / static_cast<long double>(k);
    m = am;
  }
  return c;
}

// Durand-Kerner simultaneous iteration on a monic polynomial.
std::vector<std::complex<double>> durand_kerner(const std::vector<CL> &c)
{
  const std::size_t n = c.size() - 1;
  std::vector<CL> z(n);
  const CL seed(0.4L, 0.9L);
  for (std::size_t k = 0; k < n; k++)
  {
    z[k] = std::pow(seed, static_cast<long double>(k));
  }
  auto eval = [&](CL x) {
    CL acc = 0;
    for (const auto &ck : c)
    {
      acc = acc * x + ck;
    }
    return acc;
  };
  for (int it = 0; it < 2000; it++)
  {
    for (std::size_t k = 0; k < n; k++)
    {
      CL den = 1;
      for (std::size_t j = 0; j < n; j++)
      {
        if (j != k)
        {
          den *= z[k] - z[j];
        }
      }
      z[k] -= eval(z[k]) / den;
    }
  }
  std::vector<std::complex<double>> out;
  for (const auto &x : z)
  {
    out.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  }
  return out;
}

// Greedy matching distance between two multisets of the same size.
double match_error(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b)
{
  double worst = 0.0;
  for (const auto &x : a)
  {
    auto it = std::min_element(b.begin(), b.end(), [&](const auto &p, const auto &q) {
      return std::abs(p - x) < std::abs(q - x);
    });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST_CASE("complex eigenvalues agree with polynomial roots")
{
  OracleGenerator gen(31);
  for (int t = 0; t < 5; t++)
  {
    CMatrix a(8, 8);
    for (int r = 0; r < 8; r++)
    {
      for (int c = 0; c < 8; c++)
      {
        a(r, c) = {gen.uniform(), gen.uniform()};
      }
    }
    const EigResult res = complex_eigs(a);
    REQUIRE(res.values.size() == 8);
    CHECK(res.residual <= 1e-12);
    CHECK(match_error(res.values, durand_kerner(char_poly(a))) <= 1e-8);
  }
}

TEST_CASE("complex eigenvalues of a triangular matrix")
{
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = {1, 1};
  a(1, 1) = {-2, 0};
  a(2, 2) = {0, 3};
  a(0, 2) = 5.0;
  const EigResult res = complex_eigs(a);
  CHECK(match_error(res.values, {{1, 1}, {-2, 0}, {0, 3}}) <= 1e-14);
  // Sorted by (Re, Im).
  CHECK(res.values.front().real() == doctest::Approx(-2.0));
}

TEST_CASE("diagonal example")
{
  const QMatrix t = QMatrix::diag({Quaternion::i(), 2.0 * Quaternion::j()});
  const SpectrumReport rep = s_spectrum(t);
  REQUIRE(rep.spheres.size() == 2);
  CHECK(rep.spheres[0].point.u == doctest::Approx(0.0));
  CHECK(rep.spheres[0].point.v == doctest::Approx(1.0));
  CHECK(rep.spheres[1].point.v == doctest::Approx(2.0));
  CHECK(rep.spheres[0].mult == 1);
  CHECK(rep.gaps[0] == doctest::Approx(1.0));
  CHECK(rep.op_norm == doctest::Approx(2.0));
  CHECK(find_sphere(rep, {0.0, 2.0}, 1e-9) == std::optional<std::size_t>(1));
  CHECK_FALSE(find_sphere(rep, {0.0, 3.0}, 1e-9).has_value());
}

TEST_CASE("entries on one sphere merge")
{
  const QMatrix t = QMatrix::diag({Quaternion(1.0, 1.0), Quaternion(1.0, 0.0, 0.6, 0.8)});
  const SpectrumReport rep = s_spectrum(t);
  REQUIRE(rep.spheres.size() == 1);
  CHECK(rep.spheres[0].mult == 2);
  CHECK(std::isinf(rep.gaps[0]));
}

TEST_CASE("real rotation has one nonreal sphere of multiplicity two")
{
  const QMatrix t = QMatrix::from_rows({{Quaternion(0.0), Quaternion(-1.0)},
                                        {Quaternion(1.0), Quaternion(0.0)}});
  const SpectrumReport rep = s_spectrum(t);
  REQUIRE(rep.spheres.size() == 1);
  CHECK(rep.spheres[0].point.v == doctest::Approx(1.0));
  CHECK(rep.spheres[0].mult == 2);
}

TEST_CASE("real eigenvalues snap to the real axis")
{
  const QMatrix t = QMatrix::from_rows({{Quaternion(2.0), Quaternion(1.0)},
                                        {Quaternion(0.0), Quaternion(2.0)}});
  const SpectrumReport rep = s_spectrum(t);
  REQUIRE(rep.spheres.size() == 1);
  CHECK(rep.spheres[0].point.v == 0.0);
  CHECK(rep.spheres[0].mult == 2);
}

TEST_CASE("spectrum is invariant under similarity")
{
  OracleGenerator gen(32);
  for (int t = 0; t < 20; t++)
  {
    const OracleMatrix m = gen.general_oracle(static_cast<std::size_t>(gen.integer(2, 6)));
    const QMatrix s = gen.matrix(m.t.n());
    const QMatrix moved = matmul(matmul(s, m.t), invert(s));
    const SpectrumReport a = s_spectrum(m.t);
    const SpectrumReport b = s_spectrum(moved);
    REQUIRE(a.spheres.size() == b.spheres.size());
    std::size_t total = 0;
    for (std::size_t k = 0; k < a.spheres.size(); k++)
    {
      CHECK(psi_distance(a.spheres[k].point, b.spheres[k].point) <= 1e-7);
      CHECK(a.spheres[k].mult == b.spheres[k].mult);
      total += a.spheres[k].mult;
    }
    CHECK(total == m.t.n());
  }
}

TEST_CASE("spectral radius is bounded by the norm")
{
  OracleGenerator gen(33);
  for (int t = 0; t < 50; t++)
  {
    const QMatrix a = gen.matrix(static_cast<std::size_t>(gen.integer(1, 8)));
    CHECK(s_spectral_radius(a) <= op_norm(a) * (1 + 1e-12));
  }
}

TEST_CASE("pseudo resolvent operator is singular exactly on the spectrum")
{
  const QMatrix t = QMatrix::diag({Quaternion::i(), 2.0 * Quaternion::j()});
  // Q_q(T) for q on [i] vanishes on the first coordinate for every representative.
  CHECK(min_singular(pseudo_Q(Quaternion::k(), t)) <= 1e-14);
  CHECK(min_singular(pseudo_Q(Quaternion(0.0, 0.0, 2.0), t)) <= 1e-14);
  CHECK(min_singular(pseudo_Q(Quaternion(0.5, 1.0), t)) > 0.1);
  const QMatrix q = pseudo_Q(Quaternion::i(), t);
  CHECK(qabs(q(1, 1) - Quaternion(-3.0)) <= 1e-15);
}
