#include "quatspec/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace quatspec
{

namespace
{

// Candidate sphere points of the exact families: u in [-2, 2], v in [0, 3].
std::vector<SpherePoint> pick_grid_points(OracleGenerator &gen, std::size_t m, int v_max)
{
  std::vector<SpherePoint> pool;
  while (pool.size() < m)
  {
    const SpherePoint p{static_cast<double>(gen.integer(-2, 2)),
                        static_cast<double>(gen.integer(0, v_max))};
    const bool seen = std::any_of(pool.begin(), pool.end(), [&](const SpherePoint &o) {
      return o.u == p.u && o.v == p.v;
    });
    if (!seen)
    {
      pool.push_back(p);
    }
  }
  return pool;
}

bool same_point(const SpherePoint &a, const SpherePoint &b) { return a.u == b.u && a.v == b.v; }

}  // namespace

OracleGenerator::OracleGenerator(std::uint64_t seed) : rng_(seed) {}

double OracleGenerator::uniform(double lo, double hi)
{
  const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

int OracleGenerator::integer(int lo, int hi)
{
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng_() % span);
}

Quaternion OracleGenerator::quaternion()
{
  const double w = uniform();
  const double x = uniform();
  const double y = uniform();
  const double z = uniform();
  return {w, x, y, z};
}

Quaternion OracleGenerator::unit_imaginary()
{
  while (true)
  {
    const double x = uniform();
    const double y = uniform();
    const double z = uniform();
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r > 0.1 && r <= 1.0)
    {
      return {0.0, x / r, y / r, z / r};
    }
  }
}

QMatrix OracleGenerator::matrix(std::size_t n)
{
  QMatrix m(n);
  for (std::size_t r = 0; r < n; r++)
  {
    for (std::size_t c = 0; c < n; c++)
    {
      m(r, c) = quaternion();
    }
  }
  return m;
}

std::vector<double> OracleGenerator::poly_coeffs(std::size_t degree)
{
  std::vector<double> c(degree + 1);
  for (auto &x : c)
  {
    x = uniform();
  }
  return c;
}

Quaternion OracleGenerator::integer_rep(const SpherePoint &p)
{
  const int v = static_cast<int>(p.v);
  double im[3] = {0.0, 0.0, 0.0};
  if (v == 3 && integer(0, 1) == 1)
  {
    // (2, 2, 1) up to sign and order.
    const int odd = integer(0, 2);
    for (int a = 0; a < 3; a++)
    {
      im[a] = (a == odd ? 1.0 : 2.0) * (integer(0, 1) ? 1.0 : -1.0);
    }
  }
  else if (v > 0)
  {
    im[integer(0, 2)] = v * (integer(0, 1) ? 1.0 : -1.0);
  }
  return {p.u, im[0], im[1], im[2]};
}

void OracleGenerator::unimodular(std::size_t n, QMatrix &s, QMatrix &s_inv)
{
  while (true)
  {
    std::vector<double> a(n * n, 0.0);
    std::vector<double> b(n * n, 0.0);
    for (std::size_t i = 0; i < n; i++)
    {
      a[i * n + i] = 1.0;
      b[i * n + i] = 1.0;
    }
    // a <- E a with E = I + c e_r e_q^T; b <- b E^{-1}.
    for (std::size_t op = 0; op <= n && n > 1; op++)
    {
      const auto r = static_cast<std::size_t>(integer(0, static_cast<int>(n) - 1));
      auto q = static_cast<std::size_t>(integer(0, static_cast<int>(n) - 2));
      if (q >= r)
      {
        q++;
      }
      const double c = integer(0, 1) ? 1.0 : -1.0;
      for (std::size_t k = 0; k < n; k++)
      {
        a[r * n + k] += c * a[q * n + k];
        b[k * n + q] -= c * b[k * n + r];
      }
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; i++)
    {
      perm[i] = i;
    }
    for (std::size_t i = n; i > 1; i--)
    {
      std::swap(perm[i - 1], perm[static_cast<std::size_t>(integer(0, static_cast<int>(i) - 1))]);
    }
    double biggest = 0.0;
    for (std::size_t k = 0; k < n * n; k++)
    {
      biggest = std::max({biggest, std::abs(a[k]), std::abs(b[k])});
    }
    if (biggest > 3.0)
    {
      continue;
    }
    // Row permutation of a, matching column permutation of b.
    s = QMatrix(n);
    s_inv = QMatrix(n);
    for (std::size_t r = 0; r < n; r++)
    {
      for (std::size_t c = 0; c < n; c++)
      {
        s(perm[r], c) = Quaternion(a[r * n + c]);
        s_inv(r, perm[c]) = Quaternion(b[r * n + c]);
      }
    }
    return;
  }
}

OracleMatrix OracleGenerator::assemble(QMatrix s, QMatrix s_inv, QMatrix d,
                                       std::vector<SpherePoint> slot_points, bool real_similarity,
                                       bool defective)
{
  OracleMatrix out;
  out.t = matmul(matmul(s, d), s_inv);
  out.s = std::move(s);
  out.s_inv = std::move(s_inv);
  out.d = std::move(d);
  out.real_similarity = real_similarity;
  out.defective = defective;
  for (const auto &p : slot_points)
  {
    auto it = std::find_if(out.spheres.begin(), out.spheres.end(),
                           [&](const Sphere &sp) { return same_point(sp.point, p); });
    if (it == out.spheres.end())
    {
      out.spheres.push_back({p, 1});
    }
    else
    {
      it->mult++;
    }
  }
  std::sort(out.spheres.begin(), out.spheres.end(), [](const Sphere &a, const Sphere &b) {
    return a.point.u != b.point.u ? a.point.u < b.point.u : a.point.v < b.point.v;
  });
  for (const auto &p : slot_points)
  {
    const auto it = std::find_if(out.spheres.begin(), out.spheres.end(),
                                 [&](const Sphere &sp) { return same_point(sp.point, p); });
    out.column_sphere.push_back(static_cast<std::size_t>(it - out.spheres.begin()));
  }
  return out;
}

OracleMatrix OracleGenerator::integer_oracle(std::size_t n, bool allow_jordan)
{
  const auto m = static_cast<std::size_t>(integer(1, static_cast<int>(std::min<std::size_t>(n, 4))));
  const std::vector<SpherePoint> pool = pick_grid_points(*this, m, 3);
  QMatrix d(n);
  std::vector<SpherePoint> slots;
  bool defective = false;
  for (std::size_t j = 0; j < n;)
  {
    const SpherePoint p = pool[static_cast<std::size_t>(integer(0, static_cast<int>(m) - 1))];
    const Quaternion q = integer_rep(p);
    if (allow_jordan && j + 1 < n && uniform(0.0, 1.0) < 0.3)
    {
      d(j, j) = q;
      d(j, j + 1) = Quaternion(1.0);
      d(j + 1, j + 1) = q;
      slots.push_back(p);
      slots.push_back(p);
      defective = true;
      j += 2;
    }
    else
    {
      d(j, j) = q;
      slots.push_back(p);
      j++;
    }
  }
  QMatrix s(n), s_inv(n);
  unimodular(n, s, s_inv);
  return assemble(std::move(s), std::move(s_inv), std::move(d), std::move(slots), true, defective);
}

OracleMatrix OracleGenerator::real_oracle(std::size_t n)
{
  const auto m = static_cast<std::size_t>(integer(1, static_cast<int>(std::min<std::size_t>(n, 4))));
  const std::vector<SpherePoint> pool = pick_grid_points(*this, m, 3);
  QMatrix d(n);
  std::vector<SpherePoint> slots;
  bool defective = false;
  for (std::size_t j = 0; j < n;)
  {
    std::vector<SpherePoint> fitting;
    for (const auto &p : pool)
    {
      if (p.v == 0.0 || j + 1 < n)
      {
        fitting.push_back(p);
      }
    }
    if (fitting.empty())
    {
      // Only nonreal spheres and one slot left: close with a real eigenvalue.
      fitting.push_back({static_cast<double>(integer(-2, 2)), 0.0});
    }
    const SpherePoint p = fitting[static_cast<std::size_t>(integer(0, static_cast<int>(fitting.size()) - 1))];
    if (p.v > 0.0)
    {
      const double sign = integer(0, 1) ? 1.0 : -1.0;
      d(j, j) = Quaternion(p.u);
      d(j, j + 1) = Quaternion(sign * p.v);
      d(j + 1, j) = Quaternion(-sign * p.v);
      d(j + 1, j + 1) = Quaternion(p.u);
      slots.push_back(p);
      slots.push_back(p);
      j += 2;
    }
    else if (j + 1 < n && uniform(0.0, 1.0) < 0.3)
    {
      d(j, j) = Quaternion(p.u);
      d(j, j + 1) = Quaternion(1.0);
      d(j + 1, j + 1) = Quaternion(p.u);
      slots.push_back(p);
      slots.push_back(p);
      defective = true;
      j += 2;
    }
    else
    {
      d(j, j) = Quaternion(p.u);
      slots.push_back(p);
      j++;
    }
  }
  QMatrix s(n), s_inv(n);
  unimodular(n, s, s_inv);
  return assemble(std::move(s), std::move(s_inv), std::move(d), std::move(slots), true, defective);
}

OracleMatrix OracleGenerator::general_oracle(std::size_t n)
{
  const auto m = static_cast<std::size_t>(integer(1, static_cast<int>(std::min<std::size_t>(n, 4))));
  std::vector<SpherePoint> pool;
  while (pool.size() < m)
  {
    SpherePoint p{uniform(-2.0, 2.0), uniform(0.0, 1.0) < 0.3 ? 0.0 : uniform(0.5, 2.0)};
    const bool crowded = std::any_of(pool.begin(), pool.end(), [&](const SpherePoint &o) {
      return psi_distance(o, p) < 0.5;
    });
    if (!crowded)
    {
      pool.push_back(p);
    }
  }
  QMatrix d(n);
  std::vector<SpherePoint> slots;
  for (std::size_t j = 0; j < n; j++)
  {
    const SpherePoint p = pool[static_cast<std::size_t>(integer(0, static_cast<int>(m) - 1))];
    d(j, j) = p.v > 0.0 ? Quaternion(p.u) + unit_imaginary() * p.v : Quaternion(p.u);
    slots.push_back(p);
  }
  const double c = 0.5 / std::sqrt(static_cast<double>(n));
  while (true)
  {
    QMatrix s = add(QMatrix::identity(n), scale(matrix(n), c));
    if (condition_number(s) > 20.0)
    {
      continue;
    }
    QMatrix s_inv = invert(s);
    return assemble(std::move(s), std::move(s_inv), std::move(d), std::move(slots), false, false);
  }
}

}  // namespace quatspec
