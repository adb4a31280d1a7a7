#include "quatspec/quaternion.hpp"

#include <algorithm>
#include <cmath>

#include "quatspec/errors.hpp"

namespace quatspec
{

Quaternion &Quaternion::operator+=(const Quaternion &o)
{
  w += o.w;
  x += o.x;
  y += o.y;
  z += o.z;
  return *this;
}

Quaternion &Quaternion::operator-=(const Quaternion &o)
{
  w -= o.w;
  x -= o.x;
  y -= o.y;
  z -= o.z;
  return *this;
}

Quaternion &Quaternion::operator*=(double s)
{
  w *= s;
  x *= s;
  y *= s;
  z *= s;
  return *this;
}

Quaternion operator+(Quaternion a, const Quaternion &b) { return a += b; }
Quaternion operator-(Quaternion a, const Quaternion &b) { return a -= b; }
Quaternion operator-(const Quaternion &a) { return {-a.w, -a.x, -a.y, -a.z}; }
Quaternion operator*(Quaternion a, double s) { return a *= s; }
Quaternion operator*(double s, Quaternion a) { return a *= s; }

Quaternion qmul(const Quaternion &a, const Quaternion &b)
{
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion qconj(const Quaternion &q) { return {q.w, -q.x, -q.y, -q.z}; }

double qnormsq(const Quaternion &q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }

double qabs(const Quaternion &q) { return std::sqrt(qnormsq(q)); }

double im_abs(const Quaternion &q) { return std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z); }

Quaternion qinv(const Quaternion &q)
{
  const double n2 = qnormsq(q);
  if (n2 == 0.0)
  {
    throw DomainError("zero quaternion");
  }
  return qconj(q) * (1.0 / n2);
}

bool is_finite(const Quaternion &q)
{
  return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z);
}

bool approx_equal(const Quaternion &a, const Quaternion &b, double tol)
{
  return qabs(a - b) <= tol;
}

SliceUnit::SliceUnit(const Quaternion &q)
{
  const double r = im_abs(q);
  if (r == 0.0)
  {
    throw DomainError("slice unit needs a nonzero imaginary part");
  }
  unit_ = {0.0, q.x / r, q.y / r, q.z / r};
}

Quaternion SliceUnit::embed(std::complex<double> c) const
{
  return Quaternion(c.real()) + unit_ * c.imag();
}

SpherePoint psi(const Quaternion &q) { return {q.w, im_abs(q)}; }

Quaternion slice_embed(const SpherePoint &p, const SliceUnit &slice)
{
  return slice.embed({p.u, p.v});
}

double sphere_distance(const SpherePoint &a, const SpherePoint &b)
{
  double best = std::hypot(a.u - b.u, a.v - b.v);
  for (double sa : {1.0, -1.0})
  {
    for (double sb : {1.0, -1.0})
    {
      best = std::min(best, std::hypot(a.u - b.u, sa * a.v - sb * b.v));
    }
  }
  return best;
}

double psi_distance(const SpherePoint &a, const SpherePoint &b)
{
  return std::hypot(a.u - b.u, a.v - b.v);
}

bool same_sphere(const Quaternion &p, const Quaternion &q, double tol)
{
  return psi_distance(psi(p), psi(q)) <= tol;
}

}  // namespace quatspec
