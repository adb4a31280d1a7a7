#pragma once

#include <array>
#include <complex>

namespace quatspec
{

/// One element of the quaternion algebra, w + x i + y j + z k.
///
/// Quaternions are plain values. There is deliberately no operator==: every
/// producer in this library is floating point, so comparisons go through
/// tolerances (see `approx_equal`, `same_sphere`).
struct Quaternion
{
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
    : w(w_), x(x_), y(y_), z(z_)
  {
  }

  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double re() const { return w; }
  constexpr Quaternion im() const { return {0.0, x, y, z}; }

  // Components in the serialization order [w, x, y, z].
  constexpr std::array<double, 4> components() const { return {w, x, y, z}; }

  Quaternion &operator+=(const Quaternion &o);
  Quaternion &operator-=(const Quaternion &o);
  Quaternion &operator*=(double s);
};

Quaternion operator+(Quaternion a, const Quaternion &b);
Quaternion operator-(Quaternion a, const Quaternion &b);
Quaternion operator-(const Quaternion &a);
Quaternion operator*(Quaternion a, double s);
Quaternion operator*(double s, Quaternion a);

/// Hamilton product: ij = k, jk = i, ki = j.
Quaternion qmul(const Quaternion &a, const Quaternion &b);
inline Quaternion operator*(const Quaternion &a, const Quaternion &b) { return qmul(a, b); }

Quaternion qconj(const Quaternion &q);
double qnormsq(const Quaternion &q);
double qabs(const Quaternion &q);
double im_abs(const Quaternion &q);

/// q̄ / |q|². Throws DomainError("zero quaternion") for q = 0.
Quaternion qinv(const Quaternion &q);

bool is_finite(const Quaternion &q);
bool approx_equal(const Quaternion &a, const Quaternion &b, double tol);

/// Canonical coordinates (Re q, |Im q|) of the sphere [q] in the closed
/// upper half-plane.
struct SpherePoint
{
  double u = 0.0;
  double v = 0.0;
};

/// Unit purely imaginary quaternion I, spanning the slice C_I = R + I R.
class SliceUnit
{
public:
  // Canonical slice: I = i.
  SliceUnit() = default;

  /// Normalizes the imaginary part of `q`. Throws DomainError if Im(q) = 0.
  explicit SliceUnit(const Quaternion &q);

  const Quaternion &unit() const { return unit_; }

  /// Embeds a + b·I for the complex number a + b·i.
  Quaternion embed(std::complex<double> c) const;

private:
  Quaternion unit_ = Quaternion::i();
};

SpherePoint psi(const Quaternion &q);

/// u + I v; psi(slice_embed(p, I)) recovers p for every I.
Quaternion slice_embed(const SpherePoint &p, const SliceUnit &slice = SliceUnit{});

/// Distance between the two 2-spheres, computed as the minimum over the four
/// planar pairings of representatives u ± i v.
double sphere_distance(const SpherePoint &a, const SpherePoint &b);

/// Euclidean distance between Ψ-images; equals |psi(p) - psi(q)|.
double psi_distance(const SpherePoint &a, const SpherePoint &b);

bool same_sphere(const Quaternion &p, const Quaternion &q, double tol);

/// Quaternion of the slice C_i corresponding to a complex number.
inline Quaternion from_complex(std::complex<double> c) { return {c.real(), c.imag(), 0.0, 0.0}; }

}  // namespace quatspec
