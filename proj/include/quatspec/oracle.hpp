#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "quatspec/qmatrix.hpp"
#include "quatspec/quaternion.hpp"
#include "quatspec/spectrum.hpp"

namespace quatspec
{

/// A matrix T = S D S^{-1} whose sphere set is known by construction.
struct OracleMatrix
{
  QMatrix t{1};
  QMatrix s{1};
  QMatrix s_inv{1};
  QMatrix d{1};
  /// Sorted by (u, v) like s_spectrum output.
  std::vector<Sphere> spheres;
  /// For each column j of S, the index (into spheres) of the block it spans.
  std::vector<std::size_t> column_sphere;
  /// S is real, so every Riesz projector is a real matrix.
  bool real_similarity = false;
  /// Contains at least one 2x2 Jordan-type block.
  bool defective = false;
};

/// Seeded generators for random matrices and oracle constructions. The same
/// seed reproduces the same sequence on every platform (mt19937_64 plus
/// explicit transforms; no std distributions whose output is unspecified).
class OracleGenerator
{
public:
  explicit OracleGenerator(std::uint64_t seed);

  /// Uniform on [lo, hi).
  double uniform(double lo = -1.0, double hi = 1.0);
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);

  /// Components uniform on [-1, 1].
  Quaternion quaternion();
  /// Unit purely imaginary quaternion, uniform on the sphere.
  Quaternion unit_imaginary();
  /// Entries with components uniform on [-1, 1].
  QMatrix matrix(std::size_t n);
  /// Real polynomial with coefficients uniform on [-1, 1] and the given degree.
  std::vector<double> poly_coeffs(std::size_t degree);

  /// Integer family: S is a real integer unimodular matrix, D is block
  /// diagonal with integer quaternion entries (optionally 2x2 Jordan-type
  /// blocks); every product is exact in double precision.
  OracleMatrix integer_oracle(std::size_t n, bool allow_jordan = true);

  /// Real-entry family: S real integer unimodular, D real block diagonal with
  /// 2x2 rotation-scaling blocks for nonreal spheres.
  OracleMatrix real_oracle(std::size_t n);

  /// General family: quaternionic S = I + c R with random R, D diagonal with
  /// random quaternions on well-separated random spheres.
  OracleMatrix general_oracle(std::size_t n);

private:
  std::mt19937_64 rng_;

  Quaternion integer_rep(const SpherePoint &p);
  void unimodular(std::size_t n, QMatrix &s, QMatrix &s_inv);
  OracleMatrix assemble(QMatrix s, QMatrix s_inv, QMatrix d, std::vector<SpherePoint> slot_points,
                        bool real_similarity, bool defective);
};

}  // namespace quatspec
