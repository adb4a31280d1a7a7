#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "quatspec/quaternion.hpp"

namespace quatspec
{

/// Complex matrices; produced by `chi` and consumed by the dense kernels.
using CMatrix = Eigen::MatrixXcd;

/// Column vector in H^n.
using QVector = std::vector<Quaternion>;

/// Largest accepted side of a quaternionic matrix (chi side 128).
inline constexpr std::size_t kMaxSide = 64;

/// Dense n x n quaternionic matrix, read as a right-linear operator on H^n
/// in the standard basis: (T x)_r = sum_c T(r,c) * x_c, products taken in
/// that order, so T(x q) = (T x) q.
class QMatrix
{
public:
  /// n x n zero matrix. Throws SizeError unless 1 <= n <= kMaxSide.
  explicit QMatrix(std::size_t n);

  /// Row-major entries; throws DimError if entries.size() != n*n and
  /// DomainError on non-finite entries.
  QMatrix(std::size_t n, std::vector<Quaternion> entries);

  static QMatrix identity(std::size_t n);
  static QMatrix diag(std::span<const Quaternion> d);
  static QMatrix diag(std::initializer_list<Quaternion> d);
  /// q on the diagonal: the scalar q acting through the standard basis.
  static QMatrix scalar(std::size_t n, const Quaternion &q);
  static QMatrix from_rows(std::initializer_list<std::initializer_list<Quaternion>> rows);

  std::size_t n() const { return n_; }

  const Quaternion &operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  Quaternion &operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }

  std::span<const Quaternion> entries() const { return data_; }

  /// True if every entry has zero imaginary part within tol.
  bool is_real(double tol = 0.0) const;

private:
  std::size_t n_;
  std::vector<Quaternion> data_;
};

QMatrix matmul(const QMatrix &s, const QMatrix &t);
QMatrix add(const QMatrix &s, const QMatrix &t);
QMatrix sub(const QMatrix &s, const QMatrix &t);
QMatrix scale(const QMatrix &t, double s);
/// q T: every entry multiplied by q on the left (basis-induced left scalar multiplication).
QMatrix scale_left(const Quaternion &q, const QMatrix &t);
/// T q: every entry multiplied by q on the right.
QMatrix scale_right(const QMatrix &t, const Quaternion &q);

inline QMatrix operator*(const QMatrix &s, const QMatrix &t) { return matmul(s, t); }
inline QMatrix operator+(const QMatrix &s, const QMatrix &t) { return add(s, t); }
inline QMatrix operator-(const QMatrix &s, const QMatrix &t) { return sub(s, t); }
inline QMatrix operator*(double a, const QMatrix &t) { return scale(t, a); }

QVector apply(const QMatrix &t, std::span<const Quaternion> x);
double vec_norm(std::span<const Quaternion> x);

/// Complex adjoint embedding: entry q = alpha + beta j (alpha, beta in C_i)
/// assembles into [[A, B], [-conj(B), conj(A)]].
CMatrix chi(const QMatrix &t);

/// ||D - conj(A)|| + ||C + conj(B)|| (Frobenius) for M = [[A, B], [C, D]].
double structure_defect(const CMatrix &m);

/// Inverse of chi. The blocks are symmetrized before reading; throws
/// StructureError when the defect exceeds structure_tol (negative selects the
/// default 1e-8 * ||M||_F) and DimError for odd sides.
QMatrix chi_back(const CMatrix &m, double structure_tol = -1.0);

struct SolveOptions
{
  /// Relative pivot threshold against ||chi(T)||_inf.
  double pivot_tol = 1e-12;
};

/// X with T X = B via LU with partial pivoting on chi(T). Throws SingularError
/// when a pivot falls below pivot_tol * ||chi(T)||_inf.
QMatrix solve(const QMatrix &t, const QMatrix &b, const SolveOptions &opts = {});
QMatrix invert(const QMatrix &t, const SolveOptions &opts = {});

/// Largest singular value of chi(T) (the operator norm on H^n).
double op_norm(const QMatrix &t);
double frob_norm(const QMatrix &t);
/// Smallest singular value of chi(T).
double min_singular(const QMatrix &t);
/// sigma_max / sigma_min of chi(T); +inf for singular input.
double condition_number(const QMatrix &t);

/// Quaternionic rank: half the number of singular values of chi(T) above
/// rank_tol * sigma_max. Throws RankParityError if that count is odd.
std::size_t hrank(const QMatrix &t, double rank_tol = 1e-8);

}  // namespace quatspec
