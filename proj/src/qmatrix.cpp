#include "quatspec/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quatspec/errors.hpp"

namespace quatspec
{

namespace
{

void require_same_size(const QMatrix &s, const QMatrix &t, const char *op)
{
  if (s.n() != t.n())
  {
    throw DimError(std::string(op) + ": size mismatch " + std::to_string(s.n()) + " vs " +
                   std::to_string(t.n()));
  }
}

Eigen::VectorXd singular_values(const QMatrix &t)
{
  Eigen::JacobiSVD<CMatrix> svd(chi(t));
  return svd.singularValues();
}

}  // namespace

QMatrix::QMatrix(std::size_t n) : n_(n)
{
  if (n == 0 || n > kMaxSide)
  {
    throw SizeError("matrix side " + std::to_string(n) + " outside [1, " +
                    std::to_string(kMaxSide) + "]");
  }
  data_.assign(n * n, Quaternion{});
}

QMatrix::QMatrix(std::size_t n, std::vector<Quaternion> entries) : QMatrix(n)
{
  if (entries.size() != n * n)
  {
    throw DimError("expected " + std::to_string(n * n) + " entries, got " +
                   std::to_string(entries.size()));
  }
  for (const auto &q : entries)
  {
    if (!is_finite(q))
    {
      throw DomainError("non-finite matrix entry");
    }
  }
  data_ = std::move(entries);
}

QMatrix QMatrix::identity(std::size_t n) { return scalar(n, Quaternion(1.0)); }

QMatrix QMatrix::scalar(std::size_t n, const Quaternion &q)
{
  QMatrix m(n);
  for (std::size_t r = 0; r < n; r++)
  {
    m(r, r) = q;
  }
  return m;
}

QMatrix QMatrix::diag(std::span<const Quaternion> d)
{
  QMatrix m(d.size());
  for (std::size_t r = 0; r < d.size(); r++)
  {
    m(r, r) = d[r];
  }
  return m;
}

QMatrix QMatrix::diag(std::initializer_list<Quaternion> d)
{
  return diag(std::span<const Quaternion>(d.begin(), d.size()));
}

QMatrix QMatrix::from_rows(std::initializer_list<std::initializer_list<Quaternion>> rows)
{
  const std::size_t n = rows.size();
  std::vector<Quaternion> entries;
  entries.reserve(n * n);
  for (const auto &row : rows)
  {
    if (row.size() != n)
    {
      throw DimError("ragged row in matrix literal");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return QMatrix(n, std::move(entries));
}

bool QMatrix::is_real(double tol) const
{
  return std::all_of(data_.begin(), data_.end(),
                     [tol](const Quaternion &q) { return im_abs(q) <= tol; });
}

QMatrix matmul(const QMatrix &s, const QMatrix &t)
{
  require_same_size(s, t, "matmul");
  const std::size_t n = s.n();
  QMatrix out(n);
  for (std::size_t r = 0; r < n; r++)
  {
    for (std::size_t c = 0; c < n; c++)
    {
      Quaternion acc;
      for (std::size_t k = 0; k < n; k++)
      {
        acc += qmul(s(r, k), t(k, c));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

QMatrix add(const QMatrix &s, const QMatrix &t)
{
  require_same_size(s, t, "add");
  QMatrix out = s;
  for (std::size_t r = 0; r < s.n(); r++)
  {
    for (std::size_t c = 0; c < s.n(); c++)
    {
      out(r, c) += t(r, c);
    }
  }
  return out;
}

QMatrix sub(const QMatrix &s, const QMatrix &t)
{
  require_same_size(s, t, "sub");
  QMatrix out = s;
  for (std::size_t r = 0; r < s.n(); r++)
  {
    for (std::size_t c = 0; c < s.n(); c++)
    {
      out(r, c) -= t(r, c);
    }
  }
  return out;
}

QMatrix scale(const QMatrix &t, double s)
{
  QMatrix out = t;
  for (std::size_t r = 0; r < t.n(); r++)
  {
    for (std::size_t c = 0; c < t.n(); c++)
    {
      out(r, c) *= s;
    }
  }
  return out;
}

QMatrix scale_left(const Quaternion &q, const QMatrix &t)
{
  QMatrix out(t.n());
  for (std::size_t r = 0; r < t.n(); r++)
  {
    for (std::size_t c = 0; c < t.n(); c++)
    {
      out(r, c) = qmul(q, t(r, c));
    }
  }
  return out;
}

QMatrix scale_right(const QMatrix &t, const Quaternion &q)
{
  QMatrix out(t.n());
  for (std::size_t r = 0; r < t.n(); r++)
  {
    for (std::size_t c = 0; c < t.n(); c++)
    {
      out(r, c) = qmul(t(r, c), q);
    }
  }
  return out;
}

QVector apply(const QMatrix &t, std::span<const Quaternion> x)
{
  if (x.size() != t.n())
  {
    throw DimError("apply: vector length does not match matrix side");
  }
  QVector y(t.n());
  for (std::size_t r = 0; r < t.n(); r++)
  {
    Quaternion acc;
    for (std::size_t c = 0; c < t.n(); c++)
    {
      acc += qmul(t(r, c), x[c]);
    }
    y[r] = acc;
  }
  return y;
}

double vec_norm(std::span<const Quaternion> x)
{
  double s = 0.0;
  for (const auto &q : x)
  {
    s += qnormsq(q);
  }
  return std::sqrt(s);
}

CMatrix chi(const QMatrix &t)
{
  const auto n = static_cast<Eigen::Index>(t.n());
  CMatrix m(2 * n, 2 * n);
  for (Eigen::Index r = 0; r < n; r++)
  {
    for (Eigen::Index c = 0; c < n; c++)
    {
      const Quaternion &q = t(r, c);
      const std::complex<double> alpha(q.w, q.x);
      const std::complex<double> beta(q.y, q.z);
      m(r, c) = alpha;
      m(r, c + n) = beta;
      m(r + n, c) = -std::conj(beta);
      m(r + n, c + n) = std::conj(alpha);
    }
  }
  return m;
}

double structure_defect(const CMatrix &m)
{
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
  {
    throw DimError("chi structure needs an even square matrix");
  }
  const Eigen::Index n = m.rows() / 2;
  const auto a = m.topLeftCorner(n, n);
  const auto b = m.topRightCorner(n, n);
  const auto c = m.bottomLeftCorner(n, n);
  const auto d = m.bottomRightCorner(n, n);
  return (d - a.conjugate()).norm() + (c + b.conjugate()).norm();
}

QMatrix chi_back(const CMatrix &m, double structure_tol)
{
  const double defect = structure_defect(m);
  const double tol = structure_tol < 0.0 ? 1e-8 * m.norm() : structure_tol;
  if (defect > tol)
  {
    throw StructureError("chi structure defect " + format_real(defect) +
                         " exceeds tolerance " + format_real(tol));
  }
  const Eigen::Index n = m.rows() / 2;
  QMatrix out(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; r++)
  {
    for (Eigen::Index c = 0; c < n; c++)
    {
      const std::complex<double> alpha = 0.5 * (m(r, c) + std::conj(m(r + n, c + n)));
      const std::complex<double> beta = 0.5 * (m(r, c + n) - std::conj(m(r + n, c)));
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
          Quaternion(alpha.real(), alpha.imag(), beta.real(), beta.imag());
    }
  }
  return out;
}

QMatrix solve(const QMatrix &t, const QMatrix &b, const SolveOptions &opts)
{
  require_same_size(t, b, "solve");
  const CMatrix mt = chi(t);
  const double scale_ref = mt.cwiseAbs().rowwise().sum().maxCoeff();
  Eigen::PartialPivLU<CMatrix> lu(mt);
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double smallest = pivots.minCoeff();
  if (!(smallest >= opts.pivot_tol * scale_ref) || scale_ref == 0.0)
  {
    throw SingularError("pivot " + format_real(smallest) + " below " +
                        format_real(opts.pivot_tol) + " * ||chi(T)||");
  }
  const CMatrix x = lu.solve(chi(b));
  // The solution inherits chi structure up to rounding; symmetrize without a defect check.
  return chi_back(x, std::numeric_limits<double>::infinity());
}

QMatrix invert(const QMatrix &t, const SolveOptions &opts)
{
  return solve(t, QMatrix::identity(t.n()), opts);
}

double op_norm(const QMatrix &t) { return singular_values(t)(0); }

double frob_norm(const QMatrix &t)
{
  double s = 0.0;
  for (const auto &q : t.entries())
  {
    s += qnormsq(q);
  }
  return std::sqrt(s);
}

double min_singular(const QMatrix &t)
{
  const auto sv = singular_values(t);
  return sv(sv.size() - 1);
}

double condition_number(const QMatrix &t)
{
  const auto sv = singular_values(t);
  const double lo = sv(sv.size() - 1);
  return lo > 0.0 ? sv(0) / lo : std::numeric_limits<double>::infinity();
}

std::size_t hrank(const QMatrix &t, double rank_tol)
{
  if (!(rank_tol > 0.0))
  {
    throw DomainError("rank_tol must be positive");
  }
  const auto sv = singular_values(t);
  const double cut = rank_tol * sv(0);
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < sv.size(); i++)
  {
    if (sv(i) > cut)
    {
      count++;
    }
  }
  if (count % 2 != 0)
  {
    throw RankParityError("complex rank " + std::to_string(count) + " is odd");
  }
  return count / 2;
}

}  // namespace quatspec
