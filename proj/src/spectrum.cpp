#include "quatspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "quatspec/errors.hpp"

namespace quatspec
{

namespace
{

constexpr Eigen::Index kMaxComplexSide = 2 * static_cast<Eigen::Index>(kMaxSide);

bool complex_less(const std::complex<double> &a, const std::complex<double> &b)
{
  if (a.real() != b.real())
  {
    return a.real() < b.real();
  }
  return a.imag() < b.imag();
}

struct DisjointSets
{
  std::vector<std::size_t> parent;

  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  std::size_t find(std::size_t i)
  {
    while (parent[i] != i)
    {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a != b)
    {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
};

}  // namespace

EigResult complex_eigs(const CMatrix &m, const EigOptions &opts)
{
  if (m.rows() != m.cols())
  {
    throw DimError("complex_eigs needs a square matrix");
  }
  if (m.rows() > kMaxComplexSide)
  {
    throw SizeError("complex_eigs: side " + std::to_string(m.rows()) + " exceeds 128");
  }
  EigResult out;
  if (m.rows() == 0)
  {
    return out;
  }
  Eigen::ComplexEigenSolver<CMatrix> solver;
  solver.setMaxIterations(opts.max_sweeps >= 0 ? opts.max_sweeps
                                               : static_cast<Eigen::Index>(30 * m.rows()));
  solver.compute(m, true);
  if (solver.info() != Eigen::Success)
  {
    throw ConvergenceError("QR iteration did not converge");
  }

  const auto &vals = solver.eigenvalues();
  const auto &vecs = solver.eigenvectors();
  const double norm_m = Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); i++)
  {
    const auto v = vecs.col(i);
    const double vn = v.norm();
    if (vn == 0.0 || norm_m == 0.0)
    {
      continue;
    }
    worst = std::max(worst, (m * v - vals(i) * v).norm() / (vn * norm_m));
  }
  out.residual = worst;
  out.values.assign(vals.data(), vals.data() + vals.size());
  std::sort(out.values.begin(), out.values.end(), complex_less);
  return out;
}

double default_cluster_tol(double op_norm_t) { return 1e-7 * std::max(1.0, op_norm_t); }

SpectrumReport s_spectrum(const QMatrix &t, const SpectrumOptions &opts)
{
  SpectrumReport rep;
  rep.op_norm = op_norm(t);
  const double tol = opts.cluster_tol >= 0.0 ? opts.cluster_tol : default_cluster_tol(rep.op_norm);
  if (!(tol > 0.0))
  {
    throw DomainError("cluster_tol must be positive");
  }
  rep.params = {tol, opts.eig.eig_tol};

  const EigResult eig = complex_eigs(chi(t), opts.eig);
  rep.eig_residual = eig.residual;

  std::vector<SpherePoint> pts;
  pts.reserve(eig.values.size());
  for (const auto &lam : eig.values)
  {
    pts.push_back({lam.real(), std::abs(lam.imag())});
  }

  DisjointSets sets(pts.size());
  for (std::size_t a = 0; a < pts.size(); a++)
  {
    for (std::size_t b = a + 1; b < pts.size(); b++)
    {
      if (psi_distance(pts[a], pts[b]) <= tol)
      {
        sets.unite(a, b);
      }
    }
  }

  std::vector<std::vector<std::size_t>> clusters(pts.size());
  for (std::size_t a = 0; a < pts.size(); a++)
  {
    clusters[sets.find(a)].push_back(a);
  }
  for (const auto &members : clusters)
  {
    if (members.empty())
    {
      continue;
    }
    if (members.size() % 2 != 0)
    {
      throw ParityError("eigenvalue cluster near (" + format_real(pts[members[0]].u) + ", " +
                        format_real(pts[members[0]].v) + ") has " +
                        std::to_string(members.size()) + " points");
    }
    SpherePoint c{0.0, 0.0};
    for (auto idx : members)
    {
      c.u += pts[idx].u;
      c.v += pts[idx].v;
    }
    c.u /= static_cast<double>(members.size());
    c.v /= static_cast<double>(members.size());
    if (c.v < tol)
    {
      c.v = 0.0;
    }
    rep.spheres.push_back({c, members.size() / 2});
  }
  // Real parts closer than cluster_tol count as equal so that roundoff
  // cannot reorder spheres sharing a real part.
  std::sort(rep.spheres.begin(), rep.spheres.end(), [tol](const Sphere &a, const Sphere &b) {
    if (std::abs(a.point.u - b.point.u) > tol)
    {
      return a.point.u < b.point.u;
    }
    return a.point.v < b.point.v;
  });

  rep.gaps.resize(rep.spheres.size());
  for (std::size_t a = 0; a < rep.spheres.size(); a++)
  {
    rep.gaps[a] = isolation_gap(rep.spheres[a], rep);
  }
  return rep;
}

QMatrix pseudo_Q(const Quaternion &q, const QMatrix &t)
{
  QMatrix out = matmul(t, t);
  const double two_re = 2.0 * q.re();
  const double nq = qnormsq(q);
  for (std::size_t r = 0; r < t.n(); r++)
  {
    for (std::size_t c = 0; c < t.n(); c++)
    {
      out(r, c) -= t(r, c) * two_re;
    }
    out(r, r) += Quaternion(nq);
  }
  return out;
}

std::optional<std::size_t> find_sphere(const SpectrumReport &rep, const SpherePoint &p, double tol)
{
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < rep.spheres.size(); a++)
  {
    const double d = psi_distance(rep.spheres[a].point, p);
    if (d <= tol && d < best_d)
    {
      best = a;
      best_d = d;
    }
  }
  return best;
}

double isolation_gap(const Sphere &s, const SpectrumReport &rep)
{
  double gap = std::numeric_limits<double>::infinity();
  bool skipped_self = false;
  for (const auto &other : rep.spheres)
  {
    if (!skipped_self && other.point.u == s.point.u && other.point.v == s.point.v)
    {
      skipped_self = true;
      continue;
    }
    gap = std::min(gap, sphere_distance(s.point, other.point));
  }
  return gap;
}

double s_spectral_radius(const QMatrix &t)
{
  const EigResult eig = complex_eigs(chi(t));
  double r = 0.0;
  for (const auto &lam : eig.values)
  {
    r = std::max(r, std::abs(lam));
  }
  return r;
}

}  // namespace quatspec
