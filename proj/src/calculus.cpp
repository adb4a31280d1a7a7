#include "quatspec/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "quatspec/errors.hpp"

namespace quatspec
{

namespace
{

// Fixed-order pairwise accumulation: level k holds the sum of a block of 2^k terms.
class PairwiseSum
{
public:
  void add(QMatrix m)
  {
    std::size_t level = 0;
    while (level < levels_.size() && levels_[level])
    {
      m = quatspec::add(*levels_[level], m);
      levels_[level].reset();
      level++;
    }
    if (level == levels_.size())
    {
      levels_.emplace_back();
    }
    levels_[level] = std::move(m);
  }

  std::optional<QMatrix> total() const
  {
    std::optional<QMatrix> acc;
    for (const auto &lvl : levels_)
    {
      if (lvl)
      {
        acc = acc ? quatspec::add(*acc, *lvl) : *lvl;
      }
    }
    return acc;
  }

private:
  std::vector<std::optional<QMatrix>> levels_;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<std::complex<double>> centers(const ContourSpec &c)
{
  if (c.circles() == 1)
  {
    return {{c.sphere.u, 0.0}};
  }
  return {{c.sphere.u, c.sphere.v}, {c.sphere.u, -c.sphere.v}};
}

enum class Kernel
{
  Left,
  Right
};

// Raw trapezoid sum over the nodes k = first, first + stride, ... < n, without
// the 1/n factor; each node contributes kernel(q) * (radius e^{I theta}) * f(q).
QMatrix node_sum(const QMatrix &t, const ContourSpec &c, const IntrinsicPoly *f, Kernel kernel,
                 std::size_t n, std::size_t first, std::size_t stride,
                 const SolveOptions &solve_opts)
{
  PairwiseSum sum;
  for (const auto &center : centers(c))
  {
    for (std::size_t k = first; k < n; k += stride)
    {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      const std::complex<double> offset = std::polar(c.radius, theta);
      const std::complex<double> z = center + offset;
      const Quaternion q = c.slice.embed(z);
      std::complex<double> weight = offset;
      if (f)
      {
        weight *= (*f)(z);
      }
      const Quaternion w = c.slice.embed(weight);
      if (kernel == Kernel::Left)
      {
        sum.add(scale_right(s_resolvent_left(q, t, solve_opts), w));
      }
      else
      {
        sum.add(scale_left(w, s_resolvent_right(q, t, solve_opts)));
      }
    }
  }
  return sum.total().value_or(QMatrix(t.n()));
}

}  // namespace

QMatrix s_resolvent_left(const Quaternion &q, const QMatrix &t, const SolveOptions &opts)
{
  const QMatrix shifted = sub(t, QMatrix::scalar(t.n(), qconj(q)));
  return scale(solve(pseudo_Q(q, t), shifted, opts), -1.0);
}

QMatrix s_resolvent_right(const Quaternion &q, const QMatrix &t, const SolveOptions &opts)
{
  const QMatrix shifted = sub(t, QMatrix::scalar(t.n(), qconj(q)));
  return scale(matmul(shifted, invert(pseudo_Q(q, t), opts)), -1.0);
}

QMatrix left_cauchy_series(const Quaternion &q, const QMatrix &t, std::size_t terms)
{
  const Quaternion qi = qinv(q);
  QMatrix power = QMatrix::identity(t.n());
  Quaternion coeff = qi;
  QMatrix sum = scale_right(power, coeff);
  for (std::size_t k = 1; k <= terms; k++)
  {
    power = matmul(power, t);
    coeff = qmul(coeff, qi);
    sum = add(sum, scale_right(power, coeff));
  }
  return sum;
}

QMatrix right_cauchy_series(const Quaternion &q, const QMatrix &t, std::size_t terms)
{
  const Quaternion qi = qinv(q);
  QMatrix power = QMatrix::identity(t.n());
  Quaternion coeff = qi;
  QMatrix sum = scale_left(coeff, power);
  for (std::size_t k = 1; k <= terms; k++)
  {
    power = matmul(power, t);
    coeff = qmul(coeff, qi);
    sum = add(sum, scale_left(coeff, power));
  }
  return sum;
}

std::size_t cauchy_terms(double norm_t, double abs_q, double tail_tol)
{
  if (!(abs_q > norm_t))
  {
    throw DomainError("Cauchy series needs |q| > ||T||");
  }
  const double ratio = norm_t / abs_q;
  std::size_t k = 0;
  double bound = ratio / (abs_q - norm_t);
  while (bound > tail_tol)
  {
    bound *= ratio;
    k++;
  }
  return k;
}

ContourSpec default_contour(std::size_t sphere_index, const SpectrumReport &rep,
                            const ContourOptions &opts)
{
  if (sphere_index >= rep.spheres.size())
  {
    throw ContourError("sphere index out of range");
  }
  const Sphere &s = rep.spheres[sphere_index];
  const double gap = rep.gaps[sphere_index];
  ContourSpec c;
  c.sphere = s.point;
  c.nodes = opts.nodes;
  c.slice = opts.slice;
  c.real_snap = rep.params.cluster_tol;
  if (opts.radius > 0.0)
  {
    c.radius = opts.radius;
  }
  else if (c.circles() == 2)
  {
    c.radius = 0.45 * std::min(gap, s.point.v);
  }
  else if (std::isfinite(gap))
  {
    c.radius = 0.45 * gap;
  }
  else
  {
    c.radius = 0.45 * std::max(1.0, rep.op_norm);
  }
  return c;
}

void validate_contour(const ContourSpec &c, double gap)
{
  if (c.nodes < 16 || !is_power_of_two(c.nodes))
  {
    throw ContourError("node count " + std::to_string(c.nodes) +
                       " must be a power of two >= 16");
  }
  if (!(c.radius > 0.0))
  {
    throw ContourError("contour radius must be positive");
  }
  if (!(c.radius < gap))
  {
    throw ContourError("contour radius " + format_real(c.radius) +
                       " reaches the rest of the spectrum (gap " + format_real(gap) + ")");
  }
  if (c.circles() == 2 && !(c.radius < c.sphere.v))
  {
    throw ContourError("contour radius " + format_real(c.radius) +
                       " merges the two circles (v = " + format_real(c.sphere.v) + ")");
  }
}

IntrinsicPoly::IntrinsicPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
  if (coeffs_.size() > 9)
  {
    throw DomainError("intrinsic polynomial degree exceeds 8");
  }
  for (double c : coeffs_)
  {
    if (!std::isfinite(c))
    {
      throw DomainError("non-finite polynomial coefficient");
    }
  }
}

std::complex<double> IntrinsicPoly::operator()(std::complex<double> z) const
{
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
  {
    acc = acc * z + *it;
  }
  return acc;
}

Quaternion IntrinsicPoly::operator()(const Quaternion &q) const
{
  const double b = im_abs(q);
  const std::complex<double> fz = (*this)(std::complex<double>(q.w, b));
  if (b == 0.0)
  {
    return Quaternion(fz.real());
  }
  return Quaternion(fz.real()) + q.im() * (fz.imag() / b);
}

QMatrix horner(const IntrinsicPoly &f, const QMatrix &t)
{
  const std::size_t n = t.n();
  if (f.coeffs().empty())
  {
    return QMatrix(n);
  }
  const auto &c = f.coeffs();
  QMatrix acc = QMatrix::scalar(n, Quaternion(c.back()));
  for (std::size_t k = c.size() - 1; k-- > 0;)
  {
    acc = add(matmul(acc, t), QMatrix::scalar(n, Quaternion(c[k])));
  }
  return acc;
}

QMatrix contour_integral(const QMatrix &t, const ContourSpec &c, const IntrinsicPoly *f,
                         const SolveOptions &solve_opts)
{
  const QMatrix raw = node_sum(t, c, f, Kernel::Left, c.nodes, 0, 1, solve_opts);
  return scale(raw, 1.0 / static_cast<double>(c.nodes));
}

QMatrix contour_integral_right(const QMatrix &t, const ContourSpec &c,
                               const SolveOptions &solve_opts)
{
  const QMatrix raw = node_sum(t, c, nullptr, Kernel::Right, c.nodes, 0, 1, solve_opts);
  return scale(raw, 1.0 / static_cast<double>(c.nodes));
}

RieszResult riesz_projector(const QMatrix &t, const ContourSpec &c, double gap,
                            const ContourOptions &opts)
{
  validate_contour(c, gap);
  std::size_t n = c.nodes;
  // Refinement reuses the previous nodes: the doubled grid adds the odd ones.
  QMatrix raw = node_sum(t, c, nullptr, Kernel::Left, n, 0, 1, {});
  while (true)
  {
    QMatrix p = scale(raw, 1.0 / static_cast<double>(n));
    const double resid = op_norm(sub(matmul(p, p), p));
    if (resid <= opts.proj_tol)
    {
      return {std::move(p), n, resid};
    }
    if (2 * n > opts.max_nodes)
    {
      throw NonIdempotentError("||P^2 - P|| = " + format_real(resid) + " after " +
                               std::to_string(n) + " nodes per circle");
    }
    raw = add(raw, node_sum(t, c, nullptr, Kernel::Left, 2 * n, 1, 2, {}));
    n *= 2;
  }
}

RieszResult riesz_projector(const QMatrix &t, const SpectrumReport &rep, std::size_t index,
                            const ContourOptions &opts)
{
  const ContourSpec c = default_contour(index, rep, opts);
  return riesz_projector(t, c, rep.gaps[index], opts);
}

std::vector<ContourSpec> enclosing_contours(const SpectrumReport &rep, const ContourOptions &opts)
{
  std::vector<ContourSpec> out;
  out.reserve(rep.spheres.size());
  for (std::size_t a = 0; a < rep.spheres.size(); a++)
  {
    out.push_back(default_contour(a, rep, opts));
  }
  return out;
}

QMatrix func_calc(const IntrinsicPoly &f, const QMatrix &t, std::span<const ContourSpec> contours,
                  const ContourOptions &opts)
{
  if (contours.empty())
  {
    throw ContourError("func_calc needs at least one contour");
  }
  std::vector<QMatrix> raw;
  std::vector<std::size_t> counts;
  for (const auto &c : contours)
  {
    if (c.nodes < 16 || !is_power_of_two(c.nodes))
    {
      throw ContourError("node count must be a power of two >= 16");
    }
    raw.push_back(node_sum(t, c, &f, Kernel::Left, c.nodes, 0, 1, {}));
    counts.push_back(c.nodes);
  }
  auto assemble = [&]() {
    QMatrix total(t.n());
    for (std::size_t a = 0; a < raw.size(); a++)
    {
      total = add(total, scale(raw[a], 1.0 / static_cast<double>(counts[a])));
    }
    return total;
  };
  QMatrix current = assemble();
  while (true)
  {
    for (std::size_t a = 0; a < raw.size(); a++)
    {
      if (2 * counts[a] > opts.max_nodes)
      {
        throw NonIdempotentError("func_calc quadrature did not settle within max_nodes");
      }
      raw[a] = add(raw[a], node_sum(t, contours[a], &f, Kernel::Left, 2 * counts[a], 1, 2, {}));
      counts[a] *= 2;
    }
    QMatrix refined = assemble();
    const double diff = op_norm(sub(refined, current));
    if (diff <= opts.quad_tol * std::max(1.0, op_norm(refined)))
    {
      return refined;
    }
    current = std::move(refined);
  }
}

double spectral_mapping_check(const IntrinsicPoly &f, const QMatrix &t, const SpectrumOptions &opts)
{
  const SpectrumReport base = s_spectrum(t, opts);
  SpectrumOptions image_opts = opts;
  image_opts.cluster_tol = -1.0;
  const SpectrumReport image = s_spectrum(horner(f, t), image_opts);

  std::vector<SpherePoint> mapped;
  for (const auto &s : base.spheres)
  {
    const std::complex<double> fz = f(std::complex<double>(s.point.u, s.point.v));
    mapped.push_back({fz.real(), std::abs(fz.imag())});
  }
  auto one_sided = [](const std::vector<SpherePoint> &from, const std::vector<SpherePoint> &to) {
    double worst = 0.0;
    for (const auto &a : from)
    {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &b : to)
      {
        best = std::min(best, psi_distance(a, b));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  std::vector<SpherePoint> image_pts;
  for (const auto &s : image.spheres)
  {
    image_pts.push_back(s.point);
  }
  return std::max(one_sided(mapped, image_pts), one_sided(image_pts, mapped));
}

}  // namespace quatspec
