#include "quatspec/browder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quatspec/errors.hpp"

namespace quatspec
{

namespace
{

QMatrix complement(const QMatrix &p) { return sub(QMatrix::identity(p.n()), p); }

QMatrix shift_conj(const QMatrix &t, const Quaternion &q)
{
  return sub(t, QMatrix::scalar(t.n(), qconj(q)));
}

// K_x = (T - (x + 1) I) P_x.
QMatrix correction_factor(const BrowderPoint &b, const QMatrix &t)
{
  return matmul(sub(t, QMatrix::scalar(t.n(), b.q + Quaternion(1.0))), b.projector);
}

}  // namespace

std::vector<FiniteTypeRecord> classify(const QMatrix &t, const SpectrumReport &rep,
                                       const ClassifyOptions &opts)
{
  const double min_gap = 2.0 * rep.params.cluster_tol;
  for (std::size_t a = 0; a < rep.spheres.size(); a++)
  {
    if (!(rep.gaps[a] > min_gap))
    {
      throw PreconditionError("sphere " + std::to_string(a) + " is not isolated (gap " +
                              format_real(rep.gaps[a]) + ")");
    }
  }
  std::vector<FiniteTypeRecord> out;
  out.reserve(rep.spheres.size());
  for (std::size_t a = 0; a < rep.spheres.size(); a++)
  {
    RieszResult r = riesz_projector(t, rep, a, opts.contour);
    FiniteTypeRecord rec;
    rec.sphere = rep.spheres[a];
    rec.proj_rank = hrank(r.projector, opts.rank_tol);
    rec.finite_type = true;
    rec.gap = rep.gaps[a];
    rec.projector = std::move(r.projector);
    rec.nodes_used = r.nodes_used;
    rec.idempotency_residual = r.idempotency_residual;
    if (rec.proj_rank != rec.sphere.mult)
    {
      throw ClassificationError("sphere (" + format_real(rec.sphere.point.u) + ", " +
                                format_real(rec.sphere.point.v) + "): projector rank " +
                                std::to_string(rec.proj_rank) + " but multiplicity " +
                                std::to_string(rec.sphere.mult));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

BrowderPoint resolvent_point(const Quaternion &q, std::size_t n)
{
  return {q, BrowderStatus::Resolvent, QMatrix(n)};
}

BrowderPoint finite_type_point(const Quaternion &q, const QMatrix &projector)
{
  return {q, BrowderStatus::FiniteType, projector};
}

BrowderPoint locate_point(const Quaternion &q, std::size_t n, const SpectrumReport &rep,
                          std::span<const FiniteTypeRecord> records)
{
  const auto idx = find_sphere(rep, psi(q), rep.params.cluster_tol);
  if (!idx)
  {
    return resolvent_point(q, n);
  }
  if (*idx >= records.size())
  {
    throw DimError("no finite-type record for sphere " + std::to_string(*idx));
  }
  return finite_type_point(q, records[*idx].projector);
}

QMatrix pq_op(const BrowderPoint &b, const QMatrix &t)
{
  return add(matmul(pseudo_Q(b.q, t), complement(b.projector)), b.projector);
}

QMatrix pr_bs(const BrowderPoint &b, const QMatrix &t, const SolveOptions &opts)
{
  return invert(pq_op(b, t), opts);
}

QMatrix browder_resolvent_left(const BrowderPoint &b, const QMatrix &t)
{
  const QMatrix core = matmul(matmul(pr_bs(b, t), shift_conj(t, b.q)), complement(b.projector));
  return sub(scale(core, -1.0), b.projector);
}

QMatrix browder_resolvent_right(const BrowderPoint &b, const QMatrix &t)
{
  const QMatrix core = matmul(matmul(shift_conj(t, b.q), pr_bs(b, t)), complement(b.projector));
  return sub(scale(core, -1.0), b.projector);
}

ResolventEquationResiduals browder_equation_residuals(const BrowderPoint &b, const QMatrix &t)
{
  const QMatrix id = QMatrix::identity(t.n());
  const QMatrix cp = complement(b.projector);
  const QMatrix sl = browder_resolvent_left(b, t);
  const QMatrix sr = browder_resolvent_right(b, t);

  const QMatrix left = scale_right(matmul(sl, cp), b.q) - matmul(matmul(t, cp), sl) +
                       b.projector - id;
  const QMatrix right = scale_left(b.q, matmul(cp, sr)) - matmul(matmul(sr, cp), t) +
                        b.projector - id;
  return {op_norm(left), op_norm(right)};
}

Quaternion scalar_Q(const Quaternion &s, const Quaternion &p)
{
  return qmul(p, p) - p * (2.0 * s.re()) + Quaternion(qnormsq(s));
}

ProductEquationResiduals browder_product_residuals(const BrowderPoint &s, const BrowderPoint &p,
                                                   const QMatrix &t, double sphere_tol)
{
  if (psi_distance(psi(s.q), psi(p.q)) <= sphere_tol)
  {
    throw PreconditionError("p lies on the sphere of s");
  }
  const QMatrix a = browder_resolvent_right(s, t);
  const QMatrix b = browder_resolvent_left(p, t);
  const QMatrix ks = correction_factor(s, t);
  const QMatrix kp = correction_factor(p, t);
  const Quaternion sbar = qconj(s.q);
  const Quaternion qsp = scalar_Q(s.q, p.q);

  const QMatrix diff = a - b;
  const QMatrix corr = matmul(a, kp) - matmul(ks, b);
  const QMatrix rhs = scale_right(diff, p.q) - scale_left(sbar, diff) + scale_right(corr, p.q) -
                      scale_left(sbar, corr);
  const QMatrix product = matmul(a, b);

  ProductEquationResiduals out;
  out.displayed = op_norm(scale_right(product, qsp) - rhs);
  out.normalized = op_norm(product - scale_right(rhs, qinv(qsp)));
  return out;
}

double resolvent_product_residual(const Quaternion &s, const Quaternion &p, const QMatrix &t)
{
  const QMatrix a = s_resolvent_right(s, t);
  const QMatrix b = s_resolvent_left(p, t);
  const QMatrix diff = a - b;
  const QMatrix rhs = scale_right(scale_right(diff, p) - scale_left(qconj(s), diff),
                                  qinv(scalar_Q(s, p)));
  return op_norm(matmul(a, b) - rhs);
}

double factored_correction_residual(const BrowderPoint &s, const BrowderPoint &p,
                                    const QMatrix &t)
{
  const QMatrix a = browder_resolvent_right(s, t);
  const QMatrix b = browder_resolvent_left(p, t);
  const QMatrix ks = correction_factor(s, t);
  const QMatrix kp = correction_factor(p, t);
  const Quaternion sbar = qconj(s.q);

  const QMatrix corr = matmul(a, kp) - matmul(ks, b);
  const QMatrix full = scale_right(corr, p.q) - scale_left(sbar, corr);
  const QMatrix factored = scale_left(p.q - sbar, matmul(a, kp) - matmul(b, ks));
  return op_norm(full - factored);
}

ResolventEquationResiduals resolvent_equation_residuals(const Quaternion &q, const QMatrix &t)
{
  const QMatrix id = QMatrix::identity(t.n());
  const QMatrix sl = s_resolvent_left(q, t);
  const QMatrix sr = s_resolvent_right(q, t);
  return {op_norm(scale_right(sl, q) - matmul(t, sl) - id),
          op_norm(scale_left(q, sr) - matmul(sr, t) - id)};
}

double scalar_commutator(const QMatrix &p, const Quaternion &q)
{
  return op_norm(scale_left(q, p) - scale_right(p, q));
}

std::vector<double> range_radius(std::span<const Quaternion> x, const Quaternion &q,
                                 const QMatrix &t, std::size_t n_max)
{
  const QMatrix qt = pseudo_Q(q, t);
  QVector y(x.begin(), x.end());
  std::vector<double> r;
  r.reserve(n_max);
  for (std::size_t k = 1; k <= n_max; k++)
  {
    y = quatspec::apply(qt, y);
    r.push_back(std::pow(vec_norm(y), 1.0 / static_cast<double>(k)));
  }
  return r;
}

QuasiNilpotentReport quasinilpotent_check(const Quaternion &q, const QMatrix &t,
                                          const QMatrix &projector)
{
  const std::size_t n = t.n();
  const QMatrix qt = pseudo_Q(q, t);
  const QMatrix lin = add(scale(t, 2.0), QMatrix::scalar(n, Quaternion(1.0 - 2.0 * q.re())));
  const QMatrix qp = matmul(qt, projector);
  const QMatrix q2p = matmul(matmul(qt, lin), projector);

  QuasiNilpotentReport rep;
  rep.radius_qp = s_spectral_radius(qp);
  rep.radius_q2p = s_spectral_radius(q2p);
  rep.norm_qp = op_norm(qp);
  const QMatrix sum_p = add(qt, projector);
  rep.cond_q_plus_p = condition_number(sum_p);
  rep.cond_q_plus_2p = condition_number(add(qt, matmul(lin, projector)));

  // Q + P = A + N with A = Q(I - P) + P invertible and N = Q P nilpotent,
  // commuting, so (A + N)^{-1} = sum_k (-1)^k A^{-1} (N A^{-1})^k terminates.
  const BrowderPoint b = finite_type_point(q, projector);
  const QMatrix a_inv = pr_bs(b, t);
  const QMatrix step = scale(matmul(qp, a_inv), -1.0);
  QMatrix term = a_inv;
  QMatrix series = a_inv;
  for (std::size_t k = 1; k <= 2 * n; k++)
  {
    term = matmul(term, step);
    series = add(series, term);
  }
  const QMatrix direct = invert(sum_p);
  rep.neumann_residual = op_norm(sub(series, direct)) / op_norm(direct);
  return rep;
}

InverseBound inverse_perturbation_bound(const QMatrix &s, const QMatrix &t)
{
  const QMatrix s_inv = invert(s);
  const double norm_s_inv = op_norm(s_inv);
  const double dist = op_norm(sub(t, s));
  InverseBound out;
  out.rhs = 2.0 * norm_s_inv * norm_s_inv * dist;
  out.applicable = dist <= 0.5 / norm_s_inv;
  try
  {
    out.lhs = op_norm(sub(invert(t), s_inv));
  }
  catch (const SingularError &)
  {
    out.lhs = std::numeric_limits<double>::infinity();
  }
  return out;
}

ProjectorPair compare_projectors(const QMatrix &p, const QMatrix &q, double rank_tol)
{
  ProjectorPair out;
  out.distance = op_norm(sub(p, q));
  out.rank_p = hrank(p, rank_tol);
  out.rank_q = hrank(q, rank_tol);
  const QMatrix bridge = add(matmul(q, p), matmul(complement(q), complement(p)));
  out.bridge_min_singular = min_singular(bridge);
  return out;
}

PerturbationTable perturbation_localization(const QMatrix &t, const QMatrix &e, std::size_t k_max,
                                            std::optional<SpherePoint> target,
                                            const ContourOptions &opts)
{
  if (e.n() != t.n())
  {
    throw DimError("perturbation direction has the wrong size");
  }
  const SpectrumReport rep = s_spectrum(t);
  const auto idx = find_sphere(rep, target.value_or(SpherePoint{0.0, 0.0}),
                               std::numeric_limits<double>::infinity());
  if (!idx)
  {
    throw ClassificationError("matrix has no spheres");
  }
  const ContourSpec contour = default_contour(*idx, rep, opts);
  const double gap = rep.gaps[*idx];
  const QMatrix p = riesz_projector(t, contour, gap, opts).projector;

  PerturbationTable table;
  table.target = rep.spheres[*idx].point;
  table.radius = contour.radius;
  table.base_rank = hrank(p);

  for (std::size_t k = 1; k <= k_max; k++)
  {
    const QMatrix tk = add(t, scale(e, 1.0 / static_cast<double>(k)));
    const SpectrumReport rk = s_spectrum(tk);
    PerturbationRow row;
    row.k = k;
    row.spheres = rk.spheres;
    row.inside_ball = true;
    for (const auto &s : rk.spheres)
    {
      double nearest = std::numeric_limits<double>::infinity();
      std::size_t nearest_idx = 0;
      for (std::size_t a = 0; a < rep.spheres.size(); a++)
      {
        const double d = psi_distance(s.point, rep.spheres[a].point);
        if (d < nearest)
        {
          nearest = d;
          nearest_idx = a;
        }
      }
      row.delta = std::max(row.delta, nearest);
      if (nearest_idx == *idx && nearest > contour.radius)
      {
        row.inside_ball = false;
      }
    }
    try
    {
      const QMatrix pk = riesz_projector(tk, contour, gap, opts).projector;
      const ProjectorPair pair = compare_projectors(p, pk);
      row.projector_ok = true;
      row.proj_rank = pair.rank_q;
      row.proj_distance = pair.distance;
      row.rank_match = pair.rank_q == pair.rank_p;
      row.bridge_min_singular = pair.bridge_min_singular;
    }
    catch (const Error &)
    {
      row.projector_ok = false;
    }
    table.rows.push_back(std::move(row));
  }
  for (auto it = table.rows.rbegin(); it != table.rows.rend(); ++it)
  {
    if (!(it->inside_ball && it->projector_ok && it->rank_match))
    {
      break;
    }
    table.stable_from = it->k;
  }
  return table;
}

}  // namespace quatspec
