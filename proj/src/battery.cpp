#include "quatspec/battery.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "quatspec/browder.hpp"
#include "quatspec/errors.hpp"
#include "quatspec/oracle.hpp"

namespace quatspec
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

class Ledger
{
public:
  void declare(const std::string &name, const std::string &scale, double tol, bool gating = true)
  {
    IdentityResult r;
    r.name = name;
    r.scale = scale;
    r.tolerance = tol;
    r.gating = gating;
    results_.push_back(std::move(r));
  }

  void record(const std::string &name, double residual)
  {
    IdentityResult &r = find(name);
    r.cases++;
    if (std::isnan(residual))
    {
      residual = kInf;
    }
    r.max_residual = std::max(r.max_residual, residual);
    if (!(residual <= r.tolerance))
    {
      r.pass = false;
    }
  }

  void skip(const std::string &name) { find(name).skipped++; }

  std::vector<IdentityResult> take() { return std::move(results_); }

private:
  IdentityResult &find(const std::string &name)
  {
    for (auto &r : results_)
    {
      if (r.name == name)
      {
        return r;
      }
    }
    throw DomainError("undeclared identity " + name);
  }

  std::vector<IdentityResult> results_;
};

void declare_all(Ledger &led, const BatteryConfig &cfg)
{
  led.declare("chi_homomorphism", "relative to ||chi(S)|| ||chi(T)|| (Frobenius)", 1e-11);
  led.declare("spectrum_oracle", "Psi distance to the constructed spheres; inf on multiplicity mismatch", 1e-7);
  led.declare("classification", "0 when projector ranks equal multiplicities, inf otherwise", 0.0);
  led.declare("projector_idempotency", "||P^2 - P||", 1e-8);
  led.declare("projector_commutes_with_operator", "||PT - TP|| / ||T||", 1e-8);
  led.declare("projector_scalar_commutation", "max over 10 random q of ||qP - Pq||", 1e-8, false);
  led.declare("projector_completeness", "||sum P - I||", 1e-7);
  led.declare("projector_rank_sum", "|sum of ranks - n|", 0.0);
  led.declare("projector_right_kernel", "||P_left - P_right||", 1e-8);
  led.declare("functional_calculus", "||f(T)_contour - f(T)_horner|| / ||f(T)_horner||", 1e-7);
  led.declare("spectral_mapping", "Psi-plane Hausdorff distance", 1e-6);
  led.declare("cauchy_series", "||series - resolvent||, |q| = 2||T||", 1e-9);
  led.declare("s_resolvent_equation", "relative to max(1,||T||) max(1,||S^-1||)", 1e-9);
  led.declare("browder_extends_resolvent", "relative to max(1,||S^-1||)", 1e-10);
  led.declare("browder_resolvent_equation", "relative to max(1,||T||^2)", 1e-7);
  led.declare("browder_product_equation", "relative to max(1,||T||^3)", 1e-6);
  led.declare("browder_product_equation_normalized", "relative to max(1,||T||^3)", 1e-6);
  led.declare("resolvent_product_equation", "relative to max(1,||S_R^-1|| ||S_L^-1||)", 1e-8);
  led.declare("factored_correction", "absolute; real-entry T with s, p in C_i", 1e-8);
  led.declare("range_radius_in_range", "r_2n for x in R(P)", 1e-6);
  led.declare("range_radius_outside", "(m/2) / min_{k>=2n} r_k for x outside R(P)", 1.0);
  led.declare("quasi_nilpotency", "spectral radius / max(1,||T||^2)", cfg.qn_rel);
  led.declare("perturbed_invertibility", "condition number of Q+P and Q+(2T+(1-2Re q))P", 1e12);
  led.declare("nilpotent_neumann_series", "relative to ||(Q+P)^-1||", 1e-8);
  led.declare("inverse_perturbation_bound", "lhs / rhs", 1.0);
  led.declare("projector_pair_rank", "violations when ||P-Q|| < 1", 0.0);
}

// Runs one check; a library error counts as an infinite residual for `name`.
void guard(Ledger &led, const std::string &name, const std::function<void()> &body)
{
  try
  {
    body();
  }
  catch (const Error &)
  {
    led.record(name, kInf);
  }
}

Quaternion random_slice_point(OracleGenerator &gen, const SpherePoint &p)
{
  if (p.v == 0.0)
  {
    return Quaternion(p.u);
  }
  return slice_embed(p, SliceUnit(gen.unit_imaginary()));
}

double distance_to_spectrum(const Quaternion &q, const SpectrumReport &rep)
{
  double d = kInf;
  for (const auto &s : rep.spheres)
  {
    d = std::min(d, psi_distance(psi(q), s.point));
  }
  return d;
}

std::vector<Quaternion> resolvent_points(OracleGenerator &gen, const SpectrumReport &rep,
                                         double radius, std::size_t count, bool complex_slice)
{
  std::vector<Quaternion> out;
  for (std::size_t tries = 0; out.size() < count && tries < 200; tries++)
  {
    Quaternion q = gen.quaternion() * radius;
    if (complex_slice)
    {
      q.y = 0.0;
      q.z = 0.0;
    }
    if (distance_to_spectrum(q, rep) >= 0.25)
    {
      out.push_back(q);
    }
  }
  return out;
}

double ratio(double num, double den) { return den > 0.0 ? num / den : (num > 0.0 ? kInf : 0.0); }

void check_matrix(const QMatrix &t, const OracleMatrix *oracle, OracleGenerator &gen,
                  const BatteryConfig &cfg, Ledger &led)
{
  const std::size_t n = t.n();
  const double tn = op_norm(t);
  const double t2 = std::max(1.0, tn * tn);
  const double t3 = std::max(1.0, tn * tn * tn);

  {
    const QMatrix s = gen.matrix(n);
    const CMatrix cs = chi(s);
    const CMatrix ct = chi(t);
    const double mul = (chi(matmul(s, t)) - cs * ct).norm() / (cs.norm() * ct.norm());
    const double add_res = (chi(add(s, t)) - cs - ct).norm() / (cs.norm() + ct.norm());
    led.record("chi_homomorphism", std::max(mul, add_res));
  }

  SpectrumReport rep;
  try
  {
    rep = s_spectrum(t, cfg.spectrum);
  }
  catch (const Error &)
  {
    led.record(oracle ? "spectrum_oracle" : "classification", kInf);
    return;
  }
  if (oracle)
  {
    double worst = 0.0;
    if (rep.spheres.size() != oracle->spheres.size())
    {
      worst = kInf;
    }
    else
    {
      for (std::size_t a = 0; a < rep.spheres.size(); a++)
      {
        if (rep.spheres[a].mult != oracle->spheres[a].mult)
        {
          worst = kInf;
          break;
        }
        worst = std::max(worst, psi_distance(rep.spheres[a].point, oracle->spheres[a].point));
      }
    }
    led.record("spectrum_oracle", worst);
  }
  else
  {
    led.skip("spectrum_oracle");
  }

  std::vector<FiniteTypeRecord> recs;
  try
  {
    recs = classify(t, rep, {cfg.contour, 1e-8});
    led.record("classification", 0.0);
  }
  catch (const Error &)
  {
    led.record("classification", kInf);
    return;
  }
  if (cfg.fault && *cfg.fault == "projector" && !recs.empty())
  {
    recs[0].projector(0, 0) += Quaternion(1e-3);
  }

  QMatrix total(n);
  std::size_t rank_sum = 0;
  for (std::size_t a = 0; a < recs.size(); a++)
  {
    const QMatrix &p = recs[a].projector;
    led.record("projector_idempotency", op_norm(sub(matmul(p, p), p)));
    led.record("projector_commutes_with_operator",
               ratio(op_norm(sub(matmul(p, t), matmul(t, p))), tn));
    double comm = 0.0;
    for (int k = 0; k < 10; k++)
    {
      comm = std::max(comm, scalar_commutator(p, gen.quaternion()));
    }
    led.record("projector_scalar_commutation", comm);
    total = add(total, p);
    rank_sum += recs[a].proj_rank;
    guard(led, "projector_right_kernel", [&] {
      ContourSpec c = default_contour(a, rep, cfg.contour);
      c.nodes = recs[a].nodes_used;
      led.record("projector_right_kernel", op_norm(sub(contour_integral_right(t, c), p)));
    });
  }
  led.record("projector_completeness", op_norm(sub(total, QMatrix::identity(n))));
  led.record("projector_rank_sum",
             std::abs(static_cast<double>(rank_sum) - static_cast<double>(n)));

  {
    const IntrinsicPoly f(gen.poly_coeffs(static_cast<std::size_t>(gen.integer(0, 4))));
    guard(led, "functional_calculus", [&] {
      const std::vector<ContourSpec> contours = enclosing_contours(rep, cfg.contour);
      const QMatrix h = horner(f, t);
      const QMatrix fc = func_calc(f, t, contours, cfg.contour);
      led.record("functional_calculus", ratio(op_norm(sub(fc, h)), op_norm(h)));
    });
    guard(led, "spectral_mapping",
          [&] { led.record("spectral_mapping", spectral_mapping_check(f, t, cfg.spectrum)); });
  }

  if (tn > 0.0)
  {
    Quaternion dir = gen.quaternion();
    while (qabs(dir) < 0.1)
    {
      dir = gen.quaternion();
    }
    const Quaternion q = dir * (2.0 * tn / qabs(dir));
    const std::size_t terms = cauchy_terms(tn, qabs(q), 1e-10);
    guard(led, "cauchy_series", [&] {
      const double left = op_norm(sub(left_cauchy_series(q, t, terms), s_resolvent_left(q, t)));
      const double right =
          op_norm(sub(right_cauchy_series(q, t, terms), s_resolvent_right(q, t)));
      led.record("cauchy_series", std::max(left, right));
    });
  }
  else
  {
    led.skip("cauchy_series");
  }

  // Browder points: three resolvent points and one slice representative per sphere.
  std::vector<BrowderPoint> points;
  std::vector<bool> usable;
  const double radius = std::max(2.5, 1.2 * tn);
  for (const auto &q : resolvent_points(gen, rep, radius, 3, false))
  {
    points.push_back(resolvent_point(q, n));
    usable.push_back(true);
  }
  for (const auto &rec : recs)
  {
    const Quaternion q = random_slice_point(gen, rec.sphere.point);
    double comm = scalar_commutator(rec.projector, q);
    for (int k = 0; k < 3; k++)
    {
      comm = std::max(comm, scalar_commutator(rec.projector, gen.quaternion()));
    }
    points.push_back(finite_type_point(q, rec.projector));
    usable.push_back(comm <= 1e-8);
  }

  for (std::size_t a = 0; a < points.size(); a++)
  {
    const BrowderPoint &b = points[a];
    if (b.status == BrowderStatus::Resolvent)
    {
      guard(led, "s_resolvent_equation", [&] {
        const ResolventEquationResiduals r = resolvent_equation_residuals(b.q, t);
        const double sl = op_norm(s_resolvent_left(b.q, t));
        led.record("s_resolvent_equation",
                   std::max(r.left, r.right) / (std::max(1.0, tn) * std::max(1.0, sl)));
      });
      guard(led, "browder_extends_resolvent", [&] {
        const QMatrix sl = s_resolvent_left(b.q, t);
        const QMatrix sr = s_resolvent_right(b.q, t);
        const double d = std::max(op_norm(sub(browder_resolvent_left(b, t), sl)),
                                  op_norm(sub(browder_resolvent_right(b, t), sr)));
        led.record("browder_extends_resolvent",
                   d / std::max({1.0, op_norm(sl), op_norm(sr)}));
      });
    }
    if (!usable[a])
    {
      led.skip("browder_resolvent_equation");
      continue;
    }
    guard(led, "browder_resolvent_equation", [&] {
      const ResolventEquationResiduals r = browder_equation_residuals(b, t);
      led.record("browder_resolvent_equation", std::max(r.left, r.right) / t2);
    });
  }

  const double sphere_tol = 2.0 * rep.params.cluster_tol;
  for (std::size_t a = 0; a < points.size(); a++)
  {
    for (std::size_t c = 0; c < points.size(); c++)
    {
      if (a == c || psi_distance(psi(points[a].q), psi(points[c].q)) <= sphere_tol)
      {
        continue;
      }
      if (!usable[a] || !usable[c])
      {
        led.skip("browder_product_equation");
        led.skip("browder_product_equation_normalized");
        continue;
      }
      guard(led, "browder_product_equation", [&] {
        const ProductEquationResiduals r =
            browder_product_residuals(points[a], points[c], t, sphere_tol);
        led.record("browder_product_equation", r.displayed / t3);
        led.record("browder_product_equation_normalized", r.normalized / t3);
      });
      if (points[a].status == BrowderStatus::Resolvent &&
          points[c].status == BrowderStatus::Resolvent)
      {
        guard(led, "resolvent_product_equation", [&] {
          const double scale = std::max(1.0, op_norm(s_resolvent_right(points[a].q, t)) *
                                                 op_norm(s_resolvent_left(points[c].q, t)));
          led.record("resolvent_product_equation",
                     resolvent_product_residual(points[a].q, points[c].q, t) / scale);
        });
      }
    }
  }

  if (t.is_real())
  {
    std::vector<BrowderPoint> slice_points;
    for (const auto &q : resolvent_points(gen, rep, radius, 2, true))
    {
      slice_points.push_back(resolvent_point(q, n));
    }
    for (const auto &rec : recs)
    {
      slice_points.push_back(finite_type_point(slice_embed(rec.sphere.point), rec.projector));
    }
    for (std::size_t a = 0; a < slice_points.size(); a++)
    {
      for (std::size_t c = 0; c < slice_points.size(); c++)
      {
        if (a == c ||
            psi_distance(psi(slice_points[a].q), psi(slice_points[c].q)) <= sphere_tol)
        {
          continue;
        }
        guard(led, "factored_correction", [&] {
          led.record("factored_correction",
                     factored_correction_residual(slice_points[a], slice_points[c], t));
        });
      }
    }
  }
  else
  {
    led.skip("factored_correction");
  }

  // Exact range vectors exist only for the real-similarity constructions,
  // whose columns of S are integer and span the blocks of D.
  if (oracle && oracle->real_similarity)
  {
    for (std::size_t a = 0; a < oracle->spheres.size(); a++)
    {
      const SpherePoint sp = oracle->spheres[a].point;
      const Quaternion q = slice_embed(sp);
      const std::complex<double> qc(sp.u, sp.v);
      double m = kInf;
      for (std::size_t b = 0; b < oracle->spheres.size(); b++)
      {
        if (b == a)
        {
          continue;
        }
        const std::complex<double> lam(oracle->spheres[b].point.u, oracle->spheres[b].point.v);
        m = std::min(m, std::abs(lam * lam - 2.0 * sp.u * lam + std::norm(qc)));
      }
      for (std::size_t j = 0; j < n; j++)
      {
        QVector x(n);
        for (std::size_t r = 0; r < n; r++)
        {
          x[r] = oracle->s(r, j);
        }
        if (oracle->column_sphere[j] == a)
        {
          const std::vector<double> r = range_radius(x, q, t, 2 * n);
          led.record("range_radius_in_range", r.back());
        }
        else
        {
          const double xn = vec_norm(x);
          for (auto &e : x)
          {
            e *= 1.0 / xn;
          }
          const std::vector<double> r = range_radius(x, q, t, 2 * n + 2);
          const double lowest = *std::min_element(r.begin() + static_cast<long>(2 * n - 1), r.end());
          led.record("range_radius_outside", ratio(0.5 * m, lowest));
        }
      }
    }
  }
  else
  {
    led.skip("range_radius_in_range");
    led.skip("range_radius_outside");
  }

  for (const auto &rec : recs)
  {
    guard(led, "quasi_nilpotency", [&] {
      const QuasiNilpotentReport qn =
          quasinilpotent_check(slice_embed(rec.sphere.point), t, rec.projector);
      led.record("quasi_nilpotency", std::max(qn.radius_qp, qn.radius_q2p) / t2);
      led.record("perturbed_invertibility", std::max(qn.cond_q_plus_p, qn.cond_q_plus_2p));
      led.record("nilpotent_neumann_series", qn.neumann_residual);
    });
  }

  guard(led, "inverse_perturbation_bound", [&] {
    QMatrix s = add(gen.matrix(n), QMatrix::scalar(n, Quaternion(2.0)));
    const double bound = 0.5 / op_norm(invert(s));
    QMatrix delta = gen.matrix(n);
    delta = scale(delta, gen.uniform(0.05, 1.0) * bound / op_norm(delta));
    const InverseBound ib = inverse_perturbation_bound(s, add(s, delta));
    led.record("inverse_perturbation_bound", ratio(ib.lhs, ib.rhs));
  });

  if (!recs.empty())
  {
    const ContourSpec c = default_contour(0, rep, cfg.contour);
    QMatrix e = gen.matrix(n);
    const double size = std::pow(10.0, gen.uniform(-6.0, -1.0)) * std::max(1.0, tn);
    e = scale(e, size / op_norm(e));
    try
    {
      const QMatrix q = riesz_projector(add(t, e), c, rep.gaps[0], cfg.contour).projector;
      const ProjectorPair pair = compare_projectors(recs[0].projector, q);
      if (pair.distance < 1.0)
      {
        const bool bad = pair.rank_p != pair.rank_q || !(pair.bridge_min_singular > 1e-10);
        led.record("projector_pair_rank", bad ? 1.0 : 0.0);
      }
      else
      {
        led.skip("projector_pair_rank");
      }
    }
    catch (const Error &)
    {
      led.skip("projector_pair_rank");
    }
  }
}

Json parameters_json(const BatteryConfig &cfg)
{
  Json p;
  p["tol_cluster"] = cfg.spectrum.cluster_tol >= 0.0 ? Json(cfg.spectrum.cluster_tol)
                                                     : Json("1e-7*max(1,||T||)");
  p["tol_proj"] = cfg.contour.proj_tol;
  p["nodes"] = cfg.contour.nodes;
  p["max_nodes"] = cfg.contour.max_nodes;
  p["qn_rel"] = cfg.qn_rel;
  return p;
}

BatteryReport finish(Ledger &led, Json provenance, const BatteryConfig &cfg)
{
  BatteryReport rep;
  rep.provenance = std::move(provenance);
  rep.parameters = parameters_json(cfg);
  rep.identities = led.take();
  for (const auto &r : rep.identities)
  {
    if (r.gating && !r.pass)
    {
      rep.pass = false;
      if (!rep.first_failure)
      {
        rep.first_failure = r.name;
      }
    }
  }
  return rep;
}

}  // namespace

BatteryReport run_random_battery(const BatteryConfig &cfg)
{
  if (cfg.n == 0 || cfg.n > kMaxSide)
  {
    throw SizeError("battery side " + std::to_string(cfg.n) + " outside [1, 64]");
  }
  Ledger led;
  declare_all(led, cfg);
  OracleGenerator gen(cfg.seed);
  for (std::size_t i = 0; i < cfg.count; i++)
  {
    OracleMatrix m = (i % 3 == 0)   ? gen.integer_oracle(cfg.n)
                     : (i % 3 == 1) ? gen.real_oracle(cfg.n)
                                    : gen.general_oracle(cfg.n);
    check_matrix(m.t, &m, gen, cfg, led);
  }
  Json prov;
  prov["source"] = "random";
  prov["seed"] = cfg.seed;
  prov["n"] = cfg.n;
  prov["count"] = cfg.count;
  prov["families"] = Json::array({"integer", "real_entry", "general"});
  return finish(led, std::move(prov), cfg);
}

BatteryReport run_matrix_battery(const QMatrix &t, const std::string &source_hash,
                                 const BatteryConfig &cfg)
{
  Ledger led;
  declare_all(led, cfg);
  OracleGenerator gen(cfg.seed);
  check_matrix(t, nullptr, gen, cfg, led);
  Json prov;
  prov["source"] = "file";
  prov["fnv1a64"] = source_hash;
  prov["seed"] = cfg.seed;
  prov["n"] = t.n();
  return finish(led, std::move(prov), cfg);
}

Json battery_to_json(const BatteryReport &rep)
{
  Json ids = Json::array();
  for (const auto &r : rep.identities)
  {
    Json e;
    e["name"] = r.name;
    e["max_residual"] = number_or_null(r.max_residual);
    e["tolerance"] = r.tolerance;
    e["scale"] = r.scale;
    e["cases"] = r.cases;
    e["skipped"] = r.skipped;
    e["gating"] = r.gating;
    e["pass"] = r.pass;
    ids.push_back(std::move(e));
  }
  Json doc;
  doc["provenance"] = rep.provenance;
  doc["parameters"] = rep.parameters;
  doc["identities"] = std::move(ids);
  doc["pass"] = rep.pass;
  doc["first_failure"] = rep.first_failure ? Json(*rep.first_failure) : Json(nullptr);
  return doc;
}

}  // namespace quatspec
