// quatspec: command-line front end for the S-spectral toolkit.
//
// Exit codes: 0 ok, 1 usage, 2 unreadable or malformed input, 3 solver
// failure, 4 no such sphere, 5 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quatspec/battery.hpp"
#include "quatspec/browder.hpp"
#include "quatspec/calculus.hpp"
#include "quatspec/errors.hpp"
#include "quatspec/json_io.hpp"
#include "quatspec/spectrum.hpp"

using namespace quatspec;

namespace
{

enum ExitCode
{
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kSolver = 3,
  kNoSphere = 4,
  kVerify = 5
};

struct NoSuchSphere : Error
{
  using Error::Error;
};

struct Options
{
  double tol_cluster = -1.0;
  double tol_proj = 1e-8;
  std::size_t nodes = 256;
  std::uint64_t seed = 7;
  bool text = false;
  std::string out;

  std::string file;
  std::string sphere;
  std::string q;
  std::string direction;
  std::size_t kmax = 50;
  std::size_t random_n = 0;
  std::size_t count = 20;
  std::string fault;
};

std::vector<double> parse_list(const std::string &s, std::size_t expected, const char *what)
{
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    try
    {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size())
      {
        throw std::invalid_argument(item);
      }
    }
    catch (const std::exception &)
    {
      throw CLI::ValidationError(what, "expected " + std::to_string(expected) +
                                           " comma-separated numbers, got '" + s + "'");
    }
  }
  if (out.size() != expected)
  {
    throw CLI::ValidationError(what, "expected " + std::to_string(expected) +
                                         " comma-separated numbers, got '" + s + "'");
  }
  return out;
}

SpectrumOptions spectrum_options(const Options &o)
{
  SpectrumOptions s;
  s.cluster_tol = o.tol_cluster;
  return s;
}

ContourOptions contour_options(const Options &o)
{
  ContourOptions c;
  c.nodes = o.nodes;
  c.proj_tol = o.tol_proj;
  return c;
}

std::string fmt(double x, const char *spec = "%.6g")
{
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string fmt_q(const Quaternion &q)
{
  return "[" + fmt(q.w) + ", " + fmt(q.x) + ", " + fmt(q.y) + ", " + fmt(q.z) + "]";
}

void render_matrix(std::ostream &os, const QMatrix &m)
{
  for (std::size_t r = 0; r < m.n(); r++)
  {
    os << " ";
    for (std::size_t c = 0; c < m.n(); c++)
    {
      os << " " << fmt_q(m(r, c));
    }
    os << "\n";
  }
}

void render_spectrum(std::ostream &os, const SpectrumReport &rep)
{
  os << "       u            v        mult      gap\n";
  for (std::size_t a = 0; a < rep.spheres.size(); a++)
  {
    const auto &s = rep.spheres[a];
    char line[128];
    std::snprintf(line, sizeof line, "%12.6g %12.6g %6zu %12.6g\n", s.point.u, s.point.v, s.mult,
                  rep.gaps[a]);
    os << line;
  }
  os << "eig_residual " << fmt(rep.eig_residual) << "\n";
}

std::size_t require_sphere(const SpectrumReport &rep, const std::string &spec)
{
  const auto uv = parse_list(spec, 2, "--sphere");
  const auto idx = find_sphere(rep, {uv[0], uv[1]}, rep.params.cluster_tol);
  if (!idx)
  {
    throw NoSuchSphere("no such sphere (" + spec + ")");
  }
  return *idx;
}

Json cmd_spectrum(const Options &o, std::ostream &text)
{
  const QMatrix t = load_matrix(o.file);
  const SpectrumReport rep = s_spectrum(t, spectrum_options(o));
  render_spectrum(text, rep);
  return spectrum_to_json(rep);
}

Json cmd_riesz(const Options &o, std::ostream &text)
{
  const QMatrix t = load_matrix(o.file);
  const SpectrumReport rep = s_spectrum(t, spectrum_options(o));
  const std::size_t idx = require_sphere(rep, o.sphere);
  const ContourOptions copts = contour_options(o);
  const ContourSpec c = default_contour(idx, rep, copts);
  const RieszResult r = riesz_projector(t, c, rep.gaps[idx], copts);
  const std::size_t rank = hrank(r.projector);
  const double comm = op_norm(sub(matmul(r.projector, t), matmul(t, r.projector)));

  Json doc;
  doc["sphere"] = {{"u", rep.spheres[idx].point.u},
                   {"v", rep.spheres[idx].point.v},
                   {"mult", rep.spheres[idx].mult}};
  doc["radius"] = c.radius;
  doc["nodes"] = r.nodes_used;
  doc["rank"] = rank;
  doc["idempotency_residual"] = r.idempotency_residual;
  doc["commutation_residual"] = comm;
  doc["projector"] = matrix_to_json(r.projector);

  text << "sphere (" << fmt(rep.spheres[idx].point.u) << ", " << fmt(rep.spheres[idx].point.v)
       << ")  rank " << rank << "  nodes " << r.nodes_used << "\n";
  text << "||P^2 - P|| " << fmt(r.idempotency_residual) << "  ||PT - TP|| " << fmt(comm) << "\n";
  render_matrix(text, r.projector);
  return doc;
}

Quaternion parse_q(const std::string &s)
{
  const auto v = parse_list(s, 4, "--q");
  return {v[0], v[1], v[2], v[3]};
}

Json cmd_resolvent(const Options &o, std::ostream &text)
{
  const QMatrix t = load_matrix(o.file);
  const Quaternion q = parse_q(o.q);
  const QMatrix left = s_resolvent_left(q, t);
  const QMatrix right = s_resolvent_right(q, t);
  const ResolventEquationResiduals res = resolvent_equation_residuals(q, t);

  Json doc;
  doc["q"] = quaternion_to_json(q);
  doc["left"] = matrix_to_json(left);
  doc["right"] = matrix_to_json(right);
  doc["left_equation_residual"] = res.left;
  doc["right_equation_residual"] = res.right;

  text << "left S-resolvent at " << fmt_q(q) << "\n";
  render_matrix(text, left);
  text << "right S-resolvent\n";
  render_matrix(text, right);
  text << "equation residuals  left " << fmt(res.left) << "  right " << fmt(res.right) << "\n";
  return doc;
}

Json cmd_browder(const Options &o, std::ostream &text)
{
  const QMatrix t = load_matrix(o.file);
  const Quaternion q = parse_q(o.q);
  const SpectrumReport rep = s_spectrum(t, spectrum_options(o));
  const std::vector<FiniteTypeRecord> recs = classify(t, rep, {contour_options(o), 1e-8});
  const BrowderPoint b = locate_point(q, t.n(), rep, recs);
  const QMatrix left = browder_resolvent_left(b, t);
  const QMatrix right = browder_resolvent_right(b, t);
  const ResolventEquationResiduals res = browder_equation_residuals(b, t);
  const double comm = scalar_commutator(b.projector, q);
  const bool finite = b.status == BrowderStatus::FiniteType;

  Json doc;
  doc["q"] = quaternion_to_json(q);
  doc["status"] = finite ? "finite_type" : "resolvent";
  doc["projector_rank"] = finite ? hrank(b.projector) : 0;
  doc["projector_scalar_commutator"] = comm;
  doc["left"] = matrix_to_json(left);
  doc["right"] = matrix_to_json(right);
  doc["left_equation_residual"] = res.left;
  doc["right_equation_residual"] = res.right;

  text << "q " << fmt_q(q) << "  status " << (finite ? "finite_type" : "resolvent") << "\n";
  text << "left Browder S-resolvent\n";
  render_matrix(text, left);
  text << "right Browder S-resolvent\n";
  render_matrix(text, right);
  text << "equation residuals  left " << fmt(res.left) << "  right " << fmt(res.right)
       << "  ||qP - Pq|| " << fmt(comm) << "\n";
  return doc;
}

Json cmd_verify(const Options &o, std::ostream &text, std::optional<std::string> &failure)
{
  BatteryConfig cfg;
  cfg.seed = o.seed;
  cfg.spectrum = spectrum_options(o);
  cfg.contour = contour_options(o);
  if (!o.fault.empty())
  {
    cfg.fault = o.fault;
  }
  BatteryReport rep;
  if (o.random_n > 0)
  {
    cfg.n = o.random_n;
    cfg.count = o.count;
    rep = run_random_battery(cfg);
  }
  else
  {
    const std::string bytes = read_file(o.file);
    rep = run_matrix_battery(parse_matrix(bytes), fnv1a64_hex(bytes), cfg);
  }

  for (const auto &r : rep.identities)
  {
    char line[200];
    std::snprintf(line, sizeof line, "%-38s %12.4g  tol %-10.3g cases %5zu  skipped %4zu  %s\n",
                  r.name.c_str(), r.max_residual, r.tolerance, r.cases, r.skipped,
                  !r.gating ? "info" : (r.pass ? "pass" : "FAIL"));
    text << line;
  }
  text << (rep.pass ? "all identities pass\n" : "verification failed\n");
  failure = rep.first_failure;
  return battery_to_json(rep);
}

Json cmd_perturb(const Options &o, std::ostream &text)
{
  const QMatrix t = load_matrix(o.file);
  const QMatrix e = load_matrix(o.direction);
  std::optional<SpherePoint> target;
  if (!o.sphere.empty())
  {
    const SpectrumReport rep = s_spectrum(t, spectrum_options(o));
    target = rep.spheres[require_sphere(rep, o.sphere)].point;
  }
  const PerturbationTable table = perturbation_localization(t, e, o.kmax, target,
                                                            contour_options(o));
  Json rows = Json::array();
  text << "target (" << fmt(table.target.u) << ", " << fmt(table.target.v) << ")  radius "
       << fmt(table.radius) << "  rank " << table.base_rank << "\n";
  text << "    k        delta  inside  rank    ||P-P_k||\n";
  for (const auto &row : table.rows)
  {
    Json spheres = Json::array();
    for (const auto &s : row.spheres)
    {
      spheres.push_back({{"u", s.point.u}, {"v", s.point.v}, {"mult", s.mult}});
    }
    Json r;
    r["k"] = row.k;
    r["delta"] = row.delta;
    r["inside_ball"] = row.inside_ball;
    r["projector_ok"] = row.projector_ok;
    r["proj_rank"] = row.projector_ok ? Json(row.proj_rank) : Json(nullptr);
    r["proj_distance"] = row.projector_ok ? Json(row.proj_distance) : Json(nullptr);
    r["rank_match"] = row.rank_match;
    r["spheres"] = std::move(spheres);
    rows.push_back(std::move(r));

    char line[128];
    if (row.projector_ok)
    {
      std::snprintf(line, sizeof line, "%5zu %12.4e  %-6s %4zu %12.4e\n", row.k, row.delta,
                    row.inside_ball ? "yes" : "no", row.proj_rank, row.proj_distance);
    }
    else
    {
      std::snprintf(line, sizeof line, "%5zu %12.4e  %-6s    -            -\n", row.k, row.delta,
                    row.inside_ball ? "yes" : "no");
    }
    text << line;
  }
  Json doc;
  doc["target"] = {{"u", table.target.u}, {"v", table.target.v}};
  doc["radius"] = table.radius;
  doc["base_rank"] = table.base_rank;
  doc["stable_from"] = table.stable_from ? Json(*table.stable_from) : Json(nullptr);
  doc["rows"] = std::move(rows);
  text << "stable from k = "
       << (table.stable_from ? std::to_string(*table.stable_from) : std::string("none")) << "\n";
  return doc;
}

int emit(const Options &o, const Json &doc, const std::string &text)
{
  const std::string body = o.text ? text : dump(doc);
  if (o.out.empty())
  {
    std::cout << body;
    return kOk;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f)
  {
    std::cerr << "error: cannot write " << o.out << "\n";
    return kInput;
  }
  f << body;
  return kOk;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"S-spectral analysis of quaternionic matrices"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--tol-cluster", o.tol_cluster, "eigenvalue clustering tolerance (default 1e-7*max(1,||T||))");
  app.add_option("--tol-proj", o.tol_proj, "required ||P^2 - P|| of Riesz projectors");
  app.add_option("--nodes", o.nodes, "initial quadrature nodes per circle (power of two >= 16)");
  app.add_option("--seed", o.seed, "seed for random test points and matrices");
  auto *json_flag = app.add_flag("--json", "JSON output (default)");
  auto *text_flag = app.add_flag("--text", o.text, "text output");
  json_flag->excludes(text_flag);
  app.add_option("--out", o.out, "write the report to a file instead of stdout");

  auto *spectrum = app.add_subcommand("spectrum", "eigenspheres with multiplicities and gaps");
  spectrum->add_option("file", o.file, "matrix JSON")->required();

  auto *riesz = app.add_subcommand("riesz", "Riesz projector of one eigensphere");
  riesz->add_option("file", o.file, "matrix JSON")->required();
  riesz->add_option("--sphere", o.sphere, "sphere as u,v")->required();

  auto *resolvent = app.add_subcommand("resolvent", "left and right S-resolvents at q");
  resolvent->add_option("file", o.file, "matrix JSON")->required();
  resolvent->add_option("--q", o.q, "quaternion as w,x,y,z")->required();

  auto *browder = app.add_subcommand("browder", "Browder S-resolvents at q");
  browder->add_option("file", o.file, "matrix JSON")->required();
  browder->add_option("--q", o.q, "quaternion as w,x,y,z")->required();

  auto *verify = app.add_subcommand("verify", "identity battery on a file or random constructions");
  auto *verify_file = verify->add_option("file", o.file, "matrix JSON");
  auto *random = verify->add_option("--random", o.random_n, "side of random constructed matrices");
  verify->add_option("--count", o.count, "number of random matrices");
  verify->add_option("--inject-fault", o.fault, "test hook")->group("")->check(CLI::IsMember({"projector"}));
  verify_file->excludes(random);

  auto *perturb = app.add_subcommand("perturb", "localization of spheres of T + E/k");
  perturb->add_option("file", o.file, "matrix JSON")->required();
  perturb->add_option("--direction", o.direction, "perturbation E as matrix JSON")->required();
  perturb->add_option("--kmax", o.kmax, "largest k")->check(CLI::PositiveNumber);
  perturb->add_option("--sphere", o.sphere, "target sphere u,v (default: nearest the origin)");

  try
  {
    app.parse(argc, argv);
    if (verify->parsed() && o.file.empty() && o.random_n == 0)
    {
      throw CLI::RequiredError("verify needs a matrix file or --random n");
    }
    if (!(o.tol_proj > 0.0) || (o.tol_cluster != -1.0 && !(o.tol_cluster > 0.0)))
    {
      throw CLI::ValidationError("tolerances", "must be positive");
    }
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kUsage;
  }

  std::ostringstream text;
  Json doc;
  std::optional<std::string> failure;
  try
  {
    if (spectrum->parsed())
    {
      doc = cmd_spectrum(o, text);
    }
    else if (riesz->parsed())
    {
      doc = cmd_riesz(o, text);
    }
    else if (resolvent->parsed())
    {
      doc = cmd_resolvent(o, text);
    }
    else if (browder->parsed())
    {
      doc = cmd_browder(o, text);
    }
    else if (verify->parsed())
    {
      doc = cmd_verify(o, text, failure);
    }
    else if (perturb->parsed())
    {
      doc = cmd_perturb(o, text);
    }
  }
  catch (const CLI::ValidationError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  catch (const NoSuchSphere &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kNoSphere;
  }
  catch (const ParseError &e)
  {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInput;
  }
  catch (const SizeError &e)
  {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  }
  catch (const DimError &e)
  {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  }
  catch (const Error &e)
  {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  }

  const int code = emit(o, doc, text.str());
  if (code != kOk)
  {
    return code;
  }
  if (failure)
  {
    std::cerr << "verification failed: " << *failure << "\n";
    return kVerify;
  }
  return kOk;
}
