#include "quatspec/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quatspec/errors.hpp"

namespace quatspec
{

namespace
{

Quaternion quaternion_from_json(const Json &e, std::size_t r, std::size_t c)
{
  const std::string where = "entry [" + std::to_string(r) + "][" + std::to_string(c) + "]";
  if (!e.is_array() || e.size() != 4)
  {
    throw ParseError(where + " must be an array [w, x, y, z]");
  }
  double comp[4];
  for (std::size_t k = 0; k < 4; k++)
  {
    if (!e[k].is_number())
    {
      throw ParseError(where + " has a non-numeric component");
    }
    comp[k] = e[k].get<double>();
  }
  return {comp[0], comp[1], comp[2], comp[3]};
}

}  // namespace

QMatrix matrix_from_json(const Json &doc)
{
  if (!doc.is_object())
  {
    throw ParseError("matrix document must be a JSON object");
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer())
  {
    throw ParseError("missing integer field \"n\"");
  }
  if (!doc.contains("entries") || !doc["entries"].is_array())
  {
    throw ParseError("missing array field \"entries\"");
  }
  const auto n_signed = doc["n"].get<long long>();
  if (n_signed <= 0 || n_signed > static_cast<long long>(kMaxSide))
  {
    throw SizeError("matrix side " + std::to_string(n_signed) + " outside [1, " +
                    std::to_string(kMaxSide) + "]");
  }
  const auto n = static_cast<std::size_t>(n_signed);
  const Json &rows = doc["entries"];
  if (rows.size() != n)
  {
    throw ParseError("\"entries\" has " + std::to_string(rows.size()) + " rows, expected " +
                     std::to_string(n));
  }
  std::vector<Quaternion> entries;
  entries.reserve(n * n);
  for (std::size_t r = 0; r < n; r++)
  {
    const Json &row = rows[r];
    if (!row.is_array() || row.size() != n)
    {
      throw ParseError("row " + std::to_string(r) + " is ragged (expected " + std::to_string(n) +
                       " entries)");
    }
    for (std::size_t c = 0; c < n; c++)
    {
      entries.push_back(quaternion_from_json(row[c], r, c));
    }
  }
  return QMatrix(n, std::move(entries));
}

QMatrix parse_matrix(std::string_view text)
{
  Json doc;
  try
  {
    doc = Json::parse(text);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return matrix_from_json(doc);
}

QMatrix load_matrix(const std::string &path) { return parse_matrix(read_file(path)); }

Json quaternion_to_json(const Quaternion &q) { return Json::array({q.w, q.x, q.y, q.z}); }

Json matrix_to_json(const QMatrix &t)
{
  Json rows = Json::array();
  for (std::size_t r = 0; r < t.n(); r++)
  {
    Json row = Json::array();
    for (std::size_t c = 0; c < t.n(); c++)
    {
      row.push_back(quaternion_to_json(t(r, c)));
    }
    rows.push_back(std::move(row));
  }
  Json doc;
  doc["n"] = t.n();
  doc["entries"] = std::move(rows);
  return doc;
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json spectrum_to_json(const SpectrumReport &rep)
{
  Json spheres = Json::array();
  for (std::size_t a = 0; a < rep.spheres.size(); a++)
  {
    Json s;
    s["u"] = rep.spheres[a].point.u;
    s["v"] = rep.spheres[a].point.v;
    s["mult"] = rep.spheres[a].mult;
    s["gap"] = number_or_null(rep.gaps[a]);
    spheres.push_back(std::move(s));
  }
  Json doc;
  doc["spheres"] = std::move(spheres);
  doc["eig_residual"] = rep.eig_residual;
  doc["cluster_tol"] = rep.params.cluster_tol;
  doc["op_norm"] = rep.op_norm;
  return doc;
}

std::string dump(const Json &doc) { return doc.dump(2) + "\n"; }

std::string fnv1a64_hex(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes)
  {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ParseError("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace quatspec
