#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "quatspec/qmatrix.hpp"
#include "quatspec/spectrum.hpp"

namespace quatspec
{

using Json = nlohmann::ordered_json;

/// Matrix document {"n": <int>, "entries": [[[w,x,y,z], ...], ...]}, row-major.
/// Throws ParseError on malformed, ragged or mismatched input and SizeError
/// when n is outside the supported range.
QMatrix matrix_from_json(const Json &doc);
QMatrix parse_matrix(std::string_view text);
QMatrix load_matrix(const std::string &path);

Json matrix_to_json(const QMatrix &t);
Json quaternion_to_json(const Quaternion &q);

/// {"spheres":[{"u","v","mult","gap"}], "eig_residual", "cluster_tol", "op_norm"}.
/// An infinite gap (single sphere) is written as null.
Json spectrum_to_json(const SpectrumReport &rep);

/// Non-finite numbers become null; everything else is stored as is.
Json number_or_null(double x);

/// Two-space indented dump terminated by a newline.
std::string dump(const Json &doc);

/// FNV-1a 64-bit hash of raw bytes, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Whole file contents; ParseError if the file cannot be read.
std::string read_file(const std::string &path);

}  // namespace quatspec
