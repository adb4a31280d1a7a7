#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "quatspec/qmatrix.hpp"
#include "quatspec/quaternion.hpp"

namespace quatspec
{

struct EigOptions
{
  /// Relative residual bound ||M v - lambda v|| <= eig_tol * ||M|| reported in eig_residual.
  double eig_tol = 1e-9;
  /// Total QR sweep budget; negative selects 30 * m.
  int max_sweeps = -1;
};

struct EigResult
{
  /// Sorted by (Re, Im).
  std::vector<std::complex<double>> values;
  /// max_i ||M v_i - lambda_i v_i|| / (||v_i|| ||M||).
  double residual = 0.0;
};

/// Eigenvalues of a complex matrix (Hessenberg reduction followed by shifted
/// QR on the complex Schur form). Throws SizeError for m > 128 and
/// ConvergenceError when the sweep budget is exhausted.
EigResult complex_eigs(const CMatrix &m, const EigOptions &opts = {});

/// An eigensphere [q] of T with its quaternionic algebraic multiplicity,
/// defined as half the multiplicity of the corresponding chi eigenvalues.
struct Sphere
{
  SpherePoint point;
  std::size_t mult = 0;
};

struct SpectrumParams
{
  double cluster_tol = 0.0;
  double eig_tol = 0.0;
};

struct SpectrumReport
{
  /// Sorted lexicographically by (u, v).
  std::vector<Sphere> spheres;
  /// gaps[i] = min sphere_distance from spheres[i] to the others, +inf if alone.
  std::vector<double> gaps;
  double eig_residual = 0.0;
  SpectrumParams params;
  /// Operator norm of T, used for default tolerances downstream.
  double op_norm = 0.0;
};

struct SpectrumOptions
{
  /// Negative selects 1e-7 * max(1, ||T||).
  double cluster_tol = -1.0;
  EigOptions eig;
};

double default_cluster_tol(double op_norm_t);

/// S-spectrum of T as a list of eigenspheres. Eigenvalues of chi(T) are mapped
/// to (Re, |Im|), single-linkage clustered under cluster_tol and averaged;
/// clusters within cluster_tol of the real axis are snapped to v = 0.
/// Throws ParityError if a cluster holds an odd number of points.
SpectrumReport s_spectrum(const QMatrix &t, const SpectrumOptions &opts = {});

/// Q_q(T) = T^2 - 2 Re(q) T + |q|^2 I.
QMatrix pseudo_Q(const Quaternion &q, const QMatrix &t);

/// Index of the sphere nearest to p, if it lies within tol.
std::optional<std::size_t> find_sphere(const SpectrumReport &rep, const SpherePoint &p,
                                       double tol);

/// Distance from s to the rest of the spectrum; any radius below it isolates s.
double isolation_gap(const Sphere &s, const SpectrumReport &rep);

/// max |lambda| over the eigenvalues of chi(T).
double s_spectral_radius(const QMatrix &t);

}  // namespace quatspec
