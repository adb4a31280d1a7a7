#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "quatspec/qmatrix.hpp"
#include "quatspec/quaternion.hpp"
#include "quatspec/spectrum.hpp"

namespace quatspec
{

/// S_L^{-1}(q, T) = -Q_q(T)^{-1} (T - q̄ I). Throws SingularError for q in the S-spectrum.
QMatrix s_resolvent_left(const Quaternion &q, const QMatrix &t, const SolveOptions &opts = {});

/// S_R^{-1}(q, T) = -(T - q̄ I) Q_q(T)^{-1}.
QMatrix s_resolvent_right(const Quaternion &q, const QMatrix &t, const SolveOptions &opts = {});

/// Truncated left Cauchy series sum_{k<=K} T^k q^{-k-1}.
QMatrix left_cauchy_series(const Quaternion &q, const QMatrix &t, std::size_t terms);
/// Truncated right Cauchy series sum_{k<=K} q^{-k-1} T^k.
QMatrix right_cauchy_series(const Quaternion &q, const QMatrix &t, std::size_t terms);
/// Smallest K with (||T||/|q|)^{K+1} / (|q| - ||T||) <= tail_tol. Requires |q| > ||T||.
std::size_t cauchy_terms(double norm_t, double abs_q, double tail_tol);

/// A slice contour around one eigensphere: a circle of the given radius in
/// C_slice centred at u + I v and, for nonreal spheres, a second one at u - I v.
struct ContourSpec
{
  SpherePoint sphere;
  double radius = 0.0;
  std::size_t nodes = 256;
  SliceUnit slice;
  /// Spheres with v <= real_snap get a single circle.
  double real_snap = 0.0;

  std::size_t circles() const { return sphere.v <= real_snap ? 1 : 2; }
};

struct ContourOptions
{
  std::size_t nodes = 256;
  std::size_t max_nodes = 8192;
  /// Required ||P^2 - P|| of a Riesz projector.
  double proj_tol = 1e-8;
  /// Relative agreement of successive refinements in func_calc.
  double quad_tol = 1e-11;
  /// Positive values override the default radius.
  double radius = -1.0;
  SliceUnit slice;
};

/// Radius 0.45 * min(gap, v) for nonreal spheres and 0.45 * gap for real ones.
/// A lone real sphere (infinite gap) uses 0.45 * max(1, ||T||).
ContourSpec default_contour(std::size_t sphere_index, const SpectrumReport &rep,
                            const ContourOptions &opts = {});

/// Throws ContourError unless nodes >= 16 is a power of two, radius > 0,
/// radius < gap and, for two circles, radius < v.
void validate_contour(const ContourSpec &c, double gap);

/// Real polynomial sum_k coeffs[k] t^k, degree <= 8. Real coefficients make it
/// intrinsic: it maps every slice C_I into itself.
class IntrinsicPoly
{
public:
  explicit IntrinsicPoly(std::vector<double> coeffs);

  const std::vector<double> &coeffs() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  std::complex<double> operator()(std::complex<double> z) const;
  /// Evaluation on a slice: f(a + I b) = Re f(a + ib) + I Im f(a + ib).
  Quaternion operator()(const Quaternion &q) const;

private:
  std::vector<double> coeffs_;
};

/// f(T) = sum_k c_k T^k by Horner's scheme.
QMatrix horner(const IntrinsicPoly &f, const QMatrix &t);

/// Composite trapezoid rule for (1/2pi) ∮ S_L^{-1}(q, T) dq_I [f(q)] with the
/// contour's node count, without refinement. `f == nullptr` means f = 1.
QMatrix contour_integral(const QMatrix &t, const ContourSpec &c, const IntrinsicPoly *f = nullptr,
                         const SolveOptions &solve_opts = {});

/// Right-kernel form (1/2pi) ∮ dq_I S_R^{-1}(q, T); should agree with the left one.
QMatrix contour_integral_right(const QMatrix &t, const ContourSpec &c,
                               const SolveOptions &solve_opts = {});

struct RieszResult
{
  QMatrix projector;
  std::size_t nodes_used = 0;
  double idempotency_residual = 0.0;
};

/// Riesz projector of the sphere targeted by `c`. Nodes double from c.nodes
/// until ||P^2 - P|| <= proj_tol; NonIdempotentError past max_nodes.
RieszResult riesz_projector(const QMatrix &t, const ContourSpec &c, double gap,
                            const ContourOptions &opts = {});

/// Convenience: projector of rep.spheres[index] with the default contour.
RieszResult riesz_projector(const QMatrix &t, const SpectrumReport &rep, std::size_t index,
                            const ContourOptions &opts = {});

/// One default contour per sphere; together they enclose the whole S-spectrum.
std::vector<ContourSpec> enclosing_contours(const SpectrumReport &rep,
                                            const ContourOptions &opts = {});

/// f(T) by slice contour quadrature over `contours`, refined until two
/// successive node counts agree within quad_tol.
QMatrix func_calc(const IntrinsicPoly &f, const QMatrix &t, std::span<const ContourSpec> contours,
                  const ContourOptions &opts = {});

/// Hausdorff distance in the Ψ half-plane between the spheres of f(T) and the
/// images psi(f(u + i v)) of the spheres of T.
double spectral_mapping_check(const IntrinsicPoly &f, const QMatrix &t,
                              const SpectrumOptions &opts = {});

}  // namespace quatspec
