#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "quatspec/calculus.hpp"
#include "quatspec/qmatrix.hpp"
#include "quatspec/quaternion.hpp"
#include "quatspec/spectrum.hpp"

namespace quatspec
{

/// Riesz data of one eigensphere. At matrix scale every isolated sphere is of
/// finite type; the rank is still computed and compared with the multiplicity.
struct FiniteTypeRecord
{
  Sphere sphere;
  std::size_t proj_rank = 0;
  bool finite_type = false;
  double gap = 0.0;
  QMatrix projector{1};
  std::size_t nodes_used = 0;
  double idempotency_residual = 0.0;
};

struct ClassifyOptions
{
  ContourOptions contour;
  double rank_tol = 1e-8;
};

/// Projector and rank for every sphere of rep. Throws PreconditionError when
/// two spheres are closer than 2 * cluster_tol and ClassificationError when a
/// rank differs from the multiplicity.
std::vector<FiniteTypeRecord> classify(const QMatrix &t, const SpectrumReport &rep,
                                       const ClassifyOptions &opts = {});

enum class BrowderStatus
{
  Resolvent,
  FiniteType
};

/// A point of the Browder resolvent set. P is zero for resolvent points.
struct BrowderPoint
{
  Quaternion q;
  BrowderStatus status = BrowderStatus::Resolvent;
  QMatrix projector{1};
};

BrowderPoint resolvent_point(const Quaternion &q, std::size_t n);
BrowderPoint finite_type_point(const Quaternion &q, const QMatrix &projector);

/// Finite-type point if psi(q) is within cluster_tol of a sphere of rep,
/// resolvent point otherwise.
BrowderPoint locate_point(const Quaternion &q, std::size_t n, const SpectrumReport &rep,
                          std::span<const FiniteTypeRecord> records);

/// Q_q(T)(I - P) + P.
QMatrix pq_op(const BrowderPoint &b, const QMatrix &t);
/// Inverse of pq_op.
QMatrix pr_bs(const BrowderPoint &b, const QMatrix &t, const SolveOptions &opts = {});

/// -pr_bs (T - q̄ I)(I - P) - P.
QMatrix browder_resolvent_left(const BrowderPoint &b, const QMatrix &t);
/// -(T - q̄ I) pr_bs (I - P) - P.
QMatrix browder_resolvent_right(const BrowderPoint &b, const QMatrix &t);

struct ResolventEquationResiduals
{
  /// ||S_LB (I-P) q - T (I-P) S_LB + P - I||
  double left = 0.0;
  /// ||q (I-P) S_RB - S_RB (I-P) T + P - I||
  double right = 0.0;
};

ResolventEquationResiduals browder_equation_residuals(const BrowderPoint &b, const QMatrix &t);

struct ProductEquationResiduals
{
  /// Product times Q_s(p) on the right against the expanded right-hand side.
  double displayed = 0.0;
  /// Product against the right-hand side times Q_s(p)^{-1}.
  double normalized = 0.0;
};

/// Product rule for S_RB(s) S_LB(p). Throws PreconditionError when
/// psi(p) lies within sphere_tol of psi(s).
ProductEquationResiduals browder_product_residuals(const BrowderPoint &s, const BrowderPoint &p,
                                                   const QMatrix &t, double sphere_tol);

/// Q_s(p) = p^2 - 2 Re(s) p + |s|^2.
Quaternion scalar_Q(const Quaternion &s, const Quaternion &p);

/// ||S_R(s) S_L(p) - [(S_R(s) - S_L(p)) p - s̄ (S_R(s) - S_L(p))] Q_s(p)^{-1}||
/// for s, p in the resolvent set.
double resolvent_product_residual(const Quaternion &s, const Quaternion &p, const QMatrix &t);

/// Distance between the noncommutative correction term of the product rule
/// and its factored form (p - s̄)[S_RB(s) K_p - S_LB(p) K_s], K_x = (T - (x+1) I) P_x.
/// Small when T, s and p commute.
double factored_correction_residual(const BrowderPoint &s, const BrowderPoint &p,
                                    const QMatrix &t);

/// ||S_L(q) q - T S_L(q) - I|| and ||q S_R(q) - S_R(q) T - I||.
ResolventEquationResiduals resolvent_equation_residuals(const Quaternion &q, const QMatrix &t);

/// ||q P - P q|| (left against right scalar multiplication).
double scalar_commutator(const QMatrix &p, const Quaternion &q);

/// r_k = ||Q_q(T)^k x||^{1/k} for k = 1..n_max.
std::vector<double> range_radius(std::span<const Quaternion> x, const Quaternion &q,
                                 const QMatrix &t, std::size_t n_max);

struct QuasiNilpotentReport
{
  /// Spectral radius of Q_q(T) P.
  double radius_qp = 0.0;
  /// Spectral radius of Q_q(T) (2T + (1 - 2 Re q) I) P.
  double radius_q2p = 0.0;
  double norm_qp = 0.0;
  /// Condition numbers of Q_q(T) + P and Q_q(T) + (2T + (1 - 2 Re q) I) P.
  double cond_q_plus_p = 0.0;
  double cond_q_plus_2p = 0.0;
  /// (Q + P)^{-1} against the terminating Neumann expansion around
  /// pq_op with the nilpotent part Q P, relative to ||(Q + P)^{-1}||.
  double neumann_residual = 0.0;
};

QuasiNilpotentReport quasinilpotent_check(const Quaternion &q, const QMatrix &t,
                                          const QMatrix &projector);

struct InverseBound
{
  double lhs = 0.0;  ///< ||T^{-1} - S^{-1}||
  double rhs = 0.0;  ///< 2 ||S^{-1}||^2 ||T - S||
  bool applicable = false;  ///< ||T - S|| <= 1 / (2 ||S^{-1}||)
};

InverseBound inverse_perturbation_bound(const QMatrix &s, const QMatrix &t);

struct ProjectorPair
{
  double distance = 0.0;  ///< ||P - Q||
  std::size_t rank_p = 0;
  std::size_t rank_q = 0;
  /// Smallest singular value of Q P + (I - Q)(I - P).
  double bridge_min_singular = 0.0;
};

ProjectorPair compare_projectors(const QMatrix &p, const QMatrix &q, double rank_tol = 1e-8);

struct PerturbationRow
{
  std::size_t k = 0;
  std::vector<Sphere> spheres;
  /// max over spheres of T_k of the distance to the nearest sphere of T.
  double delta = 0.0;
  /// Spheres of T_k nearest to the target lie within the contour radius.
  bool inside_ball = false;
  bool projector_ok = false;
  std::size_t proj_rank = 0;
  double proj_distance = 0.0;
  bool rank_match = false;
  double bridge_min_singular = 0.0;
};

struct PerturbationTable
{
  SpherePoint target;
  double radius = 0.0;
  std::size_t base_rank = 0;
  std::vector<PerturbationRow> rows;
  /// Smallest k0 such that every row with k >= k0 is localized with matching rank.
  std::optional<std::size_t> stable_from;
};

/// T_k = T + E / k for k = 1..k_max, tracked against the sphere of T nearest to
/// `target` (default: nearest to the origin).
PerturbationTable perturbation_localization(const QMatrix &t, const QMatrix &e, std::size_t k_max,
                                            std::optional<SpherePoint> target = std::nullopt,
                                            const ContourOptions &opts = {});

}  // namespace quatspec
