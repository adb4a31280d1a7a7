#include <cmath>
#include <vector>

#include <doctest.h>

#include "quatspec/browder.hpp"
#include "quatspec/errors.hpp"
#include "quatspec/oracle.hpp"
#include "quatspec/spectrum.hpp"

using namespace quatspec;

namespace
{

QMatrix diag_i_2j() { return QMatrix::diag({Quaternion::i(), 2.0 * Quaternion::j()}); }

QMatrix e11() { return QMatrix::diag({Quaternion(1.0), Quaternion(0.0)}); }

}  // namespace

TEST_CASE("classification of diag(i, 2j)")
{
  const QMatrix t = diag_i_2j();
  const SpectrumReport rep = s_spectrum(t);
  const std::vector<FiniteTypeRecord> recs = classify(t, rep);
  REQUIRE(recs.size() == 2);
  for (const auto &r : recs)
  {
    CHECK(r.finite_type);
    CHECK(r.proj_rank == 1);
    CHECK(r.idempotency_residual <= 1e-8);
  }
  const BrowderPoint b = locate_point(Quaternion::k(), 2, rep, recs);
  CHECK(b.status == BrowderStatus::FiniteType);
  CHECK(op_norm(sub(b.projector, e11())) <= 1e-10);
  CHECK(locate_point(Quaternion(0.0, 1.5), 2, rep, recs).status == BrowderStatus::Resolvent);
}

TEST_CASE("nearly coincident spheres are not classified")
{
  const QMatrix t = QMatrix::diag({Quaternion::i(), Quaternion(0.0, 1.0 + 1.5e-7)});
  const SpectrumReport rep = s_spectrum(t);
  REQUIRE(rep.spheres.size() == 2);
  CHECK_THROWS_AS(classify(t, rep), PreconditionError);
}

TEST_CASE("Browder operators at a finite-type point")
{
  const QMatrix t = diag_i_2j();
  const BrowderPoint b = finite_type_point(Quaternion::i(), e11());
  const QMatrix pq = pq_op(b, t);
  CHECK(qabs(pq(0, 0) - Quaternion(1.0)) <= 1e-15);
  CHECK(qabs(pq(1, 1) - Quaternion(-3.0)) <= 1e-15);

  const QMatrix left = browder_resolvent_left(b, t);
  const QMatrix right = browder_resolvent_right(b, t);
  // -P on the range of P; the scalar resolvent (2j + i) / 3 on the complement.
  const Quaternion expected = (2.0 * Quaternion::j() + Quaternion::i()) * (1.0 / 3.0);
  for (const QMatrix *m : {&left, &right})
  {
    CHECK(qabs((*m)(0, 0) + Quaternion(1.0)) <= 1e-14);
    CHECK(qabs((*m)(1, 1) - expected) <= 1e-14);
    CHECK(qabs((*m)(0, 1)) + qabs((*m)(1, 0)) <= 1e-14);
  }
  const ResolventEquationResiduals r = browder_equation_residuals(b, t);
  CHECK(r.left <= 1e-13);
  CHECK(r.right <= 1e-13);
}

TEST_CASE("Browder operators extend the S-resolvents")
{
  OracleGenerator gen(51);
  for (int k = 0; k < 20; k++)
  {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 6));
    const QMatrix t = gen.matrix(n);
    const Quaternion q = gen.quaternion() * 3.0;
    const BrowderPoint b = resolvent_point(q, n);
    CHECK(op_norm(sub(browder_resolvent_left(b, t), s_resolvent_left(q, t))) <= 1e-11);
    CHECK(op_norm(sub(browder_resolvent_right(b, t), s_resolvent_right(q, t))) <= 1e-11);
  }
}

TEST_CASE("Browder equations on exact oracles")
{
  OracleGenerator gen(52);
  for (int k = 0; k < 10; k++)
  {
    const OracleMatrix m = k % 2 == 0 ? gen.integer_oracle(4) : gen.real_oracle(4);
    const SpectrumReport rep = s_spectrum(m.t);
    const std::vector<FiniteTypeRecord> recs = classify(m.t, rep);
    const double tn = op_norm(m.t);
    std::vector<BrowderPoint> pts;
    pts.push_back(resolvent_point(Quaternion(0.3, 0.2, 0.1, 0.0) * (4.0 * tn), 4));
    for (const auto &r : recs)
    {
      pts.push_back(finite_type_point(slice_embed(r.sphere.point, SliceUnit(gen.unit_imaginary())),
                                      r.projector));
    }
    for (const auto &s : pts)
    {
      const ResolventEquationResiduals r = browder_equation_residuals(s, m.t);
      CHECK(std::max(r.left, r.right) <= 1e-7 * std::max(1.0, tn * tn));
      for (const auto &p : pts)
      {
        if (psi_distance(psi(s.q), psi(p.q)) < 1e-6)
        {
          CHECK_THROWS_AS(browder_product_residuals(s, p, m.t, 1e-6), PreconditionError);
          continue;
        }
        const ProductEquationResiduals pr = browder_product_residuals(s, p, m.t, 1e-6);
        CHECK(pr.displayed <= 1e-6 * std::max(1.0, tn * tn * tn));
      }
    }
  }
}

TEST_CASE("product rule of the S-resolvents")
{
  OracleGenerator gen(53);
  for (int k = 0; k < 20; k++)
  {
    const QMatrix t = gen.matrix(3);
    const Quaternion s = gen.quaternion() * 4.0;
    const Quaternion p = gen.quaternion() * 4.0;
    const double scale = std::max(1.0, op_norm(s_resolvent_right(s, t)) *
                                           op_norm(s_resolvent_left(p, t)));
    CHECK(resolvent_product_residual(s, p, t) <= 1e-10 * scale);
  }
  CHECK(qabs(scalar_Q(Quaternion::i(), Quaternion::j())) <= 1e-15);
}

TEST_CASE("factored correction on a real matrix")
{
  const QMatrix t = QMatrix::from_rows({{Quaternion(1.0), Quaternion(-2.0), Quaternion(0.0)},
                                        {Quaternion(2.0), Quaternion(1.0), Quaternion(0.0)},
                                        {Quaternion(0.0), Quaternion(0.0), Quaternion(-1.0)}});
  const SpectrumReport rep = s_spectrum(t);
  const std::vector<FiniteTypeRecord> recs = classify(t, rep);
  std::vector<BrowderPoint> pts{resolvent_point(Quaternion(3.0, 1.0), 3)};
  for (const auto &r : recs)
  {
    pts.push_back(finite_type_point(slice_embed(r.sphere.point), r.projector));
  }
  for (const auto &s : pts)
  {
    for (const auto &p : pts)
    {
      if (psi_distance(psi(s.q), psi(p.q)) > 1e-6)
      {
        CHECK(factored_correction_residual(s, p, t) <= 1e-8);
      }
    }
  }
}

TEST_CASE("range radii of diag(i, 2j)")
{
  const QMatrix t = diag_i_2j();
  const std::vector<Quaternion> e1{Quaternion(1.0), Quaternion()};
  const std::vector<Quaternion> e2{Quaternion(), Quaternion(1.0)};
  for (double r : range_radius(e1, Quaternion::i(), t, 6))
  {
    CHECK(r <= 1e-12);
  }
  for (double r : range_radius(e2, Quaternion::i(), t, 6))
  {
    CHECK(r == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("quasi-nilpotent part of a defective sphere")
{
  const QMatrix t = QMatrix::from_rows({{Quaternion::j(), Quaternion(1.0), Quaternion(0.0)},
                                        {Quaternion(0.0), Quaternion::j(), Quaternion(0.0)},
                                        {Quaternion(0.0), Quaternion(0.0), Quaternion(3.0)}});
  const SpectrumReport rep = s_spectrum(t);
  const std::vector<FiniteTypeRecord> recs = classify(t, rep);
  const QuasiNilpotentReport qn = quasinilpotent_check(Quaternion::j(), t, recs[0].projector);
  CHECK(qn.norm_qp > 1.0);
  CHECK(qn.radius_qp <= 1e-6 * 9.0);
  CHECK(qn.radius_q2p <= 1e-6 * 9.0);
  CHECK(qn.cond_q_plus_p < 1e12);
  CHECK(qn.neumann_residual <= 1e-8);
}

TEST_CASE("scalar commutation depends on the similarity")
{
  OracleGenerator gen(54);
  const OracleMatrix real = gen.integer_oracle(4, false);
  for (const auto &r : classify(real.t, s_spectrum(real.t)))
  {
    CHECK(scalar_commutator(r.projector, gen.quaternion()) <= 1e-8);
  }
  // A quaternionic similarity moves eigenvectors off the coordinate axes, so
  // left scalars no longer pass through the projector.
  const OracleMatrix general = gen.general_oracle(4);
  double worst = 0.0;
  for (const auto &r : classify(general.t, s_spectrum(general.t)))
  {
    worst = std::max(worst, scalar_commutator(r.projector, Quaternion::j()));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("inverse perturbation bound")
{
  OracleGenerator gen(55);
  for (int k = 0; k < 50; k++)
  {
    const QMatrix s = gen.matrix(4);
    QMatrix d = gen.matrix(4);
    d = scale(d, 0.4 / (op_norm(invert(s)) * op_norm(d)));
    const InverseBound b = inverse_perturbation_bound(s, add(s, d));
    CHECK(b.applicable);
    CHECK(b.lhs <= b.rhs);
  }
  const InverseBound far = inverse_perturbation_bound(QMatrix::identity(2), scale(QMatrix::identity(2), 3.0));
  CHECK_FALSE(far.applicable);
}

TEST_CASE("close projectors have equal rank")
{
  const QMatrix p = e11();
  const QMatrix q = QMatrix::from_rows({{Quaternion(1.0), Quaternion(0.0, 0.0, 0.1)},
                                        {Quaternion(0.0), Quaternion(0.0)}});
  const ProjectorPair pair = compare_projectors(p, q);
  CHECK(pair.distance == doctest::Approx(0.1));
  CHECK(pair.rank_p == pair.rank_q);
  CHECK(pair.bridge_min_singular > 0.5);
  const ProjectorPair far = compare_projectors(p, QMatrix::identity(2));
  CHECK(far.rank_q == 2);
  CHECK(far.distance == doctest::Approx(1.0));
}

TEST_CASE("perturbation localization")
{
  const QMatrix t = QMatrix::diag({Quaternion(0.0), Quaternion(2.0)});
  const PerturbationTable none = perturbation_localization(t, QMatrix(2), 5);
  for (const auto &row : none.rows)
  {
    CHECK(row.delta == 0.0);
    CHECK(row.rank_match);
  }
  CHECK(none.stable_from == std::optional<std::size_t>(1));

  const QMatrix e = QMatrix::from_rows({{Quaternion(0.5), Quaternion(0.6)},
                                        {Quaternion(0.4), Quaternion(-0.3)}});
  const PerturbationTable table = perturbation_localization(t, e, 60);
  CHECK(table.target.u == 0.0);
  CHECK(table.base_rank == 1);
  REQUIRE(table.stable_from.has_value());
  for (const auto &row : table.rows)
  {
    if (row.k >= 10)
    {
      CHECK(row.delta * static_cast<double>(row.k) <= 0.5);
      CHECK(row.delta * static_cast<double>(row.k) >= 0.4);
    }
  }
  CHECK_THROWS_AS(perturbation_localization(t, QMatrix(3), 5), DimError);
}
