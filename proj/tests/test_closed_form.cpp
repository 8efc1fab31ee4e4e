#include <gtest/gtest.h>

#include <set>

#include "cwc/closed_form.hpp"
#include "cwc/polytope.hpp"
#include "cwc/sampling.hpp"

using namespace cwc;

namespace {

bool has_label_prefix(const StabilityReport& r, const std::string& prefix) {
  for (std::size_t k : r.violated_rows()) {
    if (face_labels()[k].rfind(prefix, 0) == 0) return true;
  }
  return false;
}

Wrench random_wrench(const ContactPatch& p, Rng& rng) { return sample_ambient(p, rng); }

}  // namespace

TEST(CheckWrench, PureNormalLoadIsMember) {
  const ContactPatch p(1, 1, 0.5);
  const auto r = check_wrench(p, Wrench(0, 0, 10, 0, 0, 0));
  EXPECT_TRUE(r.member);
  EXPECT_FALSE(r.boundary);
  EXPECT_TRUE(r.violated_rows().empty());
}

TEST(CheckWrench, YawTorqueJustAboveAndBelowBound) {
  const ContactPatch p(1, 1, 0.5);
  const SpanForm span = cwc_span(p);

  const Wrench over(0, 0, 10, 0, 0, 10.01);
  const auto r = check_wrench(p, over);
  EXPECT_FALSE(r.member);
  EXPECT_TRUE(has_label_prefix(r, "W6"));
  EXPECT_FALSE(has_label_prefix(r, "W1"));
  EXPECT_FALSE(membership_lp(span, over));

  const Wrench under(0, 0, 10, 0, 0, 9.99);
  EXPECT_TRUE(check_wrench(p, under).member);
  EXPECT_TRUE(membership_lp(span, under));
}

TEST(CheckWrench, TangentialForceBeyondFriction) {
  const ContactPatch p(1, 1, 0.5);
  const auto r = check_wrench(p, Wrench(6, 0, 10, 0, 0, 0));
  EXPECT_FALSE(r.member);
  EXPECT_TRUE(has_label_prefix(r, "W1+"));
  EXPECT_FALSE(membership_lp(cwc_span(p), Wrench(6, 0, 10, 0, 0, 0)));
}

TEST(CheckWrench, ZeroWrenchIsMemberAndNotWeak) {
  const auto r = check_wrench(ContactPatch(0.1, 0.1, 0.5), Wrench());
  EXPECT_TRUE(r.member);
  EXPECT_TRUE(r.boundary);
  EXPECT_FALSE(r.weak_normal);
  EXPECT_FALSE(r.zmp.has_value());
}

TEST(CheckWrench, WeakNormalFlag) {
  const auto r = check_wrench(ContactPatch(0.1, 0.1, 0.5), Wrench(0, 0, 0, 0, 0, 0.0));
  EXPECT_FALSE(r.weak_normal);
  const auto s = check_wrench(ContactPatch(0.1, 0.1, 0.5), Wrench(1e-3, 0, 0, 0, 0, 0));
  EXPECT_TRUE(s.weak_normal);
  EXPECT_FALSE(s.member);
}

TEST(CheckWrench, MemberIffLargestMarginWithinTolerance) {
  Rng rng(5);
  const ContactPatch p(0.1, 0.05, 0.5);
  for (int i = 0; i < 10000; ++i) {
    const Wrench w = random_wrench(p, rng);
    const auto r = check_wrench(p, w);
    double worst = -INFINITY;
    for (double m : r.margins) worst = std::max(worst, m);
    EXPECT_EQ(r.min_margin, worst);
    EXPECT_EQ(r.member, worst <= kDefaultMembershipTolerance);
    EXPECT_EQ(r.member, is_member(p, w));
  }
}

TEST(FaceForm, SixteenUnitRowsWithDistinctLabels) {
  for (double mu : {0.1, 0.5, 1.0}) {
    const FaceForm f = face_form(ContactPatch(0.3, 0.05, mu));
    ASSERT_EQ(f.size(), 16u);
    std::set<std::string> labels(f.row_labels.begin(), f.row_labels.end());
    EXPECT_EQ(labels.size(), 16u);
    for (const auto& u : f.rows) EXPECT_NEAR(u.norm(), 1.0, 1e-15);
  }
  EXPECT_THROW(face_form(ContactPatch(1, 1, 0)), ZeroFriction);
}

TEST(FaceForm, LabelsMatchFamilies) {
  const auto& labels = face_labels();
  EXPECT_EQ(labels[0], "W1+");
  EXPECT_EQ(labels[1], "W1-");
  EXPECT_EQ(labels[4], "W4+");
  EXPECT_EQ(labels[6], "W5+");
  EXPECT_EQ(labels[8].substr(0, 5), "W6min");
  EXPECT_EQ(labels[15].substr(0, 5), "W6max");
}

// Face rows, the report and the inequality groups evaluated as written are
// three separate code paths; all three must agree.
TEST(FaceForm, AgreesWithPredicateAndReport) {
  Rng rng(9);
  for (double mu : {0.1, 0.5, 1.0}) {
    const ContactPatch p(0.1, 0.3, mu);
    const FaceForm f = face_form(p);
    for (int i = 0; i < 20000; ++i) {
      const Wrench w = random_wrench(p, rng);
      const bool face = f.max_violation(w) <= kDefaultMembershipTolerance;
      EXPECT_EQ(face, check_wrench(p, w).member);
      if (std::abs(relative_margin(p, w)) > 1e-7) {
        EXPECT_EQ(face, satisfies_inequalities(p, w));
      }
    }
  }
}

TEST(FaceForm, ScaleInvariance) {
  Rng rng(13);
  const ContactPatch p(0.05, 0.1, 0.5);
  for (int i = 0; i < 5000; ++i) {
    const Wrench w = random_wrench(p, rng);
    const double s = uniform(rng, 0.01, 100.0);
    const auto a = check_wrench(p, w);
    const auto b = check_wrench(p, Wrench(Vector6d(s * w.vector())));
    for (std::size_t k = 0; k < kNumFaces; ++k) {
      EXPECT_NEAR(b.margins[k], s * a.margins[k], 1e-12 * s * (1 + std::abs(a.margins[k])));
    }
    if (std::abs(a.min_margin) > 1e-7 && std::abs(b.min_margin) > 1e-7) {
      EXPECT_EQ(a.member, b.member);
    }
  }
}

TEST(YawBounds, SymmetricNormalLoad) {
  const auto y = yaw_bounds(ContactPatch(1, 1, 0.5), Wrench(0, 0, 10, 0, 0, 3));
  EXPECT_DOUBLE_EQ(y.tau_min, -10.0);
  EXPECT_DOUBLE_EQ(y.tau_max, 10.0);
  EXPECT_EQ(y.tau_safe, 0.0);
  EXPECT_DOUBLE_EQ(y.deviation, 10.0);
  EXPECT_FALSE(y.empty_range);
  EXPECT_EQ(tau_safe_control(ContactPatch(0.2, 0.1, 0.3), Wrench(0, 0, 50, 0, 0, 0)), 0.0);
}

TEST(YawBounds, SafeTorqueSignLaw) {
  const ContactPatch p(0.1, 0.05, 0.6);
  for (double tx : {0.01, 1.0}) {
    const Wrench w(4.0, 0, 100, tx, 0, 0);
    EXPECT_DOUBLE_EQ(tau_safe_control(p, w), -std::min(p.Y() * 4.0, p.mu() * tx));
  }
}

TEST(YawBounds, MidpointAndHalfWidthIdentities) {
  Rng rng(17);
  for (int i = 0; i < 100000; ++i) {
    const ContactPatch p(uniform(rng, 0.01, 0.5), uniform(rng, 0.01, 0.5), uniform(rng, 0.0, 1.5));
    const Wrench w = random_wrench(p, rng);
    const auto y = yaw_bounds(p, w);
    EXPECT_NEAR(y.tau_safe, 0.5 * (y.tau_min + y.tau_max), 1e-12);
    EXPECT_NEAR(y.deviation, 0.5 * (y.tau_max - y.tau_min), 1e-12);
    EXPECT_EQ(y.empty_range, y.tau_min > y.tau_max);
    EXPECT_GE(y.half_width(), 0.0);
  }
}

TEST(YawBounds, SafeTorqueSatisfiesYawRowsWhenRangeNonEmpty) {
  Rng rng(19);
  const ContactPatch p(0.1, 0.05, 0.5);
  const FaceForm f = face_form(p);
  for (int i = 0; i < 20000; ++i) {
    const Wrench w = random_wrench(p, rng);
    const auto y = yaw_bounds(p, w);
    if (y.empty_range) continue;
    const Wrench safe = w.with_tauz(y.tau_safe);
    for (std::size_t k = 8; k < kNumFaces; ++k) {
      EXPECT_LE(f.rows[k].dot(safe.vector()), 1e-12 * (1 + w.vector().norm()));
    }
  }
}

TEST(YawBounds, RangeShrinksWithTangentialLoadAndTilt) {
  Rng rng(23);
  const ContactPatch p(0.1, 0.2, 0.7);
  for (int i = 0; i < 2000; ++i) {
    const double fz = uniform(rng, 1, 100);
    Vector6d v;
    v << uniform(rng, -1, 1) * p.mu() * fz, uniform(rng, -1, 1) * p.mu() * fz, fz,
        uniform(rng, -1, 1) * p.Y() * fz, uniform(rng, -1, 1) * p.X() * fz, 0.0;
    for (Eigen::Index c : {0, 1, 3, 4}) {
      Vector6d more = v;
      more[c] *= uniform(rng, 1.0, 1.5);
      EXPECT_LE(yaw_bounds(p, Wrench(more)).deviation, yaw_bounds(p, Wrench(v)).deviation + 1e-12);
    }
  }
}

TEST(YawBounds, SingletonAtFullSaturation) {
  const ContactPatch p(0.1, 0.05, 0.5);
  for (int sx : {1, -1}) {
    for (int sy : {1, -1}) {
      for (int st : {1, -1}) {
        const double fz = 80.0;
        const Wrench w(sx * p.mu() * fz, sy * p.mu() * fz, fz, st * p.Y() * fz, -sx * sy * p.X() * fz, 0);
        const auto y = yaw_bounds(p, w);
        EXPECT_NEAR(y.tau_min, y.tau_max, 1e-9);
        EXPECT_NEAR(y.tau_safe, y.tau_min, 1e-9);
      }
    }
  }
}

TEST(ZeroFrictionCone, ReducesToZmpCondition) {
  const ContactPatch p(0.1, 0.05, 0.0);
  Rng rng(29);
  for (int i = 0; i < 20000; ++i) {
    const double fz = uniform(rng, -1, 10);
    const bool flat = i % 2 == 0;
    const Wrench w(flat ? 0.0 : uniform(rng, -1, 1), flat ? 0.0 : uniform(rng, -1, 1), fz,
                   uniform(rng, -1.2, 1.2) * p.Y() * std::abs(fz),
                   uniform(rng, -1.2, 1.2) * p.X() * std::abs(fz), flat ? 0.0 : uniform(rng, -1, 1));
    const bool expected = w.fx() == 0 && w.fy() == 0 && w.tauz() == 0 && w.fz() >= 0 &&
                          std::abs(w.taux()) <= p.Y() * w.fz() &&
                          std::abs(w.tauy()) <= p.X() * w.fz();
    EXPECT_EQ(check_wrench(p, w).member, expected) << i;
  }
}

TEST(ZmpEquivalence, InsideRectangleIffTiltRowsHold) {
  Rng rng(31);
  const ContactPatch p(0.1, 0.05, 0.5);
  std::size_t compared = 0;
  for (int i = 0; i < 100000; ++i) {
    const Wrench w = random_wrench(p, rng);
    if (!(w.fz() > kDefaultFzEpsilon)) continue;
    const auto r = check_wrench(p, w);
    if (std::abs(r.margins[4]) < 1e-7 || std::abs(r.margins[5]) < 1e-7 ||
        std::abs(r.margins[6]) < 1e-7 || std::abs(r.margins[7]) < 1e-7) {
      continue;
    }
    ++compared;
    const bool inside = std::abs(r.zmp->x()) <= p.X() && std::abs(r.zmp->y()) <= p.Y();
    const bool tilt = r.margins[4] <= 0 && r.margins[5] <= 0 && r.margins[6] <= 0 && r.margins[7] <= 0;
    EXPECT_EQ(inside, tilt);
  }
  EXPECT_GT(compared, 50000u);
}
