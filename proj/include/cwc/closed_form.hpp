#pragma once

/**
 * @file closed_form.hpp
 * @brief Closed-form contact wrench cone of a rectangular patch.
 *
 * A wrench w = (f, tau) at the patch center can be produced by four corner
 * forces inside their linearized friction pyramids if and only if
 *
 *   |f^x| <= mu f^z,   |f^y| <= mu f^z,   f^z >= 0,
 *   |tau^x| <= Y f^z,  |tau^y| <= X f^z,
 *   tau_min <= tau^z <= tau_max
 *
 * with
 *   tau_min = -mu (X+Y) f^z + |Y f^x - mu tau^x| + |X f^y - mu tau^y|
 *   tau_max = +mu (X+Y) f^z - |Y f^x + mu tau^x| - |X f^y + mu tau^y|.
 *
 * Expanding the absolute values gives 16 homogeneous half-spaces u.w <= 0.
 * Membership tests the closed cone: the apex (zero wrench) is a member.
 */

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cwc/contact_model.hpp"

namespace cwc {

inline constexpr std::size_t kNumFaces = 16;
inline constexpr double kDefaultMembershipTolerance = 1e-9;

/// Which inequality family a face row comes from.
enum class FaceFamily { kFrictionX, kFrictionY, kZmpX, kZmpY, kYawMin, kYawMax };

/// One unnormalized face row, with its sign pattern recorded for labelling.
template <typename Scalar>
struct FaceRow {
  std::array<Scalar, 6> coeffs;
  FaceFamily family;
  int sign_a;  // sign of the first absolute-value branch
  int sign_b;  // sign of the second branch (yaw rows only, else 0)
};

/// Label such as "W1+", "W4-" or "W6min(+,-)".
inline std::string face_label(FaceFamily family, int sign_a, int sign_b) {
  const auto s = [](int v) { return v > 0 ? std::string("+") : std::string("-"); };
  switch (family) {
    case FaceFamily::kFrictionX: return "W1" + s(sign_a);
    case FaceFamily::kFrictionY: return "W2" + s(sign_a);
    case FaceFamily::kZmpX: return "W4" + s(sign_a);
    case FaceFamily::kZmpY: return "W5" + s(sign_a);
    case FaceFamily::kYawMin: return "W6min(" + s(sign_a) + "," + s(sign_b) + ")";
    case FaceFamily::kYawMax: return "W6max(" + s(sign_a) + "," + s(sign_b) + ")";
  }
  return "?";
}

/// The 16 face rows for generic scalars, in a fixed order: W1 (+,-), W2,
/// W4 (tau^x), W5 (tau^y), then the four lower yaw rows and the four upper
/// yaw rows. Row k reads coeffs . w <= 0.
template <typename Scalar>
std::array<FaceRow<Scalar>, kNumFaces> face_rows(const Scalar& X, const Scalar& Y,
                                                 const Scalar& mu) {
  const Scalar zero(0);
  const Scalar one(1);
  const Scalar mu_xy = mu * (X + Y);
  std::array<FaceRow<Scalar>, kNumFaces> rows;
  std::size_t k = 0;
  for (int s : {1, -1}) {
    const Scalar sv(s);
    rows[k++] = {{sv, zero, Scalar(-mu), zero, zero, zero}, FaceFamily::kFrictionX, s, 0};
  }
  for (int s : {1, -1}) {
    const Scalar sv(s);
    rows[k++] = {{zero, sv, Scalar(-mu), zero, zero, zero}, FaceFamily::kFrictionY, s, 0};
  }
  for (int s : {1, -1}) {
    const Scalar sv(s);
    rows[k++] = {{zero, zero, Scalar(-Y), sv, zero, zero}, FaceFamily::kZmpX, s, 0};
  }
  for (int s : {1, -1}) {
    const Scalar sv(s);
    rows[k++] = {{zero, zero, Scalar(-X), zero, sv, zero}, FaceFamily::kZmpY, s, 0};
  }
  // tau_min <= tau^z:  s1 (Y f^x - mu tau^x) + s2 (X f^y - mu tau^y) - mu(X+Y) f^z - tau^z <= 0
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      const Scalar a(s1);
      const Scalar b(s2);
      rows[k++] = {{a * Y, b * X, Scalar(-mu_xy), Scalar(-(a * mu)), Scalar(-(b * mu)), -one},
                   FaceFamily::kYawMin, s1, s2};
    }
  }
  // tau^z <= tau_max:  s1 (Y f^x + mu tau^x) + s2 (X f^y + mu tau^y) - mu(X+Y) f^z + tau^z <= 0
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      const Scalar a(s1);
      const Scalar b(s2);
      rows[k++] = {{a * Y, b * X, Scalar(-mu_xy), a * mu, b * mu, one},
                   FaceFamily::kYawMax, s1, s2};
    }
  }
  return rows;
}

/// Face (half-space) description of the cone: w is a member iff rows[k].w <= 0
/// for all k. Rows have unit L2 norm.
struct FaceForm {
  std::vector<Vector6d> rows;
  std::vector<std::string> row_labels;

  std::size_t size() const { return rows.size(); }

  /// Largest row value; <= tolerance means member.
  double max_violation(const Wrench& w) const {
    double worst = -INFINITY;
    for (const auto& r : rows) worst = std::max(worst, r.dot(w.vector()));
    return worst;
  }

  bool contains(const Wrench& w, double tolerance = kDefaultMembershipTolerance) const {
    return max_violation(w) <= tolerance;
  }
};

namespace detail {

inline FaceForm build_face_form(const ContactPatch& patch) {
  const auto raw = face_rows<double>(patch.X(), patch.Y(), patch.mu());
  FaceForm out;
  out.rows.reserve(kNumFaces);
  out.row_labels.reserve(kNumFaces);
  for (const auto& r : raw) {
    Vector6d u = Eigen::Map<const Vector6d>(r.coeffs.data());
    out.rows.push_back(u / u.norm());
    out.row_labels.push_back(face_label(r.family, r.sign_a, r.sign_b));
  }
  return out;
}

}  // namespace detail

/// The 16 normalized face rows. Throws ZeroFriction for mu = 0, where the
/// cone loses dimension (use cwc_span + span_to_face for the reduced cone).
inline FaceForm face_form(const ContactPatch& patch) {
  if (patch.mu() == 0.0) {
    throw ZeroFriction("face form of a frictionless patch is degenerate");
  }
  return detail::build_face_form(patch);
}

/// Admissible yaw-torque interval for the other five wrench components.
struct YawBounds {
  double tau_min = 0.0;
  double tau_max = 0.0;
  double tau_safe = 0.0;
  /// Signed half-width (tau_max - tau_min) / 2; negative when the range is empty.
  double deviation = 0.0;
  bool empty_range = false;

  /// Half-width clamped at zero, for display.
  double half_width() const { return std::max(deviation, 0.0); }
  bool admits(double tauz, double tolerance = 0.0) const {
    return tau_min <= tauz + tolerance && tauz <= tau_max + tolerance;
  }
};

namespace detail {
inline double sign(double v) { return static_cast<double>((0.0 < v) - (v < 0.0)); }
}  // namespace detail

/// tau_min and tau_max from their absolute-value form; tau_safe from the
/// sign/min law and the deviation from the max law.
inline YawBounds yaw_bounds(const ContactPatch& patch, const Wrench& w) {
  const double X = patch.X();
  const double Y = patch.Y();
  const double mu = patch.mu();
  const double fx = w.fx(), fy = w.fy(), fz = w.fz();
  const double tx = w.taux(), ty = w.tauy();
  YawBounds b;
  b.tau_min = -mu * (X + Y) * fz + std::abs(Y * fx - mu * tx) + std::abs(X * fy - mu * ty);
  b.tau_max = mu * (X + Y) * fz - std::abs(Y * fx + mu * tx) - std::abs(X * fy + mu * ty);
  b.tau_safe = detail::sign(-fx * tx) * std::min(Y * std::abs(fx), mu * std::abs(tx)) +
               detail::sign(-fy * ty) * std::min(X * std::abs(fy), mu * std::abs(ty));
  b.deviation = mu * (X + Y) * fz - std::max(Y * std::abs(fx), mu * std::abs(tx)) -
                std::max(X * std::abs(fy), mu * std::abs(ty));
  b.empty_range = b.tau_min > b.tau_max;
  return b;
}

/// Yaw torque a controller should command to stay farthest from yaw slip.
inline double tau_safe_control(const ContactPatch& patch, const Wrench& w) {
  return yaw_bounds(patch, w).tau_safe;
}

/// Direct evaluation of the six inequality groups as written (no row
/// expansion), with an absolute slack on each.
inline bool satisfies_inequalities(const ContactPatch& patch, const Wrench& w,
                                   double tolerance = 0.0) {
  const double mu = patch.mu();
  const YawBounds yaw = yaw_bounds(patch, w);
  return std::abs(w.fx()) <= mu * w.fz() + tolerance &&
         std::abs(w.fy()) <= mu * w.fz() + tolerance && w.fz() >= -tolerance &&
         std::abs(w.taux()) <= patch.Y() * w.fz() + tolerance &&
         std::abs(w.tauy()) <= patch.X() * w.fz() + tolerance &&
         yaw.admits(w.tauz(), tolerance);
}

struct CheckOptions {
  double membership_tolerance = kDefaultMembershipTolerance;
  double fz_epsilon = kDefaultFzEpsilon;
};

/// Verdict and diagnostics for one wrench.
struct StabilityReport {
  bool member = false;
  /// Member, but some row is within the tolerance band of zero.
  bool boundary = false;
  /// f^z below fz_epsilon while other components are nonzero.
  bool weak_normal = false;
  /// Signed row values u_k.w with unit rows; negative means satisfied.
  std::array<double, kNumFaces> margins{};
  /// Largest entry of `margins`, i.e. the row closest to (or furthest into)
  /// violation. member <=> min_margin <= membership tolerance.
  double min_margin = 0.0;
  std::size_t worst_row = 0;
  std::optional<Eigen::Vector2d> zmp;
  YawBounds yaw;

  /// Indices of rows whose margin exceeds `tolerance`.
  std::vector<std::size_t> violated_rows(double tolerance = kDefaultMembershipTolerance) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < kNumFaces; ++k) {
      if (margins[k] > tolerance) out.push_back(k);
    }
    return out;
  }
};

/// Labels of the 16 rows in the order used by face_rows / StabilityReport.
inline const std::array<std::string, kNumFaces>& face_labels() {
  static const std::array<std::string, kNumFaces> labels = [] {
    std::array<std::string, kNumFaces> out;
    const auto rows = face_rows<double>(1.0, 1.0, 1.0);
    for (std::size_t k = 0; k < kNumFaces; ++k) {
      out[k] = face_label(rows[k].family, rows[k].sign_a, rows[k].sign_b);
    }
    return out;
  }();
  return labels;
}

/// Membership test against the closed-form cone (mu = 0 allowed).
inline StabilityReport check_wrench(const ContactPatch& patch, const Wrench& w,
                                    const CheckOptions& options = {}) {
  const auto raw = face_rows<double>(patch.X(), patch.Y(), patch.mu());
  StabilityReport report;
  double worst = -INFINITY;
  for (std::size_t k = 0; k < kNumFaces; ++k) {
    const Vector6d u = Eigen::Map<const Vector6d>(raw[k].coeffs.data());
    const double m = u.dot(w.vector()) / u.norm();
    report.margins[k] = m;
    if (m > worst) {
      worst = m;
      report.worst_row = k;
    }
  }
  report.min_margin = worst;
  report.member = worst <= options.membership_tolerance;
  report.boundary = report.member && worst > -options.membership_tolerance;
  report.weak_normal = w.fz() < options.fz_epsilon && !w.is_zero();
  if (w.fz() > options.fz_epsilon) report.zmp = zmp(patch, w, options.fz_epsilon);
  report.yaw = yaw_bounds(patch, w);
  return report;
}

/// Membership only, without building a report.
inline bool is_member(const ContactPatch& patch, const Wrench& w,
                      double tolerance = kDefaultMembershipTolerance) {
  const auto raw = face_rows<double>(patch.X(), patch.Y(), patch.mu());
  for (const auto& r : raw) {
    const Vector6d u = Eigen::Map<const Vector6d>(r.coeffs.data());
    if (u.dot(w.vector()) > tolerance * u.norm()) return false;
  }
  return true;
}

}  // namespace cwc
