#pragma once

/**
 * @file contact_model.hpp
 * @brief Rectangular contact patches, wrenches and corner force sets.
 *
 * Frame convention (surface frame, origin O at the rectangle center):
 *   - x runs along the half-length X, y along the half-length Y,
 *   - z is the outward contact normal,
 *   - every wrench is expressed at O in this frame. Rotating a wrench into a
 *     world frame is the caller's job.
 *
 * Corner numbering is fixed for the whole library:
 *
 *        y
 *        ^
 *   C4 (-X,+Y) ------ C1 (+X,+Y)
 *        |        O       |      --> x
 *   C3 (-X,-Y) ------ C2 (+X,-Y)
 *
 * With this numbering the wrench of four corner forces reads
 *   tau_x =  Y (f1z - f2z - f3z + f4z)
 *   tau_y = -X (f1z + f2z - f3z - f4z)
 *   tau_z =  X (f1y + f2y - f3y - f4y) - Y (f1x - f2x - f3x + f4x).
 */

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>

#include "cwc/errors.hpp"

namespace cwc {

using Vector3d = Eigen::Vector3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using WrenchMap = Eigen::Matrix<double, 6, 12>;

/// Default threshold below which f^z is treated as zero by division-bearing
/// operations (newtons).
inline constexpr double kDefaultFzEpsilon = 1e-10;

/// Rectangle half-dimensions and static friction coefficient.
class ContactPatch {
 public:
  ContactPatch(double half_length_x, double half_length_y, double mu)
      : X_(half_length_x), Y_(half_length_y), mu_(mu) {
    if (!(std::isfinite(X_) && X_ > 0.0) || !(std::isfinite(Y_) && Y_ > 0.0)) {
      std::ostringstream msg;
      msg << "contact patch half-dimensions must be positive and finite (X="
          << X_ << ", Y=" << Y_ << ")";
      throw InvalidArgument(msg.str());
    }
    if (!(std::isfinite(mu_) && mu_ >= 0.0)) {
      std::ostringstream msg;
      msg << "friction coefficient must be finite and nonnegative (mu=" << mu_
          << ")";
      throw InvalidArgument(msg.str());
    }
  }

  double X() const { return X_; }
  double Y() const { return Y_; }
  double mu() const { return mu_; }

  /// Same friction, area multiplied by `area_factor` (each side by its root).
  ContactPatch scaled_area(double area_factor) const {
    if (!(std::isfinite(area_factor) && area_factor > 0.0)) {
      throw InvalidArgument("area scaling factor must be positive");
    }
    const double s = std::sqrt(area_factor);
    return ContactPatch(X_ * s, Y_ * s, mu_);
  }

  /// Position of corner `i` (0-based, so index 0 is C1).
  Eigen::Vector2d corner(std::size_t i) const {
    switch (i) {
      case 0: return {X_, Y_};
      case 1: return {X_, -Y_};
      case 2: return {-X_, -Y_};
      case 3: return {-X_, Y_};
      default: throw InvalidArgument("corner index out of range");
    }
  }

  bool operator==(const ContactPatch&) const = default;

 private:
  double X_;
  double Y_;
  double mu_;
};

/// Contact wrench (f^x, f^y, f^z, tau^x, tau^y, tau^z) at the patch center.
class Wrench {
 public:
  Wrench() : v_(Vector6d::Zero()) {}

  explicit Wrench(const Vector6d& v) : v_(v) {
    if (!v_.allFinite()) throw InvalidArgument("wrench has non-finite components");
  }

  Wrench(double fx, double fy, double fz, double taux, double tauy, double tauz)
      : Wrench((Vector6d() << fx, fy, fz, taux, tauy, tauz).finished()) {}

  double fx() const { return v_[0]; }
  double fy() const { return v_[1]; }
  double fz() const { return v_[2]; }
  double taux() const { return v_[3]; }
  double tauy() const { return v_[4]; }
  double tauz() const { return v_[5]; }

  Eigen::Vector3d force() const { return v_.head<3>(); }
  Eigen::Vector3d torque() const { return v_.tail<3>(); }

  const Vector6d& vector() const { return v_; }
  double operator[](std::size_t i) const { return v_[static_cast<Eigen::Index>(i)]; }

  bool is_zero() const { return (v_.array() == 0.0).all(); }

  Wrench with_tauz(double tauz) const {
    Vector6d v = v_;
    v[5] = tauz;
    return Wrench(v);
  }

 private:
  Vector6d v_;
};

/// Forces at the four corners, ordered C1..C4 as documented above.
struct ContactForceSet {
  std::array<Vector3d, 4> forces{Vector3d::Zero(), Vector3d::Zero(),
                                 Vector3d::Zero(), Vector3d::Zero()};

  Vector3d& operator[](std::size_t i) { return forces[i]; }
  const Vector3d& operator[](std::size_t i) const { return forces[i]; }

  /// (f1x, f1y, f1z, f2x, ..., f4z)
  Eigen::Matrix<double, 12, 1> stacked() const {
    Eigen::Matrix<double, 12, 1> out;
    for (std::size_t i = 0; i < 4; ++i) {
      out.segment<3>(static_cast<Eigen::Index>(3 * i)) = forces[i];
    }
    return out;
  }

  static ContactForceSet from_stacked(const Eigen::Matrix<double, 12, 1>& f) {
    ContactForceSet out;
    for (std::size_t i = 0; i < 4; ++i) {
      out.forces[i] = f.segment<3>(static_cast<Eigen::Index>(3 * i));
    }
    return out;
  }
};

/// Wrench components divided by their natural scales (requires f^z > 0, mu > 0).
struct NormalizedWrench {
  double K1;  // f^x / (mu f^z)
  double K2;  // f^y / (mu f^z)
  double K3;  // tau^z / (mu (X+Y) f^z)
  double C1;  // tau^x / (Y f^z)
  double C2;  // tau^y / (X f^z)
  double px;  // X / (X+Y)
  double py;  // Y / (X+Y)
};

/// Wrench-map coefficients for generic scalars. Row r, column 3*i + k gives the
/// contribution of component k of corner force i to wrench component r.
template <typename Scalar>
std::array<std::array<Scalar, 12>, 6> wrench_map_coefficients(const Scalar& X,
                                                               const Scalar& Y) {
  std::array<std::array<Scalar, 12>, 6> g;
  for (auto& row : g) row.fill(Scalar(0));
  const std::array<int, 4> sx{1, 1, -1, -1};
  const std::array<int, 4> sy{1, -1, -1, 1};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t c = 3 * i;
    const Scalar xi = sx[i] > 0 ? Scalar(X) : Scalar(-X);
    const Scalar yi = sy[i] > 0 ? Scalar(Y) : Scalar(-Y);
    g[0][c] = Scalar(1);
    g[1][c + 1] = Scalar(1);
    g[2][c + 2] = Scalar(1);
    g[3][c + 2] = yi;       // tau_x = y f_z
    g[4][c + 2] = -xi;      // tau_y = -x f_z
    g[5][c] = -yi;          // tau_z = x f_y - y f_x
    g[5][c + 1] = xi;
  }
  return g;
}

/// The 6x12 matrix mapping stacked corner forces to the wrench at O.
inline WrenchMap wrench_map_matrix(const ContactPatch& patch) {
  const auto g = wrench_map_coefficients<double>(patch.X(), patch.Y());
  WrenchMap G;
  for (Eigen::Index r = 0; r < 6; ++r) {
    for (Eigen::Index c = 0; c < 12; ++c) {
      G(r, c) = g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  return G;
}

/// Resultant wrench at O of the four corner forces (sum of forces, sum of
/// moments r_i x f_i).
inline Wrench compose_wrench(const ContactPatch& patch,
                             const ContactForceSet& forces) {
  Vector3d f = Vector3d::Zero();
  Vector3d tau = Vector3d::Zero();
  for (std::size_t i = 0; i < 4; ++i) {
    const Eigen::Vector2d c = patch.corner(i);
    const Vector3d r(c.x(), c.y(), 0.0);
    f += forces[i];
    tau += r.cross(forces[i]);
  }
  Vector6d v;
  v << f, tau;
  return Wrench(v);
}

/// Zero-moment point (x, y) in the surface frame.
inline Eigen::Vector2d zmp(const ContactPatch& /*patch*/, const Wrench& w,
                           double fz_epsilon = kDefaultFzEpsilon) {
  if (!(w.fz() > fz_epsilon)) {
    std::ostringstream msg;
    msg << "ZMP undefined for normal force " << w.fz() << " <= " << fz_epsilon;
    throw DegenerateNormalForce(msg.str());
  }
  return {(0.0 - w.tauy()) / w.fz(), w.taux() / w.fz()};  // no -0 for tau^y = 0
}

inline NormalizedWrench normalize(const ContactPatch& patch, const Wrench& w,
                                  double fz_epsilon = kDefaultFzEpsilon) {
  if (!(w.fz() > fz_epsilon)) {
    std::ostringstream msg;
    msg << "cannot normalize a wrench with normal force " << w.fz();
    throw DegenerateNormalForce(msg.str());
  }
  if (patch.mu() == 0.0) throw ZeroFriction("normalization divides by mu = 0");
  const double X = patch.X();
  const double Y = patch.Y();
  const double mu = patch.mu();
  const double fz = w.fz();
  return NormalizedWrench{
      w.fx() / (mu * fz),
      w.fy() / (mu * fz),
      w.tauz() / (mu * (X + Y) * fz),
      w.taux() / (Y * fz),
      w.tauy() / (X * fz),
      X / (X + Y),
      Y / (X + Y),
  };
}

/// Inverse of normalize() given the normal force it was computed with.
inline Wrench denormalize(const ContactPatch& patch, const NormalizedWrench& n,
                          double fz) {
  const double X = patch.X();
  const double Y = patch.Y();
  const double mu = patch.mu();
  return Wrench(n.K1 * mu * fz, n.K2 * mu * fz, fz, n.C1 * Y * fz,
                n.C2 * X * fz, n.K3 * mu * (X + Y) * fz);
}

}  // namespace cwc
