#pragma once

// Constructive side of the cone: corner forces that realize an admissible
// wrench, and redistribution of interior point forces onto the corners.

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "cwc/contact_model.hpp"
#include "cwc/simplex.hpp"

namespace cwc {

struct ReconstructionOptions {
  /// Shift part of the normal load onto a uniform distribution so that every
  /// corner carries f^z > 0 (only possible for wrenches strictly inside the
  /// cone; otherwise the closure solution is returned).
  bool strict_normal = false;
  /// Componentwise residual allowed on the unit-normalized wrench.
  double residual_tolerance = 1e-9;
};

namespace detail {

// Per corner: (f^x+, f^x-, f^y+, f^y-, f^z), then the min-max bound t.
inline constexpr std::size_t kVarsPerCorner = 5;
inline constexpr std::size_t kBoundVar = 4 * kVarsPerCorner;

inline lp::LinearProgram<double> reconstruction_program(const ContactPatch& patch,
                                                        const Vector6d& target) {
  const WrenchMap G = wrench_map_matrix(patch);
  lp::LinearProgram<double> prog;
  prog.num_vars = kBoundVar + 1;
  for (Eigen::Index r = 0; r < 6; ++r) {
    std::vector<double> row(prog.num_vars, 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
      const std::size_t v = i * kVarsPerCorner;
      const Eigen::Index c = static_cast<Eigen::Index>(3 * i);
      row[v + 0] = G(r, c);
      row[v + 1] = -G(r, c);
      row[v + 2] = G(r, c + 1);
      row[v + 3] = -G(r, c + 1);
      row[v + 4] = G(r, c + 2);
    }
    prog.add_eq(std::move(row), target[r]);
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t v = i * kVarsPerCorner;
    for (std::size_t k : {v, v + 2}) {
      std::vector<double> row(prog.num_vars, 0.0);
      row[k] = 1.0;
      row[k + 1] = 1.0;
      row[v + 4] = -patch.mu();
      prog.add_ub(std::move(row), 0.0);
    }
    std::vector<double> bound(prog.num_vars, 0.0);
    bound[v + 4] = 1.0;
    bound[kBoundVar] = -1.0;
    prog.add_ub(std::move(bound), 0.0);
  }
  return prog;
}

inline ContactForceSet forces_from_solution(const std::vector<double>& x, double scale) {
  ContactForceSet out;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t v = i * kVarsPerCorner;
    out[i] = scale * Vector3d(x[v] - x[v + 1], x[v + 2] - x[v + 3], std::max(x[v + 4], 0.0));
  }
  return out;
}

// Min-max normal force, then least total tangential force at that optimum.
// Returns false when no admissible corner forces exist.
inline bool solve_reconstruction(const ContactPatch& patch, const Vector6d& unit_target,
                                 std::vector<double>& solution) {
  lp::LinearProgram<double> prog = reconstruction_program(patch, unit_target);
  prog.cost.assign(prog.num_vars, 0.0);
  prog.cost[kBoundVar] = 1.0;
  const auto first = lp::solve(prog);
  if (first.status != lp::Status::kOptimal) return false;

  std::vector<double> cap(prog.num_vars, 0.0);
  cap[kBoundVar] = 1.0;
  prog.add_ub(std::move(cap), first.objective * (1.0 + 1e-9) + 1e-12);
  prog.cost.assign(prog.num_vars, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) prog.cost[i * kVarsPerCorner + k] = 1.0;
  }
  const auto second = lp::solve(prog);
  solution = second.status == lp::Status::kOptimal ? second.x : first.x;
  return true;
}

}  // namespace detail

/// Corner forces realizing `w`, each inside its friction pyramid, minimizing
/// the largest normal force (ties: least total tangential force). Throws
/// Infeasible when the wrench is outside the cone.
inline ContactForceSet reconstruct_forces(const ContactPatch& patch, const Wrench& w,
                                          const ReconstructionOptions& options = {}) {
  const double scale = w.vector().norm();
  if (scale == 0.0) return {};
  const Vector6d unit = w.vector() / scale;

  std::vector<double> x;
  if (!detail::solve_reconstruction(patch, unit, x)) {
    std::ostringstream msg;
    msg << "no admissible corner forces for wrench [" << w.vector().transpose() << "]";
    throw Infeasible(msg.str());
  }
  ContactForceSet forces = detail::forces_from_solution(x, scale);

  if (options.strict_normal) {
    // Carve a uniform share theta * f^z off the normal load; keep the largest
    // share (from 1/2 down) for which the remainder is still realizable.
    for (double theta = 0.5; theta > 1e-9; theta *= 0.5) {
      const double share = theta * w.fz() / 4.0;
      if (!(share > 0.0)) break;
      Vector6d rest = w.vector();
      rest[2] -= theta * w.fz();
      std::vector<double> y;
      const double rest_scale = rest.norm();
      if (rest_scale == 0.0 || !detail::solve_reconstruction(patch, rest / rest_scale, y)) {
        continue;
      }
      ContactForceSet strict = detail::forces_from_solution(y, rest_scale);
      for (std::size_t i = 0; i < 4; ++i) strict[i].z() += share;
      forces = strict;
      break;
    }
  }

  const Vector6d residual = compose_wrench(patch, forces).vector() - w.vector();
  if (residual.cwiseAbs().maxCoeff() > options.residual_tolerance * std::max(1.0, scale)) {
    std::ostringstream msg;
    msg << "force reconstruction residual " << residual.cwiseAbs().maxCoeff()
        << " exceeds tolerance";
    throw NumericalFailure(msg.str());
  }
  return forces;
}

/// A point force at (x, y) on the contact surface.
struct PointForce {
  Eigen::Vector2d point;
  Vector3d force;
};

/// Discrete stand-in for a pressure/stress field over the patch.
struct InteriorForceSystem {
  std::vector<PointForce> items;
};

/// Resultant wrench at the patch center of arbitrary point forces on the surface.
inline Wrench compose_point_forces(const InteriorForceSystem& sys) {
  Vector3d f = Vector3d::Zero();
  Vector3d tau = Vector3d::Zero();
  for (const auto& pf : sys.items) {
    f += pf.force;
    tau += Vector3d(pf.point.x(), pf.point.y(), 0.0).cross(pf.force);
  }
  Vector6d v;
  v << f, tau;
  return Wrench(v);
}

/// Bilinear corner weights of a point: nonnegative, summing to one, and
/// reproducing the point as the weighted average of the corners.
inline std::array<double, 4> bilinear_weights(const ContactPatch& patch,
                                              const Eigen::Vector2d& p) {
  const double X = patch.X();
  const double Y = patch.Y();
  if (!(std::abs(p.x()) <= X && std::abs(p.y()) <= Y)) {
    std::ostringstream msg;
    msg << "point (" << p.x() << ", " << p.y() << ") lies outside the " << 2 * X << " x "
        << 2 * Y << " patch";
    throw PointOutsidePatch(msg.str());
  }
  const double ax_pos = (X + p.x()) / (2 * X);
  const double ax_neg = (X - p.x()) / (2 * X);
  const double ay_pos = (Y + p.y()) / (2 * Y);
  const double ay_neg = (Y - p.y()) / (2 * Y);
  return {ax_pos * ay_pos, ax_pos * ay_neg, ax_neg * ay_neg, ax_neg * ay_pos};
}

/// Moves every interior force onto the corners with bilinear weights. The
/// resultant wrench is unchanged and friction-feasible inputs stay feasible.
inline ContactForceSet redistribute_to_vertices(const ContactPatch& patch,
                                                const InteriorForceSystem& sys) {
  ContactForceSet out;
  for (const auto& pf : sys.items) {
    const auto alpha = bilinear_weights(patch, pf.point);
    for (std::size_t i = 0; i < 4; ++i) out[i] += alpha[i] * pf.force;
  }
  return out;
}

/// True when every corner force satisfies |f^x|, |f^y| <= mu f^z and f^z >= 0,
/// up to an absolute slack.
inline bool friction_feasible(const ContactPatch& patch, const ContactForceSet& forces,
                              double tolerance = 0.0) {
  return std::all_of(forces.forces.begin(), forces.forces.end(), [&](const Vector3d& f) {
    return f.z() >= -tolerance && std::abs(f.x()) <= patch.mu() * f.z() + tolerance &&
           std::abs(f.y()) <= patch.mu() * f.z() + tolerance;
  });
}

}  // namespace cwc
