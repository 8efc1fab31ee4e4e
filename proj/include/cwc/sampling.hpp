#pragma once

// Seeded wrench samplers shared by the validation harness and the tests.
// Doubles are drawn from raw mt19937_64 bits so streams are reproducible
// across standard libraries.

#include <cstdint>
#include <random>

#include "cwc/closed_form.hpp"
#include "cwc/polytope.hpp"

namespace cwc {

using Rng = std::mt19937_64;

/// Uniform in [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Nonnegative combination of the span rays. Three draws in four use every
/// ray; the rest use a random subset, which lands on lower-dimensional faces.
inline Wrench sample_conic_member(const SpanForm& span, Rng& rng) {
  Vector6d w = Vector6d::Zero();
  const bool sparse = uniform01(rng) < 0.25;
  bool any = false;
  for (const auto& r : span.rays) {
    if (sparse && uniform01(rng) < 0.5) continue;
    w += uniform01(rng) * r;
    any = true;
  }
  if (!any) w = span.rays[static_cast<std::size_t>(rng() % span.rays.size())];
  return Wrench(w);
}

/// Wrench from a box scaled to the patch: forces in units of f^z = 1 and each
/// torque in units of its own lever arm, overshooting the cone by 50% on every
/// axis and admitting slightly negative normal force. Mixes members and
/// non-members.
inline Wrench sample_ambient(const ContactPatch& patch, Rng& rng) {
  const double k = 1.5;
  const double mu = patch.mu();
  const double fz = uniform(rng, -0.25, 1.0);
  const double fx = uniform(rng, -k, k) * mu;
  const double fy = uniform(rng, -k, k) * mu;
  const double tx = uniform(rng, -k, k) * patch.Y();
  const double ty = uniform(rng, -k, k) * patch.X();
  const double tz = uniform(rng, -k, k) * mu * (patch.X() + patch.Y());
  return Wrench(fx, fy, fz, tx, ty, tz);
}

/// Closed-form boundary distance scaled by the wrench norm: the largest unit
/// face-row value divided by |w| (0 for the zero wrench).
inline double relative_margin(const ContactPatch& patch, const Wrench& w) {
  const double n = w.vector().norm();
  if (n == 0.0) return 0.0;
  return check_wrench(patch, w).min_margin / n;
}

}  // namespace cwc
