// Walks through the library on a foot-sized patch: membership, yaw range,
// corner forces for an admissible wrench, and the LP cross-check.

#include <cstdio>

#include "cwc/cwc.hpp"

int main() {
  const cwc::ContactPatch foot(0.11, 0.05, 0.6);
  const cwc::Wrench w(20.0, -5.0, 600.0, 4.0, -12.0, 1.5);

  const auto report = cwc::check_wrench(foot, w);
  std::printf("member %s, min margin %.4g at %s\n", report.member ? "yes" : "no",
              report.min_margin, cwc::face_labels()[report.worst_row].c_str());
  if (report.zmp) std::printf("zmp (%.4f, %.4f)\n", report.zmp->x(), report.zmp->y());
  std::printf("yaw torque range [%.3f, %.3f], safest %.3f\n", report.yaw.tau_min,
              report.yaw.tau_max, report.yaw.tau_safe);

  const auto forces = cwc::reconstruct_forces(foot, w);
  for (std::size_t i = 0; i < 4; ++i) {
    std::printf("C%zu  %9.3f %9.3f %9.3f\n", i + 1, forces[i].x(), forces[i].y(), forces[i].z());
  }

  const bool lp = cwc::membership_lp(cwc::cwc_span(foot), w);
  std::printf("LP oracle agrees: %s\n", lp == report.member ? "yes" : "no");

  // Drive the yaw torque past its limit.
  const cwc::Wrench twisted = w.with_tauz(report.yaw.tau_max + 1.0);
  const auto bad = cwc::check_wrench(foot, twisted);
  std::printf("with tau_z = %.3f: member %s, worst row %s\n", twisted.tauz(),
              bad.member ? "yes" : "no", cwc::face_labels()[bad.worst_row].c_str());
  return 0;
}
