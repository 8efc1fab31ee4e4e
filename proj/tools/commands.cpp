#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "cwc/closed_form.hpp"
#include "cwc/force_reconstruction.hpp"
#include "cwc/polytope.hpp"
#include "cwc/rational.hpp"
#include "cwc/trajectory.hpp"

namespace cwc::cli {

using nlohmann::json;

ContactPatch PatchText::to_patch() const {
  return ContactPatch(detail::parse_number(X), detail::parse_number(Y), detail::parse_number(mu));
}

namespace {

json patch_json(const ContactPatch& p) { return {{"X", p.X()}, {"Y", p.Y()}, {"mu", p.mu()}}; }

json wrench_json(const Wrench& w) {
  return json::array({w.fx(), w.fy(), w.fz(), w.taux(), w.tauy(), w.tauz()});
}

json yaw_json(const YawBounds& y) {
  return {{"tau_min", y.tau_min},     {"tau_max", y.tau_max},
          {"tau_safe", y.tau_safe},   {"deviation", y.deviation},
          {"empty_range", y.empty_range}};
}

std::string join_labels(const StabilityReport& r) {
  std::string out;
  for (std::size_t k : r.violated_rows()) {
    if (!out.empty()) out += ' ';
    out += face_labels()[k];
  }
  return out.empty() ? "-" : out;
}

json report_json(const ContactPatch& patch, const Wrench& w, const StabilityReport& r) {
  json margins = json::array();
  for (std::size_t k = 0; k < kNumFaces; ++k) {
    margins.push_back({{"label", face_labels()[k]}, {"margin", r.margins[k]}});
  }
  json violated = json::array();
  for (std::size_t k : r.violated_rows()) violated.push_back(face_labels()[k]);
  return {{"schema_version", kSchemaVersion},
          {"kind", "check"},
          {"patch", patch_json(patch)},
          {"wrench", wrench_json(w)},
          {"member", r.member},
          {"boundary", r.boundary},
          {"weak_normal", r.weak_normal},
          {"min_margin", r.min_margin},
          {"worst_row", face_labels()[r.worst_row]},
          {"violated", violated},
          {"margins", margins},
          {"zmp", r.zmp ? json::array({r.zmp->x(), r.zmp->y()}) : json(nullptr)},
          {"yaw", yaw_json(r.yaw)}};
}

void print_report(std::ostream& out, const ContactPatch& patch, const Wrench& w,
                  const StabilityReport& r) {
  out << std::setprecision(6);
  out << "patch       X=" << patch.X() << " Y=" << patch.Y() << " mu=" << patch.mu() << '\n';
  out << "wrench      fx=" << w.fx() << " fy=" << w.fy() << " fz=" << w.fz() << " taux=" << w.taux()
      << " tauy=" << w.tauy() << " tauz=" << w.tauz() << '\n';
  out << "verdict     " << (r.member ? "MEMBER" : "NOT MEMBER");
  if (r.boundary) out << " (on boundary)";
  if (r.weak_normal) out << " (warning: normal force below threshold)";
  out << '\n';
  out << "min margin  " << r.min_margin << " at " << face_labels()[r.worst_row] << '\n';
  out << "violated    " << join_labels(r) << '\n';
  if (r.zmp) {
    out << "zmp         (" << r.zmp->x() << ", " << r.zmp->y() << ")\n";
  } else {
    out << "zmp         undefined\n";
  }
  out << "yaw range   [" << r.yaw.tau_min << ", " << r.yaw.tau_max << "]"
      << (r.yaw.empty_range ? " EMPTY" : "") << "  tau_safe=" << r.yaw.tau_safe
      << "  half-width=" << r.yaw.half_width() << '\n';
  out << "rows\n";
  for (std::size_t k = 0; k < kNumFaces; ++k) {
    out << "  " << std::left << std::setw(12) << face_labels()[k] << std::right << std::setw(14)
        << r.margins[k] << '\n';
  }
}

std::string row_text(const Vector6d& u) {
  std::ostringstream s;
  s << std::setprecision(9);
  for (Eigen::Index i = 0; i < 6; ++i) s << (i ? " " : "") << std::setw(14) << u[i];
  return s.str();
}

std::string rational_row_text(const std::vector<Rational>& a) {
  std::ostringstream s;
  for (std::size_t i = 0; i < a.size(); ++i) s << (i ? " " : "") << std::setw(6) << a[i];
  return s.str();
}

std::string ray_label(std::size_t corner, std::size_t gen, std::size_t per_corner) {
  std::ostringstream s;
  s << 'C' << corner + 1;
  if (per_corner == 4) s << '(' << (gen < 2 ? '+' : '-') << (gen % 2 == 0 ? '+' : '-') << ')';
  return s.str();
}

}  // namespace

int cmd_check(const ContactPatch& patch, const Wrench& w, Format format, std::ostream& out) {
  const StabilityReport r = check_wrench(patch, w);
  if (format == Format::kMachine) {
    out << report_json(patch, w, r).dump() << '\n';
  } else {
    print_report(out, patch, w, r);
  }
  return r.member ? kOk : kViolation;
}

int cmd_cone(const PatchText& text, bool span_form, bool exact, Format format, std::ostream& out,
             std::ostream& err) {
  const ContactPatch patch = text.to_patch();
  const bool machine = format == Format::kMachine;

  if (span_form) {
    const SpanForm span = cwc_span(patch);
    const std::size_t per_corner = span.rays.size() / 4;
    for (std::size_t j = 0; j < span.rays.size(); ++j) {
      const std::string label = ray_label(j / per_corner, j % per_corner, per_corner);
      if (machine) {
        json ray = json::array();
        for (Eigen::Index i = 0; i < 6; ++i) ray.push_back(span.rays[j][i]);
        out << json{{"schema_version", kSchemaVersion}, {"kind", "span_ray"}, {"label", label},
                    {"ray", ray}}.dump()
            << '\n';
      } else {
        out << std::left << std::setw(12) << label << std::right << row_text(span.rays[j]) << '\n';
      }
    }
    if (!machine) out << span.rays.size() << " rays\n";
    return kOk;
  }

  if (exact) {
    const auto cmp = compare_exact_face(parse_decimal(text.X), parse_decimal(text.Y),
                                        parse_decimal(text.mu));
    for (std::size_t i = 0; i < cmp.eliminated.rows.size(); ++i) {
      const auto& row = cmp.eliminated.rows[i];
      const std::string label = cmp.labels[i].empty() ? "?" : cmp.labels[i];
      if (machine) {
        json coeffs = json::array();
        for (const auto& c : row.a) coeffs.push_back(c.str());
        out << json{{"schema_version", kSchemaVersion}, {"kind", "exact_face_row"},
                    {"label", label}, {"coeffs", coeffs}}.dump()
            << '\n';
      } else {
        out << std::left << std::setw(12) << label << std::right << rational_row_text(row.a)
            << "  <= 0\n";
      }
    }
    if (machine) {
      out << json{{"schema_version", kSchemaVersion}, {"kind", "exact_summary"},
                  {"rows", cmp.eliminated.rows.size()}, {"closed_form_rows", cmp.closed_form.rows.size()},
                  {"match", cmp.match}, {"equivalent", cmp.equivalent}}.dump()
          << '\n';
    } else {
      out << cmp.eliminated.rows.size() << " rows from exact elimination, "
          << cmp.closed_form.rows.size() << " closed-form facets\n";
      if (cmp.match) {
        out << "MATCH\n";
      } else if (cmp.equivalent) {
        out << "EQUIVALENT: different irredundant rows for the same cone (not full-dimensional)\n";
      } else {
        out << "MISMATCH\n";
      }
    }
    return cmp.equivalent ? kOk : kViolation;
  }

  std::vector<Vector6d> rows;
  std::vector<std::string> labels;
  if (patch.mu() == 0.0) {
    err << "note: ZeroFriction: mu = 0, emitting the reduced cone computed from its rays\n";
    const auto sys = span_to_face(cwc_span(patch));
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
      rows.push_back(Eigen::Map<const Vector6d>(sys.rows[i].a.data()));
      labels.push_back("R" + std::to_string(i + 1));
    }
  } else {
    const FaceForm face = face_form(patch);
    rows = face.rows;
    labels = face.row_labels;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (machine) {
      json coeffs = json::array();
      for (Eigen::Index i = 0; i < 6; ++i) coeffs.push_back(rows[k][i]);
      out << json{{"schema_version", kSchemaVersion}, {"kind", "face_row"}, {"label", labels[k]},
                  {"coeffs", coeffs}}.dump()
          << '\n';
    } else {
      out << std::left << std::setw(12) << labels[k] << std::right << row_text(rows[k]) << "  <= 0\n";
    }
  }
  if (!machine) out << rows.size() << " rows\n";
  return kOk;
}

int cmd_reconstruct(const ContactPatch& patch, const Wrench& w, bool strict_normal, Format format,
                    std::ostream& out, std::ostream& err) {
  ReconstructionOptions options;
  options.strict_normal = strict_normal;
  ContactForceSet forces;
  try {
    forces = reconstruct_forces(patch, w, options);
  } catch (const Infeasible& e) {
    if (format == Format::kMachine) {
      out << json{{"schema_version", kSchemaVersion}, {"kind", "reconstruct"}, {"feasible", false}}.dump()
          << '\n';
    } else {
      out << "INFEASIBLE: wrench is outside the contact wrench cone\n";
    }
    err << e.what() << '\n';
    return kViolation;
  }
  const Wrench back = compose_wrench(patch, forces);
  const double residual = (back.vector() - w.vector()).cwiseAbs().maxCoeff();
  if (format == Format::kMachine) {
    json fs = json::array();
    for (std::size_t i = 0; i < 4; ++i) fs.push_back({forces[i].x(), forces[i].y(), forces[i].z()});
    out << json{{"schema_version", kSchemaVersion}, {"kind", "reconstruct"}, {"feasible", true},
                {"forces", fs}, {"residual", residual}}.dump()
        << '\n';
  } else {
    out << std::setprecision(9);
    for (std::size_t i = 0; i < 4; ++i) {
      const Eigen::Vector2d c = patch.corner(i);
      out << 'C' << i + 1 << " (" << c.x() << ", " << c.y() << ")  f = (" << forces[i].x() << ", "
          << forces[i].y() << ", " << forces[i].z() << ")\n";
    }
    out << "residual " << residual << '\n';
  }
  return kOk;
}

int cmd_trajectory(const ContactPatch& patch, std::istream& input, const TrajectoryOptions& options,
                   std::ostream& out, std::ostream& err) {
  const Trajectory traj = parse_trajectory(input, options.strict);
  for (const auto& s : traj.skipped) err << "warning: skipped line " << s.line << ": " << s.reason << '\n';

  std::optional<ContactPatch> scaled;
  if (options.scale_area) scaled = patch.scaled_area(*options.scale_area);
  const bool machine = options.format == Format::kMachine;

  std::size_t violations = 0;
  std::size_t scaled_violations = 0;
  std::optional<std::size_t> worst;
  double worst_margin = -INFINITY;
  std::vector<StabilityReport> reports;
  reports.reserve(traj.records.size());

  if (!machine) {
    out << std::setprecision(6);
    out << std::setw(10) << "t" << std::setw(8) << "member" << std::setw(14) << "min_margin"
        << std::setw(12) << "zmp_x" << std::setw(12) << "zmp_y" << std::setw(12) << "tau_min"
        << std::setw(12) << "tau_max" << std::setw(12) << "tau_safe";
    if (scaled) out << std::setw(8) << "scaled" << std::setw(14) << "scaled_margin";
    out << "  violated\n";
  }
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& rec = traj.records[i];
    const StabilityReport r = check_wrench(patch, rec.wrench);
    std::optional<StabilityReport> rs;
    if (scaled) rs = check_wrench(*scaled, rec.wrench);
    if (!r.member) ++violations;
    if (rs && !rs->member) ++scaled_violations;
    if (r.min_margin > worst_margin) {
      worst_margin = r.min_margin;
      worst = i;
    }
    if (machine) {
      json j = {{"schema_version", kSchemaVersion}, {"kind", "trajectory_record"},
                {"t", rec.t},  {"line", rec.line},
                {"wrench", wrench_json(rec.wrench)}, {"member", r.member},
                {"min_margin", r.min_margin}};
      json violated = json::array();
      for (std::size_t k : r.violated_rows()) violated.push_back(face_labels()[k]);
      j["violated"] = violated;
      j["zmp"] = r.zmp ? json::array({r.zmp->x(), r.zmp->y()}) : json(nullptr);
      j["yaw"] = yaw_json(r.yaw);
      if (rs) j["scaled"] = {{"member", rs->member}, {"min_margin", rs->min_margin}};
      out << j.dump() << '\n';
    } else {
      out << std::setw(10) << rec.t << std::setw(8) << (r.member ? "yes" : "NO") << std::setw(14)
          << r.min_margin;
      if (r.zmp) {
        out << std::setw(12) << r.zmp->x() << std::setw(12) << r.zmp->y();
      } else {
        out << std::setw(12) << "-" << std::setw(12) << "-";
      }
      out << std::setw(12) << r.yaw.tau_min << std::setw(12) << r.yaw.tau_max << std::setw(12)
          << r.yaw.tau_safe;
      if (rs) out << std::setw(8) << (rs->member ? "yes" : "NO") << std::setw(14) << rs->min_margin;
      out << "  " << join_labels(r) << '\n';
    }
  }

  if (machine) {
    json s = {{"schema_version", kSchemaVersion}, {"kind", "trajectory_summary"},
              {"records", traj.records.size()}, {"violations", violations},
              {"skipped_lines", traj.skipped.size()}};
    if (worst) s["worst"] = {{"t", traj.records[*worst].t}, {"min_margin", worst_margin}};
    if (scaled) {
      s["scale_area"] = *options.scale_area;
      s["scaled_violations"] = scaled_violations;
    }
    out << s.dump() << '\n';
  } else {
    out << "records " << traj.records.size() << ", violations " << violations;
    if (scaled) out << ", violations with area scaled by " << *options.scale_area << ": " << scaled_violations;
    out << '\n';
    if (worst) out << "worst record t=" << traj.records[*worst].t << " min_margin=" << worst_margin << '\n';
  }
  return violations == 0 ? kOk : kViolation;
}

int cmd_validate(const ValidationConfig& config, bool allow_boundary, unsigned threads,
                 Format format, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const auto results = run_validation(config, threads);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t disagreements = 0;
  std::size_t contradictions = 0;
  for (const auto& r : results) {
    disagreements += r.disagreements;
    contradictions += r.reconstruction_contradictions;
    if (format == Format::kMachine) {
      out << json{{"schema_version", kSchemaVersion}, {"kind", "validate_patch"},
                  {"X", r.X}, {"Y", r.Y}, {"mu", r.mu}, {"samples", r.samples},
                  {"compared", r.compared}, {"in_band", r.in_band}, {"members", r.members},
                  {"disagreements", r.disagreements},
                  {"reconstruction_checked", r.reconstruction_checked},
                  {"reconstruction_contradictions", r.reconstruction_contradictions}}.dump()
          << '\n';
    } else {
      out << "X=" << std::left << std::setw(6) << r.X << " Y=" << std::setw(6) << r.Y
          << " mu=" << std::setw(5) << r.mu << std::right << " samples=" << r.samples
          << " compared=" << r.compared << " band=" << r.in_band << " members=" << r.members
          << " disagreements=" << r.disagreements
          << " reconstruction_contradictions=" << r.reconstruction_contradictions
          << (r.passed() ? "  ok" : "  FAIL") << '\n';
    }
  }
  const bool passed = contradictions == 0 && (disagreements == 0 || allow_boundary);
  if (format == Format::kMachine) {
    out << json{{"schema_version", kSchemaVersion}, {"kind", "validate_summary"},
                {"patches", results.size()}, {"seed", config.seed}, {"epsilon", config.epsilon},
                {"disagreements", disagreements},
                {"reconstruction_contradictions", contradictions}, {"passed", passed}}.dump()
        << '\n';
  } else {
    out << (passed ? "PASS" : "FAIL") << ": " << results.size() << " patches, " << disagreements
        << " disagreements, " << contradictions << " reconstruction contradictions (epsilon "
        << config.epsilon << ", seed " << config.seed << ")\n";
  }
  err << "validation time " << std::fixed << std::setprecision(3) << seconds << " s\n";
  return passed ? kOk : kViolation;
}

namespace {

struct Args {
  PatchText patch;
  std::string wrench;
  std::string format = "human";
  std::string form = "face";
  bool exact = false;
  bool strict_normal = false;
  std::string input;
  std::optional<double> scale_area;
  bool lenient = false;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double epsilon = 1e-7;
  bool allow_boundary = false;
  bool no_reconstruction = false;
  unsigned threads = 1;
};

void add_patch(CLI::App* cmd, Args& a, bool required = true) {
  auto* x = cmd->add_option("--X", a.patch.X, "half-length along x (m)");
  auto* y = cmd->add_option("--Y", a.patch.Y, "half-length along y (m)");
  auto* m = cmd->add_option("--mu", a.patch.mu, "static friction coefficient");
  if (required) {
    x->required();
    y->required();
    m->required();
  }
}

void add_format(CLI::App* cmd, Args& a) {
  cmd->add_option("--format", a.format, "human | machine")
      ->check(CLI::IsMember({"human", "machine"}));
}

std::vector<double> parse_list(const std::string& text, std::vector<double> fallback) {
  if (text.empty()) return fallback;
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(detail::parse_number(std::string_view(text).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contact wrench cone tool for rectangular surface contacts"};
  app.require_subcommand(1);
  Args a;

  auto* check = app.add_subcommand("check", "test one wrench against the cone");
  add_patch(check, a);
  check->add_option("--wrench", a.wrench, "fx,fy,fz,taux,tauy,tauz at the patch center")->required();
  add_format(check, a);

  auto* cone = app.add_subcommand("cone", "print the cone in face or span form");
  add_patch(cone, a);
  cone->add_option("--form", a.form, "face | span")->check(CLI::IsMember({"face", "span"}));
  cone->add_flag("--exact", a.exact, "derive the faces by exact elimination and compare");
  add_format(cone, a);

  auto* recon = app.add_subcommand("reconstruct", "corner forces realizing a wrench");
  add_patch(recon, a);
  recon->add_option("--wrench", a.wrench, "fx,fy,fz,taux,tauy,tauz")->required();
  recon->add_flag("--strict-normal", a.strict_normal, "keep every corner normal force positive");
  add_format(recon, a);

  auto* traj = app.add_subcommand("trajectory", "margin report for a wrench trajectory");
  add_patch(traj, a);
  traj->add_option("--input", a.input, "trajectory file (t,fx,fy,fz,taux,tauy,tauz)")->required();
  traj->add_option("--scale-area", a.scale_area, "also check with the area scaled by S");
  auto* strict = traj->add_flag("--strict", "abort on the first bad line (default)");
  auto* lenient = traj->add_flag("--lenient", a.lenient, "skip bad lines with a warning");
  strict->excludes(lenient);
  add_format(traj, a);

  auto* validate = app.add_subcommand("validate", "closed form vs LP oracle on random wrenches");
  add_patch(validate, a, false);
  validate->add_option("--samples", a.samples, "wrenches per patch");
  validate->add_option("--seed", a.seed, "random seed");
  validate->add_option("--epsilon", a.epsilon, "boundary band excluded from comparison");
  validate->add_flag("--allow-boundary-disagreements", a.allow_boundary,
                     "do not fail on disagreements (for --epsilon 0)");
  validate->add_flag("--no-reconstruction", a.no_reconstruction, "skip the reconstruction check");
  validate->add_option("--threads", a.threads, "worker threads");
  add_format(validate, a);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  const Format format = a.format == "machine" ? Format::kMachine : Format::kHuman;
  try {
    if (*check) return cmd_check(a.patch.to_patch(), parse_wrench(a.wrench), format, out);
    if (*cone) return cmd_cone(a.patch, a.form == "span", a.exact, format, out, err);
    if (*recon) {
      return cmd_reconstruct(a.patch.to_patch(), parse_wrench(a.wrench), a.strict_normal, format,
                             out, err);
    }
    if (*traj) {
      const ContactPatch patch = a.patch.to_patch();
      std::ifstream file(a.input);
      if (!file) {
        err << "error: cannot read " << a.input << '\n';
        return kUsage;
      }
      TrajectoryOptions opts;
      opts.scale_area = a.scale_area;
      opts.strict = !a.lenient;
      opts.format = format;
      return cmd_trajectory(patch, file, opts, out, err);
    }
    if (*validate) {
      ValidationConfig config;
      config.X = parse_list(a.patch.X, config.X);
      config.Y = parse_list(a.patch.Y, config.Y);
      config.mu = parse_list(a.patch.mu, config.mu);
      config.samples = a.samples;
      config.seed = a.seed;
      config.epsilon = a.epsilon;
      config.check_reconstruction = !a.no_reconstruction;
      return cmd_validate(config, a.allow_boundary, std::max(1u, a.threads), format, out, err);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  }
  return kUsage;
}

}  // namespace cwc::cli
