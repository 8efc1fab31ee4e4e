#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cwc/contact_model.hpp"
#include "cwc/validation.hpp"

namespace cwc::cli {

/// Stable process exit codes.
enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

enum class Format { kHuman, kMachine };

inline constexpr int kSchemaVersion = 1;

/// Patch as typed on the command line; the text is kept for exact parsing.
struct PatchText {
  std::string X;
  std::string Y;
  std::string mu;

  ContactPatch to_patch() const;
};

int cmd_check(const ContactPatch& patch, const Wrench& w, Format format, std::ostream& out);

int cmd_cone(const PatchText& patch, bool span_form, bool exact, Format format, std::ostream& out,
             std::ostream& err);

int cmd_reconstruct(const ContactPatch& patch, const Wrench& w, bool strict_normal, Format format,
                    std::ostream& out, std::ostream& err);

struct TrajectoryOptions {
  std::optional<double> scale_area;
  bool strict = true;
  Format format = Format::kHuman;
};

int cmd_trajectory(const ContactPatch& patch, std::istream& input, const TrajectoryOptions& options,
                   std::ostream& out, std::ostream& err);

/// `allow_boundary` lets disagreements pass (intended for epsilon = 0 runs).
/// The report on `out` is deterministic; timing goes to `err`.
int cmd_validate(const ValidationConfig& config, bool allow_boundary, unsigned threads,
                 Format format, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing and dispatch).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cwc::cli
