#pragma once

// Randomized cross-check of the closed-form cone against the LP oracle and the
// force reconstruction, over a grid of patches.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>
#include <string>
#include <utility>
#include <thread>
#include <vector>

#include "cwc/closed_form.hpp"
#include "cwc/force_reconstruction.hpp"
#include "cwc/polytope.hpp"
#include "cwc/sampling.hpp"

namespace cwc {

struct ValidationConfig {
  std::vector<double> X{0.05, 0.1, 0.3};
  std::vector<double> Y{0.05, 0.1, 0.3};
  std::vector<double> mu{0.1, 0.5, 1.0};
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  /// Samples whose relative closed-form margin is within epsilon of zero are
  /// not compared.
  double epsilon = 1e-7;
  bool check_reconstruction = true;

  void validate() const {
    if (samples < 1) throw InvalidArgument("validation needs at least one sample per patch");
    if (X.empty() || Y.empty() || mu.empty()) throw InvalidArgument("empty patch grid");
    if (!(epsilon >= 0.0)) throw InvalidArgument("boundary epsilon must be >= 0");
    for (double x : X) ContactPatch(x, 1.0, 0.0);
    for (double y : Y) ContactPatch(1.0, y, 0.0);
    for (double m : mu) ContactPatch(1.0, 1.0, m);
  }

  std::vector<ContactPatch> patches() const {
    std::vector<ContactPatch> out;
    for (double x : X) {
      for (double y : Y) {
        for (double m : mu) out.emplace_back(x, y, m);
      }
    }
    return out;
  }
};

struct PatchValidation {
  double X = 0.0, Y = 0.0, mu = 0.0;
  std::size_t samples = 0;
  std::size_t compared = 0;
  std::size_t in_band = 0;
  std::size_t members = 0;
  /// Closed form and LP membership disagree (outside the band).
  std::size_t disagreements = 0;
  std::size_t reconstruction_checked = 0;
  /// Reconstruction success did not match membership, or its output failed
  /// the residual / friction checks.
  std::size_t reconstruction_contradictions = 0;
  double max_residual = 0.0;

  bool passed() const { return disagreements == 0 && reconstruction_contradictions == 0; }
};

/// Per-patch stream seed, independent of thread scheduling.
inline std::uint64_t patch_seed(std::uint64_t seed, std::size_t index) {
  return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1));
}

inline PatchValidation validate_patch(const ContactPatch& patch, std::size_t samples,
                                      std::uint64_t seed, double epsilon,
                                      bool check_reconstruction) {
  PatchValidation out;
  out.X = patch.X();
  out.Y = patch.Y();
  out.mu = patch.mu();
  out.samples = samples;
  const SpanForm span = cwc_span(patch);
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Wrench w = i % 2 == 0 ? sample_conic_member(span, rng) : sample_ambient(patch, rng);
    const double norm = w.vector().norm();
    const StabilityReport report = check_wrench(patch, w);
    if (norm == 0.0 || std::abs(report.min_margin / norm) < epsilon) {
      ++out.in_band;
      continue;
    }
    ++out.compared;
    const bool closed = report.member;
    if (closed) ++out.members;
    bool oracle = false;
    try {
      oracle = membership_lp(span, w);
    } catch (const NumericalFailure& e) {
      std::ostringstream msg;
      msg << "membership LP failed on patch (" << patch.X() << ", " << patch.Y() << ", "
          << patch.mu() << ") sample " << i << ": " << e.what();
      throw NumericalFailure(msg.str());
    }
    if (closed != oracle) ++out.disagreements;

    if (!check_reconstruction) continue;
    ++out.reconstruction_checked;
    bool built = false;
    ContactForceSet forces;
    try {
      forces = reconstruct_forces(patch, w);
      built = true;
    } catch (const Infeasible&) {
    } catch (const NumericalFailure& e) {
      std::ostringstream msg;
      msg << "force reconstruction failed on patch (" << patch.X() << ", " << patch.Y()
          << ", " << patch.mu() << ") sample " << i << ": " << e.what();
      throw NumericalFailure(msg.str());
    }
    if (built != closed) {
      ++out.reconstruction_contradictions;
      continue;
    }
    if (built) {
      const double residual = (compose_wrench(patch, forces).vector() - w.vector()).cwiseAbs().maxCoeff();
      out.max_residual = std::max(out.max_residual, residual);
      if (residual > 1e-9 * std::max(1.0, norm) || !friction_feasible(patch, forces, 1e-9 * norm)) {
        ++out.reconstruction_contradictions;
      }
    }
  }
  return out;
}

/// Runs every patch of the grid; results keep grid order whatever `threads` is.
inline std::vector<PatchValidation> run_validation(const ValidationConfig& config,
                                                   unsigned threads = 1) {
  config.validate();
  const auto patches = config.patches();
  std::vector<PatchValidation> results(patches.size());
  const auto work = [&](std::size_t k) {
    results[k] = validate_patch(patches[k], config.samples, patch_seed(config.seed, k),
                                config.epsilon, config.check_reconstruction);
  };
  if (threads <= 1) {
    for (std::size_t k = 0; k < patches.size(); ++k) work(k);
    return results;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t k = t; k < patches.size(); k += threads) work(k);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

/// Exact elimination result next to the closed-form rows, both as coprime
/// integer rows in canonical order.
struct ExactFaceComparison {
  InequalitySystem<Rational> eliminated;
  InequalitySystem<Rational> closed_form;
  /// Closed-form label of each eliminated row ("" when it matches none).
  std::vector<std::string> labels;
  EliminationStats stats;
  /// Same rows after canonical scaling and ordering.
  bool match = false;
  /// Each system implies every row of the other (same cone). Differs from
  /// `match` only when the cone is not full-dimensional (mu = 0), where the
  /// irredundant description is not unique.
  bool equivalent = false;
};

namespace detail {

inline bool implies_all(const InequalitySystem<Rational>& from, const InequalitySystem<Rational>& to) {
  std::vector<const Inequality<Rational>*> rows;
  for (const auto& r : from.rows) rows.push_back(&r);
  return std::all_of(to.rows.begin(), to.rows.end(),
                     [&](const auto& r) { return implied_by(r, rows, from.num_vars); });
}

}  // namespace detail

/// Eliminates the corner forces exactly and compares the resulting facets with
/// the (irredundant) closed-form rows up to positive scaling.
inline ExactFaceComparison compare_exact_face(const Rational& X, const Rational& Y,
                                              const Rational& mu) {
  ExactFaceComparison out;
  out.eliminated = exact_cwc_face(X, Y, mu, {}, &out.stats);

  InequalitySystem<Rational> closed{6, {}};
  std::vector<std::pair<Inequality<Rational>, std::string>> labelled;
  for (const auto& r : face_rows<Rational>(X, Y, mu)) {
    Inequality<Rational> row{std::vector<Rational>(r.coeffs.begin(), r.coeffs.end()), Rational(0)};
    closed.rows.push_back(row);
    detail::canonicalize(row);
    labelled.emplace_back(std::move(row), face_label(r.family, r.sign_a, r.sign_b));
  }
  out.closed_form = remove_redundant(closed);

  for (const auto& row : out.eliminated.rows) {
    std::string label;
    for (const auto& [candidate, name] : labelled) {
      if (candidate.a == row.a && candidate.b == row.b) {
        label = name;
        break;
      }
    }
    out.labels.push_back(label);
  }
  out.match = out.eliminated.rows.size() == out.closed_form.rows.size();
  for (std::size_t i = 0; out.match && i < out.eliminated.rows.size(); ++i) {
    out.match = out.eliminated.rows[i].a == out.closed_form.rows[i].a &&
                out.eliminated.rows[i].b == out.closed_form.rows[i].b;
  }
  out.equivalent = out.match || (detail::implies_all(out.eliminated, out.closed_form) &&
                                 detail::implies_all(out.closed_form, out.eliminated));
  return out;
}

}  // namespace cwc
