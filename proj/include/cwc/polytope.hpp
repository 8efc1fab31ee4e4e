#pragma once

/**
 * @file polytope.hpp
 * @brief Wrench cone built from first principles: the image of the four corner
 * friction pyramids under the wrench map, and conversions between its span
 * (rays) and face (half-spaces) descriptions.
 *
 * Nothing here uses the closed-form inequalities; this is the independent
 * route used to validate them.
 */

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

#include "cwc/contact_model.hpp"
#include "cwc/rational.hpp"
#include "cwc/simplex.hpp"

namespace cwc {

/// a . x <= b
template <typename Scalar>
struct Inequality {
  std::vector<Scalar> a;
  Scalar b{};
};

template <typename Scalar>
struct InequalitySystem {
  std::size_t num_vars = 0;
  std::vector<Inequality<Scalar>> rows;

  std::size_t size() const { return rows.size(); }

  void add(std::vector<Scalar> a, Scalar b = Scalar(0)) {
    if (a.size() != num_vars) throw InvalidArgument("inequality width does not match system");
    rows.push_back({std::move(a), std::move(b)});
  }

  /// Largest a.x - b over all rows (-inf for an empty system).
  Scalar max_violation(const std::vector<Scalar>& x) const {
    Scalar worst = std::numeric_limits<Scalar>::is_exact ? Scalar(0) : Scalar(-INFINITY);
    bool first = true;
    for (const auto& r : rows) {
      Scalar v = -r.b;
      for (std::size_t i = 0; i < num_vars; ++i) v += r.a[i] * x[i];
      if (first || v > worst) worst = v;
      first = false;
    }
    return worst;
  }
};

/// Cone given by generators: w is a member iff w = sum_j lambda_j rays[j] with
/// lambda >= 0.
struct SpanForm {
  std::vector<Vector6d> rays;
  std::size_t size() const { return rays.size(); }
};

/// Extreme rays of the linearized friction cone |f^x|, |f^y| <= mu f^z, as
/// unit vectors (mu +-, mu +-, 1). A frictionless pyramid collapses to (0,0,1).
inline std::vector<Vector3d> friction_pyramid_generators(double mu) {
  if (!(std::isfinite(mu) && mu >= 0.0)) throw InvalidArgument("friction coefficient must be >= 0");
  if (mu == 0.0) return {Vector3d::UnitZ()};
  std::vector<Vector3d> out;
  for (double sx : {1.0, -1.0}) {
    for (double sy : {1.0, -1.0}) out.push_back(Vector3d(sx * mu, sy * mu, 1.0).normalized());
  }
  return out;
}

/// Drops rays whose direction is within `angle_tolerance` radians of an
/// earlier ray. Zero rays are dropped too.
inline SpanForm deduplicate_rays(const SpanForm& span, double angle_tolerance = 1e-10) {
  SpanForm out;
  for (const auto& r : span.rays) {
    const double n = r.norm();
    if (n == 0.0) continue;
    const Vector6d u = r / n;
    const bool dup = std::any_of(out.rays.begin(), out.rays.end(), [&](const Vector6d& v) {
      const double c = std::clamp(u.dot(v), -1.0, 1.0);
      // acos loses resolution near 1; use the chord length instead.
      return c > 0.0 && (u - v).norm() <= 2.0 * std::sin(angle_tolerance / 2.0) + 1e-15;
    });
    if (!dup) out.rays.push_back(u);
  }
  return out;
}

/// Wrench-space rays: each pyramid generator placed at each corner and mapped
/// through the wrench map, normalized. Corner-major order (C1 generators
/// first); 16 rays for mu > 0, 4 for mu = 0.
inline SpanForm cwc_span(const ContactPatch& patch) {
  const WrenchMap G = wrench_map_matrix(patch);
  SpanForm span;
  for (std::size_t corner = 0; corner < 4; ++corner) {
    for (const Vector3d& g : friction_pyramid_generators(patch.mu())) {
      Eigen::Matrix<double, 12, 1> f = Eigen::Matrix<double, 12, 1>::Zero();
      f.segment<3>(static_cast<Eigen::Index>(3 * corner)) = g;
      const Vector6d r = G * f;
      span.rays.push_back(r / r.norm());
    }
  }
  return span;
}

/// Exact LP membership: does lambda >= 0 with R lambda = w exist? The wrench is
/// scaled to unit norm first (the cone is scale invariant), so the feasibility
/// tolerance is relative.
inline bool membership_lp(const SpanForm& span, const Wrench& w,
                          const lp::Options<double>& options = {}) {
  const double norm = w.vector().norm();
  if (norm == 0.0) return true;
  const Vector6d target = w.vector() / norm;
  lp::LinearProgram<double> prog;
  prog.num_vars = span.rays.size();
  for (Eigen::Index r = 0; r < 6; ++r) {
    std::vector<double> row(span.rays.size());
    for (std::size_t j = 0; j < span.rays.size(); ++j) row[j] = span.rays[j][r];
    prog.add_eq(std::move(row), target[r]);
  }
  return lp::solve(prog, options).status == lp::Status::kOptimal;
}

struct EliminationOptions {
  /// Row count above which a swell warning is raised.
  std::size_t row_cap = 2000;
  /// Run redundancy removal after every elimination step.
  bool prune_each_step = true;
  /// Called with the row count whenever it exceeds row_cap.
  std::function<void(std::size_t)> on_swell;
};

struct EliminationStats {
  std::size_t peak_rows = 0;
  std::size_t steps = 0;
  bool swell_warning = false;
};

namespace detail {

template <typename Scalar>
inline constexpr bool is_exact_v = std::numeric_limits<Scalar>::is_exact;

template <typename Scalar>
Scalar zero_tolerance() {
  if constexpr (is_exact_v<Scalar>) {
    return Scalar(0);
  } else {
    return Scalar(1e-12);
  }
}

template <typename Scalar>
bool near_zero(const Scalar& v) {
  return lp::detail::abs_value(v) <= zero_tolerance<Scalar>();
}

template <typename Scalar>
bool is_trivial(const Inequality<Scalar>& r) {
  return std::all_of(r.a.begin(), r.a.end(), [](const Scalar& v) { return near_zero(v); });
}

/// Positive rescaling to a canonical size: unit L2 norm of `a` in floating
/// point, coprime integers in exact mode.
template <typename Scalar>
void canonicalize(Inequality<Scalar>& r) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    std::vector<Rational> all = r.a;
    all.push_back(r.b);
    all = primitive_integer_row(all);
    r.b = all.back();
    all.pop_back();
    r.a = std::move(all);
  } else {
    for (auto& v : r.a) {
      if (near_zero(v)) v = Scalar(0);
    }
    Scalar n(0);
    for (const auto& v : r.a) n += v * v;
    n = std::sqrt(n);
    if (n > Scalar(0)) {
      for (auto& v : r.a) v /= n;
      r.b /= n;
    }
  }
}

template <typename Scalar>
Scalar sort_key(const Scalar& v) {
  if constexpr (is_exact_v<Scalar>) {
    return v;
  } else {
    return std::nearbyint(v * Scalar(1e9));
  }
}

template <typename Scalar>
bool key_less(const Inequality<Scalar>& l, const Inequality<Scalar>& r) {
  for (std::size_t i = 0; i < l.a.size(); ++i) {
    const Scalar a = sort_key(l.a[i]);
    const Scalar b = sort_key(r.a[i]);
    if (a != b) return a < b;
  }
  return sort_key(l.b) < sort_key(r.b);
}

template <typename Scalar>
bool key_equal(const Inequality<Scalar>& l, const Inequality<Scalar>& r) {
  return !key_less(l, r) && !key_less(r, l);
}

/// Farkas test: is a.x <= b implied by the rows in `others`? True iff some
/// y >= 0 has sum y_j a_j = a and sum y_j b_j <= b (others assumed feasible).
template <typename Scalar>
bool implied_by(const Inequality<Scalar>& row, const std::vector<const Inequality<Scalar>*>& others,
                std::size_t num_vars) {
  lp::LinearProgram<Scalar> prog;
  prog.num_vars = others.size();
  bool feasibility_only = near_zero(row.b) || row.b > Scalar(0);
  for (const auto* o : others) feasibility_only = feasibility_only && near_zero(o->b);
  for (std::size_t i = 0; i < num_vars; ++i) {
    std::vector<Scalar> eq(others.size());
    for (std::size_t j = 0; j < others.size(); ++j) eq[j] = others[j]->a[i];
    prog.add_eq(std::move(eq), row.a[i]);
  }
  if (!feasibility_only) {
    prog.cost.resize(others.size());
    for (std::size_t j = 0; j < others.size(); ++j) prog.cost[j] = others[j]->b;
  }
  const auto res = lp::solve(prog);
  if (res.status == lp::Status::kInfeasible) return false;
  if (feasibility_only) return true;
  // Unbounded below means the remaining rows are themselves infeasible.
  if (res.status == lp::Status::kUnbounded) return true;
  return res.objective <= row.b + zero_tolerance<Scalar>() * Scalar(1000);
}

}  // namespace detail

/// Removes every row implied by the others. Rows are positively rescaled to a
/// canonical size, trivially true rows (0 <= b, b >= 0) disappear, duplicates
/// collapse, and the output is sorted lexicographically by (rounded)
/// coefficients so identical inputs give identical outputs.
template <typename Scalar>
InequalitySystem<Scalar> remove_redundant(const InequalitySystem<Scalar>& sys) {
  std::vector<Inequality<Scalar>> rows;
  rows.reserve(sys.rows.size());
  for (auto r : sys.rows) {
    detail::canonicalize(r);
    if (detail::is_trivial(r)) {
      if (r.b >= -detail::zero_tolerance<Scalar>()) continue;
      // 0 <= b < 0: the system is empty; this row alone says so.
      InequalitySystem<Scalar> empty{sys.num_vars, {r}};
      return empty;
    }
    rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), detail::key_less<Scalar>);
  rows.erase(std::unique(rows.begin(), rows.end(), detail::key_equal<Scalar>), rows.end());

  std::vector<bool> kept(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<const Inequality<Scalar>*> others;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j != i && kept[j]) others.push_back(&rows[j]);
    }
    if (detail::implied_by(rows[i], others, sys.num_vars)) kept[i] = false;
  }
  InequalitySystem<Scalar> out{sys.num_vars, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (kept[i]) out.rows.push_back(std::move(rows[i]));
  }
  return out;
}

/// One Fourier-Motzkin step: pairs every row bounding variable `var` from above
/// with every row bounding it from below, keeps rows not involving it, and
/// drops the variable's column (later variables shift down by one). No
/// redundancy removal is done here.
template <typename Scalar>
InequalitySystem<Scalar> fourier_motzkin_eliminate(const InequalitySystem<Scalar>& sys,
                                                   std::size_t var,
                                                   const EliminationOptions& options = {},
                                                   EliminationStats* stats = nullptr) {
  if (var >= sys.num_vars) throw InvalidArgument("elimination variable out of range");
  std::vector<const Inequality<Scalar>*> upper, lower;
  InequalitySystem<Scalar> out{sys.num_vars - 1, {}};
  const auto drop_column = [&](const std::vector<Scalar>& a) {
    std::vector<Scalar> r;
    r.reserve(a.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i != var) r.push_back(a[i]);
    }
    return r;
  };
  for (const auto& r : sys.rows) {
    if (detail::near_zero(r.a[var])) {
      out.rows.push_back({drop_column(r.a), r.b});
    } else if (r.a[var] > Scalar(0)) {
      upper.push_back(&r);
    } else {
      lower.push_back(&r);
    }
  }
  for (const auto* u : upper) {
    for (const auto* l : lower) {
      // (-l_var) * u + u_var * l cancels the variable with positive weights.
      const Scalar cu = -l->a[var];
      const Scalar cl = u->a[var];
      std::vector<Scalar> a(sys.num_vars);
      for (std::size_t i = 0; i < sys.num_vars; ++i) a[i] = cu * u->a[i] + cl * l->a[i];
      Inequality<Scalar> row{drop_column(a), Scalar(cu * u->b + cl * l->b)};
      detail::canonicalize(row);
      out.rows.push_back(std::move(row));
    }
  }
  if (stats) {
    stats->steps += 1;
    stats->peak_rows = std::max(stats->peak_rows, out.rows.size());
  }
  if (out.rows.size() > options.row_cap) {
    if (stats) stats->swell_warning = true;
    if (options.on_swell) options.on_swell(out.rows.size());
  }
  return out;
}

/// Projects {eq rows: a.x = b} and {ineq rows: a.x <= b} onto the trailing
/// variables by eliminating the first `num_eliminate` variables: Gaussian
/// substitution wherever an equality pins a variable, Fourier-Motzkin for the
/// rest, with redundancy removal between steps.
template <typename Scalar>
InequalitySystem<Scalar> project_out_leading(std::vector<Inequality<Scalar>> equalities,
                                             InequalitySystem<Scalar> inequalities,
                                             std::size_t num_eliminate,
                                             const EliminationOptions& options = {},
                                             EliminationStats* stats = nullptr) {
  const std::size_t n = inequalities.num_vars;
  if (num_eliminate > n) throw InvalidArgument("cannot eliminate more variables than exist");
  std::vector<bool> substituted(num_eliminate, false);

  for (std::size_t v = 0; v < num_eliminate; ++v) {
    // Pivot: largest magnitude in floating point, first nonzero when exact.
    std::size_t pivot = equalities.size();
    Scalar best(0);
    for (std::size_t e = 0; e < equalities.size(); ++e) {
      const Scalar mag = lp::detail::abs_value(equalities[e].a[v]);
      if (detail::near_zero(mag)) continue;
      if (pivot == equalities.size() || (!detail::is_exact_v<Scalar> && mag > best)) {
        pivot = e;
        best = mag;
        if constexpr (detail::is_exact_v<Scalar>) break;
      }
    }
    if (pivot == equalities.size()) continue;
    const Inequality<Scalar> p = equalities[pivot];
    equalities.erase(equalities.begin() + static_cast<std::ptrdiff_t>(pivot));
    const auto substitute = [&](Inequality<Scalar>& r) {
      if (detail::near_zero(r.a[v])) return;
      const Scalar factor = r.a[v] / p.a[v];
      for (std::size_t i = 0; i < n; ++i) r.a[i] -= factor * p.a[i];
      r.b -= factor * p.b;
      r.a[v] = Scalar(0);
      if constexpr (!detail::is_exact_v<Scalar>) {
        for (auto& c : r.a) {
          if (detail::near_zero(c)) c = Scalar(0);
        }
      }
    };
    for (auto& e : equalities) substitute(e);
    for (auto& r : inequalities.rows) substitute(r);
    substituted[v] = true;
  }

  // Leftover equalities no longer involve any leading variable.
  for (const auto& e : equalities) {
    if (detail::is_trivial(e)) {
      if (!detail::near_zero(e.b)) throw NumericalFailure("inconsistent equality constraints");
      continue;
    }
    inequalities.rows.push_back(e);
    Inequality<Scalar> neg = e;
    for (auto& c : neg.a) c = -c;
    neg.b = -neg.b;
    inequalities.rows.push_back(std::move(neg));
  }

  // Drop substituted columns; remaining leading variables keep their order.
  std::vector<std::size_t> keep_cols;
  std::size_t fm_vars = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < num_eliminate && substituted[i]) continue;
    if (i < num_eliminate) ++fm_vars;
    keep_cols.push_back(i);
  }
  InequalitySystem<Scalar> sys{keep_cols.size(), {}};
  for (const auto& r : inequalities.rows) {
    std::vector<Scalar> a;
    a.reserve(keep_cols.size());
    for (std::size_t c : keep_cols) a.push_back(r.a[c]);
    sys.rows.push_back({std::move(a), r.b});
  }
  sys = remove_redundant(sys);
  if (stats) stats->peak_rows = std::max(stats->peak_rows, sys.rows.size());
  for (std::size_t k = 0; k < fm_vars; ++k) {
    sys = fourier_motzkin_eliminate(sys, 0, options, stats);
    if (options.prune_each_step || k + 1 == fm_vars) sys = remove_redundant(sys);
  }
  return sys;
}

/// Face description of the cone spanned by `span`, obtained by projecting
/// {w = R lambda, lambda >= 0} onto w. Rows come back unit-normalized and
/// irredundant; every ray is checked to satisfy every row.
inline InequalitySystem<double> span_to_face(const SpanForm& span,
                                             const EliminationOptions& options = {},
                                             EliminationStats* stats = nullptr) {
  const std::size_t m = span.rays.size();
  if (m == 0) throw NumericalFailure("span_to_face needs at least one ray");
  if (std::all_of(span.rays.begin(), span.rays.end(),
                  [](const Vector6d& r) { return r.norm() == 0.0; })) {
    throw NumericalFailure("span_to_face: all rays are zero");
  }
  const std::size_t n = m + 6;
  std::vector<Inequality<double>> eqs;
  for (Eigen::Index i = 0; i < 6; ++i) {
    std::vector<double> a(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) a[j] = -span.rays[j][i];
    a[m + static_cast<std::size_t>(i)] = 1.0;
    eqs.push_back({std::move(a), 0.0});
  }
  InequalitySystem<double> ineqs{n, {}};
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> a(n, 0.0);
    a[j] = -1.0;
    ineqs.rows.push_back({std::move(a), 0.0});
  }
  auto face = project_out_leading(std::move(eqs), std::move(ineqs), m, options, stats);
  for (const auto& row : face.rows) {
    const Vector6d u = Eigen::Map<const Vector6d>(row.a.data());
    for (const auto& r : span.rays) {
      if (u.dot(r) > 1e-9) {
        std::ostringstream msg;
        msg << "span_to_face produced a row violated by a generating ray (" << u.dot(r) << ")";
        throw NumericalFailure(msg.str());
      }
    }
  }
  return face;
}

/// Exact face description of the wrench cone obtained by eliminating the 12
/// corner-force components from {w = G f, |f_i^x|, |f_i^y| <= mu f_i^z,
/// f_i^z >= 0} in rational arithmetic. Rows are coprime integer vectors over
/// (f^x, f^y, f^z, tau^x, tau^y, tau^z).
inline InequalitySystem<Rational> exact_cwc_face(const Rational& X, const Rational& Y,
                                                 const Rational& mu,
                                                 const EliminationOptions& options = {},
                                                 EliminationStats* stats = nullptr) {
  if (X <= 0 || Y <= 0 || mu < 0) throw InvalidArgument("invalid rational patch");
  constexpr std::size_t kForces = 12;
  constexpr std::size_t n = kForces + 6;
  const auto g = wrench_map_coefficients<Rational>(X, Y);
  std::vector<Inequality<Rational>> eqs;
  for (std::size_t r = 0; r < 6; ++r) {
    std::vector<Rational> a(n, Rational(0));
    for (std::size_t c = 0; c < kForces; ++c) a[c] = -g[r][c];
    a[kForces + r] = 1;
    eqs.push_back({std::move(a), Rational(0)});
  }
  InequalitySystem<Rational> ineqs{n, {}};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t c = 3 * i;
    for (std::size_t t : {c, c + 1}) {
      for (int s : {1, -1}) {
        std::vector<Rational> a(n, Rational(0));
        a[t] = s;
        a[c + 2] = -mu;
        ineqs.rows.push_back({std::move(a), Rational(0)});
      }
    }
    std::vector<Rational> a(n, Rational(0));
    a[c + 2] = -1;
    ineqs.rows.push_back({std::move(a), Rational(0)});
  }
  return project_out_leading(std::move(eqs), std::move(ineqs), kForces, options, stats);
}

}  // namespace cwc
