#pragma once

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
//
// Solves   minimize c.x  subject to  A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0
//
// The scalar type is a template parameter so the same kernel runs in double
// precision (with tolerances) and in exact rational arithmetic (tolerances 0).
// Problems here have at most a few dozen rows; no sparsity or warm starts.

#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "cwc/errors.hpp"

namespace cwc::lp {

template <typename Scalar>
struct Tolerances {
  Scalar pivot;        // entries with |a| <= pivot are treated as zero
  Scalar feasibility;  // phase-1 objective accepted as zero up to this
};

template <typename Scalar>
Tolerances<Scalar> default_tolerances() {
  if constexpr (std::numeric_limits<Scalar>::is_exact) {
    return {Scalar(0), Scalar(0)};
  } else {
    return {Scalar(1e-11), Scalar(1e-9)};
  }
}

template <typename Scalar>
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<Scalar> cost;  // empty means a pure feasibility problem
  std::vector<std::vector<Scalar>> eq_rows;
  std::vector<Scalar> eq_rhs;
  std::vector<std::vector<Scalar>> ub_rows;
  std::vector<Scalar> ub_rhs;

  void add_eq(std::vector<Scalar> row, Scalar rhs) {
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(std::move(rhs));
  }
  void add_ub(std::vector<Scalar> row, Scalar rhs) {
    ub_rows.push_back(std::move(row));
    ub_rhs.push_back(std::move(rhs));
  }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

template <typename Scalar>
struct Result {
  Status status = Status::kInfeasible;
  Scalar objective{};
  std::vector<Scalar> x;
  std::size_t iterations = 0;
  /// Phase-1 objective (sum of artificials) at the end of phase 1.
  Scalar infeasibility{};
};

template <typename Scalar>
struct Options {
  Tolerances<Scalar> tolerances = default_tolerances<Scalar>();
  std::size_t max_iterations = 50000;
};

namespace detail {

template <typename Scalar>
Scalar abs_value(const Scalar& v) {
  return v < Scalar(0) ? Scalar(-v) : v;
}

template <typename Scalar>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), Scalar(0)) {}

  Scalar& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  Scalar& rhs(std::size_t r) { return at(r, cols_); }
  const Scalar& rhs(std::size_t r) const { return at(r, cols_); }
  // Objective row lives at index rows_.
  Scalar& obj(std::size_t c) { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Scalar inv = Scalar(1) / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = Scalar(1);
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const Scalar factor = at(r, pc);
      if (factor == Scalar(0)) continue;
      for (std::size_t c = 0; c <= cols_; ++c) {
        if (at(pr, c) != Scalar(0)) at(r, c) -= factor * at(pr, c);
      }
      at(r, pc) = Scalar(0);
    }
  }

  void drop_row(std::size_t r) {
    // Move the last constraint row into r and shift the objective row up.
    const std::size_t w = cols_ + 1;
    if (r != rows_ - 1) {
      for (std::size_t c = 0; c < w; ++c) data_[r * w + c] = data_[(rows_ - 1) * w + c];
    }
    for (std::size_t c = 0; c < w; ++c) data_[(rows_ - 1) * w + c] = data_[rows_ * w + c];
    data_.resize(rows_ * w);
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

// Runs simplex iterations on `t` minimizing the objective row, with columns
// >= `allowed_cols` barred from entering. Returns false on unboundedness.
template <typename Scalar>
bool iterate(Tableau<Scalar>& t, std::vector<std::size_t>& basis, std::size_t allowed_cols,
             const Options<Scalar>& opt, std::size_t& iterations) {
  const Scalar tol = opt.tolerances.pivot;
  while (true) {
    if (iterations >= opt.max_iterations) {
      std::ostringstream msg;
      msg << "simplex exceeded " << opt.max_iterations << " iterations";
      throw NumericalFailure(msg.str());
    }
    // Bland: lowest-index column with negative reduced cost.
    std::size_t enter = allowed_cols;
    for (std::size_t c = 0; c < allowed_cols; ++c) {
      if (t.obj(c) < -tol) {
        enter = c;
        break;
      }
    }
    if (enter == allowed_cols) return true;

    std::size_t leave = t.rows();
    Scalar best_ratio{};
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const Scalar& a = t.at(r, enter);
      if (!(a > tol)) continue;
      const Scalar ratio = t.rhs(r) / a;
      if (leave == t.rows() || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == t.rows()) return false;
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++iterations;
  }
}

}  // namespace detail

/// Solves the program. Never throws for infeasible or unbounded problems
/// (see Result::status); throws NumericalFailure past the iteration cap.
template <typename Scalar>
Result<Scalar> solve(const LinearProgram<Scalar>& lp, const Options<Scalar>& opt = {}) {
  const std::size_t n = lp.num_vars;
  const std::size_t m_eq = lp.eq_rows.size();
  const std::size_t m_ub = lp.ub_rows.size();
  const std::size_t m = m_eq + m_ub;
  const Scalar zero(0);

  // Columns: [x (n) | slacks (m_ub) | artificials (one per row needing it)].
  std::vector<bool> needs_artificial(m, false);
  std::size_t num_art = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const bool is_eq = r < m_eq;
    const Scalar& b = is_eq ? lp.eq_rhs[r] : lp.ub_rhs[r - m_eq];
    needs_artificial[r] = is_eq || b < zero;
    if (needs_artificial[r]) ++num_art;
  }
  const std::size_t art_begin = n + m_ub;
  const std::size_t cols = art_begin + num_art;

  detail::Tableau<Scalar> t(m, cols);
  std::vector<std::size_t> basis(m);
  std::size_t next_art = art_begin;
  for (std::size_t r = 0; r < m; ++r) {
    const bool is_eq = r < m_eq;
    const auto& row = is_eq ? lp.eq_rows[r] : lp.ub_rows[r - m_eq];
    Scalar b = is_eq ? lp.eq_rhs[r] : lp.ub_rhs[r - m_eq];
    if (row.size() != n) throw InvalidArgument("LP row width does not match num_vars");
    const bool flip = b < zero;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = flip ? Scalar(-row[c]) : row[c];
    if (!is_eq) t.at(r, n + (r - m_eq)) = flip ? Scalar(-1) : Scalar(1);
    t.rhs(r) = flip ? Scalar(-b) : b;
    if (needs_artificial[r]) {
      t.at(r, next_art) = Scalar(1);
      basis[r] = next_art++;
    } else {
      basis[r] = n + (r - m_eq);
    }
  }

  Result<Scalar> result;
  std::size_t iterations = 0;

  // Phase 1: minimize the sum of artificials, expressed in nonbasic columns.
  if (num_art > 0) {
    for (std::size_t r = 0; r < m; ++r) {
      if (!needs_artificial[r]) continue;
      for (std::size_t c = 0; c <= cols; ++c) {
        if (c >= art_begin && c < cols) continue;
        t.obj(c) -= t.at(r, c);
      }
    }
    detail::iterate(t, basis, cols, opt, iterations);
    result.infeasibility = Scalar(-t.obj(cols));
    if (result.infeasibility > opt.tolerances.feasibility) {
      result.status = Status::kInfeasible;
      result.iterations = iterations;
      return result;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < t.rows();) {
      if (basis[r] < art_begin) {
        ++r;
        continue;
      }
      std::size_t pc = art_begin;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (detail::abs_value(t.at(r, c)) > opt.tolerances.pivot) {
          pc = c;
          break;
        }
      }
      if (pc == art_begin) {
        t.drop_row(r);
        basis[r] = basis.back();
        basis.pop_back();
        continue;
      }
      t.pivot(r, pc);
      basis[r] = pc;
      ++r;
    }
  }

  // Phase 2 on the original objective, artificial columns barred.
  for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = zero;
  if (!lp.cost.empty()) {
    if (lp.cost.size() != n) throw InvalidArgument("LP cost width does not match num_vars");
    for (std::size_t c = 0; c < n; ++c) t.obj(c) = lp.cost[c];
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const std::size_t b = basis[r];
      if (b >= n) continue;
      const Scalar cb = lp.cost[b];
      if (cb == zero) continue;
      for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= cb * t.at(r, c);
    }
    if (!detail::iterate(t, basis, art_begin, opt, iterations)) {
      result.status = Status::kUnbounded;
      result.iterations = iterations;
      return result;
    }
  }

  result.status = Status::kOptimal;
  result.iterations = iterations;
  result.x.assign(n, zero);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (basis[r] < n) result.x[basis[r]] = t.rhs(r);
  }
  result.objective = zero;
  if (!lp.cost.empty()) {
    for (std::size_t c = 0; c < n; ++c) result.objective += lp.cost[c] * result.x[c];
  }
  return result;
}

}  // namespace cwc::lp
