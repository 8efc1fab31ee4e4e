#include <gtest/gtest.h>

#include "cwc/rational.hpp"
#include "cwc/sampling.hpp"
#include "cwc/simplex.hpp"

using namespace cwc;

// max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 has optimum 36 at (2, 6).
template <typename S>
lp::LinearProgram<S> textbook() {
  lp::LinearProgram<S> p;
  p.num_vars = 2;
  p.cost = {S(-3), S(-5)};
  p.add_ub({S(1), S(0)}, S(4));
  p.add_ub({S(0), S(2)}, S(12));
  p.add_ub({S(3), S(2)}, S(18));
  return p;
}

TEST(Simplex, TextbookMaximisation) {
  const auto r = lp::solve(textbook<double>());
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  EXPECT_NEAR(r.objective, -36.0, 1e-12);
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 6.0, 1e-12);
}

TEST(Simplex, TextbookMaximisationExact) {
  const auto r = lp::solve(textbook<Rational>());
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  EXPECT_EQ(r.objective, Rational(-36));
  EXPECT_EQ(r.x[0], Rational(2));
  EXPECT_EQ(r.x[1], Rational(6));
}

TEST(Simplex, EqualityAndNegativeRightHandSide) {
  // min x + y s.t. x + 2y = 4, x >= 1 (written -x <= -1): optimum 2.5 at (1, 1.5).
  lp::LinearProgram<double> p;
  p.num_vars = 2;
  p.cost = {1.0, 1.0};
  p.add_eq({1.0, 2.0}, 4.0);
  p.add_ub({-1.0, 0.0}, -1.0);
  const auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  EXPECT_NEAR(r.objective, 2.5, 1e-12);
  EXPECT_NEAR(r.x[0], 1.0, 1e-12);
  EXPECT_NEAR(r.x[1], 1.5, 1e-12);
}

TEST(Simplex, Infeasible) {
  lp::LinearProgram<double> p;
  p.num_vars = 1;
  p.add_ub({1.0}, 1.0);
  p.add_ub({-1.0}, -2.0);
  EXPECT_EQ(lp::solve(p).status, lp::Status::kInfeasible);
  lp::LinearProgram<double> q;
  q.num_vars = 2;
  q.add_eq({1.0, 1.0}, -1.0);
  EXPECT_EQ(lp::solve(q).status, lp::Status::kInfeasible);
}

TEST(Simplex, Unbounded) {
  lp::LinearProgram<double> p;
  p.num_vars = 2;
  p.cost = {-1.0, 0.0};
  p.add_ub({1.0, -1.0}, 1.0);
  EXPECT_EQ(lp::solve(p).status, lp::Status::kUnbounded);
}

TEST(Simplex, RedundantEqualitiesAreTolerated) {
  lp::LinearProgram<Rational> p;
  p.num_vars = 3;
  p.cost = {Rational(1), Rational(2), Rational(3)};
  p.add_eq({Rational(1), Rational(1), Rational(1)}, Rational(3));
  p.add_eq({Rational(2), Rational(2), Rational(2)}, Rational(6));
  p.add_eq({Rational(0), Rational(1), Rational(1)}, Rational(1));
  const auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  EXPECT_EQ(r.objective, Rational(4));
  EXPECT_EQ(r.x[0], Rational(2));
  EXPECT_EQ(r.x[1], Rational(1));
}

TEST(Simplex, DegenerateProblemTerminates) {
  // Classic cycling example (Beale); Bland's rule must terminate at -5/4.
  lp::LinearProgram<Rational> p;
  p.num_vars = 4;
  p.cost = {Rational(-3, 4), Rational(20), Rational(-1, 2), Rational(6)};
  p.add_ub({Rational(1, 4), Rational(-8), Rational(-1), Rational(9)}, Rational(0));
  p.add_ub({Rational(1, 2), Rational(-12), Rational(-1, 2), Rational(3)}, Rational(0));
  p.add_ub({Rational(0), Rational(0), Rational(1), Rational(0)}, Rational(1));
  const auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  EXPECT_EQ(r.objective, Rational(-5, 4));
}

TEST(Simplex, RandomProgramsSatisfyConstraintsAndMatchExact) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    lp::LinearProgram<double> p;
    lp::LinearProgram<Rational> q;
    p.num_vars = q.num_vars = 4;
    for (int k = 0; k < 4; ++k) {
      const double c = std::round(uniform(rng, -5, 5));
      p.cost.push_back(c);
      q.cost.push_back(Rational(static_cast<int>(c)));
    }
    for (int r = 0; r < 5; ++r) {
      std::vector<double> row;
      std::vector<Rational> qrow;
      for (int k = 0; k < 4; ++k) {
        const int v = static_cast<int>(std::round(uniform(rng, -3, 6)));
        row.push_back(v);
        qrow.emplace_back(v);
      }
      const int b = static_cast<int>(std::round(uniform(rng, -2, 10)));
      p.add_ub(row, b);
      q.add_ub(qrow, Rational(b));
    }
    const auto a = lp::solve(p);
    const auto e = lp::solve(q);
    ASSERT_EQ(a.status, e.status) << trial;
    if (a.status != lp::Status::kOptimal) continue;
    EXPECT_NEAR(a.objective, to_double(e.objective), 1e-9);
    for (std::size_t r = 0; r < p.ub_rows.size(); ++r) {
      double lhs = 0;
      for (std::size_t k = 0; k < 4; ++k) lhs += p.ub_rows[r][k] * a.x[k];
      EXPECT_LE(lhs, p.ub_rhs[r] + 1e-9);
    }
    for (double x : a.x) EXPECT_GE(x, -1e-12);
  }
}

TEST(Rational, DecimalParsingIsExact) {
  EXPECT_EQ(parse_decimal("0.05"), Rational(1, 20));
  EXPECT_EQ(parse_decimal("-1.25"), Rational(-5, 4));
  EXPECT_EQ(parse_decimal("3"), Rational(3));
  EXPECT_EQ(parse_decimal("2.5e-2"), Rational(1, 40));
  EXPECT_THROW(parse_decimal("abc"), InvalidArgument);
  EXPECT_THROW(parse_decimal(""), InvalidArgument);
}

TEST(Rational, PrimitiveIntegerRow) {
  const auto row = primitive_integer_row({Rational(1, 2), Rational(-3, 4), Rational(0)});
  EXPECT_EQ(row, (std::vector<Rational>{Rational(2), Rational(-3), Rational(0)}));
  const auto same = primitive_integer_row({Rational(4), Rational(-6), Rational(0)});
  EXPECT_EQ(same, row);
}
