#include "ifsdf/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ifsdf::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kFeasibilityTol = 1e-9;
constexpr int kDegenerateRunBeforeBland = 50;

// Row-major tableau with the objective row stored last. Column `rhs_col` holds
// the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c < cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) at(r, c) -= factor * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Runs simplex iterations minimizing the objective row (last row) over columns
// [0, active_cols). Returns kOptimal, kUnbounded or kIterationLimit.
Status run(Tableau& t, std::vector<std::size_t>& basis, std::size_t active_cols, int& iterations,
           int max_iterations) {
  const std::size_t m = t.rows() - 1;
  const std::size_t rhs = t.cols() - 1;
  int degenerate_run = 0;
  while (true) {
    if (iterations >= max_iterations) return Status::kIterationLimit;
    const bool bland = degenerate_run >= kDegenerateRunBeforeBland;

    std::size_t enter = active_cols;
    double best = -kCostTol;
    for (std::size_t c = 0; c < active_cols; ++c) {
      const double reduced = t.at(m, c);
      if (reduced < best) {
        enter = c;
        if (bland) break;
        best = reduced;
      }
    }
    if (enter == active_cols) return Status::kOptimal;

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = t.at(r, rhs) / a;
      if (ratio < best_ratio - 1e-14 || (ratio <= best_ratio + 1e-14 && leave < m && basis[r] < basis[leave])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave == m) return Status::kUnbounded;

    degenerate_run = best_ratio <= 1e-14 ? degenerate_run + 1 : 0;
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++iterations;
  }
}

}  // namespace

Solution solve(const Problem& problem, int max_iterations) {
  const std::size_t n = problem.num_vars;
  if (problem.objective.size() != n) throw std::invalid_argument("lp::solve: objective size mismatch");
  const std::size_t m = problem.constraints.size();

  // Normalize to non-negative right-hand sides and count auxiliary columns.
  std::vector<Constraint> rows = problem.constraints;
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (auto& row : rows) {
    if (row.coeffs.size() != n) throw std::invalid_argument("lp::solve: constraint size mismatch");
    if (row.rhs < 0.0) {
      for (double& v : row.coeffs) v = -v;
      row.rhs = -row.rhs;
      if (row.sense == Sense::kLessEqual) {
        row.sense = Sense::kGreaterEqual;
      } else if (row.sense == Sense::kGreaterEqual) {
        row.sense = Sense::kLessEqual;
      }
    }
    if (row.sense != Sense::kEqual) ++slacks;
    if (row.sense != Sense::kLessEqual) ++artificials;
  }

  // Columns: [structural | slack/surplus | artificial | rhs].
  const std::size_t art_begin = n + slacks;
  const std::size_t total = art_begin + artificials;
  Tableau t(m + 1, total + 1);
  std::vector<std::size_t> basis(m);
  std::size_t slack_col = n;
  std::size_t art_col = art_begin;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = rows[r];
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = row.coeffs[c];
    t.at(r, total) = row.rhs;
    switch (row.sense) {
      case Sense::kLessEqual:
        t.at(r, slack_col) = 1.0;
        basis[r] = slack_col++;
        break;
      case Sense::kGreaterEqual:
        t.at(r, slack_col++) = -1.0;
        t.at(r, art_col) = 1.0;
        basis[r] = art_col++;
        break;
      case Sense::kEqual:
        t.at(r, art_col) = 1.0;
        basis[r] = art_col++;
        break;
    }
  }

  Solution out;
  // Phase 1: minimize the sum of artificials, expressed in non-basic terms.
  if (artificials > 0) {
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < art_begin) continue;
      for (std::size_t c = 0; c <= total; ++c) {
        if (c < art_begin || c == total) t.at(m, c) -= t.at(r, c);
      }
    }
    const Status phase1 = run(t, basis, art_begin, out.iterations, max_iterations);
    if (phase1 == Status::kIterationLimit) {
      out.status = phase1;
      return out;
    }
    if (-t.at(m, total) > kFeasibilityTol) {
      out.status = Status::kInfeasible;
      return out;
    }
    // Drive remaining zero-level artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < art_begin) continue;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (std::abs(t.at(r, c)) > 1e-9) {
          t.pivot(r, c);
          basis[r] = c;
          break;
        }
      }
    }
  }

  // Phase 2 objective row: c_j - c_B B^{-1} a_j.
  for (std::size_t c = 0; c <= total; ++c) t.at(m, c) = c < n ? problem.objective[c] : 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = basis[r];
    if (b >= n) continue;
    const double cost = problem.objective[b];
    if (cost == 0.0) continue;
    for (std::size_t c = 0; c <= total; ++c) t.at(m, c) -= cost * t.at(r, c);
  }
  // Artificials stuck in the basis at zero level are blocked from re-entering
  // by restricting pricing to the original and slack columns.
  const Status phase2 = run(t, basis, art_begin, out.iterations, max_iterations);
  out.status = phase2;
  if (phase2 != Status::kOptimal) return out;

  out.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) out.x[basis[r]] = t.at(r, total);
  }
  out.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) out.objective += problem.objective[c] * out.x[c];
  return out;
}

}  // namespace ifsdf::lp
