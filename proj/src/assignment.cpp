#include "hit/assignment.hpp"

#include <string>

#include "hit/core.hpp"

namespace hit {

SimilarityMatrix::SimilarityMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, kForbidden) {}

void SimilarityMatrix::set(std::size_t r, std::size_t c, double value) {
  if (r >= rows_ || c >= cols_) throw Error("similarity matrix index out of range");
  if (value != kForbidden && !(value >= 0.0 && value <= 1.0))
    throw Error("similarity " + std::to_string(value) + " outside [0, 1]");
  values_[r * cols_ + c] = value;
}

namespace {

// Shortest augmenting path Hungarian (Kuhn-Munkres with potentials) for a
// dense n x m cost matrix, n <= m, 1-indexed. Returns row_of_col[j].
std::vector<std::size_t> hungarian_min_cost(std::size_t n, std::size_t m,
                                            const std::vector<double>& cost) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto a = [&](std::size_t i, std::size_t j) { return cost[(i - 1) * m + (j - 1)]; };

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return p;
}

}  // namespace

std::vector<int> max_weight_assignment(std::size_t rows, std::size_t cols,
                                       std::span<const double> weights) {
  if (weights.size() != rows * cols) throw Error("weight matrix size mismatch");
  std::vector<int> result(rows, -1);
  if (rows == 0 || cols == 0) return result;

  // Forbidden entries cost the same as staying unmatched (weight 0) and are
  // dropped afterwards, which makes the square-or-wide problem an optional matching.
  const bool transpose = rows > cols;
  const std::size_t n = transpose ? cols : rows;
  const std::size_t m = transpose ? rows : cols;
  std::vector<double> cost(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double w = transpose ? weights[j * cols + i] : weights[i * cols + j];
      cost[i * m + j] = w > 0.0 ? -w : 0.0;
    }
  }
  const auto row_of_col = hungarian_min_cost(n, m, cost);
  for (std::size_t j = 1; j <= m; ++j) {
    const std::size_t i = row_of_col[j];
    if (i == 0) continue;
    const std::size_t r = transpose ? j - 1 : i - 1;
    const std::size_t c = transpose ? i - 1 : j - 1;
    if (weights[r * cols + c] >= 0.0) result[r] = static_cast<int>(c);
  }
  return result;
}

std::vector<Match> solve(const SimilarityMatrix& m, double gate, GateMode mode) {
  std::vector<Match> matches;
  if (m.empty()) return matches;
  std::vector<double> weights(m.rows() * m.cols(), -1.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double s = m.at(r, c);
      if (s == SimilarityMatrix::kForbidden) continue;
      if (mode == GateMode::BeforeSolve && s < gate) continue;
      weights[r * m.cols() + c] = s;
    }
  }
  const auto assigned = max_weight_assignment(m.rows(), m.cols(), weights);
  for (std::size_t r = 0; r < assigned.size(); ++r) {
    if (assigned[r] < 0) continue;
    const auto c = static_cast<std::size_t>(assigned[r]);
    const double s = m.at(r, c);
    if (s >= gate) matches.push_back({r, c, s});
  }
  return matches;
}

}  // namespace hit
