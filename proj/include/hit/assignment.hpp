#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace hit {

/// Dense row-major similarity matrix. Entries are in [0, 1] or kForbidden for
/// pairs that violate an interval or class constraint.
class SimilarityMatrix {
 public:
  static constexpr double kForbidden = -std::numeric_limits<double>::infinity();

  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  bool admissible(std::size_t r, std::size_t c) const { return at(r, c) != kForbidden; }
  /// Throws unless `value` is in [0, 1] or kForbidden.
  void set(std::size_t r, std::size_t c, double value);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Match {
  std::size_t row = 0;
  std::size_t col = 0;
  double similarity = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

enum class GateMode {
  AfterSolve,   // solve over all admissible entries, then drop matches below the gate
  BeforeSolve,  // treat entries below the gate as forbidden before solving
};

/// Maximum-total-similarity matching over admissible entries, gated by `gate`.
/// Matches are returned sorted by row.
std::vector<Match> solve(const SimilarityMatrix& m, double gate,
                         GateMode mode = GateMode::AfterSolve);

/// Hungarian algorithm on a row-major `rows x cols` weight matrix. Weights must
/// be >= 0; negative entries are forbidden. Returns the matched column per row
/// or -1. Matching is optional, so a row whose only options are forbidden or
/// zero-weight may stay unmatched.
std::vector<int> max_weight_assignment(std::size_t rows, std::size_t cols,
                                       std::span<const double> weights);

}  // namespace hit
