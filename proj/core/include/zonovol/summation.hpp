#ifndef ZONOVOL_SUMMATION_HPP_
#define ZONOVOL_SUMMATION_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace zonovol {

/// Kahan-Babuska (Neumaier) compensated sum.
template <typename T>
class BasicNeumaierSum {
 public:
  void add(T x) noexcept {
    const T t = sum_ + x;
    if ((sum_ < 0 ? -sum_ : sum_) >= (x < 0 ? -x : x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  T value() const noexcept { return sum_ + comp_; }

 private:
  T sum_ = 0;
  T comp_ = 0;
};

using NeumaierSum = BasicNeumaierSum<double>;

/// Streaming pairwise (tree) summation.  Values are summed in leaf blocks of
/// `kBlock`; completed blocks are merged like a binary counter, so the error
/// grows with log(count) instead of count.
class PairwiseAccumulator {
 public:
  static constexpr std::size_t kBlock = 128;

  void add(double x) {
    block_ += x;
    if (++in_block_ == kBlock) {
      push_block(block_);
      block_ = 0.0;
      in_block_ = 0;
    }
  }

  double value() const {
    double total = block_;
    // Lower levels hold the most recent (smallest) partial sums.
    for (double level : levels_) total += level;
    return total;
  }

 private:
  void push_block(double v) {
    std::size_t level = 0;
    while (level < levels_.size() && occupied_[level]) {
      v += levels_[level];
      levels_[level] = 0.0;
      occupied_[level] = false;
      ++level;
    }
    if (level == levels_.size()) {
      levels_.push_back(0.0);
      occupied_.push_back(false);
    }
    levels_[level] = v;
    occupied_[level] = true;
  }

  double block_ = 0.0;
  std::size_t in_block_ = 0;
  std::vector<double> levels_;
  std::vector<bool> occupied_;
};

/// Pairwise reduction of an already materialized buffer, in index order.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace zonovol

#endif  // ZONOVOL_SUMMATION_HPP_
