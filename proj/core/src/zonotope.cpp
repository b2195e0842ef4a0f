#include "zonovol/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "zonovol/errors.hpp"
#include "zonovol/summation.hpp"

namespace zonovol {

namespace {

constexpr std::uint64_t kPairwiseThreshold = 10'000;
constexpr std::uint64_t kChunk = 1u << 14;

// In-place LU with partial pivoting on a column-major n x n buffer.
double lu_det_raw(double* a, int n) {
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(a[k + k * n]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a[i + k * n]);
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != k) {
      for (int j = k; j < n; ++j) std::swap(a[k + j * n], a[pivot + j * n]);
      det = -det;
    }
    const double d = a[k + k * n];
    det *= d;
    for (int i = k + 1; i < n; ++i) {
      const double f = a[i + k * n] / d;
      if (f == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a[i + j * n] -= f * a[k + j * n];
    }
  }
  return det;
}

void require_finite(const Matrix& Z) {
  if (Z.rows() < 1 || Z.cols() < 1) {
    throw ArgumentError("generator matrix must have at least one row and one column");
  }
  if (!Z.allFinite()) {
    throw ArgumentError("generator matrix has non-finite entries");
  }
}

// |det| summed over the tuples of `range`, columns taken from Z.
template <typename Accumulator>
double abs_det_sum(const Matrix& Z, const SubsetRange& range) {
  const int n = static_cast<int>(Z.rows());
  std::vector<double> buf(static_cast<std::size_t>(n) * n);
  Accumulator acc;
  for (const IndexTuple& cols : range) {
    for (int c = 0; c < n; ++c) {
      const double* src = Z.col(cols[c]).data();
      std::copy(src, src + n, buf.data() + static_cast<std::size_t>(c) * n);
    }
    acc.add(std::abs(lu_det_raw(buf.data(), n)));
  }
  return acc.value();
}

struct PlainSum {
  double s = 0.0;
  void add(double x) noexcept { s += x; }
  double value() const noexcept { return s; }
};

}  // namespace

std::uint64_t binomial(std::int64_t m, std::int64_t k) {
  if (m < 0 || k < 0) throw ArgumentError("binomial of negative argument");
  if (k > m) return 0;
  k = std::min(k, m - k);
  __extension__ using u128 = unsigned __int128;
  u128 result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * static_cast<u128>(m - k + i) / static_cast<u128>(i);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw ArgumentError("binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

SubsetRange::SubsetRange(int lo, int hi, int s) : lo_(lo), hi_(hi), s_(s) {
  if (lo > hi) throw ArgumentError("subset ground range is empty (lo > hi)");
  if (s < 0) throw ArgumentError("subset size must be nonnegative");
  const std::int64_t m = static_cast<std::int64_t>(hi) - lo + 1;
  if (s > m) throw ArgumentError("subset size exceeds ground range");
  last_ = binomial(m, s);
}

IndexTuple SubsetRange::unrank(std::uint64_t rank) const {
  if (rank >= binomial(static_cast<std::int64_t>(hi_) - lo_ + 1, s_)) {
    throw ArgumentError("subset rank out of range");
  }
  const std::int64_t m = static_cast<std::int64_t>(hi_) - lo_ + 1;
  IndexTuple out(static_cast<std::size_t>(s_));
  std::int64_t c = 0;
  for (int i = 0; i < s_; ++i) {
    for (;; ++c) {
      const std::uint64_t with_c = binomial(m - 1 - c, s_ - 1 - i);
      if (rank < with_c) break;
      rank -= with_c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(c) + lo_;
    ++c;
  }
  return out;
}

SubsetRange SubsetRange::slice(std::uint64_t first, std::uint64_t last) const {
  if (first > last || last > last_ || first < first_) {
    throw ArgumentError("invalid subset slice");
  }
  SubsetRange r = *this;
  r.first_ = first;
  r.last_ = last;
  return r;
}

SubsetRange::iterator SubsetRange::begin() const {
  if (first_ == last_) return end();
  return iterator(unrank(first_), hi_, first_);
}

SubsetRange::iterator SubsetRange::end() const { return iterator({}, hi_, last_); }

SubsetRange::iterator& SubsetRange::iterator::operator++() {
  ++rank_;
  const int s = static_cast<int>(tuple_.size());
  for (int i = s - 1; i >= 0; --i) {
    if (tuple_[i] < hi_ - (s - 1 - i)) {
      ++tuple_[i];
      for (int j = i + 1; j < s; ++j) tuple_[j] = tuple_[j - 1] + 1;
      break;
    }
  }
  return *this;
}

SubsetRange enumerate_subsets(int ground_lo, int ground_hi, int s) {
  return SubsetRange(ground_lo, ground_hi, s);
}

std::uint64_t determinant_count(int m, int n) {
  if (n < 1 || m < 1) throw ArgumentError("determinant_count requires m, n >= 1");
  if (n > m) throw ArgumentError("determinant_count requires n <= m");
  return binomial(m, n);
}

double lu_determinant(Matrix& a) {
  if (a.rows() != a.cols()) throw ArgumentError("determinant of a non-square matrix");
  if (a.rows() == 0) return 1.0;
  return lu_det_raw(a.data(), static_cast<int>(a.rows()));
}

double unit_cube_volume(const Matrix& Z, const DirectOptions& options) {
  require_finite(Z);
  const int n = static_cast<int>(Z.rows());
  const int m = static_cast<int>(Z.cols());
  if (n > m) return 0.0;

  const std::uint64_t count = binomial(m, n);
  if (options.budget != 0 && count > options.budget) {
    throw ArgumentError("direct volume needs " + std::to_string(count) +
                        " determinants, above the budget of " +
                        std::to_string(options.budget));
  }

  const SubsetRange all(0, m - 1, n);
  if (count <= kPairwiseThreshold) return abs_det_sum<PlainSum>(Z, all);

  const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  auto work = [&](std::uint64_t first_chunk, std::uint64_t stride) {
    for (std::uint64_t c = first_chunk; c < chunks; c += stride) {
      const auto slice = all.slice(c * kChunk, std::min(count, (c + 1) * kChunk));
      partial[c] = abs_det_sum<PairwiseAccumulator>(Z, slice);
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                           static_cast<unsigned>(chunks)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return pairwise_sum(partial);
}

double symmetric_volume(const Matrix& Z, const DirectOptions& options) {
  const double unit = unit_cube_volume(Z, options);
  return std::ldexp(unit, static_cast<int>(Z.rows()));
}

}  // namespace zonovol
