#ifndef ZONOVOL_ZONOTOPE_HPP_
#define ZONOVOL_ZONOTOPE_HPP_

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <vector>

#include <Eigen/Dense>

namespace zonovol {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Strictly increasing list of indices drawn from a ground range.
using IndexTuple = std::vector<int>;

/// Binomial coefficient C(m, k).  Throws ArgumentError on overflow of 64 bits.
std::uint64_t binomial(std::int64_t m, std::int64_t k);

/// Lexicographically ordered s-subsets of {lo, ..., hi}, streamed.
///
/// A range covers the ranks [first, last) of the full enumeration, so the
/// tuple sequence can be split into disjoint slices and processed
/// independently.
class SubsetRange {
 public:
  SubsetRange(int lo, int hi, int s);

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = IndexTuple;
    using difference_type = std::ptrdiff_t;
    using pointer = const IndexTuple*;
    using reference = const IndexTuple&;

    iterator() = default;

    reference operator*() const noexcept { return tuple_; }
    pointer operator->() const noexcept { return &tuple_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    bool operator==(const iterator& other) const noexcept {
      return rank_ == other.rank_;
    }

    std::uint64_t rank() const noexcept { return rank_; }

   private:
    friend class SubsetRange;
    iterator(IndexTuple tuple, int hi, std::uint64_t rank)
        : tuple_(std::move(tuple)), hi_(hi), rank_(rank) {}

    IndexTuple tuple_;
    int hi_ = 0;
    std::uint64_t rank_ = 0;
  };

  iterator begin() const;
  iterator end() const;

  /// Number of tuples in this range.
  std::uint64_t size() const noexcept { return last_ - first_; }

  /// Tuple at absolute lexicographic rank `rank` of the full enumeration.
  IndexTuple unrank(std::uint64_t rank) const;

  /// Sub-range covering absolute ranks [first, last).
  SubsetRange slice(std::uint64_t first, std::uint64_t last) const;

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return hi_; }
  int subset_size() const noexcept { return s_; }

 private:
  int lo_;
  int hi_;
  int s_;
  std::uint64_t first_ = 0;
  std::uint64_t last_ = 0;
};

/// All s-subsets of {ground_lo..ground_hi} in lexicographic order.  s = 0
/// yields the single empty tuple.
SubsetRange enumerate_subsets(int ground_lo, int ground_hi, int s);

/// Number of n x n determinants in the direct volume sum over m generators.
std::uint64_t determinant_count(int m, int n);

/// Determinant by LU with partial pivoting.  `a` is overwritten.
double lu_determinant(Matrix& a);

struct DirectOptions {
  /// Worker threads for the determinant sum.  The reduction order is fixed
  /// by rank chunks, so the result does not depend on this value.
  unsigned threads = 1;
  /// Refuse (ArgumentError) when more determinants than this would be
  /// needed.  0 means unlimited.
  std::uint64_t budget = 0;
};

/// Volume of { sum c_i z_i : c_i in [0, 1] } as the sum of |det| over all
/// n-column subsets.  Rank-deficient generator sets give 0.
double unit_cube_volume(const Matrix& Z, const DirectOptions& options = {});

/// Volume for coefficients in [-1, 1]: 2^n * unit_cube_volume(Z).
double symmetric_volume(const Matrix& Z, const DirectOptions& options = {});

}  // namespace zonovol

#endif  // ZONOVOL_ZONOTOPE_HPP_
