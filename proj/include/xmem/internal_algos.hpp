#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "xmem/em_model.hpp"

namespace xmem {

namespace detail {

// In-place MSD radix sort (american-flag style), 8-bit digits. Runs in O(n)
// passes over word keys and needs no scratch buffer of elements, which keeps
// a sort of M elements inside the M-element workspace budget.
template <class T, class KeyFn>
void radix_sort_msd(std::span<T> v, KeyFn key, int shift) {
  constexpr std::size_t kInsertionCutoff = 48;
  if (v.size() <= kInsertionCutoff) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      T x = std::move(v[i]);
      std::size_t j = i;
      while (j > 0 && key(v[j - 1]) > key(x)) {
        v[j] = std::move(v[j - 1]);
        --j;
      }
      v[j] = std::move(x);
    }
    return;
  }

  std::array<std::size_t, 256> count{};
  for (const T& x : v) {
    ++count[(key(x) >> shift) & 0xff];
  }
  std::array<std::size_t, 257> start{};
  for (std::size_t d = 0; d < 256; ++d) {
    start[d + 1] = start[d] + count[d];
  }
  std::array<std::size_t, 256> next{};
  std::copy(start.begin(), start.begin() + 256, next.begin());

  for (std::size_t d = 0; d < 256; ++d) {
    while (next[d] < start[d + 1]) {
      std::size_t i = next[d];
      std::size_t digit = (key(v[i]) >> shift) & 0xff;
      if (digit == d) {
        ++next[d];
      } else {
        std::swap(v[i], v[next[digit]]);
        ++next[digit];
      }
    }
  }

  if (shift > 0) {
    for (std::size_t d = 0; d < 256; ++d) {
      std::span<T> bucket = v.subspan(start[d], count[d]);
      radix_sort_msd(bucket, key, shift - 8);
    }
  }
}

template <class T, class KeyFn>
void radix_sort(std::span<T> v, KeyFn key) {
  radix_sort_msd(v, key, 56);
}

} // namespace detail

enum class InternalSortAlgo {
  radix,      // RAM-model stand-in, linear passes over word keys
  comparison, // baseline for the comparison-model variants
};

/// Sorts caller-owned elements ascending, in place.
void internal_sort(std::span<Element> elems, InternalSortAlgo algo = InternalSortAlgo::radix);

/// k-th smallest by multiset rank, 1-based. Throws std::out_of_range.
Element select_kth(std::span<const Element> elems, std::size_t k);

/// Strictly increasing split elements x_1 < ... < x_s. Element e belongs to
/// bucket i where i is the number of splitters <= e (equal keys go right).
class SplitterSet {
 public:
  SplitterSet() = default;
  explicit SplitterSet(std::vector<Element> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<Element>& values() const { return values_; }

  /// Inserts a new splitter, preserving strict increase.
  void insert(Element x);

  /// Reference bucket rule via plain binary search.
  std::size_t bucket_of(Element e) const;

  // Radix-indexed jump table over splitter prefixes; probe counts feed the
  // linearity checks.
  std::size_t dispatch(Element e, std::size_t& probes) const;

 private:
  void rebuild_table();

  static constexpr int kPrefixBits = 12;
  std::vector<Element> values_;
  std::vector<std::uint32_t> table_; // per prefix: index of first splitter with prefix >= p
};

/// Writes the bucket index of every element into `out` (same length) and
/// returns the number of probe operations spent, so callers can check the
/// O(n + s) behaviour empirically. Stable by construction: assignments are
/// emitted in input order.
std::size_t linear_split(std::span<const Element> elems, const SplitterSet& splitters,
                         std::span<std::uint32_t> out);

} // namespace xmem
