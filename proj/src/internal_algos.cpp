#include "xmem/internal_algos.hpp"

#include <stdexcept>

namespace xmem {

void internal_sort(std::span<Element> elems, InternalSortAlgo algo) {
  switch (algo) {
    case InternalSortAlgo::radix:
      detail::radix_sort(elems, [](Element e) { return e; });
      break;
    case InternalSortAlgo::comparison:
      std::sort(elems.begin(), elems.end());
      break;
  }
}

Element select_kth(std::span<const Element> elems, std::size_t k) {
  if (k < 1 || k > elems.size()) {
    throw std::out_of_range("select_kth: k=" + std::to_string(k) + " for " +
                            std::to_string(elems.size()) + " elements");
  }
  std::vector<Element> scratch(elems.begin(), elems.end());
  auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

SplitterSet::SplitterSet(std::vector<Element> values) : values_(std::move(values)) {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i - 1] >= values_[i]) {
      throw ConfigError("splitters must be strictly increasing");
    }
  }
  rebuild_table();
}

void SplitterSet::insert(Element x) {
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  if (it != values_.end() && *it == x) {
    throw ConfigError("duplicate splitter");
  }
  values_.insert(it, x);
  rebuild_table();
}

std::size_t SplitterSet::bucket_of(Element e) const {
  return static_cast<std::size_t>(
      std::upper_bound(values_.begin(), values_.end(), e) - values_.begin());
}

void SplitterSet::rebuild_table() {
  const std::size_t slots = std::size_t{1} << kPrefixBits;
  table_.assign(slots + 1, 0);
  if (values_.empty()) {
    return;
  }
  // table_[p] = number of splitters whose prefix is < p
  std::size_t idx = 0;
  for (std::size_t p = 0; p <= slots; ++p) {
    while (idx < values_.size() && (values_[idx] >> (64 - kPrefixBits)) < p) {
      ++idx;
    }
    table_[p] = static_cast<std::uint32_t>(idx);
  }
}

std::size_t SplitterSet::dispatch(Element e, std::size_t& probes) const {
  probes += 1;
  if (values_.empty()) {
    return 0;
  }
  std::size_t p = e >> (64 - kPrefixBits);
  std::size_t lo = table_[p];
  std::size_t hi = table_[p + 1];
  // count splitters <= e inside the prefix class
  while (lo < hi) {
    probes += 1;
    std::size_t mid = (lo + hi) / 2;
    if (values_[mid] <= e) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::size_t linear_split(std::span<const Element> elems, const SplitterSet& splitters,
                         std::span<std::uint32_t> out) {
  if (out.size() != elems.size()) {
    throw std::invalid_argument("linear_split: output span size mismatch");
  }
  std::size_t probes = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(splitters.dispatch(elems[i], probes));
  }
  return probes;
}

} // namespace xmem
