#pragma once

#include <cstdint>

#include "xmem/em_model.hpp"

namespace xmem {

/// Model parameters for the bound formulas. b_avg is the average number of
/// elements moved per I/O (1 <= b_avg <= B).
struct BoundInputs {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t b_block = 0;
  double b_avg = 0;

  void validate() const; // N >= 2M, M >= 2B, B >= 2, 1 <= b_avg <= B
};

/// Per-block I/O cost of optimal external sorting: max(1, ceil(log_{M/B}(N/B))),
/// evaluated exactly in integer arithmetic.
std::uint64_t sort_e(std::uint64_t n, std::uint64_t m, std::uint64_t b_block);

/// Governing expression of the permuting lower bound (constants stripped):
/// N*log2(N/B) / (log2(N) + b*log2(M/b)).
double permute_lb(const BoundInputs& in);

struct TransferBound {
  double value = 0;    // N * sort_E(N)
  bool in_regime = false; // (N/B)*sort_E(N) < N, where the bound applies
};

/// Element-transfer lower bound of I/O-optimal sorting (constant-free).
TransferBound transfer_lb(std::uint64_t n, std::uint64_t m, std::uint64_t b_block);

struct TallCacheBound {
  double value = 0;        // N * log2(N) / log2(M), i.e. N*log_M(N)
  double io_threshold = 0; // eps*N/4: bound applies to algorithms under this I/O count
  bool applicable = false; // B <= M^(1-eps)
};

/// Transfer bound under the tall cache assumption B <= M^(1-eps).
TallCacheBound tall_cache_transfer_lb(std::uint64_t n, std::uint64_t m, std::uint64_t b_block,
                                      double eps);

} // namespace xmem
