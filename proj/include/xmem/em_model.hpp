#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xmem {

/// The indivisible unit of the model: one word-sized key.
using Element = std::uint64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad (M, B) or algorithm/layout configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Internal-memory element budget exceeded (resident > M with enforcement on).
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Invalid block access: unallocated id, overflow, double free, zero-element I/O.
class BlockError : public Error {
 public:
  using Error::Error;
};

struct DiskConfig {
  std::size_t capacity_m = 0;   // M, in elements
  std::size_t block_size_b = 0; // B, in elements
  bool enforce_budget = true;

  void validate() const; // throws ConfigError unless M >= 2B and B >= 2
};

class BlockId {
 public:
  BlockId() = default;
  explicit BlockId(std::size_t index) : index_(index) {}
  std::size_t index() const { return index_; }
  friend bool operator==(BlockId a, BlockId b) { return a.index_ == b.index_; }

 private:
  std::size_t index_ = SIZE_MAX;
};

struct IoStats {
  std::uint64_t io_count = 0;
  std::uint64_t elements_transferred = 0;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::size_t peak_resident = 0;
};

namespace detail {
class DiskBackend;
}

/// Simulated external memory. Blocks hold up to B elements; every read/write
/// call is one I/O transferring its actual element count. Elements brought
/// into internal memory are tracked against the M budget: read_block retains
/// them, write_block releases them, and algorithms account for generated or
/// discarded copies via retain/release (or the Workspace RAII helper).
///
/// A disk instance is single-threaded; distinct instances are independent.
class Disk {
 public:
  explicit Disk(DiskConfig config);                              // in-memory backend
  Disk(DiskConfig config, const std::filesystem::path& path);    // file backend
  ~Disk();

  Disk(const Disk&) = delete;
  Disk& operator=(const Disk&) = delete;

  BlockId alloc_block();
  void free_block(BlockId id);

  /// Reads the first `count` elements stored in the block (count >= 1).
  std::vector<Element> read_block(BlockId id, std::size_t count);
  /// Overwrites the block with `elems` (1..B elements).
  void write_block(BlockId id, std::span<const Element> elems);

  /// Stored element count of an allocated block. Bookkeeping, not an I/O.
  std::size_t block_fill(BlockId id) const;

  /// Registers n elements materialized in internal memory (generator output,
  /// deliberate copies). Throws BudgetError if resident would exceed M.
  void retain(std::size_t n);
  /// Unregisters n in-memory elements (consumed or discarded copies).
  void release(std::size_t n);

  std::size_t resident() const { return resident_; }
  /// Elements of internal memory still unclaimed (M - resident).
  std::size_t budget_free() const;

  const DiskConfig& config() const { return config_; }
  std::size_t block_size() const { return config_.block_size_b; }
  std::size_t capacity() const { return config_.capacity_m; }

  IoStats stats() const { return stats_; }
  /// Zeroes counters; peak_resident restarts from the current resident count.
  void reset_stats();

  /// Uncounted read of a whole block, for tests and output verification only.
  std::vector<Element> debug_read_block(BlockId id) const;

 private:
  void check_allocated(BlockId id, const char* what) const;

  DiskConfig config_;
  IoStats stats_;
  std::size_t resident_ = 0;
  std::unique_ptr<detail::DiskBackend> backend_;
};

/// RAII accounting handle: whatever is still held when the workspace goes out
/// of scope is released back to the disk budget.
class Workspace {
 public:
  explicit Workspace(Disk& disk) : disk_(&disk) {}
  ~Workspace() { disk_->release(held_); }

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  void add(std::size_t n) {
    disk_->retain(n);
    held_ += n;
  }
  void drop(std::size_t n);
  std::size_t held() const { return held_; }

 private:
  Disk* disk_;
  std::size_t held_ = 0;
};

} // namespace xmem
