#include "xmem/em_model.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <optional>

#include <json.hpp>

namespace xmem {

void DiskConfig::validate() const {
  if (block_size_b < 2) {
    throw ConfigError("block size B must be >= 2, got " + std::to_string(block_size_b));
  }
  if (capacity_m < 2 * block_size_b) {
    throw ConfigError("memory capacity M must be >= 2B (M=" + std::to_string(capacity_m) +
                      ", B=" + std::to_string(block_size_b) + ")");
  }
}

namespace detail {

class DiskBackend {
 public:
  virtual ~DiskBackend() = default;
  virtual std::size_t alloc() = 0;
  virtual void free(std::size_t index) = 0;
  virtual bool allocated(std::size_t index) const = 0;
  virtual std::size_t fill(std::size_t index) const = 0;
  virtual void store(std::size_t index, std::span<const Element> elems) = 0;
  virtual void load(std::size_t index, std::size_t count, Element* out) const = 0;
};

class MemBackend final : public DiskBackend {
 public:
  std::size_t alloc() override {
    if (!free_list_.empty()) {
      std::size_t idx = free_list_.back();
      free_list_.pop_back();
      blocks_[idx].emplace();
      return idx;
    }
    blocks_.emplace_back(std::vector<Element>{});
    return blocks_.size() - 1;
  }

  void free(std::size_t index) override {
    blocks_[index].reset();
    free_list_.push_back(index);
  }

  bool allocated(std::size_t index) const override {
    return index < blocks_.size() && blocks_[index].has_value();
  }

  std::size_t fill(std::size_t index) const override { return blocks_[index]->size(); }

  void store(std::size_t index, std::span<const Element> elems) override {
    blocks_[index]->assign(elems.begin(), elems.end());
  }

  void load(std::size_t index, std::size_t count, Element* out) const override {
    const auto& data = *blocks_[index];
    std::copy_n(data.begin(), count, out);
  }

 private:
  std::vector<std::optional<std::vector<Element>>> blocks_;
  std::vector<std::size_t> free_list_;
};

// Flat binary file: block i at byte offset i*B*8, little-endian u64 elements.
// A JSON sidecar (<path>.meta.json) records B and per-block fill counts.
class FileBackend final : public DiskBackend {
 public:
  FileBackend(const std::filesystem::path& path, std::size_t block_size)
      : path_(path), block_size_(block_size) {
    if (std::filesystem::exists(sidecar_path())) {
      load_sidecar();
    }
    file_.open(path_, std::ios::in | std::ios::out | std::ios::binary);
    if (!file_.is_open()) {
      file_.open(path_, std::ios::out | std::ios::binary);
      file_.close();
      file_.open(path_, std::ios::in | std::ios::out | std::ios::binary);
    }
    if (!file_.is_open()) {
      throw Error("cannot open disk file " + path_.string());
    }
  }

  ~FileBackend() override {
    try {
      write_sidecar();
    } catch (...) {
      // best effort on teardown
    }
  }

  std::size_t alloc() override {
    if (!free_list_.empty()) {
      std::size_t idx = free_list_.back();
      free_list_.pop_back();
      fills_[idx] = 0;
      allocated_[idx] = true;
      return idx;
    }
    fills_.push_back(0);
    allocated_.push_back(true);
    return fills_.size() - 1;
  }

  void free(std::size_t index) override {
    allocated_[index] = false;
    fills_[index] = 0;
    free_list_.push_back(index);
  }

  bool allocated(std::size_t index) const override {
    return index < allocated_.size() && allocated_[index];
  }

  std::size_t fill(std::size_t index) const override { return fills_[index]; }

  void store(std::size_t index, std::span<const Element> elems) override {
    std::vector<unsigned char> buf(elems.size() * 8);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      Element e = elems[i];
      for (int byte = 0; byte < 8; ++byte) {
        buf[i * 8 + byte] = static_cast<unsigned char>(e >> (8 * byte));
      }
    }
    file_.seekp(static_cast<std::streamoff>(index * block_size_ * 8));
    file_.write(reinterpret_cast<const char*>(buf.data()),
                static_cast<std::streamsize>(buf.size()));
    file_.flush();
    fills_[index] = elems.size();
  }

  void load(std::size_t index, std::size_t count, Element* out) const override {
    std::vector<unsigned char> buf(count * 8);
    file_.seekg(static_cast<std::streamoff>(index * block_size_ * 8));
    file_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    for (std::size_t i = 0; i < count; ++i) {
      Element e = 0;
      for (int byte = 0; byte < 8; ++byte) {
        e |= static_cast<Element>(buf[i * 8 + byte]) << (8 * byte);
      }
      out[i] = e;
    }
  }

 private:
  std::filesystem::path sidecar_path() const {
    return path_.string() + ".meta.json";
  }

  void write_sidecar() const {
    nlohmann::json meta;
    meta["block_size_b"] = block_size_;
    meta["fills"] = fills_;
    meta["allocated"] = allocated_;
    std::ofstream out(sidecar_path(), std::ios::trunc);
    out << meta.dump(2) << "\n";
  }

  void load_sidecar() {
    std::ifstream in(sidecar_path());
    nlohmann::json meta = nlohmann::json::parse(in);
    if (meta.at("block_size_b").get<std::size_t>() != block_size_) {
      throw ConfigError("disk file " + path_.string() + " was written with a different B");
    }
    fills_ = meta.at("fills").get<std::vector<std::size_t>>();
    allocated_ = meta.at("allocated").get<std::vector<bool>>();
    for (std::size_t i = 0; i < allocated_.size(); ++i) {
      if (!allocated_[i]) free_list_.push_back(i);
    }
  }

  std::filesystem::path path_;
  std::size_t block_size_;
  mutable std::fstream file_;
  std::vector<std::size_t> fills_;
  std::vector<bool> allocated_;
  std::vector<std::size_t> free_list_;
};

} // namespace detail

Disk::Disk(DiskConfig config) : config_(config) {
  config_.validate();
  backend_ = std::make_unique<detail::MemBackend>();
}

Disk::Disk(DiskConfig config, const std::filesystem::path& path) : config_(config) {
  config_.validate();
  backend_ = std::make_unique<detail::FileBackend>(path, config_.block_size_b);
}

Disk::~Disk() = default;

BlockId Disk::alloc_block() { return BlockId(backend_->alloc()); }

void Disk::free_block(BlockId id) {
  check_allocated(id, "free");
  backend_->free(id.index());
}

void Disk::check_allocated(BlockId id, const char* what) const {
  if (!backend_->allocated(id.index())) {
    throw BlockError(std::string(what) + " of unallocated block " + std::to_string(id.index()));
  }
}

std::vector<Element> Disk::read_block(BlockId id, std::size_t count) {
  check_allocated(id, "read");
  if (count == 0) {
    throw BlockError("zero-element read");
  }
  std::size_t stored = backend_->fill(id.index());
  if (count > stored) {
    throw BlockError("read of " + std::to_string(count) + " elements from block holding " +
                     std::to_string(stored));
  }
  retain(count); // elements enter the workspace before the transfer completes
  std::vector<Element> out(count);
  backend_->load(id.index(), count, out.data());
  stats_.io_count += 1;
  stats_.reads += 1;
  stats_.elements_transferred += count;
  return out;
}

void Disk::write_block(BlockId id, std::span<const Element> elems) {
  check_allocated(id, "write");
  if (elems.empty()) {
    throw BlockError("zero-element write");
  }
  if (elems.size() > config_.block_size_b) {
    throw BlockError("write of " + std::to_string(elems.size()) + " elements exceeds B=" +
                     std::to_string(config_.block_size_b));
  }
  backend_->store(id.index(), elems);
  stats_.io_count += 1;
  stats_.writes += 1;
  stats_.elements_transferred += elems.size();
  release(elems.size()); // elements leave internal memory
}

std::size_t Disk::block_fill(BlockId id) const {
  check_allocated(id, "fill query");
  return backend_->fill(id.index());
}

void Disk::retain(std::size_t n) {
  if (config_.enforce_budget && resident_ + n > config_.capacity_m) {
    throw BudgetError("workspace overflow: " + std::to_string(resident_) + " resident + " +
                      std::to_string(n) + " > M=" + std::to_string(config_.capacity_m));
  }
  resident_ += n;
  stats_.peak_resident = std::max(stats_.peak_resident, resident_);
}

void Disk::release(std::size_t n) {
  if (n > resident_) {
    throw BudgetError("workspace release of " + std::to_string(n) +
                      " elements but only " + std::to_string(resident_) + " accounted");
  }
  resident_ -= n;
}

std::size_t Disk::budget_free() const {
  return config_.capacity_m > resident_ ? config_.capacity_m - resident_ : 0;
}

void Disk::reset_stats() {
  stats_ = IoStats{};
  stats_.peak_resident = resident_;
}

std::vector<Element> Disk::debug_read_block(BlockId id) const {
  check_allocated(id, "debug read");
  std::vector<Element> out(backend_->fill(id.index()));
  backend_->load(id.index(), out.size(), out.data());
  return out;
}

void Workspace::drop(std::size_t n) {
  if (n > held_) {
    throw BudgetError("workspace drop of " + std::to_string(n) + " but holding " +
                      std::to_string(held_));
  }
  disk_->release(n);
  held_ -= n;
}

} // namespace xmem
