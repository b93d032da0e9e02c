#include "xmem/run_io.hpp"

#include <algorithm>

namespace xmem {

Run concat_runs(Run head, const Run& tail) {
  head.blocks.insert(head.blocks.end(), tail.blocks.begin(), tail.blocks.end());
  head.len += tail.len;
  return head;
}

void free_run(Disk& disk, const Run& run) {
  for (BlockId id : run.blocks) {
    disk.free_block(id);
  }
}

std::vector<Element> debug_read_run(const Disk& disk, const Run& run) {
  std::vector<Element> out;
  out.reserve(run.len);
  for (BlockId id : run.blocks) {
    auto block = disk.debug_read_block(id);
    out.insert(out.end(), block.begin(), block.end());
  }
  if (out.size() != run.len) {
    throw BlockError("run length mismatch: blocks hold " + std::to_string(out.size()) +
                     " elements, run says " + std::to_string(run.len));
  }
  return out;
}

RunWriter::RunWriter(Disk& disk) : disk_(disk) { buf_.reserve(disk.block_size()); }

RunWriter::~RunWriter() {
  if (!finished_ && !buf_.empty()) {
    disk_.release(buf_.size()); // abandoned partial block
  }
}

void RunWriter::flush_block() {
  BlockId id = disk_.alloc_block();
  disk_.write_block(id, buf_);
  run_.blocks.push_back(id);
  buf_.clear();
}

void RunWriter::append(Element e) {
  buf_.push_back(e);
  ++len_;
  if (buf_.size() == disk_.block_size()) {
    flush_block();
  }
}

void RunWriter::append(std::span<const Element> elems) {
  for (Element e : elems) {
    append(e);
  }
}

Run RunWriter::finish() {
  if (!buf_.empty()) {
    flush_block();
  }
  run_.len = len_;
  finished_ = true;
  return std::move(run_);
}

RunReader::RunReader(Disk& disk, const Run& run, bool free_blocks)
    : disk_(disk), run_(run), free_blocks_(free_blocks) {}

RunReader::~RunReader() {
  if (pos_ < buf_.size()) {
    disk_.release(buf_.size() - pos_);
  }
}

void RunReader::refill() {
  std::size_t fill = std::min(disk_.block_size(), run_.len - consumed_);
  BlockId id = run_.blocks[next_block_];
  buf_ = disk_.read_block(id, fill);
  pos_ = 0;
  consumed_ += fill;
  if (free_blocks_) {
    disk_.free_block(id);
  }
  ++next_block_;
}

Element RunReader::head() {
  if (pos_ == buf_.size()) {
    refill();
  }
  return buf_[pos_];
}

Element RunReader::pop() {
  Element e = head();
  ++pos_;
  return e;
}

std::vector<Element> RunReader::take(std::size_t n) {
  std::vector<Element> out;
  out.reserve(std::min(n, remaining()));
  while (out.size() < n && !done()) {
    if (pos_ == buf_.size()) {
      refill();
    }
    std::size_t grab = std::min(n - out.size(), buf_.size() - pos_);
    out.insert(out.end(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_),
               buf_.begin() + static_cast<std::ptrdiff_t>(pos_ + grab));
    pos_ += grab;
  }
  return out;
}

void RunReader::discard_rest() {
  if (pos_ < buf_.size()) {
    disk_.release(buf_.size() - pos_);
    pos_ = buf_.size();
  }
  while (consumed_ < run_.len) {
    refill();
    disk_.release(buf_.size());
    pos_ = buf_.size();
  }
}

} // namespace xmem
