#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "xmem/em_model.hpp"

namespace xmem {

/// A contiguous on-disk sequence of elements. Blocks are full (B elements)
/// except where noted; partial blocks track their own fill count.
struct Run {
  std::vector<BlockId> blocks;
  std::size_t len = 0;

  bool empty() const { return len == 0; }
};

/// Appends the blocks of `tail` to `head` (pure bookkeeping, no I/O).
Run concat_runs(Run head, const Run& tail);

void free_run(Disk& disk, const Run& run);

/// Uncounted full read of a run, for tests and verification.
std::vector<Element> debug_read_run(const Disk& disk, const Run& run);

/// Builds a run out of appended elements, writing a block every B elements.
/// Appended elements must already be accounted in the disk workspace; each
/// block write releases them.
class RunWriter {
 public:
  explicit RunWriter(Disk& disk);
  ~RunWriter();

  RunWriter(const RunWriter&) = delete;
  RunWriter& operator=(const RunWriter&) = delete;

  void append(Element e);
  void append(std::span<const Element> elems);

  std::size_t pending() const { return buf_.size(); }
  std::size_t total_appended() const { return len_; }

  /// Flushes any partial block and returns the finished run.
  Run finish();

 private:
  void flush_block();

  Disk& disk_;
  std::vector<Element> buf_;
  Run run_;
  std::size_t len_ = 0;
  bool finished_ = false;
};

/// Sequential reader over a run. Elements handed out stay accounted in the
/// workspace and become the caller's responsibility; anything still buffered
/// when the reader is destroyed is released.
class RunReader {
 public:
  /// With free_blocks, each input block is freed once fully consumed.
  RunReader(Disk& disk, const Run& run, bool free_blocks = false);
  ~RunReader();

  RunReader(const RunReader&) = delete;
  RunReader& operator=(const RunReader&) = delete;

  bool done() const { return consumed_ == run_.len && pos_ == buf_.size(); }
  std::size_t remaining() const { return run_.len - consumed_ + (buf_.size() - pos_); }

  /// Next element without consuming it. Reads a block if the buffer is empty.
  Element head();
  Element pop();

  /// Takes up to `n` elements (exactly n unless the run ends first).
  std::vector<Element> take(std::size_t n);

  /// Consumes and releases the rest of the run without handing it out.
  void discard_rest();

 private:
  void refill();

  Disk& disk_;
  Run run_;
  bool free_blocks_;
  std::size_t next_block_ = 0;
  std::size_t consumed_ = 0; // elements taken off disk so far
  std::vector<Element> buf_;
  std::size_t pos_ = 0;
};

/// Fixed-width record codecs over element storage. Records are sorted by
/// key(); a record of width w occupies w accounted elements in memory.
template <class R>
struct RecordTraits;

template <>
struct RecordTraits<Element> {
  static constexpr std::size_t width = 1;
  static Element key(Element r) { return r; }
  static void encode(Element r, Element* out) { *out = r; }
  static Element decode(const Element* in) { return *in; }
};

/// (tag, value) pair used by the permuting task: records sort by tag.
struct TaggedElement {
  Element tag = 0;
  Element value = 0;

  friend bool operator==(const TaggedElement&, const TaggedElement&) = default;
};

template <>
struct RecordTraits<TaggedElement> {
  static constexpr std::size_t width = 2;
  static Element key(const TaggedElement& r) { return r.tag; }
  static void encode(const TaggedElement& r, Element* out) {
    out[0] = r.tag;
    out[1] = r.value;
  }
  static TaggedElement decode(const Element* in) { return TaggedElement{in[0], in[1]}; }
};

template <class R>
class RecordWriter {
 public:
  explicit RecordWriter(Disk& disk) : inner_(disk) {
    static_assert(RecordTraits<R>::width >= 1);
    if (disk.block_size() % RecordTraits<R>::width != 0) {
      throw ConfigError("record width must divide B");
    }
  }

  void append(const R& rec) {
    Element scratch[RecordTraits<R>::width];
    RecordTraits<R>::encode(rec, scratch);
    inner_.append(std::span<const Element>(scratch, RecordTraits<R>::width));
  }

  std::size_t total_appended() const { return inner_.total_appended() / RecordTraits<R>::width; }

  Run finish() { return inner_.finish(); }

 private:
  RunWriter inner_;
};

template <class R>
class RecordReader {
 public:
  RecordReader(Disk& disk, const Run& run, bool free_blocks = false)
      : inner_(disk, run, free_blocks) {
    if (run.len % RecordTraits<R>::width != 0) {
      throw ConfigError("run length not a whole number of records");
    }
  }

  bool done() const { return inner_.done(); }
  std::size_t remaining() const { return inner_.remaining() / RecordTraits<R>::width; }

  std::vector<R> take(std::size_t n) {
    std::vector<Element> raw = inner_.take(n * RecordTraits<R>::width);
    std::vector<R> out;
    out.reserve(raw.size() / RecordTraits<R>::width);
    for (std::size_t i = 0; i < raw.size(); i += RecordTraits<R>::width) {
      out.push_back(RecordTraits<R>::decode(&raw[i]));
    }
    return out;
  }

 private:
  RunReader inner_;
};

} // namespace xmem
