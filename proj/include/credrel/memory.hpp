#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>

namespace credrel {

/// Byte accounting of the engine's large live arrays (grids, weight tables,
/// sample buffers, member CDFs). Peak is the high-water mark of the sum of
/// outstanding holds; it is not process RSS.
class MemoryLedger {
 public:
  class Hold {
   public:
    Hold() = default;
    Hold(MemoryLedger* ledger, std::int64_t bytes) : ledger_(ledger), bytes_(bytes) {
      if (ledger_) ledger_->add(bytes_);
    }
    Hold(Hold&& o) noexcept : ledger_(o.ledger_), bytes_(o.bytes_) { o.ledger_ = nullptr; }
    Hold& operator=(Hold&& o) noexcept {
      if (this != &o) {
        release();
        ledger_ = o.ledger_;
        bytes_ = o.bytes_;
        o.ledger_ = nullptr;
      }
      return *this;
    }
    Hold(const Hold&) = delete;
    Hold& operator=(const Hold&) = delete;
    ~Hold() { release(); }

   private:
    void release() {
      if (ledger_) ledger_->add(-bytes_);
      ledger_ = nullptr;
    }
    MemoryLedger* ledger_ = nullptr;
    std::int64_t bytes_ = 0;
  };

  void add(std::int64_t bytes) noexcept {
    const std::int64_t now = live_.fetch_add(bytes) + bytes;
    std::int64_t prev = peak_.load();
    while (now > prev && !peak_.compare_exchange_weak(prev, now)) {
    }
  }

  std::int64_t live() const noexcept { return live_.load(); }
  std::int64_t peak() const noexcept { return peak_.load(); }

 private:
  std::atomic<std::int64_t> live_{0};
  std::atomic<std::int64_t> peak_{0};
};

/// Hold on `ledger` (may be null) for `count` doubles.
inline MemoryLedger::Hold hold_doubles(MemoryLedger* ledger, std::size_t count) {
  return {ledger, static_cast<std::int64_t>(count * sizeof(double))};
}

}  // namespace credrel
