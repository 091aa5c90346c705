#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "ccnsim/name.hpp"
#include "ccnsim/time.hpp"

namespace ccnsim {

struct PitEntry {
  std::set<int> faces;
  std::set<std::uint64_t> nonces;
  SimTime expiry = 0;
};

/// Pending Interest Table: at most one entry per exact name. Tracks a
/// time-weighted occupancy integral so mean occupancy is exact, not sampled.
class Pit {
 public:
  Pit() = default;
  Pit(std::size_t capacity, SimTime timeout)
      : capacity_(capacity), timeout_(timeout) {}

  /// Non-expired entry for name; expired entries are dropped on contact.
  PitEntry* find(const Name& name, SimTime now);

  bool full() const { return entries_.size() >= capacity_; }
  std::size_t size() const { return entries_.size(); }
  SimTime timeout() const { return timeout_; }

  /// Creates a fresh entry; pre: no live entry for name and not full.
  PitEntry& create(const Name& name, int face, std::uint64_t nonce, SimTime now);

  /// Adds a face + nonce to an existing entry. The original expiry is kept:
  /// aggregation does not extend an entry's life.
  void aggregate(PitEntry& entry, int face, std::uint64_t nonce);

  /// Removes and returns the faces of the entry for name, if any.
  std::set<int> consume(const Name& name, SimTime now);

  /// Drops entries whose expiry ≤ now; returns how many.
  std::size_t expire(SimTime now);

  /// Restarts occupancy statistics at `now` (e.g. end of warmup).
  void begin_stats(SimTime now);
  void finalize_stats(SimTime now);
  double mean_occupancy() const;
  std::size_t peak_occupancy() const { return peak_; }
  std::uint64_t expired_total() const { return expired_total_; }

  const std::map<Name, PitEntry>& entries() const { return entries_; }

 private:
  void advance_clock(SimTime now);

  std::size_t capacity_ = 65536;
  SimTime timeout_ = sec(4);
  std::map<Name, PitEntry> entries_;
  std::uint64_t expired_total_ = 0;

  // occupancy integral: sum of size × dt since stats_start_
  SimTime stats_start_ = 0;
  SimTime last_change_ = 0;
  SimTime stats_end_ = 0;
  double area_ = 0;
  std::size_t peak_ = 0;
};

}  // namespace ccnsim
