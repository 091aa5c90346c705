#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ccnsim/message.hpp"
#include "ccnsim/rng.hpp"
#include "ccnsim/time.hpp"

namespace ccnsim {

enum class CachePolicy { FIFO, LRU, RANDOM, POPULARITY };

std::string to_string(CachePolicy p);
CachePolicy cache_policy_from_string(const std::string& s);

/// Content lifetime drawn at insert time.
struct LifetimeDist {
  enum class Kind { none, fixed, uniform } kind = Kind::none;
  SimTime fixed = 0;
  SimTime lo = 0;
  SimTime hi = 0;

  SimTime sample(Rng& rng) const {
    switch (kind) {
      case Kind::none: return kNever;
      case Kind::fixed: return fixed;
      case Kind::uniform: return rng.uniform_int(lo, hi);
    }
    return kNever;
  }
};

struct CsEntry {
  ContentObject object;
  SimTime insert_time = 0;
  SimTime expiry = kNever;   // insert_time + drawn lifetime
  SimTime last_use = 0;      // recency clock for LRU and idle instrumentation
  std::uint64_t seq = 0;     // insertion order for FIFO
  std::uint64_t hit_count = 0;
  std::uint64_t request_count = 0;     // lookups naming this entry exactly
  std::set<int> requester_faces;       // distinct faces that asked for it
};

/// One departure from the store, kept for instrumentation: residency and
/// idle time are the ground truth a characteristic-time estimator chases.
struct CsEviction {
  Name name;
  SimTime at = 0;
  SimTime residency = 0;  // at - insert_time
  SimTime idle = 0;       // at - last_use
  bool expired = false;   // lifetime ran out (vs. displaced or removed)
};

class ContentStore {
 public:
  struct Config {
    std::size_t capacity = 0;
    CachePolicy policy = CachePolicy::LRU;
    LifetimeDist lifetime;
    std::uint64_t popularity_k = 2;        // POPULARITY: min requests to cache
    SimTime popularity_window = sec(10);   // sliding window for those requests
  };

  struct InsertResult {
    bool inserted = false;
    std::vector<Name> evicted;
  };

  ContentStore() = default;
  explicit ContentStore(Config cfg) : cfg_(cfg) {}

  /// Exact-name or exclude-driven prefix lookup over non-expired entries.
  /// `invasive` updates recency/hit metadata; a non-invasive hit leaves the
  /// store untouched. `requester` feeds the per-entry face set either way.
  const ContentObject* lookup(const Name& name, const ExcludeFilter& exclude,
                              SimTime now, bool invasive, int requester);

  /// Records an exact-name request for POPULARITY admission. Call once per
  /// interest whose requests should count (the router filters ignored faces).
  void note_request(const Name& name, SimTime now);

  /// Seeds an entry's requester-face set (e.g. from the PIT faces that
  /// triggered the insert); detector bookkeeping only.
  void note_requesters(const Name& name, const std::set<int>& faces);

  InsertResult insert(const ContentObject& obj, SimTime now, Rng& rng);

  bool remove(const Name& name, SimTime now);
  std::size_t apply_blacklist(const std::vector<Name>& names, SimTime now);

  /// Removes entries the producer-side oracle reports stale.
  template <typename Oracle>
  std::size_t revalidate(SimTime now, Oracle&& stale) {
    std::vector<Name> doomed;
    for (auto& [name, entry] : entries_) {
      if (stale(name, entry)) doomed.push_back(name);
    }
    for (const auto& name : doomed) remove(name, now);
    return doomed.size();
  }

  /// Drops entries past their lifetime (lookup also skips them lazily).
  std::size_t purge_expired(SimTime now);

  bool contains(const Name& name, SimTime now) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return cfg_.capacity; }
  const Config& config() const { return cfg_; }
  const std::map<Name, CsEntry>& entries() const { return entries_; }
  const CsEntry* find(const Name& name) const;

  /// Instrumentation streams; callers drain them.
  std::vector<CsEviction>& evictions() { return evictions_; }
  const std::vector<CsEviction>& evictions() const { return evictions_; }
  const std::vector<std::pair<Name, SimTime>>& inserts() const {
    return inserts_;
  }

 private:
  void erase_entry(std::map<Name, CsEntry>::iterator it, SimTime now,
                   bool expired);
  void evict_one(SimTime now, Rng& rng, std::vector<Name>& out);
  std::uint64_t recent_requests(const Name& name, SimTime now);

  Config cfg_;
  std::map<Name, CsEntry> entries_;
  std::map<Name, std::deque<SimTime>> request_history_;  // POPULARITY window
  std::uint64_t next_seq_ = 0;
  std::vector<CsEviction> evictions_;
  std::vector<std::pair<Name, SimTime>> inserts_;
};

}  // namespace ccnsim
