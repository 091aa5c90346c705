#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ccnsim/content_store.hpp"
#include "ccnsim/crypto.hpp"
#include "ccnsim/defenses.hpp"
#include "ccnsim/fib.hpp"
#include "ccnsim/message.hpp"
#include "ccnsim/pit.hpp"
#include "ccnsim/rng.hpp"
#include "ccnsim/time.hpp"

namespace ccnsim {

/// Random extra delay applied to cache hits: min + uniform(0, jitter).
struct HitDelay {
  SimTime min = 0;
  SimTime jitter = 0;
  SimTime sample(Rng& rng) const {
    return min + (jitter > 0 ? rng.uniform_int(0, jitter) : 0);
  }
};

struct RouterConfig {
  ContentStore::Config cs;
  std::size_t pit_capacity = 65536;
  SimTime pit_timeout = sec(4);

  bool verify_signatures = false;
  SimTime verify_cost = usec(50);  // simulated CPU per verification

  bool honor_no_cache = true;
  bool allow_non_invasive = true;
  bool allow_exclude = true;
  bool allow_chunk_requests = true;  // off: drop requests naming chunk ≥ 1
  HitDelay hit_delay;   // extra delay on cache hits only
  HitDelay data_delay;  // extra delay on every data response (hit or miss)
  std::optional<double> per_domain_limit;  // interests/s per first component
  std::optional<SimTime> revalidate_interval;

  // Compromised-router behavior: substitute objects under this prefix with
  // junk carrying a bad signature.
  std::optional<Name> poison_prefix;
  bool poison_unverifiable = true;       // false: sign badly under poison_key
  std::optional<KeyId> poison_key;

  std::optional<DetectorConfig> detector;
};

struct SendData {
  int face;
  ContentObject object;
  SimTime delay = 0;
};

struct ForwardInterest {
  int face;
  Interest interest;
  SimTime delay = 0;
};

using Action = std::variant<SendData, ForwardInterest>;

enum class Outcome {
  cs_hit,
  forwarded,
  aggregated,
  dup_nonce,
  domain_limited,
  pit_overflow,
  no_route,
  face_blocked,
  chunk_blocked,
  non_invasive_miss,
  delivered,
  unsolicited,
  poison_block,
};

std::string to_string(Outcome o);

struct RouterCounters {
  std::uint64_t interests = 0;
  std::uint64_t cs_lookups = 0;
  std::uint64_t cs_hits = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t aggregated = 0;
  std::uint64_t drop_dup_nonce = 0;
  std::uint64_t drop_domain_limit = 0;
  std::uint64_t drop_pit_overflow = 0;
  std::uint64_t drop_no_route = 0;
  std::uint64_t drop_face_blocked = 0;
  std::uint64_t drop_chunk_blocked = 0;
  std::uint64_t non_invasive_misses = 0;
  std::uint64_t exclude_ignored = 0;

  std::uint64_t data_in = 0;
  std::uint64_t data_faces = 0;  // SendData emissions for data arrivals
  std::uint64_t drop_unsolicited = 0;
  std::uint64_t poison_blocked = 0;
  std::uint64_t poison_substituted = 0;
  std::uint64_t verify_calls = 0;
  SimTime verify_cpu = 0;
  SimTime data_proc_delay = 0;  // added processing delay across data arrivals

  std::uint64_t cache_insertions = 0;
  std::uint64_t cache_evictions = 0;
  std::uint64_t blacklist_removed = 0;
  std::uint64_t revalidations = 0;
  std::uint64_t revalidate_removed = 0;
  std::uint64_t flags_raised = 0;
};

struct InterestResult {
  Outcome outcome;
  std::vector<Action> actions;
};

struct DataResult {
  Outcome outcome;
  std::vector<Action> actions;
};

class Router {
 public:
  Router(std::string id, RouterConfig cfg, const KeyRegistry* registry,
         std::uint64_t master_seed);

  InterestResult on_interest(const Interest& interest, int in_face, SimTime now);
  DataResult on_data(const ContentObject& obj, int in_face, SimTime now);
  std::size_t pit_expire(SimTime now) { return pit_.expire(now); }

  /// Runs configured detectors; returns newly raised flags with the response
  /// policy already applied.
  std::vector<Flag> run_detectors(SimTime now);

  std::size_t apply_blacklist(const std::vector<Name>& names, SimTime now);
  template <typename Oracle>
  std::size_t revalidate(SimTime now, Oracle&& stale) {
    std::size_t removed = cs_.revalidate(now, std::forward<Oracle>(stale));
    ++counters_.revalidations;
    counters_.revalidate_removed += removed;
    counters_.cache_evictions += removed;
    return removed;
  }

  /// Restart statistics at end of warmup.
  void begin_stats(SimTime now);
  void finalize_stats(SimTime now) { pit_.finalize_stats(now); }

  const std::string& id() const { return id_; }
  const RouterConfig& config() const { return cfg_; }
  RouterConfig& config() { return cfg_; }
  ContentStore& cs() { return cs_; }
  const ContentStore& cs() const { return cs_; }
  Pit& pit() { return pit_; }
  const Pit& pit() const { return pit_; }
  Fib& fib() { return fib_; }
  const RouterCounters& counters() const { return counters_; }
  const ResponseState& response() const { return response_; }
  ResponseState& response() { return response_; }
  const FaceStats& face_stats() const { return stats_; }
  const std::set<Flag>& flags() const { return seen_flags_; }
  Rng& cache_rng() { return cache_rng_; }

  std::string dump_state(SimTime now) const;

 private:
  bool domain_limited(const Name& name, SimTime now);
  static std::optional<std::uint64_t> chunk_suffix(const Name& name);
  ContentObject poisoned_copy(const ContentObject& obj) const;

  std::string id_;
  RouterConfig cfg_;
  const KeyRegistry* registry_;
  ContentStore cs_;
  Pit pit_;
  Fib fib_;
  FaceStats stats_;
  ResponseState response_;
  RouterCounters counters_;
  Rng cache_rng_;
  Rng delay_rng_;

  struct Bucket {
    double tokens = 0;
    SimTime last = 0;
  };
  std::map<std::string, Bucket> buckets_;
  std::set<Flag> seen_flags_;
};

}  // namespace ccnsim
