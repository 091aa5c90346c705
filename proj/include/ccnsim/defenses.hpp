#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccnsim/content_store.hpp"
#include "ccnsim/crypto.hpp"
#include "ccnsim/name.hpp"
#include "ccnsim/time.hpp"

namespace ccnsim {

/// Windowed per-face observations kept by edge routers for the detectors.
/// Windows are pruned before every read; per-(face,name) rings are capped so
/// flood traffic cannot grow them without bound.
class FaceStats {
 public:
  explicit FaceStats(SimTime window = sec(10)) : window_(window) {}

  void record_interest(int face, const Name& name, bool has_exclude,
                       SimTime now);
  void record_lookup(int face, bool hit, SimTime now);

  SimTime window() const { return window_; }

  /// In-window request timestamps for (face, name), oldest first.
  std::vector<SimTime> name_timestamps(int face, const Name& name,
                                       SimTime now) const;
  std::uint64_t lookups(int face, SimTime now) const;
  std::uint64_t hits(int face, SimTime now) const;
  std::uint64_t interests(int face, SimTime now) const;
  std::uint64_t excludes(int face, SimTime now) const;

  std::vector<int> faces() const;
  std::vector<std::pair<int, Name>> tracked_names() const;

 private:
  static constexpr std::size_t kRingCap = 256;

  struct FaceWindow {
    std::deque<SimTime> interests;
    std::deque<SimTime> lookups;
    std::deque<SimTime> hits;
    std::deque<SimTime> excludes;
  };

  static void prune(std::deque<SimTime>& q, SimTime cutoff);
  static std::uint64_t count_in_window(const std::deque<SimTime>& q,
                                       SimTime cutoff);

  SimTime window_;
  std::map<int, FaceWindow> per_face_;
  std::map<std::pair<int, Name>, std::deque<SimTime>> per_name_;
};

enum class ResponsePolicy { none, ignore_for_caching, drop_interests,
                            blacklist_producer };

std::string to_string(ResponsePolicy p);
ResponsePolicy response_policy_from_string(const std::string& s);

struct DetectorConfig {
  SimTime window = sec(10);
  SimTime check_interval = sec(1);

  bool periodicity_enabled = false;
  std::uint64_t periodicity_m = 5;   // min same-name repeats
  double periodicity_cv_max = 0.05;  // max coefficient of variation

  bool hit_rate_enabled = false;
  double hit_rate_max = 0.9;
  std::uint64_t hit_rate_min_lookups = 20;

  bool exclude_enabled = false;
  double exclude_rate_max = 0.2;  // fraction of interests carrying an exclude

  bool pollution_enabled = false;
  std::uint64_t pollution_min_faces = 2;  // flag entries with fewer requesters
  double pollution_share_min = 0.25;      // ... when they fill this cache share

  ResponsePolicy response = ResponsePolicy::none;
};

struct Flag {
  std::string detector;  // periodicity | hit_rate | exclude | pollution
  int face = -1;         // -1 when the flag is not face-specific
  std::optional<Name> name;

  auto operator<=>(const Flag&) const = default;
};

/// Flags (face, name) pairs probed with near-constant period: ≥ m in-window
/// same-name requests whose inter-arrival coefficient of variation ≤ cv_max.
std::vector<Flag> periodic_query_detector(const FaceStats& stats,
                                          const DetectorConfig& cfg,
                                          SimTime now);

/// Flags faces whose rolling hit rate exceeds hit_rate_max (given enough
/// lookups to mean anything).
std::vector<Flag> hit_rate_detector(const FaceStats& stats,
                                    const DetectorConfig& cfg, SimTime now);

/// Flags faces whose fraction of exclude-bearing interests exceeds the limit.
std::vector<Flag> exclude_usage_detector(const FaceStats& stats,
                                         const DetectorConfig& cfg,
                                         SimTime now);

/// Flags cached names requested by fewer than pollution_min_faces distinct
/// faces when such names jointly occupy more than pollution_share_min of
/// capacity; the requesting faces are flagged too.
std::vector<Flag> pollution_detector(const ContentStore& cs,
                                     const DetectorConfig& cfg);

/// Mutable response state a router consults in its pipeline.
struct ResponseState {
  std::set<int> ignored_faces;          // requests don't count toward caching
  std::set<int> dropped_faces;          // interests dropped outright
  std::set<KeyId> blacklisted_producers;  // content under these keys not cached
};

/// Applies one flag under a policy. blacklist_producer resolves the flagged
/// name to the signing key of the cached object, when present.
void apply_response(ResponseState& state, const Flag& flag,
                    ResponsePolicy policy, const ContentStore& cs);

}  // namespace ccnsim
