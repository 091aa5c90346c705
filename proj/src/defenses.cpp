#include "ccnsim/defenses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccnsim {

void FaceStats::prune(std::deque<SimTime>& q, SimTime cutoff) {
  while (!q.empty() && q.front() < cutoff) q.pop_front();
}

std::uint64_t FaceStats::count_in_window(const std::deque<SimTime>& q,
                                         SimTime cutoff) {
  auto it = std::lower_bound(q.begin(), q.end(), cutoff);
  return static_cast<std::uint64_t>(q.end() - it);
}

void FaceStats::record_interest(int face, const Name& name, bool has_exclude,
                                SimTime now) {
  auto& fw = per_face_[face];
  fw.interests.push_back(now);
  if (has_exclude) fw.excludes.push_back(now);
  prune(fw.interests, now - window_);
  prune(fw.excludes, now - window_);

  auto& ring = per_name_[{face, name}];
  ring.push_back(now);
  prune(ring, now - window_);
  while (ring.size() > kRingCap) ring.pop_front();
}

void FaceStats::record_lookup(int face, bool hit, SimTime now) {
  auto& fw = per_face_[face];
  fw.lookups.push_back(now);
  if (hit) fw.hits.push_back(now);
  prune(fw.lookups, now - window_);
  prune(fw.hits, now - window_);
}

std::vector<SimTime> FaceStats::name_timestamps(int face, const Name& name,
                                                SimTime now) const {
  auto it = per_name_.find({face, name});
  if (it == per_name_.end()) return {};
  std::vector<SimTime> out;
  for (SimTime t : it->second) {
    if (t >= now - window_) out.push_back(t);
  }
  return out;
}

std::uint64_t FaceStats::lookups(int face, SimTime now) const {
  auto it = per_face_.find(face);
  return it == per_face_.end() ? 0
                               : count_in_window(it->second.lookups,
                                                 now - window_);
}

std::uint64_t FaceStats::hits(int face, SimTime now) const {
  auto it = per_face_.find(face);
  return it == per_face_.end() ? 0
                               : count_in_window(it->second.hits, now - window_);
}

std::uint64_t FaceStats::interests(int face, SimTime now) const {
  auto it = per_face_.find(face);
  return it == per_face_.end() ? 0
                               : count_in_window(it->second.interests,
                                                 now - window_);
}

std::uint64_t FaceStats::excludes(int face, SimTime now) const {
  auto it = per_face_.find(face);
  return it == per_face_.end() ? 0
                               : count_in_window(it->second.excludes,
                                                 now - window_);
}

std::vector<int> FaceStats::faces() const {
  std::vector<int> out;
  for (const auto& [face, _] : per_face_) out.push_back(face);
  return out;
}

std::vector<std::pair<int, Name>> FaceStats::tracked_names() const {
  std::vector<std::pair<int, Name>> out;
  for (const auto& [key, _] : per_name_) out.push_back(key);
  return out;
}

std::string to_string(ResponsePolicy p) {
  switch (p) {
    case ResponsePolicy::none: return "none";
    case ResponsePolicy::ignore_for_caching: return "ignore_for_caching";
    case ResponsePolicy::drop_interests: return "drop_interests";
    case ResponsePolicy::blacklist_producer: return "blacklist_producer";
  }
  return "?";
}

ResponsePolicy response_policy_from_string(const std::string& s) {
  if (s == "none") return ResponsePolicy::none;
  if (s == "ignore_for_caching") return ResponsePolicy::ignore_for_caching;
  if (s == "drop_interests") return ResponsePolicy::drop_interests;
  if (s == "blacklist_producer") return ResponsePolicy::blacklist_producer;
  throw std::invalid_argument("unknown response policy: " + s);
}

std::vector<Flag> periodic_query_detector(const FaceStats& stats,
                                          const DetectorConfig& cfg,
                                          SimTime now) {
  std::vector<Flag> flags;
  for (const auto& [face, name] : stats.tracked_names()) {
    auto ts = stats.name_timestamps(face, name, now);
    if (ts.size() < cfg.periodicity_m) continue;
    double mean = 0;
    std::vector<double> gaps;
    gaps.reserve(ts.size() - 1);
    for (std::size_t i = 1; i < ts.size(); ++i) {
      gaps.push_back(static_cast<double>(ts[i] - ts[i - 1]));
      mean += gaps.back();
    }
    mean /= static_cast<double>(gaps.size());
    if (mean <= 0) continue;
    double var = 0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    var /= static_cast<double>(gaps.size());
    double cv = std::sqrt(var) / mean;
    if (cv <= cfg.periodicity_cv_max) {
      flags.push_back(Flag{"periodicity", face, name});
    }
  }
  return flags;
}

std::vector<Flag> hit_rate_detector(const FaceStats& stats,
                                    const DetectorConfig& cfg, SimTime now) {
  std::vector<Flag> flags;
  for (int face : stats.faces()) {
    std::uint64_t lookups = stats.lookups(face, now);
    if (lookups < cfg.hit_rate_min_lookups) continue;
    double rate = static_cast<double>(stats.hits(face, now)) /
                  static_cast<double>(lookups);
    if (rate > cfg.hit_rate_max) {
      flags.push_back(Flag{"hit_rate", face, std::nullopt});
    }
  }
  return flags;
}

std::vector<Flag> exclude_usage_detector(const FaceStats& stats,
                                         const DetectorConfig& cfg,
                                         SimTime now) {
  std::vector<Flag> flags;
  for (int face : stats.faces()) {
    std::uint64_t interests = stats.interests(face, now);
    if (interests == 0) continue;
    double rate = static_cast<double>(stats.excludes(face, now)) /
                  static_cast<double>(interests);
    if (rate > cfg.exclude_rate_max) {
      flags.push_back(Flag{"exclude", face, std::nullopt});
    }
  }
  return flags;
}

std::vector<Flag> pollution_detector(const ContentStore& cs,
                                     const DetectorConfig& cfg) {
  std::vector<Flag> flags;
  if (cs.capacity() == 0) return flags;
  std::vector<const Name*> suspects;
  std::set<int> suspect_faces;
  for (const auto& [name, entry] : cs.entries()) {
    if (entry.requester_faces.size() < cfg.pollution_min_faces) {
      suspects.push_back(&name);
      suspect_faces.insert(entry.requester_faces.begin(),
                           entry.requester_faces.end());
    }
  }
  double share = static_cast<double>(suspects.size()) /
                 static_cast<double>(cs.capacity());
  if (share <= cfg.pollution_share_min) return flags;
  for (const Name* name : suspects) {
    flags.push_back(Flag{"pollution", -1, *name});
  }
  for (int face : suspect_faces) {
    flags.push_back(Flag{"pollution", face, std::nullopt});
  }
  return flags;
}

void apply_response(ResponseState& state, const Flag& flag,
                    ResponsePolicy policy, const ContentStore& cs) {
  switch (policy) {
    case ResponsePolicy::none:
      break;
    case ResponsePolicy::ignore_for_caching:
      if (flag.face >= 0) state.ignored_faces.insert(flag.face);
      break;
    case ResponsePolicy::drop_interests:
      if (flag.face >= 0) state.dropped_faces.insert(flag.face);
      break;
    case ResponsePolicy::blacklist_producer:
      if (flag.name) {
        if (const CsEntry* entry = cs.find(*flag.name)) {
          state.blacklisted_producers.insert(entry->object.signature.key_id);
        }
      }
      break;
  }
}

}  // namespace ccnsim
