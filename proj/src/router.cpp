#include "ccnsim/router.hpp"

#include <algorithm>
#include <sstream>

namespace ccnsim {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::cs_hit: return "cs_hit";
    case Outcome::forwarded: return "forwarded";
    case Outcome::aggregated: return "aggregated";
    case Outcome::dup_nonce: return "dup_nonce";
    case Outcome::domain_limited: return "domain_limited";
    case Outcome::pit_overflow: return "pit_overflow";
    case Outcome::no_route: return "no_route";
    case Outcome::face_blocked: return "face_blocked";
    case Outcome::chunk_blocked: return "chunk_blocked";
    case Outcome::non_invasive_miss: return "non_invasive_miss";
    case Outcome::delivered: return "delivered";
    case Outcome::unsolicited: return "unsolicited";
    case Outcome::poison_block: return "poison_block";
  }
  return "?";
}

Router::Router(std::string id, RouterConfig cfg, const KeyRegistry* registry,
               std::uint64_t master_seed)
    : id_(std::move(id)),
      cfg_(cfg),
      registry_(registry),
      cs_(cfg.cs),
      pit_(cfg.pit_capacity, cfg.pit_timeout),
      stats_(cfg.detector ? cfg.detector->window : sec(10)),
      cache_rng_(substream(master_seed, "cache/" + id_)),
      delay_rng_(substream(master_seed, "delay/" + id_)) {}

std::optional<std::uint64_t> Router::chunk_suffix(const Name& name) {
  if (name.empty()) return std::nullopt;
  const std::string& last = name.at(name.size() - 1);
  if (last.empty() || last.size() > 18) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : last) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return value;
}

bool Router::domain_limited(const Name& name, SimTime now) {
  if (!cfg_.per_domain_limit) return false;
  double rate = *cfg_.per_domain_limit;
  std::string domain = name.empty() ? std::string() : name.at(0);
  auto [it, fresh] = buckets_.try_emplace(domain);
  Bucket& b = it->second;
  double burst = std::max(1.0, rate);
  if (fresh) {
    b.tokens = burst;
    b.last = now;
  } else {
    double dt = static_cast<double>(now - b.last) / 1e6;
    b.tokens = std::min(burst, b.tokens + rate * dt);
    b.last = now;
  }
  if (b.tokens >= 1.0) {
    b.tokens -= 1.0;
    return false;
  }
  return true;
}

InterestResult Router::on_interest(const Interest& interest, int in_face,
                                   SimTime now) {
  ++counters_.interests;

  if (response_.dropped_faces.count(in_face)) {
    ++counters_.drop_face_blocked;
    return {Outcome::face_blocked, {}};
  }
  if (!cfg_.allow_chunk_requests) {
    if (auto chunk = chunk_suffix(interest.name); chunk && *chunk >= 1) {
      ++counters_.drop_chunk_blocked;
      return {Outcome::chunk_blocked, {}};
    }
  }

  stats_.record_interest(in_face, interest.name, !interest.exclude.empty(), now);

  if (domain_limited(interest.name, now)) {
    ++counters_.drop_domain_limit;
    return {Outcome::domain_limited, {}};
  }

  PitEntry* entry = pit_.find(interest.name, now);
  if (entry && entry->nonces.count(interest.nonce)) {
    ++counters_.drop_dup_nonce;
    return {Outcome::dup_nonce, {}};
  }

  // Content Store stage.
  const ExcludeFilter empty_filter;
  const ExcludeFilter* filter = &interest.exclude;
  if (!cfg_.allow_exclude && !interest.exclude.empty()) {
    ++counters_.exclude_ignored;  // treated as a plain-name lookup
    filter = &empty_filter;
  }
  bool ignored_face = response_.ignored_faces.count(in_face) > 0;
  if (!ignored_face) cs_.note_request(interest.name, now);
  ++counters_.cs_lookups;
  const ContentObject* hit = nullptr;
  if (!interest.no_cache_request) {
    bool invasive = !(interest.non_invasive && cfg_.allow_non_invasive);
    hit = cs_.lookup(interest.name, *filter, now, invasive, in_face);
  }
  stats_.record_lookup(in_face, hit != nullptr, now);
  if (hit) {
    ++counters_.cs_hits;
    SimTime extra =
        cfg_.hit_delay.sample(delay_rng_) + cfg_.data_delay.sample(delay_rng_);
    SendData send{in_face, *hit, extra};
    return {Outcome::cs_hit, {std::move(send)}};
  }

  // A non-invasive interest must not alter any state upstream either: it is
  // answered from caches or not at all.
  if (interest.non_invasive) {
    ++counters_.non_invasive_misses;
    return {Outcome::non_invasive_miss, {}};
  }

  // PIT stage: aggregate onto a live entry, else create and forward.
  if (entry) {
    pit_.aggregate(*entry, in_face, interest.nonce);
    ++counters_.aggregated;
    return {Outcome::aggregated, {}};
  }
  auto out_face = fib_.lookup(interest.name);
  if (!out_face) {
    ++counters_.drop_no_route;
    return {Outcome::no_route, {}};
  }
  if (pit_.full()) {
    ++counters_.drop_pit_overflow;
    return {Outcome::pit_overflow, {}};
  }
  pit_.create(interest.name, in_face, interest.nonce, now);
  ++counters_.forwarded;
  ForwardInterest fwd{*out_face, interest, 0};
  return {Outcome::forwarded, {std::move(fwd)}};
}

ContentObject Router::poisoned_copy(const ContentObject& obj) const {
  ContentObject fake = obj;
  const std::string junk = "poisoned:" + obj.name.render();
  fake.payload.assign(junk.begin(), junk.end());
  if (cfg_.poison_unverifiable || !cfg_.poison_key) {
    fake.signature = KeyRegistry::forge_unverifiable(fnv1a64(obj.name.render()));
  } else {
    // Known key, wrong digest: verifies as invalid rather than unverifiable.
    fake.signature = registry_->sign(*cfg_.poison_key, obj.name, obj.payload);
    fake.signature.digest[0] ^= 0xff;
  }
  return fake;
}

DataResult Router::on_data(const ContentObject& obj_in, int /*in_face*/,
                           SimTime now) {
  ++counters_.data_in;

  ContentObject obj = obj_in;
  if (cfg_.poison_prefix && cfg_.poison_prefix->is_prefix_of(obj.name)) {
    obj = poisoned_copy(obj);
    ++counters_.poison_substituted;
  }

  PitEntry* entry = pit_.find(obj.name, now);
  if (!entry) {
    ++counters_.drop_unsolicited;
    return {Outcome::unsolicited, {}};
  }

  SimTime proc_delay = 0;
  if (cfg_.verify_signatures) {
    ++counters_.verify_calls;
    counters_.verify_cpu += cfg_.verify_cost;
    proc_delay += cfg_.verify_cost;
    counters_.data_proc_delay += cfg_.verify_cost;
    VerifyResult vr = registry_->verify(obj.name, obj.payload, obj.signature);
    if (vr != VerifyResult::valid) {
      // Discard the object; the PIT entry stays so a clean copy (or the
      // timeout) can still serve the requesters.
      ++counters_.poison_blocked;
      return {Outcome::poison_block, {}};
    }
  }

  std::set<int> faces = pit_.consume(obj.name, now);
  proc_delay += cfg_.data_delay.sample(delay_rng_);
  DataResult result{Outcome::delivered, {}};
  for (int face : faces) {
    result.actions.push_back(SendData{face, obj, proc_delay});
  }
  counters_.data_faces += faces.size();

  // Cache after delivery. Origin-flagged, blacklisted-producer, and
  // ignored-face-only content stays out.
  bool cacheable = true;
  if (cfg_.honor_no_cache && obj.no_cache) cacheable = false;
  if (response_.blacklisted_producers.count(obj.signature.key_id)) {
    cacheable = false;
  }
  if (cacheable && !response_.ignored_faces.empty()) {
    bool all_ignored = true;
    for (int face : faces) {
      if (!response_.ignored_faces.count(face)) {
        all_ignored = false;
        break;
      }
    }
    if (all_ignored && !faces.empty()) cacheable = false;
  }
  if (cacheable) {
    auto ins = cs_.insert(obj, now, cache_rng_);
    if (ins.inserted) {
      ++counters_.cache_insertions;
      cs_.note_requesters(obj.name, faces);
    }
    counters_.cache_evictions += ins.evicted.size();
  }
  return result;
}

std::vector<Flag> Router::run_detectors(SimTime now) {
  if (!cfg_.detector) return {};
  const DetectorConfig& dc = *cfg_.detector;
  std::vector<Flag> raised;
  auto collect = [&](std::vector<Flag> flags) {
    for (auto& flag : flags) {
      if (seen_flags_.insert(flag).second) raised.push_back(flag);
    }
  };
  if (dc.periodicity_enabled) collect(periodic_query_detector(stats_, dc, now));
  if (dc.hit_rate_enabled) collect(hit_rate_detector(stats_, dc, now));
  if (dc.exclude_enabled) collect(exclude_usage_detector(stats_, dc, now));
  if (dc.pollution_enabled) collect(pollution_detector(cs_, dc));
  for (const Flag& flag : raised) {
    apply_response(response_, flag, dc.response, cs_);
  }
  counters_.flags_raised += raised.size();
  return raised;
}

std::size_t Router::apply_blacklist(const std::vector<Name>& names,
                                    SimTime now) {
  std::size_t removed = cs_.apply_blacklist(names, now);
  counters_.blacklist_removed += removed;
  counters_.cache_evictions += removed;
  return removed;
}

void Router::begin_stats(SimTime now) {
  counters_ = RouterCounters{};
  pit_.begin_stats(now);
}

std::string Router::dump_state(SimTime now) const {
  std::ostringstream out;
  out << "cs=" << cs_.size() << "/" << cs_.capacity() << " pit=" << pit_.size()
      << " hits=" << counters_.cs_hits << " lookups=" << counters_.cs_lookups;
  out << " names=[";
  bool first = true;
  for (const auto& [name, entry] : cs_.entries()) {
    if (entry.expiry <= now) continue;
    if (!first) out << ",";
    out << name.render();
    first = false;
  }
  out << "]";
  return out.str();
}

}  // namespace ccnsim
