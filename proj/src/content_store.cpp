#include "ccnsim/content_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccnsim {

std::string to_string(CachePolicy p) {
  switch (p) {
    case CachePolicy::FIFO: return "FIFO";
    case CachePolicy::LRU: return "LRU";
    case CachePolicy::RANDOM: return "RANDOM";
    case CachePolicy::POPULARITY: return "POPULARITY";
  }
  return "?";
}

CachePolicy cache_policy_from_string(const std::string& s) {
  if (s == "FIFO") return CachePolicy::FIFO;
  if (s == "LRU") return CachePolicy::LRU;
  if (s == "RANDOM") return CachePolicy::RANDOM;
  if (s == "POPULARITY") return CachePolicy::POPULARITY;
  throw std::invalid_argument("unknown cache policy: " + s);
}

const ContentObject* ContentStore::lookup(const Name& name,
                                          const ExcludeFilter& exclude,
                                          SimTime now, bool invasive,
                                          int requester) {
  auto it = entries_.lower_bound(name);
  for (; it != entries_.end(); ++it) {
    if (!name.is_prefix_of(it->first)) break;
    if (it->second.expiry <= now) continue;  // past lifetime: never a hit
    if (exclude.contains(it->first)) continue;
    CsEntry& entry = it->second;
    if (invasive) {
      entry.last_use = now;
      ++entry.hit_count;
      ++entry.request_count;
      entry.requester_faces.insert(requester);
    }
    return &entry.object;
  }
  return nullptr;
}

void ContentStore::note_request(const Name& name, SimTime now) {
  if (cfg_.policy != CachePolicy::POPULARITY) return;
  auto& hist = request_history_[name];
  hist.push_back(now);
  while (!hist.empty() && hist.front() < now - cfg_.popularity_window) {
    hist.pop_front();
  }
}

void ContentStore::note_requesters(const Name& name,
                                   const std::set<int>& faces) {
  auto it = entries_.find(name);
  if (it == entries_.end()) return;
  it->second.requester_faces.insert(faces.begin(), faces.end());
}

std::uint64_t ContentStore::recent_requests(const Name& name, SimTime now) {
  auto it = request_history_.find(name);
  if (it == request_history_.end()) return 0;
  auto& hist = it->second;
  while (!hist.empty() && hist.front() < now - cfg_.popularity_window) {
    hist.pop_front();
  }
  if (hist.empty()) {
    request_history_.erase(it);
    return 0;
  }
  return hist.size();
}

ContentStore::InsertResult ContentStore::insert(const ContentObject& obj,
                                                SimTime now, Rng& rng) {
  InsertResult result;
  if (cfg_.capacity == 0) return result;
  purge_expired(now);

  std::uint64_t admission_count = 0;
  if (cfg_.policy == CachePolicy::POPULARITY) {
    admission_count = recent_requests(obj.name, now);
    if (admission_count < cfg_.popularity_k) return result;
  }

  if (auto it = entries_.find(obj.name); it != entries_.end()) {
    // Refresh in place: same name, new object and lifetime draw.
    CsEntry& entry = it->second;
    entry.object = obj;
    entry.insert_time = now;
    entry.last_use = now;
    SimTime life = cfg_.lifetime.sample(rng);
    entry.expiry = life == kNever ? kNever : now + life;
    result.inserted = true;
    inserts_.emplace_back(obj.name, now);
    return result;
  }

  while (entries_.size() >= cfg_.capacity) {
    evict_one(now, rng, result.evicted);
  }

  CsEntry entry;
  entry.object = obj;
  entry.insert_time = now;
  entry.last_use = now;
  entry.seq = next_seq_++;
  entry.request_count = admission_count;
  SimTime life = cfg_.lifetime.sample(rng);
  entry.expiry = life == kNever ? kNever : now + life;
  entries_.emplace(obj.name, std::move(entry));
  result.inserted = true;
  inserts_.emplace_back(obj.name, now);
  return result;
}

void ContentStore::erase_entry(std::map<Name, CsEntry>::iterator it,
                               SimTime now, bool expired) {
  const CsEntry& entry = it->second;
  SimTime at = expired ? std::min(now, entry.expiry) : now;
  evictions_.push_back(CsEviction{it->first, at, at - entry.insert_time,
                                  at - entry.last_use, expired});
  entries_.erase(it);
}

void ContentStore::evict_one(SimTime now, Rng& rng, std::vector<Name>& out) {
  if (entries_.empty()) throw std::logic_error("evict on empty store");
  auto victim = entries_.begin();
  switch (cfg_.policy) {
    case CachePolicy::FIFO:
      for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (it->second.seq < victim->second.seq) victim = it;
      }
      break;
    case CachePolicy::LRU:
      for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        auto key = std::pair(it->second.last_use, it->second.seq);
        auto best = std::pair(victim->second.last_use, victim->second.seq);
        if (key < best) victim = it;
      }
      break;
    case CachePolicy::RANDOM: {
      std::size_t k = rng.uniform_index(entries_.size());
      victim = std::next(entries_.begin(), static_cast<std::ptrdiff_t>(k));
      break;
    }
    case CachePolicy::POPULARITY:
      for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        auto key = std::pair(it->second.request_count, it->second.seq);
        auto best = std::pair(victim->second.request_count, victim->second.seq);
        if (key < best) victim = it;
      }
      break;
  }
  out.push_back(victim->first);
  erase_entry(victim, now, /*expired=*/false);
}

std::size_t ContentStore::purge_expired(SimTime now) {
  std::size_t purged = 0;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second.expiry <= now) {
      erase_entry(it++, now, /*expired=*/true);
      ++purged;
    } else {
      ++it;
    }
  }
  return purged;
}

bool ContentStore::remove(const Name& name, SimTime now) {
  auto it = entries_.find(name);
  if (it == entries_.end()) return false;
  erase_entry(it, now, /*expired=*/false);
  return true;
}

std::size_t ContentStore::apply_blacklist(const std::vector<Name>& names,
                                          SimTime now) {
  std::size_t removed = 0;
  for (const auto& name : names) {
    if (remove(name, now)) ++removed;
  }
  return removed;
}

bool ContentStore::contains(const Name& name, SimTime now) const {
  auto it = entries_.find(name);
  return it != entries_.end() && it->second.expiry > now;
}

const CsEntry* ContentStore::find(const Name& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

}  // namespace ccnsim
