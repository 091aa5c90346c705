#include "ccnsim/pit.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccnsim {

void Pit::advance_clock(SimTime now) {
  if (now < last_change_) return;  // before stats window opened
  area_ += static_cast<double>(entries_.size()) *
           static_cast<double>(now - last_change_);
  last_change_ = now;
}

PitEntry* Pit::find(const Name& name, SimTime now) {
  auto it = entries_.find(name);
  if (it == entries_.end()) return nullptr;
  if (it->second.expiry <= now) {
    advance_clock(now);
    entries_.erase(it);
    ++expired_total_;
    return nullptr;
  }
  return &it->second;
}

PitEntry& Pit::create(const Name& name, int face, std::uint64_t nonce,
                      SimTime now) {
  if (full()) throw std::logic_error("pit create past capacity");
  advance_clock(now);
  PitEntry entry;
  entry.faces.insert(face);
  entry.nonces.insert(nonce);
  entry.expiry = now + timeout_;
  auto [it, fresh] = entries_.emplace(name, std::move(entry));
  if (!fresh) throw std::logic_error("pit create over live entry");
  peak_ = std::max(peak_, entries_.size());
  return it->second;
}

void Pit::aggregate(PitEntry& entry, int face, std::uint64_t nonce) {
  entry.faces.insert(face);
  entry.nonces.insert(nonce);
}

std::set<int> Pit::consume(const Name& name, SimTime now) {
  auto it = entries_.find(name);
  if (it == entries_.end()) return {};
  if (it->second.expiry <= now) {
    advance_clock(now);
    entries_.erase(it);
    ++expired_total_;
    return {};
  }
  std::set<int> faces = std::move(it->second.faces);
  advance_clock(now);
  entries_.erase(it);
  return faces;
}

std::size_t Pit::expire(SimTime now) {
  std::size_t count = 0;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second.expiry <= now) {
      advance_clock(now);
      it = entries_.erase(it);
      ++count;
    } else {
      ++it;
    }
  }
  expired_total_ += count;
  return count;
}

void Pit::begin_stats(SimTime now) {
  stats_start_ = now;
  last_change_ = now;
  stats_end_ = now;
  area_ = 0;
  peak_ = entries_.size();
}

void Pit::finalize_stats(SimTime now) {
  advance_clock(now);
  stats_end_ = now;
}

double Pit::mean_occupancy() const {
  if (stats_end_ <= stats_start_) return 0.0;
  return area_ / static_cast<double>(stats_end_ - stats_start_);
}

}  // namespace ccnsim
