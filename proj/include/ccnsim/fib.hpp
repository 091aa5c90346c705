#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ccnsim/name.hpp"

namespace ccnsim {

/// Prefix-to-face routing table. Longest matching prefix wins; equal-length
/// matches tie-break to the lowest face id.
class Fib {
 public:
  void add(const Name& prefix, int face) { entries_.emplace_back(prefix, face); }

  std::optional<int> lookup(const Name& name) const {
    std::optional<int> best;
    std::size_t best_len = 0;
    for (const auto& [prefix, face] : entries_) {
      if (!prefix.is_prefix_of(name)) continue;
      if (!best || prefix.size() > best_len ||
          (prefix.size() == best_len && face < *best)) {
        best = face;
        best_len = prefix.size();
      }
    }
    return best;
  }

  const std::vector<std::pair<Name, int>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<Name, int>> entries_;
};

}  // namespace ccnsim
