#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccnsim {

/// Raised by Name::parse. `component` is the 1-based index of the offending
/// component, or 0 when the text as a whole is malformed.
struct NameParseError : std::runtime_error {
  NameParseError(const std::string& what, std::size_t component_index)
      : std::runtime_error(what), component(component_index) {}
  std::size_t component;
};

/// Hierarchical content name: an ordered list of non-empty components.
/// Canonical text form is "/" + components joined by "/"; the root name has
/// zero components and renders as "/". Comparison is component-wise
/// lexicographic, so all names sharing a prefix are contiguous in ordered
/// containers.
class Name {
 public:
  Name() = default;
  explicit Name(std::vector<std::string> components);

  /// Parses canonical text. Throws NameParseError on a missing leading
  /// slash or an empty component.
  static Name parse(const std::string& text);

  std::string render() const;

  const std::vector<std::string>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  bool empty() const { return components_.empty(); }
  const std::string& at(std::size_t i) const { return components_.at(i); }

  /// New name with one component appended.
  Name child(const std::string& component) const;

  /// Name with the last component removed; the root's parent is the root.
  Name parent() const {
    if (components_.empty()) return *this;
    return Name(std::vector<std::string>(components_.begin(),
                                         components_.end() - 1));
  }

  /// True iff this name's components are a leading subsequence of other's.
  bool is_prefix_of(const Name& other) const;

  auto operator<=>(const Name&) const = default;

 private:
  std::vector<std::string> components_;
};

inline bool is_prefix(const Name& a, const Name& b) { return a.is_prefix_of(b); }

/// Set of full names excluded from matching.
class ExcludeFilter {
 public:
  ExcludeFilter() = default;

  void add(const Name& name) { excluded_.insert(name); }
  bool contains(const Name& name) const { return excluded_.count(name) > 0; }
  bool empty() const { return excluded_.empty(); }
  std::size_t size() const { return excluded_.size(); }
  const std::set<Name>& names() const { return excluded_; }

  bool operator==(const ExcludeFilter&) const = default;

 private:
  std::set<Name> excluded_;
};

/// A candidate matches (prefix, filter) iff prefix is a prefix of the
/// candidate and the candidate is not excluded.
bool matches(const Name& prefix, const ExcludeFilter& filter,
             const Name& candidate);

/// Smallest matching candidate, or nullopt when none matches.
std::optional<Name> match_with_exclude(const Name& prefix,
                                       const ExcludeFilter& filter,
                                       const std::set<Name>& candidates);

/// Smallest matching key in a sorted, Name-keyed range. Relies on names with
/// a common prefix being contiguous under Name ordering.
template <typename MapLike>
auto first_match(MapLike& map, const Name& prefix, const ExcludeFilter& filter)
    -> decltype(map.begin()) {
  auto it = map.lower_bound(prefix);
  for (; it != map.end(); ++it) {
    const Name& candidate = it->first;
    if (!prefix.is_prefix_of(candidate)) break;
    if (!filter.contains(candidate)) return it;
  }
  return map.end();
}

}  // namespace ccnsim
