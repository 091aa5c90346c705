#include "ccnsim/name.hpp"

#include <sstream>

namespace ccnsim {

Name::Name(std::vector<std::string> components)
    : components_(std::move(components)) {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].empty()) {
      throw NameParseError("empty name component", i + 1);
    }
  }
}

Name Name::parse(const std::string& text) {
  if (text.empty() || text[0] != '/') {
    throw NameParseError("name must start with '/'", 0);
  }
  std::vector<std::string> components;
  if (text == "/") return Name(std::move(components));

  std::size_t start = 1;  // skip leading '/'
  std::size_t index = 1;  // 1-based component position
  while (start <= text.size()) {
    std::size_t end = text.find('/', start);
    if (end == std::string::npos) end = text.size();
    if (end == start) {
      throw NameParseError("empty component at position " +
                               std::to_string(index),
                           index);
    }
    components.push_back(text.substr(start, end - start));
    start = end + 1;
    ++index;
  }
  if (text.back() == '/') {
    // "/a/" — trailing slash implies an empty final component.
    throw NameParseError("empty component at position " + std::to_string(index),
                         index);
  }
  return Name(std::move(components));
}

std::string Name::render() const {
  if (components_.empty()) return "/";
  std::ostringstream out;
  for (const auto& c : components_) out << '/' << c;
  return out.str();
}

Name Name::child(const std::string& component) const {
  std::vector<std::string> next = components_;
  next.push_back(component);
  return Name(std::move(next));
}

bool Name::is_prefix_of(const Name& other) const {
  if (components_.size() > other.components_.size()) return false;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i] != other.components_[i]) return false;
  }
  return true;
}

bool matches(const Name& prefix, const ExcludeFilter& filter,
             const Name& candidate) {
  return prefix.is_prefix_of(candidate) && !filter.contains(candidate);
}

std::optional<Name> match_with_exclude(const Name& prefix,
                                       const ExcludeFilter& filter,
                                       const std::set<Name>& candidates) {
  auto it = candidates.lower_bound(prefix);
  for (; it != candidates.end(); ++it) {
    if (!prefix.is_prefix_of(*it)) break;
    if (!filter.contains(*it)) return *it;
  }
  return std::nullopt;
}

}  // namespace ccnsim
