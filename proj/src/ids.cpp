#include "fedsim/ids.hpp"

#include "fedsim/config.hpp"
#include "fedsim/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace fedsim {

IdTable IdTable::build(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  IdTable t;
  t.names_ = std::move(names);
  for (std::uint32_t i = 0; i < t.names_.size(); ++i) t.by_name_.emplace(t.names_[i], i);
  return t;
}

std::uint32_t IdTable::index_of(const std::string& name) const {
  const auto it = by_name_.find(name);
  if (it == by_name_.end()) throw std::out_of_range("unknown id '" + name + "'");
  return it->second;
}

std::optional<std::uint32_t> IdTable::find(const std::string& name) const {
  const auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

PersonOrder PersonOrder::sortition(std::size_t person_count, std::uint64_t seed) {
  std::vector<std::uint32_t> rank(person_count);
  for (std::uint32_t i = 0; i < rank.size(); ++i) rank[i] = i;
  Rng rng(seed ^ 0x5bd1e995a4f0c3b2ull);
  for (std::size_t i = person_count; i > 1; --i) {
    std::swap(rank[i - 1], rank[rng.below(i)]);
  }
  PersonOrder order;
  order.rank = std::move(rank);
  return order;
}

}  // namespace fedsim
