#include "fedsim/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace fedsim {

namespace {

template <typename T>
void sorted_insert(std::vector<T>& v, T x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || !(*it == x)) v.insert(it, x);
}

template <typename T>
bool sorted_erase(std::vector<T>& v, T x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || !(*it == x)) return false;
  v.erase(it);
  return true;
}

template <typename T>
bool sorted_contains(const std::vector<T>& v, T x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

void FederationGraph::reserve(std::size_t n) {
  if (nodes_.size() < n) {
    nodes_.resize(n);
    pop_stamp_.resize(n, 0);
    pop_cache_.resize(n);
  }
}

void FederationGraph::ensure_slot(CommunityId c) {
  if (c.v >= nodes_.size()) reserve(c.v + 1);
}

bool FederationGraph::exists(CommunityId c) const {
  return c.v < nodes_.size() && nodes_[c.v].alive;
}

bool FederationGraph::ever_created(CommunityId c) const {
  return c.v < nodes_.size() && nodes_[c.v].created;
}

FederationGraph::Node& FederationGraph::live_node(CommunityId c) {
  if (!exists(c)) throw std::logic_error("graph: access to nonexistent community");
  return nodes_[c.v];
}

const FederationGraph::Node& FederationGraph::live_node(CommunityId c) const {
  if (!exists(c)) throw std::logic_error("graph: access to nonexistent community");
  return nodes_[c.v];
}

void FederationGraph::add_leaf(CommunityId c, std::vector<PersonId> members) {
  ensure_slot(c);
  Node& nd = nodes_[c.v];
  if (nd.created) throw std::logic_error("graph: community id reused");
  nd.created = nd.alive = true;
  nd.holds_members = true;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  nd.members = std::move(members);
  ++alive_count_;
  touch();
}

void FederationGraph::add_node(CommunityId c) {
  ensure_slot(c);
  Node& nd = nodes_[c.v];
  if (nd.created) throw std::logic_error("graph: community id reused");
  nd.created = nd.alive = true;
  ++alive_count_;
  touch();
}

void FederationGraph::add_edge(CommunityId parent, CommunityId child) {
  Node& p = live_node(parent);
  Node& c = live_node(child);
  if (sorted_contains(p.children, child)) throw std::logic_error("graph: duplicate edge");
  sorted_insert(p.children, child);
  sorted_insert(c.parents, parent);
  touch();
}

void FederationGraph::remove_edge(CommunityId parent, CommunityId child) {
  Node& p = live_node(parent);
  Node& c = live_node(child);
  if (!sorted_erase(p.children, child)) throw std::logic_error("graph: edge not present");
  sorted_erase(c.parents, parent);
  touch();
}

void FederationGraph::remove_node(CommunityId c) {
  Node& nd = live_node(c);
  for (CommunityId parent : nd.parents) sorted_erase(nodes_[parent.v].children, c);
  for (CommunityId child : nd.children) sorted_erase(nodes_[child.v].parents, c);
  nd.parents.clear();
  nd.children.clear();
  nd.members.clear();
  nd.alive = false;
  --alive_count_;
  touch();
}

bool FederationGraph::has_edge(CommunityId parent, CommunityId child) const {
  return sorted_contains(live_node(parent).children, child);
}

const std::vector<CommunityId>& FederationGraph::children(CommunityId c) const {
  return live_node(c).children;
}

const std::vector<CommunityId>& FederationGraph::parents(CommunityId c) const {
  return live_node(c).parents;
}

bool FederationGraph::holds_members(CommunityId c) const {
  return live_node(c).holds_members;
}

const std::vector<PersonId>& FederationGraph::leaf_members(CommunityId c) const {
  return live_node(c).members;
}

const std::vector<PersonId>& FederationGraph::population(CommunityId c) const {
  const Node& nd = live_node(c);
  if (pop_stamp_[c.v] == version_) return pop_cache_[c.v];
  std::vector<PersonId> pop;
  if (nd.children.empty()) {
    pop = nd.members;  // empty for a childless ex-internal node
  } else {
    for (CommunityId ch : nd.children) {
      const auto& sub = population(ch);
      pop.insert(pop.end(), sub.begin(), sub.end());
    }
    std::sort(pop.begin(), pop.end());
    pop.erase(std::unique(pop.begin(), pop.end()), pop.end());
  }
  pop_cache_[c.v] = std::move(pop);
  pop_stamp_[c.v] = version_;
  return pop_cache_[c.v];
}

bool FederationGraph::in_population(CommunityId c, PersonId p) const {
  return sorted_contains(population(c), p);
}

bool FederationGraph::would_create_cycle(CommunityId parent, CommunityId child) const {
  if (parent == child) return true;
  // A cycle appears iff parent is already reachable downward from child.
  std::vector<CommunityId> stack{child};
  std::vector<bool> seen(nodes_.size(), false);
  while (!stack.empty()) {
    CommunityId cur = stack.back();
    stack.pop_back();
    if (cur == parent) return true;
    if (seen[cur.v]) continue;
    seen[cur.v] = true;
    for (CommunityId ch : live_node(cur).children) stack.push_back(ch);
  }
  return false;
}

std::vector<CommunityId> FederationGraph::alive() const {
  std::vector<CommunityId> out;
  out.reserve(alive_count_);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].alive) out.push_back(CommunityId{i});
  return out;
}

std::vector<CommunityId> FederationGraph::topo_children_first() const {
  std::vector<std::uint32_t> pending(nodes_.size(), 0);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].alive) continue;
    pending[i] = (std::uint32_t)nodes_[i].children.size();
    if (pending[i] == 0) ready.push(i);
  }
  std::vector<CommunityId> order;
  order.reserve(alive_count_);
  while (!ready.empty()) {
    std::uint32_t i = ready.top();
    ready.pop();
    order.push_back(CommunityId{i});
    for (CommunityId par : nodes_[i].parents)
      if (--pending[par.v] == 0) ready.push(par.v);
  }
  if (order.size() != alive_count_)
    throw std::logic_error("graph: cycle detected during topological sort");
  return order;
}

ValidityReport validate(const FederationGraph& g,
                        const std::vector<AssemblyView>& assemblies,
                        int assembly_size) {
  ValidityReport report;

  // Acyclicity. 0 = white, 1 = on stack, 2 = done.
  {
    std::vector<CommunityId> roots = g.alive();
    std::vector<unsigned char> mark(roots.empty() ? 0 : roots.back().v + 1, 0);
    bool cycle_reported = false;
    // Iterative DFS with an explicit gray stack.
    for (CommunityId root : roots) {
      if (cycle_reported) break;
      if (mark[root.v] != 0) continue;
      std::vector<std::pair<CommunityId, std::size_t>> stack{{root, 0}};
      mark[root.v] = 1;
      while (!stack.empty() && !cycle_reported) {
        auto& [cur, next] = stack.back();
        const auto& kids = g.children(cur);
        if (next < kids.size()) {
          CommunityId ch = kids[next++];
          if (mark[ch.v] == 1) {
            report.violations.push_back({ValidityIssue::Kind::Cycle, ch, cur, {},
                                         "edge closes a directed cycle"});
            cycle_reported = true;
          } else if (mark[ch.v] == 0) {
            mark[ch.v] = 1;
            stack.push_back({ch, 0});
          }
        } else {
          mark[cur.v] = 2;
          stack.pop_back();
        }
      }
    }
    if (cycle_reported) return report;  // populations are not well defined below a cycle
  }

  // Leaf disjointness.
  {
    std::map<PersonId, CommunityId> seen;
    for (CommunityId c : g.alive()) {
      if (!g.holds_members(c)) continue;
      for (PersonId p : g.leaf_members(c)) {
        auto [it, fresh] = seen.emplace(p, c);
        if (!fresh)
          report.violations.push_back({ValidityIssue::Kind::LeafOverlap, c, it->second, p,
                                       "person appears in two leaf populations"});
      }
    }
  }

  // Assembly constraints.
  for (const AssemblyView& av : assemblies) {
    const auto& pop = g.population(av.community);
    std::size_t want = std::min(pop.size(), (std::size_t)assembly_size);
    if (av.members.size() != want)
      report.violations.push_back({ValidityIssue::Kind::AssemblySize, av.community, {}, {},
                                   "assembly size " + std::to_string(av.members.size()) +
                                       ", expected " + std::to_string(want)});
    for (PersonId p : av.members)
      if (!std::binary_search(pop.begin(), pop.end(), p))
        report.violations.push_back({ValidityIssue::Kind::AssemblyMembership, av.community,
                                     {}, p, "assembly member outside population"});
  }

  return report;
}

}  // namespace fedsim
