#include "fedsim/checker.hpp"

#include "fedsim/graph.hpp"
#include "fedsim/measures.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace fedsim {

namespace {

using U32 = std::uint32_t;

constexpr std::size_t kMaxFindings = 200;

struct LiveVal {
  int seat = 0;
  Rational share;
  Tick last = 0;
};

class Oracle {
 public:
  Oracle(const RunLog& log, bool with_series)
      : log_(log),
        n_(log.assembly_size),
        with_series_(with_series),
        mirror_(log.ids.communities.size()) {
    person_leaf_.assign(log_.ids.persons.size(), kNoIndex);
  }

  OracleResult run() {
    if (log_.term_length > 0) {
      for (Tick s = log_.fst; s <= log_.horizon; s += log_.term_length) {
        samples_.push_back(s);
      }
    }
    for (const RunLogEntry& en : log_.entries) {
      const Tick t = en.type == RunLogEntry::Type::Event ? en.event.t : en.action.t;
      if (t < now_) {
        fail(t, "log time moves backwards");
        break;
      }
      if (t > now_) {
        observe(now_);
        take_samples_below(t);
        now_ = t;
      }
      apply(en);
    }
    if (log_.horizon < now_) {
      fail(now_, "horizon precedes the last log entry");
    } else {
      observe(log_.horizon);
      take_samples_below(log_.horizon + 1);
      close_all(log_.horizon);
    }
    if (last_structural_ != log_.fst) {
      std::ostringstream os;
      os << "recorded final structural time " << log_.fst
         << " disagrees with replay (" << last_structural_ << ")";
      fail(log_.horizon, os.str());
    }
    capture_final();
    result_.sample_times = samples_;
    result_.findings = std::move(findings_);
    return std::move(result_);
  }

 private:
  // ---- names for messages ----
  std::string cname(U32 c) const { return "'" + log_.ids.communities.name(c) + "'"; }
  std::string pname(U32 p) const { return "'" + log_.ids.persons.name(p) + "'"; }

  void fail(Tick t, const std::string& what,
            Finding::Kind kind = Finding::Kind::Replay) {
    if (findings_.size() >= kMaxFindings) return;
    findings_.push_back(Finding{t, kind, what});
  }

  // ---- population bookkeeping (oracle's own, not the mirror's) ----
  const std::vector<U32>& own_pop(U32 c) {
    const auto it = pop_cache_.find(c);
    if (it != pop_cache_.end()) return it->second;
    std::vector<U32> acc;
    std::set<U32> seen;
    std::vector<U32> stack{c};
    while (!stack.empty()) {
      const U32 cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      if (const auto lm = leaf_members_.find(cur); lm != leaf_members_.end()) {
        acc.insert(acc.end(), lm->second.begin(), lm->second.end());
      }
      if (const auto ch = children_.find(cur); ch != children_.end()) {
        for (const U32 v : ch->second) stack.push_back(v);
      }
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    return pop_cache_.emplace(c, std::move(acc)).first->second;
  }

  bool pop_contains(U32 c, U32 p) {
    const auto& pop = own_pop(c);
    return std::binary_search(pop.begin(), pop.end(), p);
  }

  bool reaches(U32 from, U32 to) {
    if (from == to) return true;
    std::set<U32> seen;
    std::vector<U32> stack{from};
    while (!stack.empty()) {
      const U32 cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      if (cur == to) return true;
      if (const auto ch = children_.find(cur); ch != children_.end()) {
        for (const U32 v : ch->second) stack.push_back(v);
      }
    }
    return false;
  }

  // ---- integral bookkeeping ----
  void close(const PairKey& key, LiveVal& lv, Tick t) {
    if (t > lv.last) {
      const Rational dt(static_cast<unsigned long long>(t - lv.last));
      PairIntegrals& full = result_.full[key];
      full.seat += Rational(lv.seat) * dt;
      full.share += lv.share * dt;
      if (t > log_.fst) {
        const Tick a = std::max(lv.last, log_.fst);
        const Rational dtail(static_cast<unsigned long long>(t - a));
        PairIntegrals& tail = result_.tail[key];
        tail.seat += Rational(lv.seat) * dtail;
        tail.share += lv.share * dtail;
      }
    }
    lv.last = t;
  }

  void set_value(const PairKey& key, int seat, const Rational& share, Tick t) {
    const auto it = live_.find(key);
    if (it == live_.end()) {
      result_.full[key];  // the pair now exists, with empty history
      live_.emplace(key, LiveVal{seat, share, t});
    } else if (it->second.seat != seat || it->second.share != share) {
      close(key, it->second, t);
      it->second.seat = seat;
      it->second.share = share;
    }
  }

  void detach_community_pairs(U32 f, Tick t) {
    std::vector<PairKey> keys;
    auto it = live_.lower_bound(PairKey{CommunityId{f}, EntityKind::Person, 0});
    while (it != live_.end() && it->first.community.v == f) {
      keys.push_back(it->first);
      ++it;
    }
    for (const PairKey& k : keys) {
      close(k, live_[k], t);
      live_.erase(k);
    }
    quotas_.erase(f);
  }

  void close_all(Tick t) {
    for (auto& [key, lv] : live_) close(key, lv, t);
  }

  // Recomputes every value of community f from scratch: person shares and seat
  // flags, child weights, shares, and seat counts; refreshes the quota table.
  void recompute_community(U32 f, Tick t) {
    if (alive_.find(f) == alive_.end()) {
      detach_community_pairs(f, t);
      return;
    }
    const auto& pop = own_pop(f);
    if (pop.empty()) {
      detach_community_pairs(f, t);
      return;
    }
    const std::set<U32>& assembly = assembly_[f];
    std::set<PairKey> want;

    Rational person_share = Rational(n_) / Rational(static_cast<unsigned long long>(pop.size()));
    if (person_share > 1) person_share = 1;
    for (const U32 p : pop) {
      const PairKey key = person_pair(PersonId{p}, CommunityId{f});
      want.insert(key);
      set_value(key, assembly.count(p) ? 1 : 0, person_share, t);
    }

    quotas_.erase(f);
    const auto ch = children_.find(f);
    if (ch != children_.end() && !ch->second.empty()) {
      std::map<U32, int> split;
      for (const U32 v : ch->second) {
        for (const U32 p : own_pop(v)) split[p] += 1;
      }
      const Rational pop_size(static_cast<unsigned long long>(pop.size()));
      auto& quota_row = quotas_[f];
      for (const U32 v : ch->second) {
        Rational weight(0);
        int seats = 0;
        for (const U32 p : own_pop(v)) {
          weight += Rational(1) / Rational(split[p]);
          if (assembly.count(p)) ++seats;
        }
        const Rational share = Rational(n_) * weight / pop_size;
        const PairKey key = child_pair(CommunityId{v}, CommunityId{f});
        want.insert(key);
        set_value(key, seats, share, t);
        BigInt quota = rational_floor(share);
        if (quota > BigInt(own_pop(v).size())) quota = BigInt(own_pop(v).size());
        quota_row.emplace_back(v, static_cast<long long>(quota));
      }
    }

    // Pairs of f that no longer correspond to a member or a child detach here.
    std::vector<PairKey> stale;
    auto it = live_.lower_bound(PairKey{CommunityId{f}, EntityKind::Person, 0});
    while (it != live_.end() && it->first.community.v == f) {
      if (want.find(it->first) == want.end()) stale.push_back(it->first);
      ++it;
    }
    for (const PairKey& k : stale) {
      close(k, live_[k], t);
      live_.erase(k);
    }
  }

  void recompute_all(Tick t) {
    std::vector<U32> dead;
    for (const auto& [key, lv] : live_) {
      (void)lv;
      if (alive_.find(key.community.v) == alive_.end()) dead.push_back(key.community.v);
    }
    for (const U32 f : dead) detach_community_pairs(f, t);
    for (const U32 f : alive_) recompute_community(f, t);
  }

  void structural(Tick t) {
    pop_cache_.clear();
    last_structural_ = t;
    conservation_pending_ = true;
    recompute_all(t);
  }

  // ---- replay ----
  void apply(const RunLogEntry& en) {
    if (en.type == RunLogEntry::Type::Event) {
      apply_event(en.event);
    } else {
      apply_action(en.action);
    }
  }

  void apply_event(const TimedEvent& e) {
    switch (e.kind) {
      case EventKind::Participate: {
        if (created_.count(e.a.v)) {
          fail(e.t, "participate reuses community id " + cname(e.a.v));
          return;
        }
        if (person_leaf_[e.person.v] != kNoIndex) {
          fail(e.t, "participate for " + pname(e.person.v) + " who already has a leaf");
          return;
        }
        created_.insert(e.a.v);
        alive_.insert(e.a.v);
        leaf_members_[e.a.v] = {e.person.v};
        children_[e.a.v];
        assembly_[e.a.v] = {e.person.v};
        person_leaf_[e.person.v] = e.a.v;
        mirror_.add_leaf(e.a, {e.person});
        structural(e.t);
        break;
      }
      case EventKind::Federate: {
        if (!alive_.count(e.a.v)) {
          fail(e.t, "federate from unknown community " + cname(e.a.v));
          return;
        }
        if (created_.count(e.b.v)) {
          fail(e.t, "federate reuses community id " + cname(e.b.v));
          return;
        }
        created_.insert(e.b.v);
        alive_.insert(e.b.v);
        children_[e.b.v] = {e.a.v};
        assembly_[e.b.v] = assembly_[e.a.v];
        mirror_.add_node(e.b);
        mirror_.add_edge(e.b, e.a);
        structural(e.t);
        break;
      }
      case EventKind::Join: {
        const U32 parent = e.a.v;
        const U32 child = e.b.v;
        if (!alive_.count(parent) || !alive_.count(child)) {
          fail(e.t, "join names an unknown community");
          return;
        }
        if (leaf_members_.count(parent)) {
          fail(e.t, "join parent " + cname(parent) + " holds members directly");
          return;
        }
        if (children_[parent].count(child)) {
          fail(e.t, "join duplicates edge " + cname(parent) + " -> " + cname(child));
          return;
        }
        if (reaches(child, parent)) {
          fail(e.t, "join " + cname(parent) + " -> " + cname(child) + " creates a cycle");
          return;
        }
        if (log_.child_min_pop_enforced && !leaf_members_.count(child) &&
            own_pop(child).size() <= static_cast<std::size_t>(n_)) {
          fail(e.t, "join admits federation " + cname(child) + " with population " +
                        std::to_string(own_pop(child).size()) +
                        " despite the minimum-population rule");
        }
        children_[parent].insert(child);
        mirror_.add_edge(e.a, e.b);
        structural(e.t);
        break;
      }
      case EventKind::Leave: {
        const U32 parent = e.a.v;
        const U32 child = e.b.v;
        if (!alive_.count(parent) || !children_[parent].count(child)) {
          fail(e.t, "leave names a missing edge " + cname(parent) + " -> " + cname(child));
          return;
        }
        children_[parent].erase(child);
        mirror_.remove_edge(e.a, e.b);
        structural(e.t);
        break;
      }
      case EventKind::RemoveMember: {
        if (!alive_.count(e.a.v) || !assembly_[e.a.v].count(e.person.v)) {
          fail(e.t, "remove-member for " + pname(e.person.v) + " who holds no seat in " +
                        cname(e.a.v));
          return;
        }
        assembly_[e.a.v].erase(e.person.v);
        recompute_community(e.a.v, e.t);
        break;
      }
    }
  }

  void apply_action(const LogAction& a) {
    const U32 f = a.community.v;
    switch (a.rule) {
      case ActionRule::GarbageCollect: {
        if (!alive_.count(f)) {
          fail(a.t, "collects unknown community " + cname(f));
          return;
        }
        if (const auto ch = children_.find(f); ch != children_.end() && !ch->second.empty()) {
          fail(a.t, "collects " + cname(f) + " which still has children");
          return;
        }
        if (!assembly_[f].empty()) {
          fail(a.t, "collects " + cname(f) + " which still has seats");
          return;
        }
        alive_.erase(f);
        if (const auto lm = leaf_members_.find(f); lm != leaf_members_.end()) {
          for (const U32 p : lm->second) person_leaf_[p] = kNoIndex;
          leaf_members_.erase(lm);
        }
        children_.erase(f);
        assembly_.erase(f);
        for (auto& [c, kids] : children_) {
          (void)c;
          kids.erase(f);
        }
        mirror_.remove_node(a.community);
        structural(a.t);
        break;
      }
      case ActionRule::R1:
      case ActionRule::R2:
      case ActionRule::R3:
      case ActionRule::Prune: {
        if (!alive_.count(f) || !a.person || !assembly_[f].count(a.person->v)) {
          fail(a.t, "seat removal in " + cname(f) + " names an absent seat");
          return;
        }
        assembly_[f].erase(a.person->v);
        recompute_community(f, a.t);
        break;
      }
      case ActionRule::A1:
      case ActionRule::A2: {
        if (!alive_.count(f) || !a.person) {
          fail(a.t, "seat addition in " + cname(f) + " is malformed");
          return;
        }
        const U32 p = a.person->v;
        if (assembly_[f].count(p)) {
          fail(a.t, "seat addition in " + cname(f) + " for already-seated " + pname(p));
          return;
        }
        if (!pop_contains(f, p)) {
          fail(a.t, "seat addition in " + cname(f) + " for non-member " + pname(p));
          return;
        }
        if (a.rule == ActionRule::A1) {
          if (!a.color || !children_[f].count(a.color->v) || !pop_contains(a.color->v, p)) {
            fail(a.t, "quota fill in " + cname(f) + " has an invalid color");
            return;
          }
        }
        assembly_[f].insert(p);
        recompute_community(f, a.t);
        break;
      }
      case ActionRule::Warning:
        break;
    }
  }

  // ---- per-state checks ----
  void observe(Tick t) {
    if (alive_.empty()) return;

    std::vector<AssemblyView> views;
    views.reserve(alive_.size());
    for (const U32 c : alive_) {
      AssemblyView v{CommunityId{c}, {}};
      for (const U32 p : assembly_[c]) v.members.push_back(PersonId{p});
      views.push_back(std::move(v));
    }
    const ValidityReport report = validate(mirror_, views, n_);
    for (const ValidityIssue& issue : report.violations) {
      fail(t, "validity: " + issue.detail, Finding::Kind::Validity);
    }

    if (conservation_pending_) {
      conservation_pending_ = false;
      for (const U32 f : alive_) {
        const CommunityId fc{f};
        if (mirror_.is_leaf(fc)) continue;
        Rational total(0);
        for (const CommunityId v : mirror_.children(fc)) {
          total += share_child(mirror_, v, fc, n_);
        }
        if (total != Rational(n_)) {
          fail(t,
               "conservation: child shares of " + cname(f) + " sum to " +
                   decimal_string(total) + " instead of " + std::to_string(n_),
               Finding::Kind::Conservation);
        }
        for (const PersonId p : mirror_.population(fc)) {
          Rational wsum(0);
          for (const CommunityId v : mirror_.children(fc)) {
            wsum += weight_person(mirror_, p, v, fc);
          }
          if (wsum != 1) {
            fail(t,
                 "conservation: weights of " + pname(p.v) + " across children of " +
                     cname(f) + " sum to " + decimal_string(wsum),
                 Finding::Kind::Conservation);
          }
        }
      }
    }

    for (const U32 f : alive_) {
      const auto qit = quotas_.find(f);
      if (qit == quotas_.end()) continue;
      const std::set<U32>& assembly = assembly_[f];
      for (const auto& [v, quota] : qit->second) {
        int seats = 0;
        for (const U32 p : assembly) {
          if (pop_contains(v, p)) ++seats;
        }
        if (seats < quota) {
          std::ostringstream os;
          os << "seat quota: " << cname(f) << " seats " << seats << " member(s) of "
             << cname(v) << ", below the floor " << quota;
          fail(t, os.str(), Finding::Kind::Quota);
        }
      }
    }
  }

  // ---- spread sampling ----
  void take_samples_below(Tick limit) {
    while (sample_idx_ < samples_.size() && samples_[sample_idx_] < limit) {
      const Tick s = samples_[sample_idx_++];
      std::map<U32, Rational> worst;
      for (const U32 f : alive_) worst.emplace(f, Rational(0));
      std::map<PairKey, PairIntegrals> snapshot;
      for (const auto& [key, lv] : live_) {
        const auto fit = result_.full.find(key);
        const Rational dt(static_cast<unsigned long long>(s - lv.last));
        const Rational seat_int =
            (fit != result_.full.end() ? fit->second.seat : Rational(0)) +
            Rational(lv.seat) * dt;
        const Rational share_int =
            (fit != result_.full.end() ? fit->second.share : Rational(0)) + lv.share * dt;
        if (with_series_) snapshot[key] = PairIntegrals{seat_int, share_int};
        if (key.kind == EntityKind::Person) {
          const auto wit = worst.find(key.community.v);
          if (wit != worst.end()) {
            const Rational ratio =
                share_int == 0 ? Rational(1) : Rational(seat_int / share_int);
            const Rational gap = rational_abs(ratio - 1);
            if (gap > wit->second) wit->second = gap;
          }
        }
      }
      for (const auto& [f, gap] : worst) result_.spread[f].push_back(gap);
      if (with_series_) result_.series.push_back(std::move(snapshot));
    }
  }

  void capture_final() {
    for (const U32 f : alive_) {
      result_.final_pop[f] = own_pop(f).size();
      if (const auto ch = children_.find(f); ch != children_.end()) {
        result_.final_children[f].assign(ch->second.begin(), ch->second.end());
      } else {
        result_.final_children[f] = {};
      }
      result_.final_assembly[f].assign(assembly_[f].begin(), assembly_[f].end());
      if (const auto lm = leaf_members_.find(f); lm != leaf_members_.end()) {
        result_.final_leaf_members[f] = lm->second;
      }
    }
  }

  const RunLog& log_;
  const int n_;
  const bool with_series_;

  // Oracle's own state (plain maps over raw indices).
  std::set<U32> created_;
  std::set<U32> alive_;
  std::map<U32, std::set<U32>> children_;
  std::map<U32, std::vector<U32>> leaf_members_;  // sorted
  std::map<U32, std::set<U32>> assembly_;
  std::vector<U32> person_leaf_;

  // Mirror graph used solely to exercise the product validator and measures.
  FederationGraph mirror_;

  std::map<U32, std::vector<U32>> pop_cache_;
  std::map<U32, std::vector<std::pair<U32, long long>>> quotas_;
  std::map<PairKey, LiveVal> live_;

  std::vector<Tick> samples_;
  std::size_t sample_idx_ = 0;

  OracleResult result_;
  std::vector<Finding> findings_;
  Tick now_ = 0;
  Tick last_structural_ = 0;
  bool conservation_pending_ = false;
};

std::string pair_label(const PairKey& key, const IdSpace& ids) {
  std::string out = "(" + ids.communities.name(key.community.v) + ", ";
  if (key.kind == EntityKind::Person) {
    out += "person " + ids.persons.name(key.entity);
  } else {
    out += "child " + ids.communities.name(key.entity);
  }
  out += ")";
  return out;
}

}  // namespace

OracleResult oracle_recompute(const RunLog& log, bool with_series) {
  return Oracle(log, with_series).run();
}

std::vector<std::string> diff_ledgers(const MetricsLedger& ledger, const OracleResult& oracle,
                                      const IdSpace& ids) {
  std::vector<std::string> out;
  for (const auto& [key, cell] : ledger.cells()) {
    const auto it = oracle.full.find(key);
    const Rational oseat = it != oracle.full.end() ? it->second.seat : Rational(0);
    const Rational oshare = it != oracle.full.end() ? it->second.share : Rational(0);
    if (cell.seat_integral != oseat) {
      out.push_back("seat integral of " + pair_label(key, ids) + ": ledger " +
                    decimal_string(cell.seat_integral) + " vs replay " + decimal_string(oseat));
    }
    if (cell.share_integral != oshare) {
      out.push_back("share integral of " + pair_label(key, ids) + ": ledger " +
                    decimal_string(cell.share_integral) + " vs replay " +
                    decimal_string(oshare));
    }
  }
  for (const auto& [key, pi] : oracle.full) {
    if (ledger.find(key) == nullptr && (pi.seat != 0 || pi.share != 0)) {
      out.push_back("pair " + pair_label(key, ids) + " is missing from the ledger");
    }
  }
  return out;
}

ConvergenceReport summarize_convergence(const OracleResult& oracle, const RunLog& log,
                                        const Rational& spread_slack) {
  ConvergenceReport rep;
  if (log.horizon <= log.fst) return rep;  // no tail to average over
  const Rational window(static_cast<unsigned long long>(log.horizon - log.fst));
  std::set<std::uint32_t> scoped;
  for (const auto& [f, size] : oracle.final_pop) {
    if (size >= static_cast<std::size_t>(log.assembly_size)) scoped.insert(f);
  }
  for (const auto& [key, ti] : oracle.tail) {
    if (scoped.find(key.community.v) == scoped.end()) continue;
    if (ti.share == 0) continue;
    const Rational avg_seats = Rational(ti.seat / window);
    const Rational avg_share = Rational(ti.share / window);
    if (key.kind == EntityKind::Person) {
      const Rational gap = rational_abs(avg_seats - avg_share);
      rep.eep.push_back(ConvergenceItem{key, gap});
      if (gap > rep.max_eep) rep.max_eep = gap;
    } else {
      const Rational deficit =
          avg_seats < avg_share ? Rational(avg_share - avg_seats) : Rational(0);
      rep.efr.push_back(ConvergenceItem{key, deficit});
      if (deficit > rep.max_efr) rep.max_efr = deficit;
    }
  }
  for (const auto& [f, samples] : oracle.spread) {
    if (oracle.final_pop.find(f) == oracle.final_pop.end()) continue;
    if (samples.size() < 2) continue;
    const std::size_t half = samples.size() / 2;
    Rational first(0), second(0);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      Rational& bucket = k < half ? first : second;
      if (samples[k] > bucket) bucket = samples[k];
    }
    rep.spread_halves[f] = {first, second};
    if (second > Rational(first + spread_slack)) rep.spread_regressions.push_back(f);
  }
  return rep;
}

}  // namespace fedsim
