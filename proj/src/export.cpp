#include "fedsim/export.hpp"

#include "fedsim/rational.hpp"

#include "json.hpp"

#include <sstream>

namespace fedsim {

namespace {

using nlohmann::json;

json rational_json(const Rational& r) {
  json j;
  j["num"] = numerator(r).str();
  j["den"] = denominator(r).str();
  j["decimal"] = decimal_string(r);
  return j;
}

}  // namespace

std::string render_final_state(const Engine& engine) {
  const IdSpace& ids = engine.ids();
  json root;
  root["t"] = engine.now();
  root["assembly_size"] = engine.config().assembly_size;
  root["term_length"] = engine.config().term_length;
  json communities = json::array();
  for (const CommunityId c : engine.graph().alive()) {
    json jc;
    jc["id"] = ids.communities.name(c.v);
    jc["leaf"] = engine.graph().holds_members(c);
    json members = json::array();
    if (engine.graph().holds_members(c)) {
      for (const PersonId p : engine.graph().leaf_members(c)) {
        members.push_back(ids.persons.name(p.v));
      }
    }
    jc["members"] = std::move(members);
    json children = json::array();
    for (const CommunityId v : engine.graph().children(c)) {
      children.push_back(ids.communities.name(v.v));
    }
    jc["children"] = std::move(children);
    json population = json::array();
    for (const PersonId p : engine.graph().population(c)) {
      population.push_back(ids.persons.name(p.v));
    }
    jc["population"] = std::move(population);
    json assembly = json::array();
    for (const Seat& s : engine.assembly(c).seats()) {
      json js;
      js["person"] = ids.persons.name(s.person.v);
      if (s.color) {
        js["color"] = ids.communities.name(s.color->v);
      } else {
        js["color"] = nullptr;
      }
      js["start"] = s.start;
      assembly.push_back(std::move(js));
    }
    jc["assembly"] = std::move(assembly);
    communities.push_back(std::move(jc));
  }
  root["communities"] = std::move(communities);
  return root.dump(2) + "\n";
}

std::string render_metrics_csv(const OracleResult& oracle, const RunLog& log) {
  std::ostringstream os;
  os << "t,community,entity,kind,avg_seats,avg_share,ratio\n";
  for (std::size_t k = 0; k < oracle.series.size() && k < oracle.sample_times.size(); ++k) {
    const Tick t = oracle.sample_times[k];
    const Rational span(static_cast<unsigned long long>(t));
    for (const auto& [key, pi] : oracle.series[k]) {
      const std::string community = log.ids.communities.name(key.community.v);
      const std::string entity = key.kind == EntityKind::Person
                                     ? log.ids.persons.name(key.entity)
                                     : log.ids.communities.name(key.entity);
      const char* kind = key.kind == EntityKind::Person ? "person" : "child";
      const Rational avg_seats = span == 0 ? Rational(0) : Rational(pi.seat / span);
      const Rational avg_share = span == 0 ? Rational(0) : Rational(pi.share / span);
      const Rational ratio = pi.share == 0 ? Rational(1) : Rational(pi.seat / pi.share);
      os << t << ',' << community << ',' << entity << ',' << kind << ','
         << decimal_string(avg_seats) << ',' << decimal_string(avg_share) << ','
         << decimal_string(ratio) << '\n';
    }
  }
  return os.str();
}

std::string render_fairness_json(const OracleResult& oracle, const ConvergenceReport& conv,
                                 const RunLog& log,
                                 const std::vector<std::string>& ledger_diffs) {
  json root;
  root["fst"] = log.fst;
  root["horizon"] = log.horizon;
  root["assembly_size"] = log.assembly_size;
  root["term_length"] = log.term_length;

  const char* kind_names[] = {"replay", "validity", "conservation", "quota"};
  json findings = json::array();
  json pfr = json::array();
  for (const Finding& f : oracle.findings) {
    json jf;
    jf["t"] = f.t;
    jf["kind"] = kind_names[static_cast<int>(f.kind)];
    jf["what"] = f.what;
    if (f.kind == Finding::Kind::Quota) pfr.push_back(jf);
    findings.push_back(std::move(jf));
  }
  root["findings"] = std::move(findings);
  root["pfr_violations"] = std::move(pfr);
  root["ledger_matches_replay"] = ledger_diffs.empty();
  root["ledger_diffs"] = ledger_diffs;

  json eep = json::array();
  for (const ConvergenceItem& item : conv.eep) {
    json je;
    je["community"] = log.ids.communities.name(item.key.community.v);
    je["person"] = log.ids.persons.name(item.key.entity);
    je["gap"] = rational_json(item.value);
    eep.push_back(std::move(je));
  }
  root["eep_gaps"] = std::move(eep);
  root["max_eep_gap"] = rational_json(conv.max_eep);

  json efr = json::array();
  for (const ConvergenceItem& item : conv.efr) {
    json je;
    je["community"] = log.ids.communities.name(item.key.community.v);
    je["child"] = log.ids.communities.name(item.key.entity);
    je["deficit"] = rational_json(item.value);
    efr.push_back(std::move(je));
  }
  root["efr_deficits"] = std::move(efr);
  root["max_efr_deficit"] = rational_json(conv.max_efr);

  json spread = json::array();
  for (const auto& [f, halves] : conv.spread_halves) {
    json js;
    js["community"] = log.ids.communities.name(f);
    js["first_half_max"] = rational_json(halves.first);
    js["second_half_max"] = rational_json(halves.second);
    bool regressed = false;
    for (const std::uint32_t r : conv.spread_regressions) {
      if (r == f) regressed = true;
    }
    js["regressed"] = regressed;
    spread.push_back(std::move(js));
  }
  root["spread"] = std::move(spread);

  json series = json::object();
  for (const auto& [f, samples] : oracle.spread) {
    json arr = json::array();
    for (const Rational& s : samples) arr.push_back(decimal_string(s));
    series[log.ids.communities.name(f)] = std::move(arr);
  }
  root["spread_series"] = std::move(series);

  return root.dump(2) + "\n";
}

}  // namespace fedsim
