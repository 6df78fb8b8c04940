#include "fedsim/runlog_io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fedsim {

namespace {

using nlohmann::json;

const char* rule_name(ActionRule rule) {
  switch (rule) {
    case ActionRule::GarbageCollect: return "gc";
    case ActionRule::R1: return "r1";
    case ActionRule::R2: return "r2";
    case ActionRule::R3: return "r3";
    case ActionRule::A1: return "a1";
    case ActionRule::A2: return "a2";
    case ActionRule::Prune: return "prune";
    case ActionRule::Warning: return "warning";
  }
  return "?";
}

ActionRule rule_from(const std::string& name) {
  if (name == "gc") return ActionRule::GarbageCollect;
  if (name == "r1") return ActionRule::R1;
  if (name == "r2") return ActionRule::R2;
  if (name == "r3") return ActionRule::R3;
  if (name == "a1") return ActionRule::A1;
  if (name == "a2") return ActionRule::A2;
  if (name == "prune") return ActionRule::Prune;
  if (name == "warning") return ActionRule::Warning;
  throw std::runtime_error("unknown action rule '" + name + "'");
}

const char* event_name(EventKind kind) {
  switch (kind) {
    case EventKind::Participate: return "participate";
    case EventKind::Federate: return "federate";
    case EventKind::Join: return "join";
    case EventKind::Leave: return "leave";
    case EventKind::RemoveMember: return "remove-member";
  }
  return "?";
}

}  // namespace

void write_run_log(const RunLog& log, std::ostream& out) {
  {
    json header;
    header["type"] = "header";
    header["assembly_size"] = log.assembly_size;
    header["term_length"] = log.term_length;
    header["child_min_pop"] = log.child_min_pop_enforced;
    header["sortition"] = log.sortition;
    header["seed"] = log.seed;
    json persons = json::array();
    for (std::uint32_t i = 0; i < log.ids.persons.size(); ++i) {
      persons.push_back(log.ids.persons.name(i));
    }
    json communities = json::array();
    for (std::uint32_t i = 0; i < log.ids.communities.size(); ++i) {
      communities.push_back(log.ids.communities.name(i));
    }
    header["persons"] = std::move(persons);
    header["communities"] = std::move(communities);
    out << header.dump() << '\n';
  }
  for (const RunLogEntry& en : log.entries) {
    json j;
    if (en.type == RunLogEntry::Type::Event) {
      const TimedEvent& e = en.event;
      j["type"] = "event";
      j["t"] = e.t;
      j["event"] = event_name(e.kind);
      switch (e.kind) {
        case EventKind::Participate:
          j["person"] = log.ids.persons.name(e.person.v);
          j["community"] = log.ids.communities.name(e.a.v);
          break;
        case EventKind::Federate:
          j["child"] = log.ids.communities.name(e.a.v);
          j["parent"] = log.ids.communities.name(e.b.v);
          break;
        case EventKind::Join:
        case EventKind::Leave:
          j["parent"] = log.ids.communities.name(e.a.v);
          j["child"] = log.ids.communities.name(e.b.v);
          break;
        case EventKind::RemoveMember:
          j["person"] = log.ids.persons.name(e.person.v);
          j["community"] = log.ids.communities.name(e.a.v);
          break;
      }
    } else {
      const LogAction& a = en.action;
      j["type"] = "action";
      j["t"] = a.t;
      j["rule"] = rule_name(a.rule);
      j["community"] = log.ids.communities.name(a.community.v);
      if (a.person) j["person"] = log.ids.persons.name(a.person->v);
      if (a.color) j["color"] = log.ids.communities.name(a.color->v);
    }
    out << j.dump() << '\n';
  }
  {
    json footer;
    footer["type"] = "footer";
    footer["fst"] = log.fst;
    footer["horizon"] = log.horizon;
    out << footer.dump() << '\n';
  }
}

std::string run_log_to_string(const RunLog& log) {
  std::ostringstream os;
  write_run_log(log, os);
  return os.str();
}

RunLog parse_run_log(std::istream& in) {
  RunLog log;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  bool have_footer = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw std::runtime_error("run log line " + std::to_string(lineno) + ": " + ex.what());
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      if (have_header) throw std::runtime_error("run log has two headers");
      have_header = true;
      log.assembly_size = j.at("assembly_size").get<int>();
      log.term_length = j.at("term_length").get<Tick>();
      log.child_min_pop_enforced = j.at("child_min_pop").get<bool>();
      log.sortition = j.at("sortition").get<bool>();
      log.seed = j.at("seed").get<std::uint64_t>();
      log.ids.persons = IdTable::build(j.at("persons").get<std::vector<std::string>>());
      log.ids.communities = IdTable::build(j.at("communities").get<std::vector<std::string>>());
      continue;
    }
    if (!have_header) throw std::runtime_error("run log does not start with a header");
    if (have_footer) throw std::runtime_error("run log continues after the footer");
    if (type == "footer") {
      have_footer = true;
      log.fst = j.at("fst").get<Tick>();
      log.horizon = j.at("horizon").get<Tick>();
      continue;
    }
    try {
      if (type == "event") {
        TimedEvent e;
        e.t = j.at("t").get<Tick>();
        e.line = lineno;
        const std::string kind = j.at("event").get<std::string>();
        if (kind == "participate") {
          e.kind = EventKind::Participate;
          e.person = PersonId{log.ids.persons.index_of(j.at("person").get<std::string>())};
          e.a = CommunityId{log.ids.communities.index_of(j.at("community").get<std::string>())};
        } else if (kind == "federate") {
          e.kind = EventKind::Federate;
          e.a = CommunityId{log.ids.communities.index_of(j.at("child").get<std::string>())};
          e.b = CommunityId{log.ids.communities.index_of(j.at("parent").get<std::string>())};
        } else if (kind == "join" || kind == "leave") {
          e.kind = kind == "join" ? EventKind::Join : EventKind::Leave;
          e.a = CommunityId{log.ids.communities.index_of(j.at("parent").get<std::string>())};
          e.b = CommunityId{log.ids.communities.index_of(j.at("child").get<std::string>())};
        } else if (kind == "remove-member") {
          e.kind = EventKind::RemoveMember;
          e.person = PersonId{log.ids.persons.index_of(j.at("person").get<std::string>())};
          e.a = CommunityId{log.ids.communities.index_of(j.at("community").get<std::string>())};
        } else {
          throw std::runtime_error("unknown event '" + kind + "'");
        }
        log.entries.push_back(RunLogEntry::make_event(e));
      } else if (type == "action") {
        LogAction a;
        a.t = j.at("t").get<Tick>();
        a.rule = rule_from(j.at("rule").get<std::string>());
        a.community = CommunityId{log.ids.communities.index_of(j.at("community").get<std::string>())};
        if (j.contains("person")) {
          a.person = PersonId{log.ids.persons.index_of(j.at("person").get<std::string>())};
        }
        if (j.contains("color")) {
          a.color = CommunityId{log.ids.communities.index_of(j.at("color").get<std::string>())};
        }
        log.entries.push_back(RunLogEntry::make_action(a));
      } else {
        throw std::runtime_error("unknown entry type '" + type + "'");
      }
    } catch (const json::exception& ex) {
      throw std::runtime_error("run log line " + std::to_string(lineno) + ": " + ex.what());
    } catch (const std::out_of_range& ex) {
      throw std::runtime_error("run log line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  if (!have_header) throw std::runtime_error("run log is empty");
  if (!have_footer) throw std::runtime_error("run log has no footer");
  return log;
}

RunLog parse_run_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run log '" + path + "'");
  return parse_run_log(in);
}

}  // namespace fedsim
