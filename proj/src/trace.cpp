#include "fedsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fedsim {

namespace {

struct RawLine {
  Tick t = 0;
  EventKind kind = EventKind::Participate;
  std::string x;
  std::string y;
  int line = 0;
};

Tick parse_tick(const std::string& token, int line) {
  Tick value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw TraceError(line, "invalid timestamp '" + token + "'");
  }
  return value;
}

EventKind parse_kind(const std::string& verb, int line) {
  if (verb == "participate") return EventKind::Participate;
  if (verb == "federate") return EventKind::Federate;
  if (verb == "join") return EventKind::Join;
  if (verb == "leave") return EventKind::Leave;
  if (verb == "remove-member") return EventKind::RemoveMember;
  throw TraceError(line, "unknown event '" + verb + "'");
}

}  // namespace

ParsedTrace parse_trace(std::istream& in) {
  std::vector<RawLine> raws;
  std::vector<std::string> person_names;
  std::vector<std::string> community_names;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string tstr;
    if (!(ss >> tstr)) continue;  // blank or comment-only line
    std::string verb, x, y;
    if (!(ss >> verb >> x >> y)) {
      throw TraceError(lineno, "expected '<t> <event> <arg> <arg>'");
    }
    std::string extra;
    if (ss >> extra) {
      throw TraceError(lineno, "unexpected trailing token '" + extra + "'");
    }
    RawLine raw;
    raw.t = parse_tick(tstr, lineno);
    raw.kind = parse_kind(verb, lineno);
    raw.x = std::move(x);
    raw.y = std::move(y);
    raw.line = lineno;
    switch (raw.kind) {
      case EventKind::Participate:
      case EventKind::RemoveMember:
        person_names.push_back(raw.x);
        community_names.push_back(raw.y);
        break;
      case EventKind::Federate:
      case EventKind::Join:
      case EventKind::Leave:
        community_names.push_back(raw.x);
        community_names.push_back(raw.y);
        break;
    }
    raws.push_back(std::move(raw));
  }

  ParsedTrace out;
  out.ids.persons = IdTable::build(std::move(person_names));
  out.ids.communities = IdTable::build(std::move(community_names));
  out.events.reserve(raws.size());
  for (const RawLine& raw : raws) {
    TimedEvent e;
    e.t = raw.t;
    e.kind = raw.kind;
    e.line = raw.line;
    switch (raw.kind) {
      case EventKind::Participate:
      case EventKind::RemoveMember:
        e.person = PersonId{out.ids.persons.index_of(raw.x)};
        e.a = CommunityId{out.ids.communities.index_of(raw.y)};
        break;
      case EventKind::Federate:
      case EventKind::Join:
      case EventKind::Leave:
        e.a = CommunityId{out.ids.communities.index_of(raw.x)};
        e.b = CommunityId{out.ids.communities.index_of(raw.y)};
        break;
    }
    out.events.push_back(e);
  }
  return out;
}

ParsedTrace parse_trace_text(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

ParsedTrace parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

std::string format_trace(const ParsedTrace& trace) {
  std::ostringstream os;
  for (const TimedEvent& e : trace.events) {
    os << e.t << ' ';
    switch (e.kind) {
      case EventKind::Participate:
        os << "participate " << trace.ids.persons.name(e.person.v) << ' '
           << trace.ids.communities.name(e.a.v);
        break;
      case EventKind::Federate:
        os << "federate " << trace.ids.communities.name(e.a.v) << ' '
           << trace.ids.communities.name(e.b.v);
        break;
      case EventKind::Join:
        os << "join " << trace.ids.communities.name(e.a.v) << ' '
           << trace.ids.communities.name(e.b.v);
        break;
      case EventKind::Leave:
        os << "leave " << trace.ids.communities.name(e.a.v) << ' '
           << trace.ids.communities.name(e.b.v);
        break;
      case EventKind::RemoveMember:
        os << "remove-member " << trace.ids.persons.name(e.person.v) << ' '
           << trace.ids.communities.name(e.a.v);
        break;
    }
    os << '\n';
  }
  return os.str();
}

Engine run_trace(const ParsedTrace& trace, const EngineConfig& cfg,
                 std::optional<Tick> horizon) {
  Engine engine(trace.ids, cfg);
  for (const TimedEvent& e : trace.events) engine.apply_event(e);
  Tick h = 0;
  if (horizon) {
    h = *horizon;
    if (h < engine.now()) {
      throw TraceError(0, "horizon t=" + std::to_string(h) +
                              " precedes the end of the trace t=" +
                              std::to_string(engine.now()));
    }
  } else {
    h = std::max(engine.fst() + 300 * cfg.term_length, engine.now());
  }
  engine.finalize(h);
  return engine;
}

TraceBuilder& TraceBuilder::participate(Tick t, const std::string& person,
                                        const std::string& leaf) {
  lines_.push_back(std::to_string(t) + " participate " + person + ' ' + leaf);
  return *this;
}

TraceBuilder& TraceBuilder::federate(Tick t, const std::string& child,
                                     const std::string& parent) {
  lines_.push_back(std::to_string(t) + " federate " + child + ' ' + parent);
  return *this;
}

TraceBuilder& TraceBuilder::join(Tick t, const std::string& parent, const std::string& child) {
  lines_.push_back(std::to_string(t) + " join " + parent + ' ' + child);
  return *this;
}

TraceBuilder& TraceBuilder::leave(Tick t, const std::string& parent, const std::string& child) {
  lines_.push_back(std::to_string(t) + " leave " + parent + ' ' + child);
  return *this;
}

TraceBuilder& TraceBuilder::remove_member(Tick t, const std::string& person,
                                          const std::string& community) {
  lines_.push_back(std::to_string(t) + " remove-member " + person + ' ' + community);
  return *this;
}

std::string TraceBuilder::text() const {
  std::string out;
  for (const std::string& l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

ParsedTrace TraceBuilder::build() const { return parse_trace_text(text()); }

}  // namespace fedsim
