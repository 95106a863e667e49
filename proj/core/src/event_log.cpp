#include "vecs/event_log.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <sstream>

#include "vecs/config.hpp"
#include "vecs/errors.hpp"

namespace vecs {

namespace {
constexpr std::array<const char*, 12> kNames = {"BEGIN", "TOR",      "TOA",   "NACK", "TSR",  "TEA",
                                                "ALLOC", "EVICT",    "COMPLETE", "CLOUD", "DROP", "END"};
}

const char* to_string(EventKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

EventKind parse_event_kind(const std::string& text) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (text == kNames[i]) return static_cast<EventKind>(i);
  }
  throw ParseError("unknown event kind '" + text + "'");
}

void EventLog::write(std::ostream& out) const {
  out << "time,kind,task,bs,u,detail\n";
  for (const auto& e : events_) {
    out << e.time << ',' << vecs::to_string(e.kind) << ',' << e.task << ',' << e.bs << ','
        << format_double(e.u) << ',' << e.detail << '\n';
  }
}

std::string EventLog::to_string() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

EventLog EventLog::read(std::istream& in) {
  EventLog log;
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      if (trim(line) == "time,kind,task,bs,u,detail") continue;
    }
    // detail is last and may be empty; it never contains commas.
    auto parts = split(line, ',');
    if (parts.size() != 6) throw ParseError("event log line " + std::to_string(line_no) + ": expected 6 fields");
    Event e;
    e.time = parse_int(parts[0]);
    e.kind = parse_event_kind(parts[1]);
    e.task = parse_int(parts[2]);
    e.bs = static_cast<BsId>(parse_int(parts[3]));
    e.u = parse_double(parts[4]);
    e.detail = parts[5];
    log.append(std::move(e));
  }
  return log;
}

std::string detail_value(const std::string& detail, const std::string& key) {
  for (const auto& item : split(detail, ';')) {
    const auto eq = item.find('=');
    if (eq != std::string::npos && item.substr(0, eq) == key) return item.substr(eq + 1);
  }
  return {};
}

}  // namespace vecs
