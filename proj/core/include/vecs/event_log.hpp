#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vecs/types.hpp"

namespace vecs {

enum class EventKind : std::uint8_t {
  kBegin,
  kTor,
  kToa,
  kNack,
  kTsr,
  kTea,
  kAlloc,
  kEvict,
  kComplete,
  kCloud,
  kDrop,
  kEnd,
};

const char* to_string(EventKind kind);
EventKind parse_event_kind(const std::string& text);

/// One line of the run log: `time,kind,task,bs,u,detail`. `detail` is a
/// `key=value;key=value` list and never contains a comma.
struct Event {
  Time time = 0;
  EventKind kind = EventKind::kBegin;
  TaskId task = -1;
  BsId bs = kNoBs;
  double u = 0.0;
  std::string detail;

  friend bool operator==(const Event&, const Event&) = default;
};

class EventLog {
 public:
  void append(Event event) { events_.push_back(std::move(event)); }
  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  void write(std::ostream& out) const;
  std::string to_string() const;
  static EventLog read(std::istream& in);

 private:
  std::vector<Event> events_;
};

/// Looks up `key` in a detail string; empty when absent.
std::string detail_value(const std::string& detail, const std::string& key);

}  // namespace vecs
