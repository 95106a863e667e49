#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "vecs/config.hpp"
#include "vecs/types.hpp"

namespace vecs {

struct BsLocation {
  BsId id = 0;
  Point loc;
  friend bool operator==(const BsLocation&, const BsLocation&) = default;
};

/// Location of one vehicle from the start of `batch` on.
struct AvLocation {
  std::int64_t batch = 0;
  AvId av = 0;
  Point loc;
  friend bool operator==(const AvLocation&, const AvLocation&) = default;
};

/// Full simulation input. Station ids are 0..M-1 in order.
struct Scenario {
  std::vector<Task> tasks;
  std::vector<BsLocation> stations;
  std::vector<AvLocation> av_locations;
  VecsConfig cfg;
  std::uint64_t seed = 0;

  /// Location of `av` at `batch`: the latest table entry at or before it.
  std::optional<Point> av_location(AvId av, std::int64_t batch) const;

  /// Throws ParseError (or GenerationError) describing the first broken invariant.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline std::int64_t batch_of(Time t, Time t_beta) { return t / t_beta; }

/// Line-oriented text: [CONFIG] key=value, [BS] id,x,y, [AV] batch,id,x,y,
/// [TASK] id,a,d,p,flag,av.
void write_scenario(std::ostream& out, const Scenario& scenario);
Scenario read_scenario(std::istream& in);

}  // namespace vecs
