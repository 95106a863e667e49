#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string_view>

namespace vecs {

/// Discrete time, in unit slots.
using Time = std::int64_t;
using TaskId = std::int64_t;
using BsId = std::int32_t;
using AvId = std::int32_t;

inline constexpr BsId kNoBs = -1;
/// Pseudo station id used for tasks executed on the centralized cloud.
inline constexpr BsId kCloudBs = -2;

enum class Criticality : std::uint8_t { kHard, kSoft };

constexpr char criticality_code(Criticality c) {
  return c == Criticality::kHard ? 'H' : 'S';
}

/// Integer grid coordinate in [0, m]^2.
struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

struct Task {
  TaskId id = 0;
  Time arrival = 0;
  Time deadline = 0;
  /// Minimum processing time at full utilisation, >= 1.
  Time min_processing = 1;
  Criticality flag = Criticality::kSoft;
  AvId origin_av = 0;

  bool is_hard() const { return flag == Criticality::kHard; }
  friend bool operator==(const Task&, const Task&) = default;
};

/// Checks a < d, p >= 1 and p <= d - a.
bool is_valid(const Task& task);

/// Calendar loads are kept in integer micro-cores so that bookkeeping and
/// log replay add up bit-for-bit regardless of summation order.
using MicroCores = std::int64_t;
inline constexpr MicroCores kMicroPerCore = 1'000'000;

inline MicroCores to_micro(double cores) {
  return static_cast<MicroCores>(std::llround(cores * static_cast<double>(kMicroPerCore)));
}

inline double from_micro(MicroCores micro) {
  return static_cast<double>(micro) / static_cast<double>(kMicroPerCore);
}

}  // namespace vecs
