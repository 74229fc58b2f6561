#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace vine {

/// One population member as seen by the ranking. Integer objectives are used
/// as they are; the two real objectives are compared by the lower bound of
/// their bin and only fall back to raw values inside a partition.
struct FitnessRecord {
  double f12_binned{0.0};
  int f31a{0};
  double f33{0.0};
  int f31b{0};
  double f32_binned{0.0};
  double f12_raw{0.0};
  double f32_raw{0.0};
  int rank{0};
  std::size_t pop_ref{0};
};

struct BinSizes {
  double f12{1.0};
  double f32{5.0};
};

/// Lower bound of the bin containing x.
inline double bin_value(double x, double bin) {
  if (!(bin > 0.0)) throw std::invalid_argument("bin_value: bin size must be positive");
  if (x < 0.0) throw std::invalid_argument("bin_value: objectives are nonnegative");
  return x - std::fmod(x, bin);
}

namespace detail {

inline auto partition_key(const FitnessRecord& r) {
  return std::tie(r.f12_binned, r.f31a, r.f33, r.f31b, r.f32_binned);
}

inline auto raw_key(const FitnessRecord& r) { return std::tie(r.f12_raw, r.f32_raw); }

}  // namespace detail

/// Strict "ranks before" relation on binned records.
inline bool ranks_before(const FitnessRecord& a, const FitnessRecord& b) {
  if (detail::partition_key(a) != detail::partition_key(b)) return detail::partition_key(a) < detail::partition_key(b);
  return detail::raw_key(a) < detail::raw_key(b);
}

/// Bins the real objectives, sorts on the five prioritized objectives, then
/// re-sorts each run of equal keys by the raw real values. Ranks 1..N follow
/// the final order; full ties keep their input order.
inline std::vector<FitnessRecord> rank_partition(std::vector<FitnessRecord> records, const BinSizes& bins) {
  for (auto& r : records) {
    r.f12_binned = bin_value(r.f12_raw, bins.f12);
    r.f32_binned = bin_value(r.f32_raw, bins.f32);
  }
  std::stable_sort(records.begin(), records.end(), [](const FitnessRecord& a, const FitnessRecord& b) {
    return detail::partition_key(a) < detail::partition_key(b);
  });

  auto start = records.begin();
  while (start != records.end()) {
    auto end = std::find_if(start + 1, records.end(), [&](const FitnessRecord& r) {
      return detail::partition_key(r) != detail::partition_key(*start);
    });
    std::stable_sort(start, end, [](const FitnessRecord& a, const FitnessRecord& b) {
      return detail::raw_key(a) < detail::raw_key(b);
    });
    start = end;
  }

  for (std::size_t i = 0; i < records.size(); ++i) records[i].rank = static_cast<int>(i + 1);
  return records;
}

}  // namespace vine
