#include "emaviz/ema/measures.hpp"

#include <stdexcept>

namespace emaviz::ema {

int sleep_duration(ClockTime bed, ClockTime wake) {
  if (bed == wake) throw std::invalid_argument("bed time equals wake time: " + bed.str());
  return minutes_between(bed, wake);
}

int likert_to_diverging(int level) {
  if (level < 1 || level > 5) throw std::out_of_range("Likert level outside 1..5: " + std::to_string(level));
  return level - 3;
}

std::optional<SleepRecord> sleep_record(const EmaResponse& morning) {
  const auto* bed = morning.get<ClockTime>(qid::sleep_bedtime);
  const auto* wake = morning.get<ClockTime>(qid::sleep_waketime);
  if (!bed || !wake || *bed == *wake) return std::nullopt;
  SleepRecord rec{morning.date, *bed, *wake, std::nullopt, sleep_duration(*bed, *wake)};
  if (const auto* q = morning.get<Level>(qid::sleep_quality)) rec.quality = q->index;
  return rec;
}

}  // namespace emaviz::ema
