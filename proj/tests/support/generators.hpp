#pragma once

// Test-only random generators. Deliberately independent of the synth module so that
// tests of synth output and tests of everything else do not share a code path.

#include <random>
#include <string>
#include <vector>

#include "emaviz/ema/response.hpp"
#include "emaviz/ema/survey.hpp"

namespace emaviz::testing {

inline ema::AnswerValue random_value(const ema::AnswerKind& kind, std::mt19937_64& rng) {
  using namespace ema;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  if (const auto* q = std::get_if<QuantSequential>(&kind)) return Magnitude{pick(q->min, q->max)};
  if (std::holds_alternative<QuantCyclic>(kind)) return ClockTime(pick(0, 1439));
  if (const auto* o = std::get_if<OrdinalSequential>(&kind))
    return Level{pick(0, static_cast<int>(o->levels.size()) - 1)};
  if (const auto* d = std::get_if<OrdinalDiverging>(&kind))
    return Level{pick(0, static_cast<int>(d->levels.size()) - 1)};
  if (const auto* c = std::get_if<Categorical>(&kind)) {
    std::vector<std::string> chosen;
    if (c->multi) {
      for (const auto& l : c->labels)
        if (pick(0, 3) == 0) chosen.push_back(l);
    } else {
      chosen.push_back(c->labels[static_cast<std::size_t>(pick(0, static_cast<int>(c->labels.size()) - 1))]);
    }
    return make_categories(std::move(chosen));
  }
  if (std::holds_alternative<Binary>(kind)) return Flag{pick(0, 1) == 1};
  static const char* words[] = {"math test", "a & b", "<tag>", "\"quoted\"", "caf\xc3\xa9", "x,y;z",
                                "two\r\nlines"};
  return Text{words[pick(0, 6)]};
}

/// A valid response for the slot; each asked question is answered with probability `p_answer`.
inline ema::EmaResponse random_response(const ema::SurveyDefinition& def, std::mt19937_64& rng,
                                        const std::string& participant, Date date,
                                        ema::SurveyWindow w, double p_answer = 0.8) {
  ema::EmaResponse r;
  r.participant = participant;
  r.date = date;
  r.window = w;
  const int offset = std::uniform_int_distribution<int>(-8, 8)(rng) * 60;
  const auto local = absl::CivilSecond(date.year(), date.month(), date.day(),
                                       std::uniform_int_distribution<int>(0, 23)(rng),
                                       std::uniform_int_distribution<int>(0, 59)(rng), 0);
  r.submitted_at = Timestamp{absl::FromCivil(local, absl::FixedTimeZone(offset * 60)), offset};
  std::bernoulli_distribution answer(p_answer);
  for (const auto* q : def.asked_in(w)) {
    if (answer(rng)) r.answers.emplace(q->qid, random_value(q->answer, rng));
  }
  return r;
}

}  // namespace emaviz::testing
