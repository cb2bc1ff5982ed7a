#pragma once

#include <array>
#include <string_view>

#include "emaviz/ema/survey.hpp"

namespace emaviz::renderer {

enum class ChartId {
  my_sleep,
  symptom_intensity,
  symptom_occurrence,
  emotions,
  worry_target,
  worry_levels,
  expect_vs_reality,
  school,
  peer_worry,
  peer_quality,
};

/// Top-to-bottom dashboard order.
inline constexpr std::array<ChartId, 10> kChartOrder = {
    ChartId::my_sleep,          ChartId::symptom_intensity, ChartId::symptom_occurrence,
    ChartId::emotions,          ChartId::worry_target,      ChartId::worry_levels,
    ChartId::expect_vs_reality, ChartId::school,            ChartId::peer_worry,
    ChartId::peer_quality};

std::string_view to_string(ChartId id);
/// Throws std::invalid_argument for an unknown chart name.
ChartId parse_chart_id(std::string_view s);
ema::Facet facet_of(ChartId id);
std::size_t index_of(ChartId id);

}  // namespace emaviz::renderer
