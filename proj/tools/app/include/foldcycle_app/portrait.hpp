#pragma once

#include <string>
#include <vector>

#include "foldcycle/cycles.hpp"

namespace foldcycle::app {

struct Polyline {
  std::string kind;  // sigma-sliding, sigma-crossing, arc-upper, arc-lower, cycle-upper, cycle-lower, fold
  std::vector<PlaneState> points;
};

struct Portrait {
  std::vector<Polyline> lines;
  std::vector<std::string> diagnostics;
};

/// Switching line partition, fold points and sample arcs over
/// [center − 2r, center + 2r], plus the two arcs of every given cycle.
Portrait build_portrait(const PiecewiseField& z, const Window& window, const std::vector<LimitCycle>& cycles,
                        const IntegratorConfig& cfg);

std::string portrait_svg(const Portrait& p, const std::string& title);
std::string portrait_csv(const Portrait& p);

}  // namespace foldcycle::app
