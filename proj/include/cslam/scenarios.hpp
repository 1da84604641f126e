#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cslam/floorplan.hpp"
#include "cslam/simulator.hpp"

namespace cslam {

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  FloorPlan plan;
  // The first two anchors of the plan coincide and define the end-point error.
  std::vector<AgentScript> scripts;
};

std::vector<std::string> known_scenarios();

// "scene01": four identical rooms on one side of a 40 m corridor, three
//   agents, agent A starting where agent C finishes.
// "scene02": six rooms on both sides of a 30 m corridor, three agents that
//   enter and leave the same rooms several times.
// "aliasing": two far-apart rooms carrying the same sign text, two agents.
// Throws std::invalid_argument listing the known names for anything else.
Scenario scripted_scenario(const std::string& name, std::uint64_t seed);

// Noise, jitter and OCR corruption off; detection certain.
Scenario make_noise_free(Scenario scenario);

// Second and later signs sharing a text get a distinguishing suffix.
Scenario make_texts_unique(Scenario scenario);

}  // namespace cslam
