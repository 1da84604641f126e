#include "cslam/recording.hpp"

namespace cslam {

double truth_travel_distance(const Recording& recording) {
  double total = 0.0;
  std::optional<Vec2> last;
  for (const Event& e : recording.events) {
    if (const auto* truth = std::get_if<TruthEvent>(&e.payload)) {
      const Vec2 p = truth->pose.translation();
      if (last) {
        total += distance(*last, p);
      }
      last = p;
    }
  }
  return total;
}

std::optional<Pose2> first_truth_pose(const Recording& recording) {
  for (const Event& e : recording.events) {
    if (const auto* truth = std::get_if<TruthEvent>(&e.payload)) {
      return truth->pose;
    }
  }
  return std::nullopt;
}

}  // namespace cslam
