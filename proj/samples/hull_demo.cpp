// Distance from a target to the convex hull of an orbit, as the orbit grows.
// Uses the step-weight operator on Z and compares it with the pure shift.

#include <cstdio>

#include "wtlab/wtlab.hpp"

int main() {
  using namespace wtlab;
  const WeightedTranslation step_weight = preset_example2().op();
  const WeightedTranslation shift{StepElement(-1), LatticeWeight::constant(1.0)};

  const CompactVector seed = CompactVector::point_mass(3);
  const CompactVector target = CompactVector::from_entries({{0, 1.0}, {-1, 0.5}});

  const HullResult a = hull_distance(step_weight, seed, target, 12);
  const HullResult b = hull_distance(shift, seed, target, 12);
  std::printf("%3s  %-12s %-12s\n", "N", "weighted", "pure shift");
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    std::printf("%3d  %-12.6g %-12.6g\n", a.trace[i].N, a.trace[i].distance, b.trace[i].distance);
  }
  std::printf("weighted optimum uses degrees %d..%d\n", a.coefficients.offset(),
              a.coefficients.degree());
  return 0;
}
