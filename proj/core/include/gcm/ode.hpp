// Tolerances and status codes of the adaptive trajectory integrator.
#pragma once

#include <cstddef>

namespace gcm {

struct OdeTolerances {
  double rtol = 1e-13;
  double atol = 1e-13;
  std::size_t max_steps = 50'000'000;
};

enum class OdeStatus { Ok, TooManySteps, StepUnderflow, NonFinite };

}  // namespace gcm
