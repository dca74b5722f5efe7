#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otg/axis_planner.hpp"

namespace otg::fuzz {

/// One randomized single-axis planning problem; reproducible from its seed.
struct instance {
  axis_state start;
  partial_target target;
  axis_limits limits;
  duration_spec duration;
};

instance make_instance(std::uint64_t seed);

/// Plans the instance and verifies the output contract: no exception,
/// defined target fields met within 1e-6, limit extrema within 1e-9 slack,
/// internally consistent phase boundaries, exact fixed duration.
/// Returns std::nullopt on success, else a failure description.
std::optional<std::string> check_instance(const instance& in);

struct failure {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string reason;
};

struct report {
  std::uint64_t count = 0;
  std::vector<failure> failures;
  double elapsed_seconds = 0.0;
};

report run(std::uint64_t count, std::uint64_t master_seed);

}  // namespace otg::fuzz
