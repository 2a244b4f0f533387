#pragma once

// Minimal worker-pool loop for embarrassingly parallel grids. Results must be
// written to per-index slots; the schedule never affects the output.

#include <functional>

#include "shubin/types.hpp"

namespace shubin {

void set_max_threads(int n);
int max_threads();

void parallel_for(Index n, const std::function<void(Index)>& body);

}  // namespace shubin
