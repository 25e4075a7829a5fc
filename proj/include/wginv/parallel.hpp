// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_PARALLEL_HPP
#define WGINV_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace wginv
{

// Worker count: WGINV_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n). Each index is processed exactly once; results must be
// written to per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace wginv

#endif  // WGINV_PARALLEL_HPP
