#pragma once

#include <vector>

#include "spdalloc/model.hpp"
#include "spdalloc/numbers.hpp"

namespace spd {

//! One layer of a divisible solution: every agent of the layer receives
//! exactly `index` worth of the layer's items, and the layer's items are
//! fully allocated inside it. index = |items| / |agents| exactly.
struct DivLayer {
    Rat index;
    std::vector<int> agents; // ascending
    std::vector<int> items;  // ascending
};

struct DivSolution {
    FractionalAllocation allocation;
    Profile profile; // the unique stable profile of the instance
    std::vector<DivLayer> layers; // ascending by index
};

//! Stable divisible allocation via reduction to the indivisible solver:
//! conceptually split every item into 2n^2 identical pieces (realized as arc
//! capacities, not materialized nodes), balance the pieces, read the layer
//! partition off the piece flow, recover each layer's exact rational index
//! as items-per-agent, and redistribute within each layer so every agent
//! lands exactly on the index. All income arithmetic is exact.
DivSolution solve_stable_div(const Instance &inst);

//! True iff no transfer path from a strictly richer to a strictly poorer
//! agent exists (any strict gap admits a feasible narrowing amount).
bool is_stable_div(const Instance &inst, const FractionalAllocation &alloc);

//! The unique stable profile; convenience wrapper over solve_stable_div.
Profile div_profile(const Instance &inst);

} // namespace spd
