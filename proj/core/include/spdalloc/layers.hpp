#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "spdalloc/model.hpp"
#include "spdalloc/transfers.hpp"

namespace spd {

struct LayerGroup {
    std::vector<int> agents; // ascending
    std::vector<int> items;  // ascending
};

//! Instance-intrinsic partition of agents and items, read off one stable
//! allocation but identical for every choice of it. Agents in an exact layer
//! d receive exactly d items under every stable allocation; agents in a
//! minus layer d receive d-1 or d. Items of a layer only ever go to agents
//! of the same layer.
class LayerPartition {
  public:
    LayerPartition(std::map<int64_t, LayerGroup> exact,
                   std::map<int64_t, LayerGroup> minus, Allocation defining);

    //! layer_d groups, keyed by d. Sparse: only non-empty layers appear.
    const std::map<int64_t, LayerGroup> &exact() const { return exact_; }
    //! layer-minus-d groups, keyed by d (incomes d-1 or d).
    const std::map<int64_t, LayerGroup> &minus() const { return minus_; }
    const Allocation &defining_allocation() const { return defining_; }

    //! Income range of an agent over all stable allocations: (d, d) for an
    //! exact layer, (d-1, d) for a minus layer.
    std::pair<int64_t, int64_t> income_range(int agent) const;

  private:
    std::map<int64_t, LayerGroup> exact_;
    std::map<int64_t, LayerGroup> minus_;
    std::vector<std::pair<bool, int64_t>> membership_; // (is_minus, d) per agent
    Allocation defining_;
};

//! Computes the layer partition from one stable allocation. Membership comes
//! from transfer-graph reachability: income-d agents that can shed an item to
//! an income-(d-1) agent, or absorb one from an income-(d+1) agent, form the
//! minus layers; the rest are pinned at d.
LayerPartition compute_layers(const Instance &inst, const Allocation &stable);

struct CountResult {
    bool overflowed = false;
    uint64_t count = 0;
};

//! Exact number of stable allocations by exhaustive enumeration. Stops with
//! an overflow signal once more than `limit` clean max-USW allocations have
//! been examined. Guarded to n <= 5, m <= 10.
CountResult count_stable_tiny(const Instance &inst, uint64_t limit);

namespace detail {

enum class AgentClass { kShedding, kAbsorbing, kPinned }; // p_d / q_d / r_d

//! Shared partition core, also used at piece level by the divisible solver.
//! incomes[i] is agent i's (integer) income under the defining allocation.
std::vector<AgentClass> classify_agents(const TransferGraph &graph,
                                        const std::vector<int64_t> &incomes);

} // namespace detail

} // namespace spd
