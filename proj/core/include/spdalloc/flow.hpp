#pragma once

#include <cstdint>
#include <vector>

#include "spdalloc/model.hpp"

namespace spd {

//! Min-cost-flow network for balanced assignment. Nodes are a source, one
//! node per item, one node per agent, and a sink. The source feeds each item
//! (capacity `unit_capacity`, cost 0), items feed the agents that like them
//! (capacity `unit_capacity`, cost 0), and each agent owns a family of
//! parallel unit arcs to the sink whose k-th member costs k-1, so marginal
//! cost grows with load and the min-cost flow balances the loads.
//!
//! The parallel sink arcs are never materialized: arcs are consumed in
//! ascending cost order, so the agent's next unit always costs its current
//! load (scaled by `cost_scale` plus the agent's base cost in linear mode).
//! With unit_capacity == 1 this is the plain indivisible network; larger
//! capacities model items pre-split into `unit_capacity` identical pieces.
class FlowNetwork {
  public:
    FlowNetwork(const Instance &inst, int64_t unit_capacity);

    int num_agents() const { return n_; }
    int num_items() const { return m_; }
    int num_nodes() const { return n_ + m_ + 2; }
    int64_t unit_capacity() const { return capacity_; }
    int num_item_agent_arcs() const { return num_arcs_; }
    //! Agents that like `item`, ascending: the targets of its outgoing arcs.
    const std::vector<int32_t> &arc_targets(int item) const { return targets_[item]; }

    //! Switches the sink arcs to cost (k-1)*scale + agent_cost[i]. The
    //! default is scale 1 with zero base costs (pure load balancing).
    void set_linear_costs(int64_t scale, std::vector<int64_t> agent_costs);

    int64_t arc_flow(int item, int agent) const;
    int64_t item_outflow(int item) const { return item_outflow_[item]; }
    int64_t agent_load(int agent) const { return load_[agent]; }
    int64_t flow_value() const;

    struct Stats {
        int64_t flow_value = 0;
        int64_t augmentations = 0;
    };

    //! Runs successive shortest paths until no augmenting path remains.
    //! Every augmentation pushes one unit along a minimum-cost path, found as
    //! a residual reachability pass plus the cheapest reachable sink arc.
    Stats run();

    //! Reads the flow back as whole-item bundles (unit_capacity == 1 only).
    Allocation extract_allocation() const;
    //! Reads the flow back as exact shares flow/unit_capacity.
    FractionalAllocation extract_fractional() const;

  private:
    int n_;
    int m_;
    int64_t capacity_;
    int64_t cost_scale_ = 1;
    std::vector<int64_t> agent_cost_;
    int num_arcs_ = 0;
    std::vector<std::vector<int32_t>> targets_;  // item -> liking agents
    std::vector<std::vector<int64_t>> flow_;     // parallel to targets_
    std::vector<std::vector<int32_t>> agent_arcs_; // agent -> (item, arc idx) pairs, flattened
    std::vector<int64_t> item_outflow_;
    std::vector<int64_t> load_;
};

//! The indivisible network: unit capacities, pure load-balancing costs.
FlowNetwork build_network(const Instance &inst);

//! Stable allocation for indivisible items in O(m^2 n): the minimum of
//! sum_i binom(h_i, 2) over clean max-USW allocations. Deterministic:
//! ties prefer the smallest agent index.
Allocation solve_stable_ind(const Instance &inst);
Allocation solve_stable_ind(const Instance &inst, FlowNetwork::Stats *stats);

//! Among all stable allocations, minimizes sum_i costs[i] * h_i. Sink costs
//! become (k-1)*A + costs[i] with A = 1 + m * (max cost - min cost), large
//! enough that load balancing still dominates the linear term.
Allocation solve_linear_objective(const Instance &inst,
                                  const std::vector<int64_t> &costs);

} // namespace spd
