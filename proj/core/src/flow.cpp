#include "spdalloc/flow.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace spd {

FlowNetwork::FlowNetwork(const Instance &inst, int64_t unit_capacity)
    : n_(inst.num_agents()), m_(inst.num_items()), capacity_(unit_capacity),
      agent_cost_(n_, 0), targets_(m_), flow_(m_), agent_arcs_(n_),
      item_outflow_(m_, 0), load_(n_, 0) {
    if (capacity_ < 1) {
        throw ValidationError("unit capacity must be positive");
    }
    for (int j = 0; j < m_; ++j) {
        for (int i = 0; i < n_; ++i) {
            if (inst.likes(i, j)) {
                int arc = static_cast<int>(targets_[j].size());
                targets_[j].push_back(i);
                flow_[j].push_back(0);
                agent_arcs_[i].push_back(j);
                agent_arcs_[i].push_back(arc);
                ++num_arcs_;
            }
        }
    }
}

void FlowNetwork::set_linear_costs(int64_t scale, std::vector<int64_t> agent_costs) {
    if (scale < 1) {
        throw ValidationError("cost scale must be positive");
    }
    if (static_cast<int>(agent_costs.size()) != n_) {
        throw ValidationError("cost vector length does not match agent count");
    }
    cost_scale_ = scale;
    agent_cost_ = std::move(agent_costs);
}

int64_t FlowNetwork::arc_flow(int item, int agent) const {
    const auto &targets = targets_[item];
    for (size_t a = 0; a < targets.size(); ++a) {
        if (targets[a] == agent) {
            return flow_[item][a];
        }
    }
    return 0;
}

int64_t FlowNetwork::flow_value() const {
    return std::accumulate(item_outflow_.begin(), item_outflow_.end(), int64_t{0});
}

FlowNetwork::Stats FlowNetwork::run() {
    Stats stats;
    // item j is node j, agent i is node m_ + i
    std::vector<int32_t> item_parent(m_);  // -2 unvisited, -1 source, else agent
    std::vector<int32_t> agent_parent(n_); // -2 unvisited, else item
    std::vector<int32_t> queue;
    queue.reserve(n_ + m_);

    for (;;) {
        std::fill(item_parent.begin(), item_parent.end(), -2);
        std::fill(agent_parent.begin(), agent_parent.end(), -2);
        queue.clear();
        for (int j = 0; j < m_; ++j) {
            if (item_outflow_[j] < capacity_ && !targets_[j].empty()) {
                item_parent[j] = -1;
                queue.push_back(j);
            }
        }
        int best_agent = -1;
        int64_t best_key = std::numeric_limits<int64_t>::max();
        for (size_t head = 0; head < queue.size(); ++head) {
            int node = queue[head];
            if (node < m_) {
                int j = node;
                const auto &targets = targets_[j];
                const auto &flows = flow_[j];
                for (size_t a = 0; a < targets.size(); ++a) {
                    int i = targets[a];
                    if (agent_parent[i] == -2 && flows[a] < capacity_) {
                        agent_parent[i] = j;
                        queue.push_back(m_ + i);
                        // next unused sink arc of agent i
                        int64_t key = load_[i] * cost_scale_ + agent_cost_[i];
                        if (key < best_key || (key == best_key && i < best_agent)) {
                            best_key = key;
                            best_agent = i;
                        }
                    }
                }
            } else {
                int i = node - m_;
                const auto &arcs = agent_arcs_[i];
                for (size_t k = 0; k < arcs.size(); k += 2) {
                    int j = arcs[k];
                    int arc = arcs[k + 1];
                    if (item_parent[j] == -2 && flow_[j][arc] > 0) {
                        item_parent[j] = i;
                        queue.push_back(j);
                    }
                }
            }
        }
        if (best_agent < 0) {
            break;
        }
        // Augment one unit along the parent chain ending at best_agent.
        int agent = best_agent;
        ++load_[agent];
        for (;;) {
            int j = agent_parent[agent];
            const auto &targets = targets_[j];
            for (size_t a = 0; a < targets.size(); ++a) {
                if (targets[a] == agent) {
                    ++flow_[j][a];
                    break;
                }
            }
            int prev = item_parent[j];
            if (prev == -1) {
                ++item_outflow_[j];
                break;
            }
            for (size_t a = 0; a < targets.size(); ++a) {
                if (targets[a] == prev) {
                    --flow_[j][a];
                    break;
                }
            }
            agent = prev;
        }
        ++stats.augmentations;
    }
    stats.flow_value = flow_value();
    return stats;
}

Allocation FlowNetwork::extract_allocation() const {
    if (capacity_ != 1) {
        throw ValidationError("whole-item extraction requires unit capacity");
    }
    Allocation alloc(n_, m_);
    for (int j = 0; j < m_; ++j) {
        for (size_t a = 0; a < targets_[j].size(); ++a) {
            if (flow_[j][a] == 1) {
                alloc.assign(j, targets_[j][a]);
                break;
            }
        }
    }
    return alloc;
}

FractionalAllocation FlowNetwork::extract_fractional() const {
    FractionalAllocation alloc(n_, m_);
    for (int j = 0; j < m_; ++j) {
        for (size_t a = 0; a < targets_[j].size(); ++a) {
            if (flow_[j][a] > 0) {
                Rat amount(flow_[j][a], capacity_);
                amount.canonicalize();
                alloc.add_share(j, targets_[j][a], amount);
            }
        }
    }
    return alloc;
}

FlowNetwork build_network(const Instance &inst) {
    return FlowNetwork(inst, 1);
}

Allocation solve_stable_ind(const Instance &inst) {
    return solve_stable_ind(inst, nullptr);
}

Allocation solve_stable_ind(const Instance &inst, FlowNetwork::Stats *stats) {
    FlowNetwork network = build_network(inst);
    FlowNetwork::Stats run_stats = network.run();
    if (stats != nullptr) {
        *stats = run_stats;
    }
    return network.extract_allocation();
}

Allocation solve_linear_objective(const Instance &inst,
                                  const std::vector<int64_t> &costs) {
    if (static_cast<int>(costs.size()) != inst.num_agents()) {
        throw ValidationError("cost vector length does not match agent count");
    }
    constexpr int64_t kCostBound = int64_t{1} << 31;
    auto [lo, hi] = std::minmax_element(costs.begin(), costs.end());
    if (*lo < -kCostBound || *hi > kCostBound) {
        throw ValidationError("linear cost out of supported range");
    }
    // Load balancing must dominate: the linear term contributes less than
    // m * (max - min) in total across all augmentations.
    int64_t scale = 1 + inst.num_items() * (*hi - *lo);
    std::vector<int64_t> shifted(costs.size());
    for (size_t i = 0; i < costs.size(); ++i) {
        shifted[i] = costs[i] - *lo;
    }
    FlowNetwork network = build_network(inst);
    network.set_linear_costs(scale, std::move(shifted));
    network.run();
    return network.extract_allocation();
}

} // namespace spd
