#include "spdalloc/layers.hpp"

#include <algorithm>
#include <bit>
#include <deque>

namespace spd {

namespace detail {

std::vector<AgentClass> classify_agents(const TransferGraph &graph,
                                        const std::vector<int64_t> &incomes) {
    const int n = graph.num_agents();
    // Forward reachability per agent. Transfers are simple paths, so agent u
    // admits a transfer to exactly the agents reachable from u.
    std::vector<std::vector<uint8_t>> reach(n, std::vector<uint8_t>(n, 0));
    for (int u = 0; u < n; ++u) {
        std::deque<int> queue{u};
        std::vector<uint8_t> &row = reach[u];
        std::vector<uint8_t> seen(n, 0);
        seen[u] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : graph.out_neighbors(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    row[w] = 1;
                    queue.push_back(w);
                }
            }
        }
    }

    std::vector<AgentClass> out(n, AgentClass::kPinned);
    for (int i = 0; i < n; ++i) {
        bool shedding = false;
        bool absorbing = false;
        for (int j = 0; j < n; ++j) {
            if (reach[i][j] && incomes[j] == incomes[i] - 1) {
                shedding = true;
            }
            if (reach[j][i] && incomes[j] == incomes[i] + 1) {
                absorbing = true;
            }
        }
        if (shedding && absorbing) {
            // income-(d+1) agent reaches an income-(d-1) agent through i
            throw ValidationError("allocation admits a narrowing transfer");
        }
        if (shedding) {
            out[i] = AgentClass::kShedding;
        } else if (absorbing) {
            out[i] = AgentClass::kAbsorbing;
        }
    }
    return out;
}

} // namespace detail

LayerPartition::LayerPartition(std::map<int64_t, LayerGroup> exact,
                               std::map<int64_t, LayerGroup> minus,
                               Allocation defining)
    : exact_(std::move(exact)), minus_(std::move(minus)),
      membership_(defining.num_agents()), defining_(std::move(defining)) {
    for (const auto &[d, group] : exact_) {
        for (int agent : group.agents) {
            membership_[agent] = {false, d};
        }
    }
    for (const auto &[d, group] : minus_) {
        for (int agent : group.agents) {
            membership_[agent] = {true, d};
        }
    }
}

std::pair<int64_t, int64_t> LayerPartition::income_range(int agent) const {
    if (agent < 0 || agent >= static_cast<int>(membership_.size())) {
        throw ValidationError("agent index out of range");
    }
    auto [is_minus, d] = membership_[agent];
    return is_minus ? std::make_pair(d - 1, d) : std::make_pair(d, d);
}

LayerPartition compute_layers(const Instance &inst, const Allocation &stable) {
    if (!is_stable(inst, stable)) {
        throw ValidationError("layer partition requires a stable allocation");
    }
    TransferGraph graph = build_transfer_graph(inst, stable);
    std::vector<int64_t> incomes(inst.num_agents());
    for (int i = 0; i < inst.num_agents(); ++i) {
        incomes[i] = stable.income(i);
    }
    std::vector<detail::AgentClass> classes = detail::classify_agents(graph, incomes);

    std::map<int64_t, LayerGroup> exact;
    std::map<int64_t, LayerGroup> minus;
    for (int i = 0; i < inst.num_agents(); ++i) {
        switch (classes[i]) {
        case detail::AgentClass::kPinned:
            exact[incomes[i]].agents.push_back(i);
            break;
        case detail::AgentClass::kShedding:
            minus[incomes[i]].agents.push_back(i); // h_i = d, may drop to d-1
            break;
        case detail::AgentClass::kAbsorbing:
            minus[incomes[i] + 1].agents.push_back(i); // h_i = d-1, may rise to d
            break;
        }
    }
    for (int j = 0; j < inst.num_items(); ++j) {
        int owner = stable.owner_of(j);
        if (owner < 0) {
            continue;
        }
        switch (classes[owner]) {
        case detail::AgentClass::kPinned:
            exact[incomes[owner]].items.push_back(j);
            break;
        case detail::AgentClass::kShedding:
            minus[incomes[owner]].items.push_back(j);
            break;
        case detail::AgentClass::kAbsorbing:
            minus[incomes[owner] + 1].items.push_back(j);
            break;
        }
    }
    return LayerPartition(std::move(exact), std::move(minus), stable);
}

namespace {

//! Lightweight stability check on an owner array: build adjacency, take the
//! transitive closure, and look for a reachable income gap of two.
bool owner_array_stable(const Instance &inst, const std::vector<int8_t> &owner,
                        const std::vector<int> &incomes) {
    const int n = inst.num_agents();
    std::vector<uint32_t> reach(n, 0);
    for (int j = 0; j < inst.num_items(); ++j) {
        int holder = owner[j];
        if (holder < 0) {
            continue;
        }
        for (int other = 0; other < n; ++other) {
            if (other != holder && inst.likes(other, j)) {
                reach[holder] |= uint32_t{1} << other;
            }
        }
    }
    for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
            uint32_t expanded = reach[u];
            uint32_t frontier = reach[u];
            while (frontier != 0) {
                int v = std::countr_zero(frontier);
                frontier &= frontier - 1;
                expanded |= reach[v];
            }
            if (expanded != reach[u]) {
                reach[u] = expanded;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
    }
    for (int u = 0; u < n; ++u) {
        uint32_t targets = reach[u] & ~(uint32_t{1} << u);
        while (targets != 0) {
            int v = std::countr_zero(targets);
            targets &= targets - 1;
            if (incomes[u] >= incomes[v] + 2) {
                return false;
            }
        }
    }
    return true;
}

struct CountState {
    const Instance &inst;
    std::vector<int> likeable_items;
    std::vector<int8_t> owner;
    std::vector<int> incomes;
    uint64_t limit;
    uint64_t examined = 0;
    uint64_t stable = 0;
    bool overflowed = false;
};

void count_recurse(CountState &state, size_t index) {
    if (state.overflowed) {
        return;
    }
    if (index == state.likeable_items.size()) {
        if (++state.examined > state.limit) {
            state.overflowed = true;
            return;
        }
        if (owner_array_stable(state.inst, state.owner, state.incomes)) {
            ++state.stable;
        }
        return;
    }
    int item = state.likeable_items[index];
    for (int agent = 0; agent < state.inst.num_agents(); ++agent) {
        if (!state.inst.likes(agent, item)) {
            continue;
        }
        state.owner[item] = static_cast<int8_t>(agent);
        ++state.incomes[agent];
        count_recurse(state, index + 1);
        --state.incomes[agent];
        state.owner[item] = -1;
    }
}

} // namespace

CountResult count_stable_tiny(const Instance &inst, uint64_t limit) {
    if (inst.num_agents() > 5 || inst.num_items() > 10) {
        throw ScaleError("stable-allocation counting is guarded to n <= 5, m <= 10");
    }
    CountState state{inst,
                     {},
                     std::vector<int8_t>(inst.num_items(), -1),
                     std::vector<int>(inst.num_agents(), 0),
                     limit};
    for (int j = 0; j < inst.num_items(); ++j) {
        if (!inst.likers_of(j).empty()) {
            state.likeable_items.push_back(j);
        }
    }
    count_recurse(state, 0);
    if (state.overflowed) {
        return {true, 0};
    }
    return {false, state.stable};
}

} // namespace spd
