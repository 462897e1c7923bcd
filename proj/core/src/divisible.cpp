#include "spdalloc/divisible.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "spdalloc/flow.hpp"
#include "spdalloc/layers.hpp"
#include "spdalloc/transfers.hpp"

namespace spd {

namespace {

//! Exact max-flow (Edmonds-Karp on a dense residual matrix of rationals)
//! distributing `items` to `agents` so that every agent receives exactly
//! `index` and every item is fully used. Feasibility is guaranteed by the
//! layer structure; saturation is checked afterwards.
void distribute_layer(const Instance &inst, const std::vector<int> &items,
                      const std::vector<int> &agents, const Rat &index,
                      FractionalAllocation &out) {
    if (items.empty()) {
        return;
    }
    const int k = static_cast<int>(items.size());
    const int l = static_cast<int>(agents.size());
    const int source = 0;
    const int sink = k + l + 1;
    const int nodes = k + l + 2;
    auto item_node = [&](int idx) { return 1 + idx; };
    auto agent_node = [&](int idx) { return 1 + k + idx; };

    std::vector<std::vector<Rat>> residual(nodes, std::vector<Rat>(nodes, Rat(0)));
    for (int a = 0; a < k; ++a) {
        residual[source][item_node(a)] = 1;
    }
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < l; ++b) {
            if (inst.likes(agents[b], items[a])) {
                residual[item_node(a)][agent_node(b)] = 1;
            }
        }
    }
    for (int b = 0; b < l; ++b) {
        residual[agent_node(b)][sink] = index;
    }

    std::vector<int> parent(nodes);
    for (;;) {
        std::fill(parent.begin(), parent.end(), -1);
        parent[source] = source;
        std::deque<int> queue{source};
        while (!queue.empty() && parent[sink] < 0) {
            int u = queue.front();
            queue.pop_front();
            for (int v = 0; v < nodes; ++v) {
                if (parent[v] < 0 && residual[u][v] > 0) {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if (parent[sink] < 0) {
            break;
        }
        Rat push = residual[parent[sink]][sink];
        for (int v = sink; v != source; v = parent[v]) {
            push = std::min(push, residual[parent[v]][v]);
        }
        for (int v = sink; v != source; v = parent[v]) {
            residual[parent[v]][v] -= push;
            residual[v][parent[v]] += push;
        }
    }

    for (int a = 0; a < k; ++a) {
        if (residual[source][item_node(a)] != 0) {
            throw Error("layer distribution failed to place every item");
        }
    }
    for (int b = 0; b < l; ++b) {
        if (residual[sink][agent_node(b)] != index) {
            throw Error("layer distribution missed an agent's layer index");
        }
    }
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < l; ++b) {
            const Rat &amount = residual[agent_node(b)][item_node(a)];
            if (amount > 0) {
                out.add_share(items[a], agents[b], amount);
            }
        }
    }
}

} // namespace

DivSolution solve_stable_div(const Instance &inst) {
    const int n = inst.num_agents();
    const int64_t pieces = int64_t{2} * n * n;

    FlowNetwork network(inst, pieces);
    network.run();
    FractionalAllocation piece_alloc = network.extract_fractional();

    std::vector<int64_t> piece_incomes(n);
    for (int i = 0; i < n; ++i) {
        piece_incomes[i] = network.agent_load(i);
    }
    TransferGraph graph = build_transfer_graph(inst, piece_alloc);
    std::vector<detail::AgentClass> classes =
        detail::classify_agents(graph, piece_incomes);

    // Piece-level layer of each agent: (is_minus, d) with d in piece units.
    std::vector<std::pair<bool, int64_t>> piece_layer(n);
    for (int i = 0; i < n; ++i) {
        switch (classes[i]) {
        case detail::AgentClass::kPinned:
            piece_layer[i] = {false, piece_incomes[i]};
            break;
        case detail::AgentClass::kShedding:
            piece_layer[i] = {true, piece_incomes[i]};
            break;
        case detail::AgentClass::kAbsorbing:
            piece_layer[i] = {true, piece_incomes[i] + 1};
            break;
        }
    }

    std::map<std::pair<bool, int64_t>, std::pair<std::vector<int>, std::vector<int>>>
        groups; // piece layer -> (agents, items)
    for (int i = 0; i < n; ++i) {
        groups[piece_layer[i]].first.push_back(i);
    }
    for (int j = 0; j < inst.num_items(); ++j) {
        const auto &shares = piece_alloc.item_shares(j);
        if (shares.empty()) {
            continue; // nobody likes it, never allocated
        }
        auto layer = piece_layer[shares.front().first];
        for (const auto &[holder, amount] : shares) {
            (void)amount;
            if (piece_layer[holder] != layer) {
                throw Error("item straddles two layers in the piece flow");
            }
        }
        groups[layer].second.push_back(j);
    }

    // Recover exact indices and merge by index (distinct piece layers always
    // produce distinct indices; the map keeps the invariant checkable).
    std::map<Rat, std::pair<std::vector<int>, std::vector<int>>> by_index;
    for (auto &[key, group] : groups) {
        auto &[agents, items] = group;
        Rat index(static_cast<long>(items.size()), static_cast<long>(agents.size()));
        index.canonicalize();
        // Piece-level sanity: the exact index must sit in the piece window.
        Rat lower(key.second - (key.first ? 1 : 0), pieces);
        Rat upper(key.second, pieces);
        lower.canonicalize();
        upper.canonicalize();
        if (index < lower || index > upper) {
            throw Error("recovered layer index escapes its piece window");
        }
        auto &merged = by_index[index];
        merged.first.insert(merged.first.end(), agents.begin(), agents.end());
        merged.second.insert(merged.second.end(), items.begin(), items.end());
    }

    DivSolution solution{FractionalAllocation(n, inst.num_items()), Profile{}, {}};
    for (auto &[index, group] : by_index) {
        auto &[agents, items] = group;
        std::sort(agents.begin(), agents.end());
        std::sort(items.begin(), items.end());
        distribute_layer(inst, items, agents, index, solution.allocation);
        solution.layers.push_back(DivLayer{index, agents, items});
    }
    solution.profile = profile(inst, solution.allocation);
    for (const DivLayer &layer : solution.layers) {
        for (int agent : layer.agents) {
            if (solution.profile[agent] != layer.index) {
                throw Error("agent income disagrees with its layer index");
            }
        }
    }
    return solution;
}

bool is_stable_div(const Instance &inst, const FractionalAllocation &alloc) {
    return !find_narrowing_transfer(inst, alloc).has_value();
}

Profile div_profile(const Instance &inst) {
    return solve_stable_div(inst).profile;
}

} // namespace spd
