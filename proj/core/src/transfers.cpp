#include "spdalloc/transfers.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace spd {

TransferGraph::TransferGraph(int num_agents)
    : n_(num_agents), witness_(static_cast<size_t>(num_agents) * num_agents, -1),
      adj_(num_agents) {}

void TransferGraph::add_edge(int from, int to, int witness_item) {
    int32_t &slot = witness_[static_cast<size_t>(from) * n_ + to];
    if (slot < 0) {
        adj_[from].insert(
            std::lower_bound(adj_[from].begin(), adj_[from].end(), to), to);
        slot = witness_item;
        ++edges_;
    } else if (witness_item < slot) {
        slot = witness_item;
    }
}

namespace {

template <typename HolderFn>
TransferGraph build_graph(const Instance &inst, HolderFn &&holders_of_item) {
    TransferGraph graph(inst.num_agents());
    for (int j = 0; j < inst.num_items(); ++j) {
        for (int holder : holders_of_item(j)) {
            for (int other = 0; other < inst.num_agents(); ++other) {
                if (other != holder && inst.likes(other, j)) {
                    graph.add_edge(holder, other, j);
                }
            }
        }
    }
    return graph;
}

} // namespace

TransferGraph build_transfer_graph(const Instance &inst, const Allocation &alloc) {
    if (!is_clean(inst, alloc)) {
        throw ValidationError("transfer graph requires a clean allocation");
    }
    return build_graph(inst, [&](int j) {
        std::vector<int> holders;
        if (alloc.owner_of(j) >= 0) {
            holders.push_back(alloc.owner_of(j));
        }
        return holders;
    });
}

TransferGraph build_transfer_graph(const Instance &inst,
                                   const FractionalAllocation &alloc) {
    if (!is_clean(inst, alloc)) {
        throw ValidationError("transfer graph requires a clean allocation");
    }
    return build_graph(inst, [&](int j) {
        std::vector<int> holders;
        for (const auto &[agent, amount] : alloc.item_shares(j)) {
            (void)amount;
            holders.push_back(agent);
        }
        return holders;
    });
}

std::string_view transfer_kind_name(TransferKind kind) {
    switch (kind) {
    case TransferKind::kNarrowing:
        return "narrowing";
    case TransferKind::kWidening:
        return "widening";
    case TransferKind::kSwapping:
        return "swapping";
    }
    return "?";
}

std::string TransferPath::to_string() const {
    std::string out;
    for (size_t i = 0; i < agents.size(); ++i) {
        if (i > 0) {
            out += " -[item " + std::to_string(witness_items[i - 1] + 1) + "]-> ";
        }
        out += std::to_string(agents[i] + 1);
    }
    out += " (";
    out += transfer_kind_name(kind);
    out += ")";
    return out;
}

TransferKind classify_transfer(const Rat &from_income, const Rat &to_income,
                               bool integral) {
    if (integral) {
        if (from_income >= to_income + 2) {
            return TransferKind::kNarrowing;
        }
        if (from_income <= to_income) {
            return TransferKind::kWidening;
        }
        return TransferKind::kSwapping;
    }
    return from_income > to_income ? TransferKind::kNarrowing
                                   : TransferKind::kWidening;
}

namespace detail {

std::optional<std::vector<int>> find_narrowing_agents(const TransferGraph &graph,
                                                      const std::vector<Rat> &incomes,
                                                      bool min_gap_two) {
    const int n = graph.num_agents();
    std::vector<std::vector<int>> radj(n);
    for (int u = 0; u < n; ++u) {
        for (int v : graph.out_neighbors(u)) {
            radj[v].push_back(u);
        }
    }

    std::vector<Rat> classes = incomes;
    std::sort(classes.begin(), classes.end(), std::greater<Rat>());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    std::vector<int> rdist(n);
    for (const Rat &source_income : classes) {
        auto is_target = [&](int v) {
            return min_gap_two ? incomes[v] + 2 <= source_income
                               : incomes[v] < source_income;
        };
        // Backward BFS from every target gives the hop count to the nearest
        // target; the lexicographically smallest shortest path then falls out
        // of a greedy forward walk.
        std::fill(rdist.begin(), rdist.end(), -1);
        std::deque<int> queue;
        for (int v = 0; v < n; ++v) {
            if (is_target(v)) {
                rdist[v] = 0;
                queue.push_back(v);
            }
        }
        if (queue.empty()) {
            continue;
        }
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int u : radj[v]) {
                if (rdist[u] < 0) {
                    rdist[u] = rdist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        int best_source = -1;
        for (int u = 0; u < n; ++u) {
            if (incomes[u] == source_income && rdist[u] >= 0 &&
                (best_source < 0 || rdist[u] < rdist[best_source])) {
                best_source = u;
            }
        }
        if (best_source < 0) {
            continue;
        }
        std::vector<int> path{best_source};
        int current = best_source;
        while (rdist[current] > 0) {
            for (int v : graph.out_neighbors(current)) {
                if (rdist[v] == rdist[current] - 1) {
                    path.push_back(v);
                    current = v;
                    break;
                }
            }
        }
        return path;
    }
    return std::nullopt;
}

} // namespace detail

namespace {

std::vector<int> witnesses_for(const TransferGraph &graph,
                               const std::vector<int> &agents) {
    std::vector<int> witnesses;
    witnesses.reserve(agents.size() - 1);
    for (size_t i = 0; i + 1 < agents.size(); ++i) {
        witnesses.push_back(graph.witness(agents[i], agents[i + 1]));
    }
    return witnesses;
}

void validate_path_shape(const TransferPath &path) {
    if (path.agents.size() < 2 ||
        path.witness_items.size() != path.agents.size() - 1) {
        throw ValidationError("malformed transfer path");
    }
    std::set<int> agents(path.agents.begin(), path.agents.end());
    if (agents.size() != path.agents.size()) {
        throw ValidationError("transfer path must be a simple agent path");
    }
    std::set<int> items(path.witness_items.begin(), path.witness_items.end());
    if (items.size() != path.witness_items.size()) {
        throw ValidationError("stale path: repeated witness item");
    }
}

} // namespace

std::optional<TransferPath> find_narrowing_transfer(const Instance &inst,
                                                    const Allocation &alloc) {
    TransferGraph graph = build_transfer_graph(inst, alloc);
    std::vector<Rat> incomes;
    incomes.reserve(inst.num_agents());
    for (int i = 0; i < inst.num_agents(); ++i) {
        incomes.emplace_back(alloc.income(i));
    }
    auto agents = detail::find_narrowing_agents(graph, incomes, /*min_gap_two=*/true);
    if (!agents) {
        return std::nullopt;
    }
    TransferPath path;
    path.agents = *agents;
    path.witness_items = witnesses_for(graph, *agents);
    path.kind = TransferKind::kNarrowing;
    return path;
}

std::optional<TransferPath> find_narrowing_transfer(const Instance &inst,
                                                    const FractionalAllocation &alloc) {
    TransferGraph graph = build_transfer_graph(inst, alloc);
    std::vector<Rat> incomes;
    incomes.reserve(inst.num_agents());
    for (int i = 0; i < inst.num_agents(); ++i) {
        incomes.push_back(alloc.income(i));
    }
    auto agents = detail::find_narrowing_agents(graph, incomes, /*min_gap_two=*/false);
    if (!agents) {
        return std::nullopt;
    }
    TransferPath path;
    path.agents = *agents;
    path.witness_items = witnesses_for(graph, *agents);
    path.kind = TransferKind::kNarrowing;
    // Half the endpoint gap keeps the endpoints ordered; capping at the
    // smallest witness share keeps every hop feasible.
    Rat amount = (incomes[path.agents.front()] - incomes[path.agents.back()]) / 2;
    for (size_t i = 0; i + 1 < path.agents.size(); ++i) {
        amount = std::min(amount, alloc.share(path.witness_items[i], path.agents[i]));
    }
    path.amount = amount;
    return path;
}

Allocation apply_transfer(const Instance &inst, const Allocation &alloc,
                          const TransferPath &path) {
    validate_path_shape(path);
    Allocation result = alloc;
    for (size_t i = 0; i + 1 < path.agents.size(); ++i) {
        int item = path.witness_items[i];
        int from = path.agents[i];
        int to = path.agents[i + 1];
        if (item < 0 || item >= inst.num_items() || result.owner_of(item) != from) {
            throw ValidationError("stale path: witness item moved");
        }
        if (!inst.likes(to, item)) {
            throw ValidationError("transfer target does not like the witness item");
        }
        result.move(item, from, to);
    }
    return result;
}

FractionalAllocation apply_transfer(const Instance &inst,
                                    const FractionalAllocation &alloc,
                                    const TransferPath &path) {
    validate_path_shape(path);
    if (!path.amount || *path.amount <= 0) {
        throw ValidationError("fractional transfer needs a positive amount");
    }
    FractionalAllocation result = alloc;
    for (size_t i = 0; i + 1 < path.agents.size(); ++i) {
        int item = path.witness_items[i];
        int from = path.agents[i];
        int to = path.agents[i + 1];
        if (item < 0 || item >= inst.num_items() ||
            result.share(item, from) < *path.amount) {
            throw ValidationError("stale path: witness share moved");
        }
        if (!inst.likes(to, item)) {
            throw ValidationError("transfer target does not like the witness item");
        }
        result.remove_share(item, from, *path.amount);
        result.add_share(item, to, *path.amount);
    }
    return result;
}

bool is_stable(const Instance &inst, const Allocation &alloc) {
    return !find_narrowing_transfer(inst, alloc).has_value();
}

} // namespace spd
