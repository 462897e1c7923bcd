#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spdalloc/model.hpp"
#include "spdalloc/numbers.hpp"

namespace spd {

//! Directed reallocation graph of an allocation: an edge (i, i') means agent
//! i holds an item (or a positive share of one) that agent i' also likes.
//! Each edge carries the smallest such item as its witness.
class TransferGraph {
  public:
    explicit TransferGraph(int num_agents);

    int num_agents() const { return n_; }
    bool has_edge(int from, int to) const { return witness_at(from, to) >= 0; }
    //! Smallest witness item of the edge, or -1 when absent.
    int witness(int from, int to) const { return witness_at(from, to); }
    //! Targets of `from`, ascending.
    const std::vector<int> &out_neighbors(int from) const { return adj_[from]; }
    //! Total directed edges.
    int num_edges() const { return edges_; }

    void add_edge(int from, int to, int witness_item);

  private:
    int witness_at(int from, int to) const {
        return witness_[static_cast<size_t>(from) * n_ + to];
    }

    int n_;
    int edges_ = 0;
    std::vector<int32_t> witness_;
    std::vector<std::vector<int>> adj_;
};

TransferGraph build_transfer_graph(const Instance &inst, const Allocation &alloc);
TransferGraph build_transfer_graph(const Instance &inst,
                                   const FractionalAllocation &alloc);

enum class TransferKind { kNarrowing, kWidening, kSwapping };

std::string_view transfer_kind_name(TransferKind kind);

//! A simple agent path (i_1, ..., i_k), k >= 2, with a witness item per hop.
//! Applying it moves one item (or `amount` of each hop's witness) one hop
//! forward: the first agent loses, the last gains, relays are unchanged.
struct TransferPath {
    std::vector<int> agents;
    std::vector<int> witness_items;
    TransferKind kind = TransferKind::kNarrowing;
    std::optional<Rat> amount; // divisible transfers only

    //! Debug form `u -[item j]-> v (kind)`, 1-indexed.
    std::string to_string() const;
};

//! Classifies a transfer between endpoint incomes. Integral: narrowing needs
//! a gap of 2, a gap of exactly 1 swaps. Fractional: any positive gap narrows.
TransferKind classify_transfer(const Rat &from_income, const Rat &to_income,
                               bool integral);

//! Shortest narrowing transfer, searched per source-income class from the
//! highest class down; ties broken toward the lexicographically smallest
//! agent sequence. Returns nothing iff the allocation is stable.
std::optional<TransferPath> find_narrowing_transfer(const Instance &inst,
                                                    const Allocation &alloc);
//! Fractional variant: a strict endpoint gap suffices. The transferred amount
//! defaults to min(half the endpoint gap, smallest witness share on the path).
std::optional<TransferPath> find_narrowing_transfer(const Instance &inst,
                                                    const FractionalAllocation &alloc);

//! Applies the path. Throws if the path is stale (a witness item moved since
//! the path was found) or inconsistent with the allocation.
Allocation apply_transfer(const Instance &inst, const Allocation &alloc,
                          const TransferPath &path);
FractionalAllocation apply_transfer(const Instance &inst,
                                    const FractionalAllocation &alloc,
                                    const TransferPath &path);

//! True iff no narrowing transfer exists.
bool is_stable(const Instance &inst, const Allocation &alloc);

namespace detail {
//! Core search shared by both allocation kinds and by the piece-level solver:
//! incomes enter as exact rationals, `min_gap_two` selects the integral rule.
std::optional<std::vector<int>> find_narrowing_agents(const TransferGraph &graph,
                                                      const std::vector<Rat> &incomes,
                                                      bool min_gap_two);
} // namespace detail

} // namespace spd
