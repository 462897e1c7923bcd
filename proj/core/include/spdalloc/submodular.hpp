#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spdalloc/model.hpp"

namespace spd {

//! Binary submodular (matroid rank) valuation over a ground set of items.
//! Three shipped kinds: uniform (at most `rank` ground items count),
//! partition (per-block caps), transversal (max matching into slots).
//! Desk-scale only: bundles are handled as bitmasks over m <= 31 items.
class MatroidValuation {
  public:
    struct Block {
        int capacity;
        std::vector<int> items;
    };

    static MatroidValuation uniform(int rank, std::vector<int> ground);
    static MatroidValuation partition(std::vector<Block> blocks);
    //! Edges (item, slot); rank of S = maximum matching of S into the slots.
    static MatroidValuation transversal(int num_slots,
                                        std::vector<std::pair<int, int>> edges);

    enum class Kind { kUniform, kPartition, kTransversal };
    Kind kind() const { return kind_; }

    //! Matroid rank of the bundle (as a bitmask over items).
    int value(uint32_t bundle_mask) const;
    int value(const std::vector<int> &bundle) const;
    //! value(bundle + item) - value(bundle), in {0, 1}.
    int marginal(uint32_t bundle_mask, int item) const;

    //! Items with a positive singleton value.
    uint32_t ground_mask() const { return ground_mask_; }

    std::string to_text() const; // one line of the SUB format

  private:
    MatroidValuation() = default;

    Kind kind_ = Kind::kUniform;
    uint32_t ground_mask_ = 0;
    int rank_ = 0;                          // uniform
    std::vector<Block> blocks_;             // partition
    std::vector<uint32_t> block_masks_;     // partition
    int num_slots_ = 0;                     // transversal
    std::vector<uint32_t> slot_items_;      // transversal: slot -> item mask
};

//! n matroid-rank valuations over m items.
struct SubInstance {
    int num_items = 0;
    std::vector<MatroidValuation> agents;

    int num_agents() const { return static_cast<int>(agents.size()); }

    //! Text format: header `SUB n m`, then one line per agent:
    //!   uniform R g1 g2 ...            (rank R, ground items)
    //!   partition (c1:j1,j2;c2:j3...)  (per-block capacity and items)
    //!   transversal j1:s1 j2:s2 ...    (item-slot edges)
    //! Items and slots are 1-indexed in the text.
    static SubInstance parse_text(const std::string &text);
    std::string to_text() const;
};

int value(const MatroidValuation &val, const std::vector<int> &bundle);

//! Max-USW value by exhaustive search (desk scale).
int sub_max_usw(const SubInstance &si);

//! Every clean allocation of maximal total value, enumerated exhaustively.
std::vector<Allocation> enumerate_sub_max_usw_clean(const SubInstance &si);

bool is_clean(const SubInstance &si, const Allocation &alloc);

//! Exchange chain (i_0, o_1, i_1, ..., o_t, i_t): agent i_0 takes o_1 from
//! i_1, who recovers by taking o_2 from i_2, and so on; the final agent i_t
//! just loses o_t. Applying it raises i_0 by one and lowers i_t by one.
struct ExchangeSequence {
    std::vector<int> agents; // t+1 entries
    std::vector<int> items;  // t entries, pairwise distinct

    std::string to_string() const; // 1-indexed debug form
};

//! Searches for an exchange chain whose application strictly improves the
//! ascending sorted profile (terminal agent at least two richer than the
//! start). The search may revisit agents but never an item; tracking items
//! is what keeps every intermediate bundle clean. Returns nothing iff the
//! allocation already has the optimal sorted profile.
std::optional<ExchangeSequence> find_exchange_improvement(const SubInstance &si,
                                                          const Allocation &alloc);

//! Applies the chain and returns the new allocation.
Allocation apply_exchange(const SubInstance &si, const Allocation &alloc,
                          const ExchangeSequence &seq);

//! Clean max-USW allocation with the lexicographically best ascending
//! profile: greedy start, augmentation to max USW, then exchange chains
//! until none remains. Desk scale only.
Allocation solve_leximin_sub_desk(const SubInstance &si);

//! Max per-agent income difference across the optimal set, by brute force.
//! Throws if the per-criterion optimal sets disagree (they never should).
int chebyshev_sub(const SubInstance &si);

} // namespace spd
