#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spdalloc/numbers.hpp"

namespace spd {

//! An allocation problem: n agents with 0/1 valuations over m items.
//! Immutable after construction and safe to share across threads.
//!
//! Agents and items are 0-indexed here; all external text is 1-indexed.
class Instance {
  public:
    //! Validates and adopts an agent-major like matrix (entries 0/1).
    Instance(int num_agents, int num_items, std::vector<uint8_t> likes_row_major);

    //! Text format v1:
    //!   line 1:      `n m`
    //!   lines 2..n+1: exactly m characters from {0,1}, agent i's like-row
    static Instance parse(std::istream &in);
    static Instance parse_text(const std::string &text);

    int num_agents() const { return n_; }
    int num_items() const { return m_; }

    bool likes(int agent, int item) const {
        return likes_[static_cast<size_t>(agent) * m_ + item] != 0;
    }

    //! Agents that like `item`, ascending.
    std::vector<int> likers_of(int item) const;

    //! Number of items liked by at least one agent. Every such item is
    //! allocated in a max-USW allocation, and no other item ever is.
    int max_usw() const;

    std::string to_text() const;

  private:
    int n_ = 0;
    int m_ = 0;
    std::vector<uint8_t> likes_; // agent-major, n_*m_
};

//! Builds an Instance from raw matrix rows (one row per agent).
//! Rejects non-binary entries and inconsistent dimensions.
Instance validate_instance(int num_agents, int num_items,
                           const std::vector<std::vector<int>> &rows);

//! Disjoint bundles of whole items. Items not held by anyone map to -1.
class Allocation {
  public:
    Allocation(int num_agents, int num_items);

    static Allocation from_bundles(int num_agents, int num_items,
                                   const std::vector<std::vector<int>> &bundles);

    int num_agents() const { return n_; }
    int num_items() const { return m_; }

    int owner_of(int item) const { return owner_[item]; }
    bool allocated(int item) const { return owner_[item] >= 0; }
    long income(int agent) const { return counts_[agent]; }

    //! Moves an unallocated item into an agent's bundle.
    void assign(int item, int agent);
    //! Returns an item to the unallocated pool.
    void unassign(int item);
    //! Reallocates an item between two agents.
    void move(int item, int from_agent, int to_agent);

    //! Agent's bundle, ascending item indices.
    std::vector<int> bundle(int agent) const;
    std::vector<std::vector<int>> bundles() const;

    bool operator==(const Allocation &other) const {
        return owner_ == other.owner_;
    }

  private:
    int n_;
    int m_;
    std::vector<int32_t> owner_; // item -> agent, -1 unallocated
    std::vector<long> counts_;   // agent -> bundle size
};

//! Exact rational shares of items. Only positive shares are stored.
class FractionalAllocation {
  public:
    FractionalAllocation(int num_agents, int num_items);

    int num_agents() const { return n_; }
    int num_items() const { return m_; }

    //! Adds `amount` (> 0) of `item` to `agent`.
    void add_share(int item, int agent, const Rat &amount);
    //! Removes `amount` of `item` from `agent`; the share must cover it.
    void remove_share(int item, int agent, const Rat &amount);

    Rat share(int item, int agent) const;
    //! Positive shares of `item` as (agent, amount), agents ascending.
    const std::vector<std::pair<int, Rat>> &item_shares(int item) const {
        return shares_[item];
    }
    Rat item_total(int item) const;
    const Rat &income(int agent) const { return incomes_[agent]; }

    bool operator==(const FractionalAllocation &other) const {
        return shares_ == other.shares_;
    }

  private:
    int n_;
    int m_;
    std::vector<std::vector<std::pair<int, Rat>>> shares_; // per item
    std::vector<Rat> incomes_;
};

//! Per-agent income vector. Entries are exact rationals; every entry is a
//! plain integer in the indivisible case.
class Profile {
  public:
    Profile() = default;
    explicit Profile(std::vector<Rat> incomes);
    static Profile from_ints(const std::vector<long> &incomes);

    int size() const { return static_cast<int>(incomes_.size()); }
    const Rat &operator[](int i) const { return incomes_[i]; }
    const std::vector<Rat> &incomes() const { return incomes_; }

    bool all_integral() const;
    Rat sum() const;
    std::vector<Rat> sorted_ascending() const;

    bool operator==(const Profile &other) const {
        return incomes_ == other.incomes_;
    }

    //! Space-separated incomes, each as `num/den` or a bare integer.
    std::string to_string() const;

  private:
    std::vector<Rat> incomes_;
};

//! Profile of an allocation: incomes_[i] = |bundle_i|.
Profile profile(const Instance &inst, const Allocation &alloc);
//! Profile of a fractional allocation: incomes_[i] = sum of agent i's shares.
Profile profile(const Instance &inst, const FractionalAllocation &alloc);

//! Count of items with at least one liker.
int max_usw(const Instance &inst);

//! Every held item is liked by its holder.
bool is_clean(const Instance &inst, const Allocation &alloc);
bool is_clean(const Instance &inst, const FractionalAllocation &alloc);

//! Every item with a liker is (fully) allocated.
bool is_max_usw(const Instance &inst, const Allocation &alloc);
bool is_max_usw(const Instance &inst, const FractionalAllocation &alloc);

} // namespace spd
