#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spdalloc/criteria.hpp"
#include "spdalloc/divisible.hpp"
#include "spdalloc/model.hpp"
#include "spdalloc/rng.hpp"
#include "spdalloc/submodular.hpp"

namespace spd {

//! Exhaustive ground truth for one tiny instance: every clean max-USW
//! allocation, the stable subset, and the optimal subset per criterion.
//! Stability is recomputed here from first principles (bitmask closure over
//! an owner array) so the result is independent of the solver modules it
//! certifies.
class EnumerationResult {
  public:
    EnumerationResult(int num_agents, int num_items);

    size_t count() const { return owners_.size() / std::max(num_items_, 1); }
    int num_agents() const { return num_agents_; }
    int num_items() const { return num_items_; }

    const int8_t *owner_row(size_t idx) const {
        return owners_.data() + idx * num_items_;
    }
    std::vector<long> profile_of(size_t idx) const;
    Allocation materialize(const Instance &inst, size_t idx) const;

    const std::vector<int32_t> &stable_set() const { return stable_; }
    const std::vector<int32_t> &optimal_set(Criterion c) const;

    //! Index of an equal owner assignment, or -1.
    int find(const Allocation &alloc) const;

    // filled by enumerate_and_classify
    std::vector<int8_t> owners_;
    std::vector<int32_t> stable_;
    std::array<std::vector<int32_t>, kAllCriteria.size()> optimal_;

  private:
    int num_agents_;
    int num_items_;
};

//! Enumerates and classifies every clean max-USW allocation.
//! Guarded to n <= 5, m <= 10.
EnumerationResult enumerate_and_classify(const Instance &inst);

//! The clean max-USW allocations as full objects (same guard; intended for
//! genuinely tiny instances).
std::vector<Allocation> enumerate_max_usw_clean(const Instance &inst);

struct CheckReport {
    bool pass = true;
    std::string witness; // empty when pass
};

//! For every built-in criterion the optimal set must equal the stable set,
//! and all stable profiles must be permutations of one another.
CheckReport verify_consistency(const Instance &inst);

//! Max per-agent income spread across the stable set (equals the max
//! pairwise Chebyshev distance between stable profiles).
int64_t verify_chebyshev_ind(const Instance &inst);

//! Every stable allocation must keep every layer's items inside the layer's
//! agents, for the partition computed from each stable allocation in turn.
bool verify_layer_invariance(const Instance &inst);

//! Exact egalitarian (ascending-lexicographic-optimal) income vector over
//! the feasible polytope {g >= 0 : sum_{i in T} g_i <= f(T)} at full mass,
//! where f(T) counts items liked by T. Water-filling over all 2^n subset
//! constraints; completely independent of the piece-splitting solver.
Profile div_profile_waterfill(const Instance &inst);

//! The 4-agent, 6-item mixed fixture: items 1..4 indivisible (two classes,
//! by the agent receiving item 4), items 5..6 divisible. The two lexicographic
//! criteria pick different classes, so no single allocation is optimal under
//! every criterion once divisible and indivisible items mix.
struct MixedFixtureReport {
    Profile class_a_profile; // item 4 to agent 1
    Profile class_b_profile; // item 4 to agent 4
    DivSolution class_a;
    DivSolution class_b;
    Profile leximin_profile;
    Profile leximax_profile;
    int leximin_item4_agent; // 0-based
    int leximax_item4_agent;
    bool pass;

    std::string text() const;
};

MixedFixtureReport appendix_mixed_fixture();

Instance random_instance(Xorshift64Star &rng, int num_agents, int num_items,
                         unsigned density_percent);
//! kind: 0 uniform, 1 partition, 2 transversal.
SubInstance random_sub_instance(Xorshift64Star &rng, int num_agents, int num_items,
                                int kind);

struct SweepConfig {
    int max_n = 3;
    int max_m = 6;
    int trials = 50;
    uint64_t seed = 1;
    unsigned threads = 1; // 0 = hardware concurrency
};

struct SuiteResult {
    std::string name;
    bool pass = true;
    std::string witness;
    long checked = 0;
};

//! Runs the consistency, chebyshev-ind, layer-invariance, spd-monotonicity,
//! divisible-uniqueness and submodular-chebyshev suites. Trials run
//! concurrently (bounded by config.threads) with per-trial seeds, so the
//! report does not depend on the worker count.
std::vector<SuiteResult> run_verification(const SweepConfig &config);

//! Runs fn(0..count-1) on up to num_threads workers.
void parallel_for(size_t count, unsigned num_threads,
                  const std::function<void(size_t)> &fn);

} // namespace spd
