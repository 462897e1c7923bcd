#include "spdalloc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <thread>

#include "spdalloc/flow.hpp"
#include "spdalloc/layers.hpp"
#include "spdalloc/transfers.hpp"

namespace spd {

namespace {

constexpr int kOracleMaxAgents = 5;
constexpr int kOracleMaxItems = 10;

void check_oracle_scale(const Instance &inst) {
    if (inst.num_agents() > kOracleMaxAgents || inst.num_items() > kOracleMaxItems) {
        throw ScaleError("oracle enumeration is guarded to n <= 5, m <= 10");
    }
}

//! Narrowing-transfer check on a bare owner array: direct adjacency, then
//! transitive closure, then a reachable income gap of two.
bool owner_row_stable(const Instance &inst, const int8_t *owner,
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
        uint32_t targets = reach[u];
        while (targets != 0) {
            int v = std::countr_zero(targets);
            targets &= targets - 1;
            if (v != u && incomes[u] >= incomes[v] + 2) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

EnumerationResult::EnumerationResult(int num_agents, int num_items)
    : num_agents_(num_agents), num_items_(num_items) {}

std::vector<long> EnumerationResult::profile_of(size_t idx) const {
    std::vector<long> incomes(num_agents_, 0);
    const int8_t *row = owner_row(idx);
    for (int j = 0; j < num_items_; ++j) {
        if (row[j] >= 0) {
            ++incomes[row[j]];
        }
    }
    return incomes;
}

Allocation EnumerationResult::materialize(const Instance &inst, size_t idx) const {
    Allocation alloc(inst.num_agents(), inst.num_items());
    const int8_t *row = owner_row(idx);
    for (int j = 0; j < num_items_; ++j) {
        if (row[j] >= 0) {
            alloc.assign(j, row[j]);
        }
    }
    return alloc;
}

const std::vector<int32_t> &EnumerationResult::optimal_set(Criterion c) const {
    for (size_t k = 0; k < kAllCriteria.size(); ++k) {
        if (kAllCriteria[k] == c) {
            return optimal_[k];
        }
    }
    throw ValidationError("criterion has no tracked optimal set");
}

int EnumerationResult::find(const Allocation &alloc) const {
    for (size_t idx = 0; idx < count(); ++idx) {
        const int8_t *row = owner_row(idx);
        bool match = true;
        for (int j = 0; j < num_items_ && match; ++j) {
            match = (row[j] == alloc.owner_of(j));
        }
        if (match) {
            return static_cast<int>(idx);
        }
    }
    return -1;
}

EnumerationResult enumerate_and_classify(const Instance &inst) {
    check_oracle_scale(inst);
    const int n = inst.num_agents();
    const int m = inst.num_items();

    std::vector<int> likeable;
    for (int j = 0; j < m; ++j) {
        if (!inst.likers_of(j).empty()) {
            likeable.push_back(j);
        }
    }

    EnumerationResult result(n, m);
    std::vector<int8_t> owner(m, -1);
    std::vector<int> incomes(n, 0);
    std::map<std::vector<int>, int> group_of_sorted; // sorted profile -> group
    std::vector<std::vector<int>> group_sorted_profiles;
    std::vector<int> group_ids; // per allocation

    auto recurse = [&](auto &&self, size_t index) -> void {
        if (index == likeable.size()) {
            result.owners_.insert(result.owners_.end(), owner.begin(), owner.end());
            size_t idx = result.count() - 1;
            if (owner_row_stable(inst, owner.data(), incomes)) {
                result.stable_.push_back(static_cast<int32_t>(idx));
            }
            std::vector<int> sorted = incomes;
            std::sort(sorted.begin(), sorted.end());
            auto [it, inserted] =
                group_of_sorted.try_emplace(std::move(sorted),
                                            static_cast<int>(group_sorted_profiles.size()));
            if (inserted) {
                group_sorted_profiles.push_back(it->first);
            }
            group_ids.push_back(it->second);
            return;
        }
        int item = likeable[index];
        for (int agent = 0; agent < n; ++agent) {
            if (!inst.likes(agent, item)) {
                continue;
            }
            owner[item] = static_cast<int8_t>(agent);
            ++incomes[agent];
            self(self, index + 1);
            --incomes[agent];
            owner[item] = -1;
        }
    };
    recurse(recurse, 0);

    // Best sorted profile per criterion; optimal set = its group members.
    for (size_t c = 0; c < kAllCriteria.size(); ++c) {
        int best_group = -1;
        for (size_t g = 0; g < group_sorted_profiles.size(); ++g) {
            if (best_group < 0) {
                best_group = static_cast<int>(g);
                continue;
            }
            std::vector<long> lhs(group_sorted_profiles[g].begin(),
                                  group_sorted_profiles[g].end());
            std::vector<long> rhs(group_sorted_profiles[best_group].begin(),
                                  group_sorted_profiles[best_group].end());
            if (compare(kAllCriteria[c], Profile::from_ints(lhs),
                        Profile::from_ints(rhs)) == Ordering::kFirstBetter) {
                best_group = static_cast<int>(g);
            }
        }
        for (size_t idx = 0; idx < group_ids.size(); ++idx) {
            if (group_ids[idx] == best_group) {
                result.optimal_[c].push_back(static_cast<int32_t>(idx));
            }
        }
    }
    return result;
}

std::vector<Allocation> enumerate_max_usw_clean(const Instance &inst) {
    EnumerationResult result = enumerate_and_classify(inst);
    std::vector<Allocation> out;
    out.reserve(result.count());
    for (size_t idx = 0; idx < result.count(); ++idx) {
        out.push_back(result.materialize(inst, idx));
    }
    return out;
}

CheckReport verify_consistency(const Instance &inst) {
    EnumerationResult result = enumerate_and_classify(inst);
    for (size_t c = 0; c < kAllCriteria.size(); ++c) {
        if (result.optimal_[c] != result.stable_set()) {
            std::ostringstream witness;
            witness << "criterion " << criterion_name(kAllCriteria[c])
                    << ": optimal set (" << result.optimal_[c].size()
                    << " allocations) differs from stable set ("
                    << result.stable_set().size() << ") on instance\n"
                    << inst.to_text();
            return {false, witness.str()};
        }
    }
    if (!result.stable_set().empty()) {
        std::vector<long> reference = result.profile_of(result.stable_set().front());
        std::sort(reference.begin(), reference.end());
        for (int32_t idx : result.stable_set()) {
            std::vector<long> sorted = result.profile_of(idx);
            std::sort(sorted.begin(), sorted.end());
            if (sorted != reference) {
                return {false, "stable profiles are not permutation-equivalent on\n" +
                                   inst.to_text()};
            }
        }
    }
    return {};
}

int64_t verify_chebyshev_ind(const Instance &inst) {
    EnumerationResult result = enumerate_and_classify(inst);
    // max pairwise Chebyshev distance == max per-agent income spread
    int64_t best = 0;
    for (int i = 0; i < inst.num_agents(); ++i) {
        long lo = 0;
        long hi = 0;
        bool first = true;
        for (int32_t idx : result.stable_set()) {
            long h = result.profile_of(idx)[i];
            lo = first ? h : std::min(lo, h);
            hi = first ? h : std::max(hi, h);
            first = false;
        }
        best = std::max<int64_t>(best, hi - lo);
    }
    return best;
}

bool verify_layer_invariance(const Instance &inst) {
    EnumerationResult result = enumerate_and_classify(inst);
    if (result.stable_set().empty()) {
        return true;
    }
    for (int32_t seed_idx : result.stable_set()) {
        LayerPartition partition =
            compute_layers(inst, result.materialize(inst, seed_idx));
        std::vector<int> layer_of_agent(inst.num_agents(), -1);
        std::vector<int> layer_of_item(inst.num_items(), -1);
        int layer_id = 0;
        auto label = [&](const std::map<int64_t, LayerGroup> &groups) {
            for (const auto &[d, group] : groups) {
                (void)d;
                for (int agent : group.agents) {
                    layer_of_agent[agent] = layer_id;
                }
                for (int item : group.items) {
                    layer_of_item[item] = layer_id;
                }
                ++layer_id;
            }
        };
        label(partition.exact());
        label(partition.minus());
        for (size_t idx = 0; idx < result.count(); ++idx) {
            if (!std::binary_search(result.stable_set().begin(),
                                    result.stable_set().end(),
                                    static_cast<int32_t>(idx))) {
                continue;
            }
            const int8_t *row = result.owner_row(idx);
            for (int j = 0; j < inst.num_items(); ++j) {
                if (row[j] >= 0 && layer_of_item[j] != layer_of_agent[row[j]]) {
                    return false;
                }
            }
        }
    }
    return true;
}

Profile div_profile_waterfill(const Instance &inst) {
    const int n = inst.num_agents();
    if (n > 16) {
        throw ScaleError("waterfill oracle is guarded to n <= 16");
    }
    const uint32_t full = (uint32_t{1} << n) - 1;
    std::vector<uint32_t> item_mask(inst.num_items(), 0);
    for (int j = 0; j < inst.num_items(); ++j) {
        for (int i = 0; i < n; ++i) {
            if (inst.likes(i, j)) {
                item_mask[j] |= uint32_t{1} << i;
            }
        }
    }
    auto coverage = [&](uint32_t set) {
        long covered = 0;
        for (uint32_t mask : item_mask) {
            if ((mask & set) != 0) {
                ++covered;
            }
        }
        return covered;
    };

    std::vector<Rat> level(n, Rat(0));
    uint32_t unfrozen = full;
    while (unfrozen != 0) {
        bool have_best = false;
        Rat best_level(0);
        uint32_t tight_union = 0;
        for (uint32_t set = 1; set <= full; ++set) {
            uint32_t rising = set & unfrozen;
            if (rising == 0) {
                continue;
            }
            Rat frozen_sum(0);
            uint32_t frozen = set & ~unfrozen;
            while (frozen != 0) {
                int i = std::countr_zero(frozen);
                frozen &= frozen - 1;
                frozen_sum += level[i];
            }
            Rat candidate =
                (Rat(coverage(set)) - frozen_sum) / std::popcount(rising);
            if (!have_best || candidate < best_level) {
                have_best = true;
                best_level = candidate;
                tight_union = rising;
            } else if (candidate == best_level) {
                tight_union |= rising;
            }
        }
        while (tight_union != 0) {
            int i = std::countr_zero(tight_union);
            tight_union &= tight_union - 1;
            level[i] = best_level;
            unfrozen &= ~(uint32_t{1} << i);
        }
    }

    Profile result(std::move(level));
    if (result.sum() != inst.max_usw()) {
        throw Error("waterfill mass mismatch");
    }
    return result;
}

MixedFixtureReport appendix_mixed_fixture() {
    // 4 agents, 6 items; items 5 and 6 are the divisible ones. The two
    // classes fix the only genuinely contested indivisible item (item 4) to
    // agent 1 or agent 4; forcing it shrinks each class to a pure divisible
    // instance, inside which every criterion agrees on the optimum.
    auto class_instance = [](bool item4_to_agent1) {
        std::vector<std::vector<int>> rows = {
            {1, 0, 0, item4_to_agent1 ? 1 : 0, 0, 0},
            {0, 1, 0, 0, 1, 1},
            {0, 0, 1, 0, 1, 1},
            {0, 0, 0, item4_to_agent1 ? 0 : 1, 1, 1},
        };
        return validate_instance(4, 6, rows);
    };

    Instance a = class_instance(true);
    Instance b = class_instance(false);
    DivSolution class_a = solve_stable_div(a);
    DivSolution class_b = solve_stable_div(b);

    bool a_leximin_better =
        compare(Criterion::kLexiMin, class_a.profile, class_b.profile) ==
        Ordering::kFirstBetter;
    bool b_leximax_better =
        compare(Criterion::kLexiMax, class_b.profile, class_a.profile) ==
        Ordering::kFirstBetter;
    Profile leximin_profile = a_leximin_better ? class_a.profile : class_b.profile;
    Profile leximax_profile = b_leximax_better ? class_b.profile : class_a.profile;
    int leximin_item4_agent = a_leximin_better ? 0 : 3;
    int leximax_item4_agent = b_leximax_better ? 3 : 0;

    std::vector<Rat> expected_min{Rat(2), make_rat(4, 3), make_rat(4, 3), make_rat(4, 3)};
    std::vector<Rat> expected_max{Rat(1), make_rat(5, 3), make_rat(5, 3), make_rat(5, 3)};
    bool pass = a_leximin_better && b_leximax_better &&
                leximin_profile.incomes() == expected_min &&
                leximax_profile.incomes() == expected_max &&
                leximin_profile.sum() == 6 && leximax_profile.sum() == 6 &&
                leximin_item4_agent != leximax_item4_agent;
    return MixedFixtureReport{class_a.profile,
                              class_b.profile,
                              std::move(class_a),
                              std::move(class_b),
                              std::move(leximin_profile),
                              std::move(leximax_profile),
                              leximin_item4_agent,
                              leximax_item4_agent,
                              pass};
}

std::string MixedFixtureReport::text() const {
    std::ostringstream out;
    out << "mixed fixture: 4 agents, 6 items, items 5-6 divisible\n";
    out << "class A (item 4 -> agent 1) profile: " << class_a_profile.to_string() << "\n";
    out << "class B (item 4 -> agent 4) profile: " << class_b_profile.to_string() << "\n";
    out << "leximin optimum: profile " << leximin_profile.to_string()
        << " (item 4 -> agent " << leximin_item4_agent + 1 << ")\n";
    out << "leximax optimum: profile " << leximax_profile.to_string()
        << " (item 4 -> agent " << leximax_item4_agent + 1 << ")\n";
    out << "criteria disagree: " << (pass ? "yes (as expected)" : "CHECK FAILED") << "\n";
    return out.str();
}

Instance random_instance(Xorshift64Star &rng, int num_agents, int num_items,
                         unsigned density_percent) {
    std::vector<uint8_t> likes(static_cast<size_t>(num_agents) * num_items);
    for (auto &bit : likes) {
        bit = rng.next_percent(density_percent) ? 1 : 0;
    }
    return Instance(num_agents, num_items, std::move(likes));
}

SubInstance random_sub_instance(Xorshift64Star &rng, int num_agents, int num_items,
                                int kind) {
    SubInstance si;
    si.num_items = num_items;
    for (int i = 0; i < num_agents; ++i) {
        std::vector<int> ground;
        for (int j = 0; j < num_items; ++j) {
            if (rng.next_percent(60)) {
                ground.push_back(j);
            }
        }
        switch (kind) {
        case 0: {
            int rank = 1 + static_cast<int>(rng.next_below(3));
            si.agents.push_back(MatroidValuation::uniform(rank, std::move(ground)));
            break;
        }
        case 1: {
            int num_blocks = 1 + static_cast<int>(rng.next_below(3));
            std::vector<MatroidValuation::Block> blocks(num_blocks);
            for (auto &block : blocks) {
                block.capacity = 1 + static_cast<int>(rng.next_below(2));
            }
            for (size_t k = 0; k < ground.size(); ++k) {
                blocks[k % num_blocks].items.push_back(ground[k]);
            }
            si.agents.push_back(MatroidValuation::partition(std::move(blocks)));
            break;
        }
        default: {
            int slots = 1 + static_cast<int>(rng.next_below(3));
            std::vector<std::pair<int, int>> edges;
            for (int item : ground) {
                for (int s = 0; s < slots; ++s) {
                    if (rng.next_percent(40)) {
                        edges.emplace_back(item, s);
                    }
                }
            }
            si.agents.push_back(MatroidValuation::transversal(slots, std::move(edges)));
            break;
        }
        }
    }
    return si;
}

void parallel_for(size_t count, unsigned num_threads,
                  const std::function<void(size_t)> &fn) {
    if (num_threads == 0) {
        num_threads = std::max(1u, std::thread::hardware_concurrency());
    }
    num_threads = static_cast<unsigned>(
        std::min<size_t>(num_threads, std::max<size_t>(count, 1)));
    if (num_threads <= 1) {
        for (size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(num_threads);
    for (unsigned w = 0; w < num_threads; ++w) {
        workers.emplace_back([&, w]() {
            for (size_t i = w; i < count; i += num_threads) {
                fn(i);
            }
        });
    }
    for (std::thread &worker : workers) {
        worker.join();
    }
}

namespace {

struct TrialOutcome {
    bool pass = true;
    std::string witness;
};

uint64_t trial_seed(uint64_t base, uint64_t suite, uint64_t trial) {
    return base + 0x9E3779B97F4A7C15ULL * (suite * 100003 + trial + 1);
}

SuiteResult run_suite(const SweepConfig &config, std::string name, uint64_t suite_id,
                      const std::function<void(Xorshift64Star &)> &body) {
    SuiteResult result;
    result.name = std::move(name);
    result.checked = config.trials;
    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_for(static_cast<size_t>(config.trials), config.threads, [&](size_t t) {
        Xorshift64Star rng(trial_seed(config.seed, suite_id, t));
        try {
            body(rng);
        } catch (const std::exception &err) {
            outcomes[t].pass = false;
            outcomes[t].witness = err.what();
        }
    });
    for (const TrialOutcome &outcome : outcomes) {
        if (!outcome.pass) {
            result.pass = false;
            result.witness = outcome.witness;
            break;
        }
    }
    return result;
}

struct CheckFailure : Error {
    using Error::Error;
};

void expect(bool condition, const std::string &witness) {
    if (!condition) {
        throw CheckFailure(witness);
    }
}

Instance permuted_agents(const Instance &inst, const std::vector<int> &perm) {
    std::vector<uint8_t> likes(static_cast<size_t>(inst.num_agents()) *
                               inst.num_items());
    for (int i = 0; i < inst.num_agents(); ++i) {
        for (int j = 0; j < inst.num_items(); ++j) {
            likes[static_cast<size_t>(i) * inst.num_items() + j] =
                inst.likes(perm[i], j) ? 1 : 0;
        }
    }
    return Instance(inst.num_agents(), inst.num_items(), std::move(likes));
}

} // namespace

std::vector<SuiteResult> run_verification(const SweepConfig &config) {
    std::vector<SuiteResult> report;
    if (config.trials <= 0) {
        return report;
    }
    auto draw_instance = [&](Xorshift64Star &rng) {
        int n = 2 + static_cast<int>(rng.next_below(std::max(config.max_n - 1, 1)));
        n = std::min(n, config.max_n);
        n = std::max(n, 1);
        int m = 1 + static_cast<int>(rng.next_below(std::max(config.max_m, 1)));
        m = std::min(m, config.max_m);
        unsigned density = std::array<unsigned, 3>{30, 50, 80}[rng.next_below(3)];
        return random_instance(rng, n, m, density);
    };

    report.push_back(run_suite(config, "consistency", 1, [&](Xorshift64Star &rng) {
        Instance inst = draw_instance(rng);
        CheckReport check = verify_consistency(inst);
        expect(check.pass, check.witness);
        EnumerationResult ground = enumerate_and_classify(inst);
        Allocation solved = solve_stable_ind(inst);
        int idx = ground.find(solved);
        expect(idx >= 0, "solver output not among enumerated allocations on\n" +
                             inst.to_text());
        expect(std::binary_search(ground.stable_set().begin(),
                                  ground.stable_set().end(), idx),
               "solver output is not stable on\n" + inst.to_text());
    }));

    report.push_back(run_suite(config, "chebyshev-ind", 2, [&](Xorshift64Star &rng) {
        Instance inst = draw_instance(rng);
        int64_t distance = verify_chebyshev_ind(inst);
        expect(distance <= 1, "stable profiles with Chebyshev distance " +
                                  std::to_string(distance) + " on\n" + inst.to_text());
    }));

    report.push_back(run_suite(config, "layer-invariance", 3, [&](Xorshift64Star &rng) {
        Instance inst = draw_instance(rng);
        expect(verify_layer_invariance(inst),
               "stable allocation crosses layer boundaries on\n" + inst.to_text());
        EnumerationResult ground = enumerate_and_classify(inst);
        if (ground.stable_set().empty()) {
            return;
        }
        LayerPartition partition =
            compute_layers(inst, ground.materialize(inst, ground.stable_set().front()));
        for (int agent = 0; agent < inst.num_agents(); ++agent) {
            long lo = 0;
            long hi = 0;
            bool first = true;
            for (int32_t idx : ground.stable_set()) {
                long h = ground.profile_of(idx)[agent];
                lo = first ? h : std::min(lo, h);
                hi = first ? h : std::max(hi, h);
                first = false;
            }
            auto [range_lo, range_hi] = partition.income_range(agent);
            expect(range_lo == lo && range_hi == hi,
                   "income range mismatch for agent " + std::to_string(agent + 1) +
                       " on\n" + inst.to_text());
        }
    }));

    report.push_back(run_suite(config, "spd-monotonicity", 4, [&](Xorshift64Star &rng) {
        for (int pair = 0; pair < 20; ++pair) {
            int n = 2 + static_cast<int>(rng.next_below(5));
            std::vector<long> values(n);
            for (long &v : values) {
                v = static_cast<long>(rng.next_below(51));
            }
            // a rich-to-poor transfer that keeps the pair ordered
            int rich = -1;
            int poor = -1;
            for (int attempts = 0; attempts < 64 && rich < 0; ++attempts) {
                int a = static_cast<int>(rng.next_below(n));
                int b = static_cast<int>(rng.next_below(n));
                if (values[a] >= values[b] + 2) {
                    rich = a;
                    poor = b;
                }
            }
            if (rich < 0) {
                continue;
            }
            long gap = values[rich] - values[poor];
            long delta = 1 + static_cast<long>(rng.next_below(gap / 2));
            std::vector<long> balanced = values;
            balanced[rich] -= delta;
            balanced[poor] += delta;
            Profile p = Profile::from_ints(values);
            Profile q = Profile::from_ints(balanced);
            expect(more_balanced(p, q), "transfer pair not detected as more balanced");
            for (Criterion c : kAllCriteria) {
                expect(compare(c, q, p) == Ordering::kFirstBetter,
                       std::string("criterion ") + std::string(criterion_name(c)) +
                           " not strictly improved by a narrowing transfer");
            }
            // EnvySum(p) = 2*Gini(p) - (1+n)*sum(p)
            Rat envy = std::get<Rat>(score(Criterion::kEnvySum, p).value());
            Rat gini = std::get<Rat>(score(Criterion::kGiniIndex, p).value());
            expect(envy == 2 * gini - Rat(1 + n) * p.sum(),
                   "envy-sum/gini identity violated");
        }
    }));

    report.push_back(run_suite(config, "divisible-uniqueness", 5, [&](Xorshift64Star &rng) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        int m = 1 + static_cast<int>(rng.next_below(6));
        unsigned density = std::array<unsigned, 3>{30, 50, 80}[rng.next_below(3)];
        Instance inst = random_instance(rng, n, m, density);
        DivSolution solution = solve_stable_div(inst);
        expect(solution.profile.sum() == inst.max_usw(), "divisible mass not conserved");
        expect(solution.profile == div_profile_waterfill(inst),
               "divisible profile disagrees with the waterfill oracle on\n" +
                   inst.to_text());
        Rat separation(1, static_cast<unsigned long>(n) * n);
        for (size_t a = 0; a < solution.layers.size(); ++a) {
            for (size_t b = a + 1; b < solution.layers.size(); ++b) {
                expect(abs(solution.layers[a].index - solution.layers[b].index) >=
                           separation,
                       "layer indices closer than 1/n^2 on\n" + inst.to_text());
            }
        }
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) {
            perm[i] = i;
        }
        for (int round = 0; round < 3; ++round) {
            for (int i = n - 1; i > 0; --i) {
                std::swap(perm[i], perm[rng.next_below(i + 1)]);
            }
            Instance shuffled = permuted_agents(inst, perm);
            Profile permuted = div_profile(shuffled);
            for (int i = 0; i < n; ++i) {
                expect(permuted[i] == solution.profile[perm[i]],
                       "divisible profile changed under agent permutation on\n" +
                           inst.to_text());
            }
        }
    }));

    report.push_back(run_suite(config, "submodular-chebyshev", 6, [&](Xorshift64Star &rng) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        int m = 1 + static_cast<int>(rng.next_below(6));
        SubInstance si = random_sub_instance(rng, n, m, static_cast<int>(rng.next_below(3)));
        int distance = chebyshev_sub(si);
        expect(distance <= 1, "submodular optimal profiles with Chebyshev distance " +
                                  std::to_string(distance));
        Allocation best = solve_leximin_sub_desk(si);
        expect(is_clean(si, best), "submodular solver produced an unclean allocation");
        expect(!find_exchange_improvement(si, best).has_value(),
               "submodular solver output still admits an exchange improvement");
    }));

    return report;
}

} // namespace spd
