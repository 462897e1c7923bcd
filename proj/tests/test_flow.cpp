#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spdalloc/flow.hpp>
#include <spdalloc/rng.hpp>
#include <spdalloc/transfers.hpp>

using namespace spd;

namespace {

Instance random_instance(Xorshift64Star &rng, int n, int m, unsigned density) {
    std::vector<uint8_t> likes(static_cast<size_t>(n) * m);
    for (auto &bit : likes) {
        bit = rng.next_percent(density) ? 1 : 0;
    }
    return Instance(n, m, std::move(likes));
}

std::vector<long> sorted_profile(const Instance &inst, const Allocation &alloc) {
    std::vector<long> out;
    for (int i = 0; i < inst.num_agents(); ++i) {
        out.push_back(alloc.income(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("network shape for the minimal instance") {
    Instance inst = validate_instance(1, 1, {{1}});
    FlowNetwork network = build_network(inst);
    CHECK(network.num_nodes() == 4);
    CHECK(network.num_item_agent_arcs() == 1);
    CHECK(network.arc_targets(0) == std::vector<int32_t>{0});
}

TEST_CASE("network has no item arcs when nobody likes anything") {
    Instance inst = validate_instance(2, 2, {{0, 0}, {0, 0}});
    FlowNetwork network = build_network(inst);
    CHECK(network.num_nodes() == 6);
    CHECK(network.num_item_agent_arcs() == 0);
}

TEST_CASE("complete 2x2 network has four item arcs") {
    Instance inst = validate_instance(2, 2, {{1, 1}, {1, 1}});
    FlowNetwork network = build_network(inst);
    CHECK(network.num_item_agent_arcs() == 4);
}

TEST_CASE("symmetric 2x2 instance balances to (1,1)") {
    Instance inst = validate_instance(2, 2, {{1, 1}, {1, 1}});
    Allocation alloc = solve_stable_ind(inst);
    CHECK(alloc.income(0) == 1);
    CHECK(alloc.income(1) == 1);
    CHECK(is_stable(inst, alloc));
}

TEST_CASE("restricted liker keeps the contested item") {
    // brute force over the 8 assignments confirms (2,1) is the only stable
    // sorted profile, with item 3 on agent 2
    Instance inst = validate_instance(2, 3, {{1, 1, 1}, {0, 0, 1}});
    Allocation alloc = solve_stable_ind(inst);
    CHECK(sorted_profile(inst, alloc) == std::vector<long>{1, 2});
    CHECK(alloc.bundle(1) == std::vector<int>{2});
    CHECK(is_stable(inst, alloc));
}

TEST_CASE("isolated rich agent stays rich") {
    Instance inst = validate_instance(3, 4, {{1, 1, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}});
    Allocation alloc = solve_stable_ind(inst);
    CHECK(alloc.income(0) == 3);
    CHECK(alloc.income(1) == 1);
    CHECK(alloc.income(2) == 0);
    CHECK(is_stable(inst, alloc));
}

TEST_CASE("flow value always reaches max USW and output is stable") {
    Xorshift64Star rng(123);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 1 + static_cast<int>(rng.next_below(6));
        int m = 1 + static_cast<int>(rng.next_below(12));
        unsigned density = 20 + static_cast<unsigned>(rng.next_below(70));
        Instance inst = random_instance(rng, n, m, density);
        FlowNetwork::Stats stats;
        Allocation alloc = solve_stable_ind(inst, &stats);
        CHECK(stats.flow_value == inst.max_usw());
        CHECK(stats.augmentations == inst.max_usw());
        CHECK(is_clean(inst, alloc));
        CHECK(is_max_usw(inst, alloc));
        CHECK(is_stable(inst, alloc));
    }
}

TEST_CASE("solver output is deterministic") {
    Xorshift64Star rng(5);
    Instance inst = random_instance(rng, 5, 9, 50);
    Allocation first = solve_stable_ind(inst);
    Allocation second = solve_stable_ind(inst);
    CHECK(first == second);
}

TEST_CASE("linear objective with equal costs is still stable") {
    Instance inst = validate_instance(2, 3, {{1, 1, 1}, {0, 0, 1}});
    Allocation alloc = solve_linear_objective(inst, {5, 5});
    CHECK(is_stable(inst, alloc));
    CHECK(sorted_profile(inst, alloc) == std::vector<long>{1, 2});
}

TEST_CASE("linear objective cannot bend a pinned profile") {
    Instance inst = validate_instance(2, 2, {{1, 1}, {1, 1}});
    Allocation alloc = solve_linear_objective(inst, {0, 1});
    CHECK(alloc.income(0) == 1);
    CHECK(alloc.income(1) == 1);
    CHECK(is_stable(inst, alloc));
}

TEST_CASE("linear objective picks the cheap agents inside a loose layer") {
    // all three agents like both items; costs steer them to agents 1 and 2
    Instance inst = validate_instance(3, 2, {{1, 1}, {1, 1}, {1, 1}});
    Allocation alloc = solve_linear_objective(inst, {0, 1, 2});
    CHECK(alloc.income(0) == 1);
    CHECK(alloc.income(1) == 1);
    CHECK(alloc.income(2) == 0);
    CHECK(is_stable(inst, alloc));

    Allocation reversed = solve_linear_objective(inst, {2, 1, 0});
    CHECK(reversed.income(0) == 0);
    CHECK(reversed.income(1) == 1);
    CHECK(reversed.income(2) == 1);
}

TEST_CASE("linear objective validates the cost vector") {
    Instance inst = validate_instance(2, 2, {{1, 1}, {1, 1}});
    CHECK_THROWS_AS(solve_linear_objective(inst, {1}), ValidationError);
    CHECK_THROWS_AS(solve_linear_objective(inst, {int64_t{1} << 40, 0}),
                    ValidationError);
}

TEST_CASE("piece-capacity network spreads an item across likers") {
    Instance inst = validate_instance(2, 1, {{1}, {1}});
    FlowNetwork network(inst, 8); // 2n^2 for n = 2
    FlowNetwork::Stats stats = network.run();
    CHECK(stats.flow_value == 8);
    CHECK(network.agent_load(0) == 4);
    CHECK(network.agent_load(1) == 4);
    FractionalAllocation shares = network.extract_fractional();
    CHECK(shares.income(0) == make_rat(1, 2));
    CHECK(shares.income(1) == make_rat(1, 2));
    CHECK_THROWS_AS(network.extract_allocation(), ValidationError);
}
