#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <spdalloc/criteria.hpp>
#include <spdalloc/rng.hpp>

using namespace spd;

namespace {

Rat scalar_score(Criterion c, const std::vector<long> &incomes) {
    return std::get<Rat>(score(c, Profile::from_ints(incomes)).value());
}

Profile random_profile(Xorshift64Star &rng, int n, long max_value) {
    std::vector<long> incomes(n);
    for (long &v : incomes) {
        v = static_cast<long>(rng.next_below(max_value + 1));
    }
    return Profile::from_ints(incomes);
}

//! Random narrowing transfer on p, or nothing if p is already flat-ish.
std::optional<Profile> random_more_balanced(Xorshift64Star &rng, const Profile &p) {
    int n = p.size();
    for (int attempt = 0; attempt < 64; ++attempt) {
        int rich = static_cast<int>(rng.next_below(n));
        int poor = static_cast<int>(rng.next_below(n));
        if (p[rich] < p[poor] + 2) {
            continue;
        }
        Rat gap_rat = p[rich] - p[poor];
        long gap = gap_rat.get_num().get_si();
        long delta = 1 + static_cast<long>(rng.next_below(gap / 2));
        std::vector<Rat> incomes = p.incomes();
        incomes[rich] -= delta;
        incomes[poor] += delta;
        return Profile(std::move(incomes));
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("congestion and envy-sum fixture values") {
    CHECK(scalar_score(Criterion::kCongestion, {0, 5, 9}) == 46);
    CHECK(scalar_score(Criterion::kCongestion, {2, 2, 10}) == 47);
    CHECK(scalar_score(Criterion::kEnvySum, {0, 5, 9}) == 18);
    CHECK(scalar_score(Criterion::kEnvySum, {2, 2, 10}) == 16);
    CHECK(scalar_score(Criterion::kCongestion, {0, 0, 0}) == 0);
    CHECK(scalar_score(Criterion::kGiniIndex, {0, 0, 0}) == 0);
}

TEST_CASE("gini fixture value cross-checked through the envy-sum identity") {
    CHECK(scalar_score(Criterion::kGiniIndex, {0, 5, 9}) == 37);
    // 2*37 - (1+3)*14 = 18 = EnvySum((0,5,9))
    CHECK(2 * 37 - (1 + 3) * 14 == 18);
}

TEST_CASE("comparisons follow the scores") {
    Profile p = Profile::from_ints({0, 5, 9});
    Profile q = Profile::from_ints({2, 2, 10});
    CHECK(compare(Criterion::kCongestion, p, q) == Ordering::kFirstBetter);
    CHECK(compare(Criterion::kEnvySum, p, q) == Ordering::kSecondBetter);
    CHECK_THROWS_AS(compare(Criterion::kCongestion, p, Profile::from_ints({1, 2})),
                    ValidationError);
}

TEST_CASE("criteria are symmetric under permutations") {
    Xorshift64Star rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(5));
        Profile p = random_profile(rng, n, 20);
        std::vector<Rat> shuffled = p.incomes();
        for (int i = n - 1; i > 0; --i) {
            std::swap(shuffled[i], shuffled[rng.next_below(i + 1)]);
        }
        Profile q(std::move(shuffled));
        for (Criterion c : kAllCriteria) {
            CHECK(compare(c, p, q) == Ordering::kEqual);
        }
    }
}

TEST_CASE("more_balanced matches its definition") {
    CHECK(more_balanced(Profile::from_ints({0, 4}), Profile::from_ints({1, 3})));
    CHECK_FALSE(more_balanced(Profile::from_ints({0, 4}), Profile::from_ints({0, 4})));
    CHECK_FALSE(more_balanced(Profile::from_ints({1, 1}), Profile::from_ints({0, 2})));
    // endpoints are excluded
    CHECK_FALSE(more_balanced(Profile::from_ints({0, 4}), Profile::from_ints({0, 3})));
    // a third changed entry disqualifies
    CHECK_FALSE(more_balanced(Profile::from_ints({0, 4, 7}), Profile::from_ints({1, 3, 6})));
}

TEST_CASE("every criterion strictly improves under narrowing transfers") {
    Xorshift64Star rng(42);
    int tested = 0;
    while (tested < 1000) {
        int n = 2 + static_cast<int>(rng.next_below(5));
        Profile p = random_profile(rng, n, 50);
        auto q = random_more_balanced(rng, p);
        if (!q) {
            continue;
        }
        ++tested;
        REQUIRE(more_balanced(p, *q));
        for (Criterion c : kAllCriteria) {
            CHECK(compare(c, *q, p) == Ordering::kFirstBetter);
        }
    }
}

TEST_CASE("envy-sum equals 2*gini - (1+n)*total") {
    Xorshift64Star rng(43);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng.next_below(6));
        Profile p = random_profile(rng, n, 50);
        Rat envy = std::get<Rat>(score(Criterion::kEnvySum, p).value());
        Rat gini = std::get<Rat>(score(Criterion::kGiniIndex, p).value());
        CHECK(envy == 2 * gini - Rat(1 + n) * p.sum());
    }
}

TEST_CASE("leximin prefers the larger minimum, leximax the smaller maximum") {
    Profile p = Profile::from_ints({0, 5, 9});
    Profile q = Profile::from_ints({2, 2, 10});
    CHECK(compare(Criterion::kLexiMin, q, p) == Ordering::kFirstBetter);
    CHECK(compare(Criterion::kLexiMax, p, q) == Ordering::kFirstBetter);

    // ascending sorted vectors compared lexicographically, larger is better
    Xorshift64Star rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        Profile a = random_profile(rng, 4, 8);
        Profile b = random_profile(rng, 4, 8);
        std::vector<Rat> sa = a.sorted_ascending();
        std::vector<Rat> sb = b.sorted_ascending();
        Ordering expected = sa == sb            ? Ordering::kEqual
                            : (sa > sb ? Ordering::kFirstBetter : Ordering::kSecondBetter);
        CHECK(compare(Criterion::kLexiMin, a, b) == expected);
        std::reverse(sa.begin(), sa.end());
        std::reverse(sb.begin(), sb.end());
        expected = sa == sb ? Ordering::kEqual
                            : (sa < sb ? Ordering::kFirstBetter : Ordering::kSecondBetter);
        CHECK(compare(Criterion::kLexiMax, a, b) == expected);
    }
}

TEST_CASE("nsw key maximizes nonzero count before the product") {
    CHECK(compare(Criterion::kNswNeg, Profile::from_ints({1, 1}),
                  Profile::from_ints({0, 2})) == Ordering::kFirstBetter);
    CHECK(compare(Criterion::kNswNeg, Profile::from_ints({2, 4}),
                  Profile::from_ints({1, 5})) == Ordering::kFirstBetter);
    auto key = std::get<NswKey>(score(Criterion::kNswNeg, Profile::from_ints({0, 5, 9})).value());
    CHECK(key.zero_count == 1);
    CHECK(key.negated_product == -45);
}

TEST_CASE("entropy comparator agrees with the real-valued formula on equal sums") {
    // surrogate spot checks: prod h^h, 0^0 = 1
    CHECK(entropy_surrogate(Profile::from_ints({0, 2, 3})) == 4 * 27);
    CHECK(entropy_surrogate(Profile::from_ints({0, 0})) == 1);

    Xorshift64Star rng(99);
    int tested = 0;
    while (tested < 200) {
        int n = 2 + static_cast<int>(rng.next_below(4));
        Profile p = random_profile(rng, n, 30);
        auto q = random_more_balanced(rng, p);
        if (!q) {
            continue;
        }
        ++tested;
        REQUIRE(p.sum() == q->sum());
        long double lhs = 0;
        long double rhs = 0;
        for (int i = 0; i < n; ++i) {
            long double hp = p[i].get_d();
            long double hq = (*q)[i].get_d();
            lhs += hp > 0 ? hp * std::log(hp) : 0.0L;
            rhs += hq > 0 ? hq * std::log(hq) : 0.0L;
        }
        Ordering got = compare(Criterion::kEntropyNeg, p, *q);
        if (std::fabs(static_cast<double>(lhs - rhs)) > 1e-9) {
            CHECK(got == (lhs < rhs ? Ordering::kFirstBetter : Ordering::kSecondBetter));
        }
    }
}

TEST_CASE("potential with pair weights coincides with congestion") {
    Xorshift64Star rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Profile p = random_profile(rng, 4, 20);
        CHECK(std::get<Rat>(score(Criterion::kPotentialPairs, p).value()) ==
              std::get<Rat>(score(Criterion::kCongestion, p).value()));
    }
}

TEST_CASE("scalar criteria extend to rational profiles") {
    Profile p({make_rat(4, 3), make_rat(4, 3), Rat(2)});
    CHECK(std::get<Rat>(score(Criterion::kCongestion, p).value()) ==
          2 * (make_rat(4, 3) * make_rat(1, 3) / 2) + Rat(1));
    CHECK(std::get<Rat>(score(Criterion::kEnvySum, p).value()) == make_rat(4, 3));
    // the leximin comparator ranks the mixed-fixture profiles correctly
    Profile a({Rat(2), make_rat(4, 3), make_rat(4, 3), make_rat(4, 3)});
    Profile b({Rat(1), make_rat(5, 3), make_rat(5, 3), make_rat(5, 3)});
    CHECK(compare(Criterion::kLexiMin, a, b) == Ordering::kFirstBetter);
    CHECK(compare(Criterion::kLexiMax, b, a) == Ordering::kFirstBetter);
}

TEST_CASE("negative incomes are rejected") {
    std::vector<Rat> incomes{Rat(1)};
    incomes[0] = -1;
    CHECK_THROWS_AS(Profile(std::move(incomes)), ValidationError);
}

TEST_CASE("criterion names round trip") {
    for (Criterion c : kAllCriteria) {
        auto parsed = criterion_from_name(criterion_name(c));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == c);
    }
    CHECK_FALSE(criterion_from_name("variance").has_value());
}
