#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spdalloc/model.hpp"
#include "spdalloc/numbers.hpp"

namespace spd {

//! Built-in inequality criteria. Lower scores are better. All of them are
//! symmetric and strictly improve under a rich-to-poor income transfer that
//! keeps the pair ordered.
//!
//! kPotentialPairs uses Phi(x) = x*(x-1)/2 and therefore coincides with
//! kCongestion; it exists as the second shipped convex potential. Only the
//! first eight criteria are exposed on the command line.
enum class Criterion {
    kNswNeg,
    kGiniIndex,
    kEnvySum,
    kCongestion,
    kEntropyNeg,
    kLexiMax,
    kLexiMin,
    kPotentialSquare,
    kPotentialPairs,
};

//! The eight criteria every consistency sweep runs.
inline constexpr std::array<Criterion, 8> kAllCriteria = {
    Criterion::kNswNeg,      Criterion::kGiniIndex,       Criterion::kEnvySum,
    Criterion::kCongestion,  Criterion::kEntropyNeg,      Criterion::kLexiMax,
    Criterion::kLexiMin,     Criterion::kPotentialSquare,
};

//! CLI spelling: nsw, gini, envysum, congestion, entropy, leximax, leximin,
//! potential-sq.
std::string_view criterion_name(Criterion c);
std::optional<Criterion> criterion_from_name(std::string_view name);

//! NSW key: first minimize the number of zero-income agents, then minimize
//! the negated product of the nonzero incomes.
struct NswKey {
    long zero_count = 0;
    Rat negated_product;
};

//! Lexicographic key over a sorted profile.
//! LexiMin sorts ascending and prefers the lexicographically larger vector
//! (equivalently: maximize the smallest income, then the second smallest, ...).
//! LexiMax sorts descending and prefers the lexicographically smaller vector.
//! Both orders match the classical power-sum scalarizations
//! sum_i M^(U-h_i) resp. sum_i M^(h_i) for any base M larger than the number
//! of agents and incomes involved.
struct LexKey {
    std::vector<Rat> key;
    bool prefer_larger = false;
};

//! Sorted profile compared through the product surrogate
//! prod_i a_i^(a_i) after scaling both profiles to integers with a common
//! denominator (0^0 := 1). On equal-sum profiles this is exactly the order of
//! sum_i h_i*ln(h_i); profiles with different sums are ordered by sum first
//! to keep the comparison a total order.
struct EntropyKey {
    std::vector<Rat> sorted;
};

//! Totally ordered criterion value. Comparable only within one criterion.
class Score {
  public:
    using Value = std::variant<Rat, NswKey, LexKey, EntropyKey>;

    Score(Criterion criterion, Value value)
        : criterion_(criterion), value_(std::move(value)) {}

    Criterion criterion() const { return criterion_; }
    const Value &value() const { return value_; }

    //! Exact value for scalar criteria, or the comparator key.
    std::string to_string() const;

  private:
    Criterion criterion_;
    Value value_;
};

//! Negative when `a` is the better (lower) score, 0 when equal.
int compare_scores(const Score &a, const Score &b);

//! Criterion score of a profile. Scalar criteria return exact rationals
//! (plain integers on integral profiles); the remaining criteria return
//! their comparator keys, which also cover rational profiles.
Score score(Criterion c, const Profile &p);

enum class Ordering { kFirstBetter, kEqual, kSecondBetter };

//! Orders two profiles under a criterion.
Ordering compare(Criterion c, const Profile &p, const Profile &q);

//! True iff q is more balanced than p: exactly two entries j,k differ,
//! p_j < p_k, and both q_j and q_k lie strictly inside (p_j, p_k).
bool more_balanced(const Profile &p, const Profile &q);

//! prod_i h_i^(h_i) with 0^0 := 1. Requires an integral profile.
Int entropy_surrogate(const Profile &p);

} // namespace spd
