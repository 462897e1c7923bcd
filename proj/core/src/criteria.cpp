#include "spdalloc/criteria.hpp"

#include <algorithm>

namespace spd {

namespace {

const Rat &require_nonnegative(const Profile &p) {
    static const Rat zero(0);
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] < 0) {
            throw ValidationError("negative income in profile");
        }
    }
    return zero;
}

Rat congestion_like(const Profile &p) {
    // sum h*(h-1)/2; the binomial coefficient extended as a polynomial.
    Rat total(0);
    for (int i = 0; i < p.size(); ++i) {
        total += p[i] * (p[i] - 1);
    }
    return total / 2;
}

Rat gini_index(const Profile &p) {
    std::vector<Rat> sorted = p.sorted_ascending();
    Rat total(0);
    for (size_t i = 0; i < sorted.size(); ++i) {
        total += Rat(static_cast<long>(i + 1)) * sorted[i];
    }
    return total;
}

Rat envy_sum(const Profile &p) {
    // sum over pairs with h_i < h_j of (h_j - h_i), i.e. sum of pairwise
    // absolute differences. Computed directly so the Gini identity test
    // exercises two genuinely different routes.
    Rat total(0);
    for (int i = 0; i < p.size(); ++i) {
        for (int j = i + 1; j < p.size(); ++j) {
            total += abs(p[i] - p[j]);
        }
    }
    return total;
}

Rat potential_square(const Profile &p) {
    Rat total(0);
    for (int i = 0; i < p.size(); ++i) {
        total += p[i] * p[i];
    }
    return total;
}

NswKey nsw_key(const Profile &p) {
    NswKey key;
    key.negated_product = Rat(1);
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] == 0) {
            ++key.zero_count;
        } else {
            key.negated_product *= p[i];
        }
    }
    key.negated_product = -key.negated_product;
    return key;
}

int compare_rat_vectors(const std::vector<Rat> &a, const std::vector<Rat> &b) {
    size_t k = std::min(a.size(), b.size());
    for (size_t i = 0; i < k; ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) {
            return c;
        }
    }
    if (a.size() != b.size()) {
        return a.size() < b.size() ? -1 : 1;
    }
    return 0;
}

//! Scales both sorted profiles to integers with one common denominator and
//! compares prod a_i^(a_i). Valid as the entropy order on equal-sum profiles.
int compare_entropy_keys(const EntropyKey &a, const EntropyKey &b) {
    Rat sum_a(0);
    Rat sum_b(0);
    for (const Rat &h : a.sorted) {
        sum_a += h;
    }
    for (const Rat &h : b.sorted) {
        sum_b += h;
    }
    if (int c = cmp(sum_a, sum_b); c != 0) {
        return c;
    }
    Int denom(1);
    for (const Rat &h : a.sorted) {
        mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), h.get_den_mpz_t());
    }
    for (const Rat &h : b.sorted) {
        mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), h.get_den_mpz_t());
    }
    auto surrogate = [&denom](const std::vector<Rat> &sorted) {
        Int product(1);
        for (const Rat &h : sorted) {
            Int scaled = Int(h.get_num()) * (denom / Int(h.get_den()));
            if (scaled == 0) {
                continue; // 0^0 := 1
            }
            if (!scaled.fits_ulong_p()) {
                throw ScaleError("entropy comparison exponent too large");
            }
            Int term;
            mpz_pow_ui(term.get_mpz_t(), scaled.get_mpz_t(), scaled.get_ui());
            product *= term;
        }
        return product;
    };
    return cmp(surrogate(a.sorted), surrogate(b.sorted));
}

} // namespace

std::string_view criterion_name(Criterion c) {
    switch (c) {
    case Criterion::kNswNeg:
        return "nsw";
    case Criterion::kGiniIndex:
        return "gini";
    case Criterion::kEnvySum:
        return "envysum";
    case Criterion::kCongestion:
        return "congestion";
    case Criterion::kEntropyNeg:
        return "entropy";
    case Criterion::kLexiMax:
        return "leximax";
    case Criterion::kLexiMin:
        return "leximin";
    case Criterion::kPotentialSquare:
        return "potential-sq";
    case Criterion::kPotentialPairs:
        return "potential-pairs";
    }
    return "?";
}

std::optional<Criterion> criterion_from_name(std::string_view name) {
    for (Criterion c : kAllCriteria) {
        if (criterion_name(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

Score score(Criterion c, const Profile &p) {
    require_nonnegative(p);
    switch (c) {
    case Criterion::kCongestion:
    case Criterion::kPotentialPairs:
        return Score(c, congestion_like(p));
    case Criterion::kGiniIndex:
        return Score(c, gini_index(p));
    case Criterion::kEnvySum:
        return Score(c, envy_sum(p));
    case Criterion::kPotentialSquare:
        return Score(c, potential_square(p));
    case Criterion::kNswNeg:
        return Score(c, nsw_key(p));
    case Criterion::kEntropyNeg:
        return Score(c, EntropyKey{p.sorted_ascending()});
    case Criterion::kLexiMin:
        return Score(c, LexKey{p.sorted_ascending(), /*prefer_larger=*/true});
    case Criterion::kLexiMax: {
        std::vector<Rat> key = p.sorted_ascending();
        std::reverse(key.begin(), key.end());
        return Score(c, LexKey{std::move(key), /*prefer_larger=*/false});
    }
    }
    throw Error("unknown criterion");
}

int compare_scores(const Score &a, const Score &b) {
    if (a.criterion() != b.criterion()) {
        throw ValidationError("scores of different criteria are not comparable");
    }
    if (a.value().index() != b.value().index()) {
        throw ValidationError("malformed score pair");
    }
    struct Visitor {
        const Score::Value &other;
        int operator()(const Rat &lhs) const { return cmp(lhs, std::get<Rat>(other)); }
        int operator()(const NswKey &lhs) const {
            const auto &rhs = std::get<NswKey>(other);
            if (lhs.zero_count != rhs.zero_count) {
                return lhs.zero_count < rhs.zero_count ? -1 : 1;
            }
            return cmp(lhs.negated_product, rhs.negated_product);
        }
        int operator()(const LexKey &lhs) const {
            const auto &rhs = std::get<LexKey>(other);
            int c = compare_rat_vectors(lhs.key, rhs.key);
            return lhs.prefer_larger ? -c : c;
        }
        int operator()(const EntropyKey &lhs) const {
            return compare_entropy_keys(lhs, std::get<EntropyKey>(other));
        }
    };
    return std::visit(Visitor{b.value()}, a.value());
}

std::string Score::to_string() const {
    struct Visitor {
        std::string operator()(const Rat &v) const { return v.get_str(); }
        std::string operator()(const NswKey &v) const {
            return "(" + std::to_string(v.zero_count) + ", " + v.negated_product.get_str() + ")";
        }
        std::string operator()(const LexKey &v) const { return join(v.key); }
        std::string operator()(const EntropyKey &v) const { return join(v.sorted); }
        static std::string join(const std::vector<Rat> &values) {
            std::string out = "[";
            for (size_t i = 0; i < values.size(); ++i) {
                if (i > 0) {
                    out += ", ";
                }
                out += values[i].get_str();
            }
            out += "]";
            return out;
        }
    };
    return std::visit(Visitor{}, value_);
}

Ordering compare(Criterion c, const Profile &p, const Profile &q) {
    if (p.size() != q.size()) {
        throw ValidationError("profiles of different length are not comparable");
    }
    int r = compare_scores(score(c, p), score(c, q));
    if (r < 0) {
        return Ordering::kFirstBetter;
    }
    if (r > 0) {
        return Ordering::kSecondBetter;
    }
    return Ordering::kEqual;
}

bool more_balanced(const Profile &p, const Profile &q) {
    if (p.size() != q.size()) {
        throw ValidationError("profiles of different length are not comparable");
    }
    int first = -1;
    int second = -1;
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] != q[i]) {
            if (first < 0) {
                first = i;
            } else if (second < 0) {
                second = i;
            } else {
                return false;
            }
        }
    }
    if (second < 0) {
        return false;
    }
    const Rat &lo = std::min(p[first], p[second]);
    const Rat &hi = std::max(p[first], p[second]);
    if (lo == hi) {
        return false;
    }
    return q[first] > lo && q[first] < hi && q[second] > lo && q[second] < hi;
}

Int entropy_surrogate(const Profile &p) {
    if (!p.all_integral()) {
        throw ValidationError("entropy surrogate requires an integral profile");
    }
    Int product(1);
    for (int i = 0; i < p.size(); ++i) {
        Int h(p[i].get_num());
        if (h == 0) {
            continue;
        }
        if (!h.fits_ulong_p()) {
            throw ScaleError("entropy surrogate exponent too large");
        }
        Int term;
        mpz_pow_ui(term.get_mpz_t(), h.get_mpz_t(), h.get_ui());
        product *= term;
    }
    return product;
}

} // namespace spd
