#include "spdalloc/submodular.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "spdalloc/criteria.hpp"

namespace spd {

namespace {

constexpr int kMaskItems = 31;
constexpr int kDeskAgents = 5;
constexpr int kDeskItemsSolve = 12;
constexpr int kDeskItemsEnumerate = 10;

uint32_t to_mask(const std::vector<int> &items) {
    uint32_t mask = 0;
    for (int item : items) {
        if (item < 0 || item >= kMaskItems) {
            throw ValidationError("item index out of mask range");
        }
        mask |= uint32_t{1} << item;
    }
    return mask;
}

void check_desk(const SubInstance &si, int max_items) {
    if (si.num_agents() > kDeskAgents || si.num_items > max_items) {
        throw ScaleError("instance beyond the desk-scale guard");
    }
}

} // namespace

MatroidValuation MatroidValuation::uniform(int rank, std::vector<int> ground) {
    if (rank < 0) {
        throw ValidationError("uniform matroid rank must be non-negative");
    }
    MatroidValuation val;
    val.kind_ = Kind::kUniform;
    val.rank_ = rank;
    val.ground_mask_ = to_mask(ground);
    return val;
}

MatroidValuation MatroidValuation::partition(std::vector<Block> blocks) {
    MatroidValuation val;
    val.kind_ = Kind::kPartition;
    for (const Block &block : blocks) {
        if (block.capacity < 0) {
            throw ValidationError("partition block capacity must be non-negative");
        }
        uint32_t mask = to_mask(block.items);
        if ((mask & val.ground_mask_) != 0) {
            throw ValidationError("partition blocks must be disjoint");
        }
        val.ground_mask_ |= mask;
        val.block_masks_.push_back(mask);
    }
    val.blocks_ = std::move(blocks);
    return val;
}

MatroidValuation MatroidValuation::transversal(int num_slots,
                                               std::vector<std::pair<int, int>> edges) {
    if (num_slots < 0 || num_slots > 63) {
        throw ValidationError("transversal slot count out of range");
    }
    MatroidValuation val;
    val.kind_ = Kind::kTransversal;
    val.num_slots_ = num_slots;
    val.slot_items_.assign(static_cast<size_t>(num_slots), 0);
    for (auto [item, slot] : edges) {
        if (item < 0 || item >= kMaskItems) {
            throw ValidationError("item index out of mask range");
        }
        if (slot < 0 || slot >= num_slots) {
            throw ValidationError("slot index out of range");
        }
        val.slot_items_[slot] |= uint32_t{1} << item;
        val.ground_mask_ |= uint32_t{1} << item;
    }
    return val;
}

int MatroidValuation::value(uint32_t bundle_mask) const {
    uint32_t mask = bundle_mask & ground_mask_;
    switch (kind_) {
    case Kind::kUniform:
        return std::min(std::popcount(mask), rank_);
    case Kind::kPartition: {
        int total = 0;
        for (size_t b = 0; b < blocks_.size(); ++b) {
            total += std::min(std::popcount(mask & block_masks_[b]),
                              blocks_[b].capacity);
        }
        return total;
    }
    case Kind::kTransversal: {
        // Kuhn's augmenting paths: match bundle items into slots.
        std::vector<int> slot_match(num_slots_, -1);
        int matched = 0;
        std::vector<uint8_t> visited(num_slots_);
        auto augment = [&](auto &&self, int item) -> bool {
            for (int s = 0; s < num_slots_; ++s) {
                if (visited[s] || (slot_items_[s] & (uint32_t{1} << item)) == 0) {
                    continue;
                }
                visited[s] = 1;
                if (slot_match[s] < 0 || self(self, slot_match[s])) {
                    slot_match[s] = item;
                    return true;
                }
            }
            return false;
        };
        uint32_t rest = mask;
        while (rest != 0) {
            int item = std::countr_zero(rest);
            rest &= rest - 1;
            std::fill(visited.begin(), visited.end(), 0);
            if (augment(augment, item)) {
                ++matched;
            }
        }
        return matched;
    }
    }
    return 0;
}

int MatroidValuation::value(const std::vector<int> &bundle) const {
    return value(to_mask(bundle));
}

int MatroidValuation::marginal(uint32_t bundle_mask, int item) const {
    uint32_t bit = uint32_t{1} << item;
    if ((bundle_mask & bit) != 0) {
        return 0;
    }
    return value(bundle_mask | bit) - value(bundle_mask);
}

int value(const MatroidValuation &val, const std::vector<int> &bundle) {
    return val.value(bundle);
}

std::string MatroidValuation::to_text() const {
    std::ostringstream out;
    switch (kind_) {
    case Kind::kUniform: {
        out << "uniform " << rank_;
        for (int j = 0; j < kMaskItems; ++j) {
            if (ground_mask_ & (uint32_t{1} << j)) {
                out << ' ' << (j + 1);
            }
        }
        break;
    }
    case Kind::kPartition: {
        out << "partition (";
        for (size_t b = 0; b < blocks_.size(); ++b) {
            if (b > 0) {
                out << ';';
            }
            out << blocks_[b].capacity << ':';
            for (size_t k = 0; k < blocks_[b].items.size(); ++k) {
                if (k > 0) {
                    out << ',';
                }
                out << (blocks_[b].items[k] + 1);
            }
        }
        out << ')';
        break;
    }
    case Kind::kTransversal: {
        out << "transversal";
        for (int s = 0; s < num_slots_; ++s) {
            for (int j = 0; j < kMaskItems; ++j) {
                if (slot_items_[s] & (uint32_t{1} << j)) {
                    out << ' ' << (j + 1) << ':' << (s + 1);
                }
            }
        }
        break;
    }
    }
    return out.str();
}

SubInstance SubInstance::parse_text(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("missing SUB header");
    }
    std::istringstream header(line);
    std::string magic;
    int n = 0;
    int m = 0;
    if (!(header >> magic >> n >> m) || magic != "SUB") {
        throw ParseError("header must be 'SUB n m'");
    }
    if (n < 1 || m < 1 || m > kMaskItems) {
        throw ParseError("SUB dimensions out of range");
    }
    auto parse_item = [m](const std::string &tok) {
        int item = 0;
        try {
            item = std::stoi(tok);
        } catch (const std::exception &) {
            throw ParseError("malformed item index '" + tok + "'");
        }
        if (item < 1 || item > m) {
            throw ParseError("item index out of range: " + tok);
        }
        return item - 1;
    };

    SubInstance si;
    si.num_items = m;
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw ParseError("missing valuation line for agent " + std::to_string(i + 1));
        }
        std::istringstream row(line);
        std::string kind;
        row >> kind;
        if (kind == "uniform") {
            int rank = 0;
            if (!(row >> rank)) {
                throw ParseError("uniform valuation needs a rank");
            }
            std::vector<int> ground;
            std::string tok;
            while (row >> tok) {
                ground.push_back(parse_item(tok));
            }
            si.agents.push_back(MatroidValuation::uniform(rank, std::move(ground)));
        } else if (kind == "partition") {
            std::string body;
            row >> body;
            if (body.size() < 2 || body.front() != '(' || body.back() != ')') {
                throw ParseError("partition body must be parenthesized");
            }
            std::vector<MatroidValuation::Block> blocks;
            std::istringstream body_in(body.substr(1, body.size() - 2));
            std::string block_text;
            while (std::getline(body_in, block_text, ';')) {
                auto colon = block_text.find(':');
                if (colon == std::string::npos) {
                    throw ParseError("partition block needs 'cap:items'");
                }
                MatroidValuation::Block block;
                try {
                    block.capacity = std::stoi(block_text.substr(0, colon));
                } catch (const std::exception &) {
                    throw ParseError("malformed block capacity");
                }
                std::istringstream items_in(block_text.substr(colon + 1));
                std::string item_tok;
                while (std::getline(items_in, item_tok, ',')) {
                    block.items.push_back(parse_item(item_tok));
                }
                blocks.push_back(std::move(block));
            }
            si.agents.push_back(MatroidValuation::partition(std::move(blocks)));
        } else if (kind == "transversal") {
            std::vector<std::pair<int, int>> edges;
            int max_slot = 0;
            std::string tok;
            while (row >> tok) {
                auto colon = tok.find(':');
                if (colon == std::string::npos) {
                    throw ParseError("transversal edge needs 'item:slot'");
                }
                int item = parse_item(tok.substr(0, colon));
                int slot = 0;
                try {
                    slot = std::stoi(tok.substr(colon + 1));
                } catch (const std::exception &) {
                    throw ParseError("malformed slot index");
                }
                if (slot < 1) {
                    throw ParseError("slot indices start at 1");
                }
                max_slot = std::max(max_slot, slot);
                edges.emplace_back(item, slot - 1);
            }
            si.agents.push_back(MatroidValuation::transversal(max_slot, std::move(edges)));
        } else {
            throw ParseError("unknown valuation kind '" + kind + "'");
        }
    }
    return si;
}

std::string SubInstance::to_text() const {
    std::string out = "SUB " + std::to_string(num_agents()) + " " +
                      std::to_string(num_items) + "\n";
    for (const MatroidValuation &val : agents) {
        out += val.to_text();
        out += '\n';
    }
    return out;
}

bool is_clean(const SubInstance &si, const Allocation &alloc) {
    for (int i = 0; i < si.num_agents(); ++i) {
        uint32_t mask = to_mask(alloc.bundle(i));
        if (si.agents[i].value(mask) != std::popcount(mask)) {
            return false;
        }
    }
    return true;
}

namespace {

struct SubEnumerator {
    const SubInstance &si;
    std::vector<uint32_t> bundles;
    std::vector<int8_t> owner;
    int best_total = 0;
    std::vector<std::vector<int8_t>> best_owners;

    explicit SubEnumerator(const SubInstance &s)
        : si(s), bundles(s.num_agents(), 0), owner(s.num_items, -1) {}

    void recurse(int item, int total) {
        if (item == si.num_items) {
            if (total > best_total) {
                best_total = total;
                best_owners.clear();
            }
            if (total == best_total) {
                best_owners.push_back(owner);
            }
            return;
        }
        uint32_t bit = uint32_t{1} << item;
        for (int i = 0; i < si.num_agents(); ++i) {
            if (si.agents[i].marginal(bundles[i], item) == 1) {
                bundles[i] |= bit;
                owner[item] = static_cast<int8_t>(i);
                recurse(item + 1, total + 1);
                bundles[i] &= ~bit;
                owner[item] = -1;
            }
        }
        recurse(item + 1, total); // leave the item unallocated
    }
};

Allocation owner_to_allocation(const SubInstance &si, const std::vector<int8_t> &owner) {
    Allocation alloc(si.num_agents(), si.num_items);
    for (int j = 0; j < si.num_items; ++j) {
        if (owner[j] >= 0) {
            alloc.assign(j, owner[j]);
        }
    }
    return alloc;
}

//! Matroid-union augmentation: place `item` into some bundle, possibly by
//! chains of swaps that keep every bundle clean. Items are never revisited.
bool try_place(const SubInstance &si, std::vector<uint32_t> &bundles,
               std::vector<int8_t> &owner, int item, uint32_t used) {
    used |= uint32_t{1} << item;
    for (int a = 0; a < si.num_agents(); ++a) {
        if (si.agents[a].marginal(bundles[a], item) == 1) {
            bundles[a] |= uint32_t{1} << item;
            owner[item] = static_cast<int8_t>(a);
            return true;
        }
    }
    for (int a = 0; a < si.num_agents(); ++a) {
        uint32_t candidates = bundles[a] & ~used;
        while (candidates != 0) {
            int w = std::countr_zero(candidates);
            candidates &= candidates - 1;
            uint32_t swapped = (bundles[a] & ~(uint32_t{1} << w)) | (uint32_t{1} << item);
            if (si.agents[a].value(swapped) != std::popcount(swapped)) {
                continue;
            }
            bundles[a] = swapped;
            owner[item] = static_cast<int8_t>(a);
            if (try_place(si, bundles, owner, w, used)) {
                return true;
            }
            bundles[a] = (swapped & ~(uint32_t{1} << item)) | (uint32_t{1} << w);
            owner[item] = -1;
        }
    }
    return false;
}

struct ExchangeSearch {
    const SubInstance &si;
    std::vector<uint32_t> bundles;
    std::vector<int8_t> owner;
    std::vector<long> tentative_income;
    long start_income = 0;
    ExchangeSequence chain;

    bool extend(int open_agent, uint32_t used) {
        for (int o = 0; o < si.num_items; ++o) {
            uint32_t bit = uint32_t{1} << o;
            if ((used & bit) != 0 || owner[o] < 0 ||
                si.agents[open_agent].marginal(bundles[open_agent], o) != 1) {
                continue;
            }
            int holder = owner[o];
            // Move o to the open agent.
            bundles[holder] &= ~bit;
            bundles[open_agent] |= bit;
            owner[o] = static_cast<int8_t>(open_agent);
            --tentative_income[holder];
            ++tentative_income[open_agent];
            chain.agents.push_back(holder);
            chain.items.push_back(o);
            if (tentative_income[holder] + 1 >= start_income + 2) {
                return true; // holder was rich enough: strict improvement
            }
            if (extend(holder, used | bit)) {
                return true;
            }
            chain.agents.pop_back();
            chain.items.pop_back();
            bundles[holder] |= bit;
            bundles[open_agent] &= ~bit;
            owner[o] = static_cast<int8_t>(holder);
            ++tentative_income[holder];
            --tentative_income[open_agent];
        }
        return false;
    }
};

std::optional<ExchangeSequence> find_exchange_unchecked(const SubInstance &si,
                                                        const Allocation &alloc) {
    std::vector<int> order(si.num_agents());
    for (int i = 0; i < si.num_agents(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::make_pair(alloc.income(a), a) < std::make_pair(alloc.income(b), b);
    });
    for (int start : order) {
        ExchangeSearch search{si, {}, {}, {}, alloc.income(start), {}};
        search.bundles.assign(si.num_agents(), 0);
        for (int i = 0; i < si.num_agents(); ++i) {
            search.bundles[i] = to_mask(alloc.bundle(i));
            search.tentative_income.push_back(alloc.income(i));
        }
        search.owner.assign(si.num_items, -1);
        for (int j = 0; j < si.num_items; ++j) {
            search.owner[j] = static_cast<int8_t>(alloc.owner_of(j));
        }
        search.chain.agents.push_back(start);
        if (search.extend(start, 0)) {
            return search.chain;
        }
    }
    return std::nullopt;
}

} // namespace

int sub_max_usw(const SubInstance &si) {
    check_desk(si, kDeskItemsSolve);
    // Greedy plus matroid-union augmentation; exact, and cross-checked
    // against exhaustive enumeration in the test suite.
    std::vector<uint32_t> bundles(si.num_agents(), 0);
    std::vector<int8_t> owner(si.num_items, -1);
    for (int j = 0; j < si.num_items; ++j) {
        for (int i = 0; i < si.num_agents(); ++i) {
            if (si.agents[i].marginal(bundles[i], j) == 1) {
                bundles[i] |= uint32_t{1} << j;
                owner[j] = static_cast<int8_t>(i);
                break;
            }
        }
    }
    bool placed = true;
    while (placed) {
        placed = false;
        for (int j = 0; j < si.num_items; ++j) {
            if (owner[j] < 0 && try_place(si, bundles, owner, j, 0)) {
                placed = true;
            }
        }
    }
    int total = 0;
    for (uint32_t mask : bundles) {
        total += std::popcount(mask);
    }
    return total;
}

std::vector<Allocation> enumerate_sub_max_usw_clean(const SubInstance &si) {
    check_desk(si, kDeskItemsEnumerate);
    SubEnumerator enumerator(si);
    enumerator.recurse(0, 0);
    std::vector<Allocation> out;
    out.reserve(enumerator.best_owners.size());
    for (const auto &owner : enumerator.best_owners) {
        out.push_back(owner_to_allocation(si, owner));
    }
    return out;
}

std::string ExchangeSequence::to_string() const {
    std::string out = "(" + std::to_string(agents[0] + 1);
    for (size_t k = 0; k < items.size(); ++k) {
        out += ", item " + std::to_string(items[k] + 1);
        out += ", " + std::to_string(agents[k + 1] + 1);
    }
    out += ")";
    return out;
}

std::optional<ExchangeSequence> find_exchange_improvement(const SubInstance &si,
                                                          const Allocation &alloc) {
    if (!is_clean(si, alloc)) {
        throw ValidationError("exchange search requires a clean allocation");
    }
    long total = 0;
    for (int i = 0; i < si.num_agents(); ++i) {
        total += alloc.income(i);
    }
    if (total != sub_max_usw(si)) {
        throw ValidationError("exchange search requires a max-USW allocation");
    }
    return find_exchange_unchecked(si, alloc);
}

Allocation apply_exchange(const SubInstance &si, const Allocation &alloc,
                          const ExchangeSequence &seq) {
    if (seq.agents.size() != seq.items.size() + 1 || seq.items.empty()) {
        throw ValidationError("malformed exchange sequence");
    }
    Allocation result = alloc;
    std::vector<uint32_t> bundles(si.num_agents());
    for (int i = 0; i < si.num_agents(); ++i) {
        bundles[i] = to_mask(alloc.bundle(i));
    }
    uint32_t used = 0;
    for (size_t k = 0; k < seq.items.size(); ++k) {
        int item = seq.items[k];
        int from = seq.agents[k + 1];
        int to = seq.agents[k];
        uint32_t bit = uint32_t{1} << item;
        if ((used & bit) != 0 || result.owner_of(item) != from) {
            throw ValidationError("stale exchange sequence");
        }
        if (si.agents[to].marginal(bundles[to], item) != 1) {
            throw ValidationError("exchange move would break cleanliness");
        }
        used |= bit;
        bundles[from] &= ~bit;
        bundles[to] |= bit;
        result.move(item, from, to);
    }
    return result;
}

Allocation solve_leximin_sub_desk(const SubInstance &si) {
    check_desk(si, kDeskItemsSolve);
    std::vector<uint32_t> bundles(si.num_agents(), 0);
    std::vector<int8_t> owner(si.num_items, -1);
    std::vector<long> incomes(si.num_agents(), 0);

    // Greedy start: each item in turn to the poorest agent that gains from it.
    for (int j = 0; j < si.num_items; ++j) {
        int best = -1;
        for (int i = 0; i < si.num_agents(); ++i) {
            if (si.agents[i].marginal(bundles[i], j) == 1 &&
                (best < 0 || incomes[i] < incomes[best])) {
                best = i;
            }
        }
        if (best >= 0) {
            bundles[best] |= uint32_t{1} << j;
            owner[j] = static_cast<int8_t>(best);
            ++incomes[best];
        }
    }
    // Greedy alone can strand items; augmentation chains finish the job.
    bool placed = true;
    while (placed) {
        placed = false;
        for (int j = 0; j < si.num_items; ++j) {
            if (owner[j] < 0 && try_place(si, bundles, owner, j, 0)) {
                placed = true;
            }
        }
    }

    Allocation alloc = owner_to_allocation(si, owner);
    for (;;) {
        auto seq = find_exchange_unchecked(si, alloc);
        if (!seq) {
            return alloc;
        }
        alloc = apply_exchange(si, alloc, *seq);
    }
}

int chebyshev_sub(const SubInstance &si) {
    check_desk(si, kDeskItemsEnumerate);
    std::vector<Allocation> all = enumerate_sub_max_usw_clean(si);
    // Group by sorted profile; every shipped criterion is symmetric.
    std::vector<Profile> profiles;
    profiles.reserve(all.size());
    for (const Allocation &alloc : all) {
        std::vector<Rat> incomes;
        for (int i = 0; i < si.num_agents(); ++i) {
            incomes.emplace_back(alloc.income(i));
        }
        profiles.push_back(Profile(std::move(incomes)));
    }
    std::vector<int> optimal_by_first;
    for (Criterion c : kAllCriteria) {
        std::vector<int> optimal;
        for (size_t k = 0; k < profiles.size(); ++k) {
            if (optimal.empty()) {
                optimal.push_back(static_cast<int>(k));
                continue;
            }
            Ordering ord = compare(c, profiles[k], profiles[optimal.front()]);
            if (ord == Ordering::kFirstBetter) {
                optimal.clear();
            }
            if (ord != Ordering::kSecondBetter) {
                optimal.push_back(static_cast<int>(k));
            }
        }
        if (c == kAllCriteria.front()) {
            optimal_by_first = optimal;
        } else if (optimal != optimal_by_first) {
            throw Error("criteria disagree on the optimal set");
        }
    }
    int best = 0;
    for (int i = 0; i < si.num_agents(); ++i) {
        long lo = all[optimal_by_first.front()].income(i);
        long hi = lo;
        for (int idx : optimal_by_first) {
            lo = std::min(lo, all[idx].income(i));
            hi = std::max(hi, all[idx].income(i));
        }
        best = std::max(best, static_cast<int>(hi - lo));
    }
    return best;
}

} // namespace spd
