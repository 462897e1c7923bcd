#include "spdalloc/model.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>

namespace spd {

Rat parse_rat(const std::string &text) {
    if (text.empty()) {
        throw ParseError("empty rational");
    }
    auto parse_int = [](const std::string &s) -> Int {
        if (s.empty() || (s.size() == 1 && (s[0] == '-' || s[0] == '+'))) {
            throw ParseError("malformed integer '" + s + "'");
        }
        size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        for (size_t i = start; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                throw ParseError("malformed integer '" + s + "'");
            }
        }
        return Int(s);
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Rat(parse_int(text));
    }
    Int num = parse_int(text.substr(0, slash));
    Int den = parse_int(text.substr(slash + 1));
    if (den <= 0) {
        throw ParseError("denominator must be positive in '" + text + "'");
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Instance::Instance(int num_agents, int num_items, std::vector<uint8_t> likes_row_major)
    : n_(num_agents), m_(num_items), likes_(std::move(likes_row_major)) {
    if (n_ < 1 || m_ < 1) {
        throw ValidationError("instance needs at least one agent and one item");
    }
    if (likes_.size() != static_cast<size_t>(n_) * m_) {
        throw ValidationError("like matrix has wrong dimensions");
    }
    for (uint8_t v : likes_) {
        if (v > 1) {
            throw ValidationError("non-binary entry in like matrix");
        }
    }
}

Instance validate_instance(int num_agents, int num_items,
                           const std::vector<std::vector<int>> &rows) {
    if (static_cast<int>(rows.size()) != num_agents) {
        throw ValidationError("row count does not match agent count");
    }
    std::vector<uint8_t> flat;
    flat.reserve(static_cast<size_t>(num_agents) * std::max(num_items, 0));
    for (const auto &row : rows) {
        if (static_cast<int>(row.size()) != num_items) {
            throw ValidationError("row length does not match item count");
        }
        for (int v : row) {
            if (v != 0 && v != 1) {
                throw ValidationError("non-binary entry in like matrix");
            }
            flat.push_back(static_cast<uint8_t>(v));
        }
    }
    return Instance(num_agents, num_items, std::move(flat));
}

Instance Instance::parse(std::istream &in) {
    std::string header;
    if (!std::getline(in, header)) {
        throw ParseError("missing header line");
    }
    if (!header.empty() && header.back() == '\r') {
        header.pop_back();
    }
    auto space = header.find(' ');
    if (space == std::string::npos || header.find(' ', space + 1) != std::string::npos) {
        throw ParseError("header must be 'n m'");
    }
    int n = 0;
    int m = 0;
    auto parse_dim = [](const std::string &s, int &out) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw ParseError("malformed dimension '" + s + "'");
        }
    };
    parse_dim(header.substr(0, space), n);
    parse_dim(header.substr(space + 1), m);
    if (n < 1 || m < 1) {
        throw ParseError("dimensions must be positive");
    }

    std::vector<uint8_t> flat;
    flat.reserve(static_cast<size_t>(n) * m);
    std::string row;
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, row)) {
            throw ParseError("missing like-row for agent " + std::to_string(i + 1));
        }
        if (!row.empty() && row.back() == '\r') {
            row.pop_back();
        }
        if (static_cast<int>(row.size()) != m) {
            throw ParseError("like-row for agent " + std::to_string(i + 1) +
                             " must have exactly " + std::to_string(m) + " characters");
        }
        for (char c : row) {
            if (c != '0' && c != '1') {
                throw ParseError("non-binary entry in like-row for agent " +
                                 std::to_string(i + 1));
            }
            flat.push_back(static_cast<uint8_t>(c - '0'));
        }
    }
    return Instance(n, m, std::move(flat));
}

Instance Instance::parse_text(const std::string &text) {
    std::istringstream in(text);
    return parse(in);
}

std::vector<int> Instance::likers_of(int item) const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i) {
        if (likes(i, item)) {
            out.push_back(i);
        }
    }
    return out;
}

int Instance::max_usw() const {
    int count = 0;
    for (int j = 0; j < m_; ++j) {
        for (int i = 0; i < n_; ++i) {
            if (likes(i, j)) {
                ++count;
                break;
            }
        }
    }
    return count;
}

std::string Instance::to_text() const {
    std::string out = std::to_string(n_) + " " + std::to_string(m_) + "\n";
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < m_; ++j) {
            out += likes(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

Allocation::Allocation(int num_agents, int num_items)
    : n_(num_agents), m_(num_items), owner_(num_items, -1), counts_(num_agents, 0) {
    if (n_ < 1 || m_ < 0) {
        throw ValidationError("allocation needs at least one agent");
    }
}

Allocation Allocation::from_bundles(int num_agents, int num_items,
                                    const std::vector<std::vector<int>> &bundles) {
    if (static_cast<int>(bundles.size()) != num_agents) {
        throw ValidationError("bundle count does not match agent count");
    }
    Allocation alloc(num_agents, num_items);
    for (int i = 0; i < num_agents; ++i) {
        for (int item : bundles[i]) {
            alloc.assign(item, i);
        }
    }
    return alloc;
}

void Allocation::assign(int item, int agent) {
    if (item < 0 || item >= m_ || agent < 0 || agent >= n_) {
        throw ValidationError("allocation references out-of-range item or agent");
    }
    if (owner_[item] >= 0) {
        throw ValidationError("item " + std::to_string(item + 1) + " already allocated");
    }
    owner_[item] = agent;
    ++counts_[agent];
}

void Allocation::unassign(int item) {
    if (item < 0 || item >= m_ || owner_[item] < 0) {
        throw ValidationError("cannot unassign an unallocated item");
    }
    --counts_[owner_[item]];
    owner_[item] = -1;
}

void Allocation::move(int item, int from_agent, int to_agent) {
    if (item < 0 || item >= m_ || owner_[item] != from_agent) {
        throw ValidationError("item is not held by the expected agent");
    }
    if (to_agent < 0 || to_agent >= n_) {
        throw ValidationError("allocation references out-of-range agent");
    }
    owner_[item] = to_agent;
    --counts_[from_agent];
    ++counts_[to_agent];
}

std::vector<int> Allocation::bundle(int agent) const {
    std::vector<int> out;
    for (int j = 0; j < m_; ++j) {
        if (owner_[j] == agent) {
            out.push_back(j);
        }
    }
    return out;
}

std::vector<std::vector<int>> Allocation::bundles() const {
    std::vector<std::vector<int>> out(n_);
    for (int j = 0; j < m_; ++j) {
        if (owner_[j] >= 0) {
            out[owner_[j]].push_back(j);
        }
    }
    return out;
}

FractionalAllocation::FractionalAllocation(int num_agents, int num_items)
    : n_(num_agents), m_(num_items), shares_(num_items), incomes_(num_agents, Rat(0)) {
    if (n_ < 1 || m_ < 0) {
        throw ValidationError("allocation needs at least one agent");
    }
}

void FractionalAllocation::add_share(int item, int agent, const Rat &amount) {
    if (item < 0 || item >= m_ || agent < 0 || agent >= n_) {
        throw ValidationError("share references out-of-range item or agent");
    }
    if (amount <= 0) {
        throw ValidationError("share amounts must be positive");
    }
    auto &row = shares_[item];
    auto it = std::lower_bound(row.begin(), row.end(), agent,
                               [](const auto &p, int a) { return p.first < a; });
    if (it != row.end() && it->first == agent) {
        it->second += amount;
    } else {
        row.insert(it, {agent, amount});
    }
    incomes_[agent] += amount;
}

void FractionalAllocation::remove_share(int item, int agent, const Rat &amount) {
    if (item < 0 || item >= m_ || agent < 0 || agent >= n_) {
        throw ValidationError("share references out-of-range item or agent");
    }
    auto &row = shares_[item];
    auto it = std::lower_bound(row.begin(), row.end(), agent,
                               [](const auto &p, int a) { return p.first < a; });
    if (it == row.end() || it->first != agent || it->second < amount) {
        throw ValidationError("share does not cover the removed amount");
    }
    it->second -= amount;
    if (it->second == 0) {
        row.erase(it);
    }
    incomes_[agent] -= amount;
}

Rat FractionalAllocation::share(int item, int agent) const {
    const auto &row = shares_[item];
    auto it = std::lower_bound(row.begin(), row.end(), agent,
                               [](const auto &p, int a) { return p.first < a; });
    if (it != row.end() && it->first == agent) {
        return it->second;
    }
    return Rat(0);
}

Rat FractionalAllocation::item_total(int item) const {
    Rat total(0);
    for (const auto &[agent, amount] : shares_[item]) {
        (void)agent;
        total += amount;
    }
    return total;
}

Profile::Profile(std::vector<Rat> incomes) : incomes_(std::move(incomes)) {
    for (const Rat &h : incomes_) {
        if (h < 0) {
            throw ValidationError("negative income in profile");
        }
    }
}

Profile Profile::from_ints(const std::vector<long> &incomes) {
    std::vector<Rat> rats;
    rats.reserve(incomes.size());
    for (long h : incomes) {
        rats.emplace_back(h);
    }
    return Profile(std::move(rats));
}

bool Profile::all_integral() const {
    return std::all_of(incomes_.begin(), incomes_.end(),
                       [](const Rat &r) { return is_integral(r); });
}

Rat Profile::sum() const {
    Rat total(0);
    for (const Rat &h : incomes_) {
        total += h;
    }
    return total;
}

std::vector<Rat> Profile::sorted_ascending() const {
    std::vector<Rat> out = incomes_;
    std::sort(out.begin(), out.end());
    return out;
}

std::string Profile::to_string() const {
    std::string out;
    for (size_t i = 0; i < incomes_.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += incomes_[i].get_str();
    }
    return out;
}

Profile profile(const Instance &inst, const Allocation &alloc) {
    if (alloc.num_agents() != inst.num_agents() || alloc.num_items() != inst.num_items()) {
        throw ValidationError("allocation references out-of-range item or agent");
    }
    std::vector<Rat> incomes;
    incomes.reserve(inst.num_agents());
    for (int i = 0; i < inst.num_agents(); ++i) {
        incomes.emplace_back(alloc.income(i));
    }
    return Profile(std::move(incomes));
}

Profile profile(const Instance &inst, const FractionalAllocation &alloc) {
    if (alloc.num_agents() != inst.num_agents() || alloc.num_items() != inst.num_items()) {
        throw ValidationError("allocation references out-of-range item or agent");
    }
    std::vector<Rat> incomes;
    incomes.reserve(inst.num_agents());
    for (int i = 0; i < inst.num_agents(); ++i) {
        incomes.push_back(alloc.income(i));
    }
    return Profile(std::move(incomes));
}

int max_usw(const Instance &inst) {
    return inst.max_usw();
}

bool is_clean(const Instance &inst, const Allocation &alloc) {
    for (int j = 0; j < inst.num_items(); ++j) {
        int owner = alloc.owner_of(j);
        if (owner >= 0 && !inst.likes(owner, j)) {
            return false;
        }
    }
    return true;
}

bool is_clean(const Instance &inst, const FractionalAllocation &alloc) {
    for (int j = 0; j < inst.num_items(); ++j) {
        for (const auto &[agent, amount] : alloc.item_shares(j)) {
            (void)amount;
            if (!inst.likes(agent, j)) {
                return false;
            }
        }
    }
    return true;
}

bool is_max_usw(const Instance &inst, const Allocation &alloc) {
    for (int j = 0; j < inst.num_items(); ++j) {
        if (!alloc.allocated(j) && !inst.likers_of(j).empty()) {
            return false;
        }
    }
    return true;
}

bool is_max_usw(const Instance &inst, const FractionalAllocation &alloc) {
    for (int j = 0; j < inst.num_items(); ++j) {
        if (!inst.likers_of(j).empty() && alloc.item_total(j) != 1) {
            return false;
        }
    }
    return true;
}

} // namespace spd
