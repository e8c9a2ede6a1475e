#include "permci/permutation.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "permci/errors.hpp"
#include "permci/rng.hpp"

namespace permci {

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < mapping.size(); ++i)
        if (mapping[i] != i) return false;
    return true;
}

bool Permutation::is_bijection() const {
    std::vector<bool> seen(mapping.size(), false);
    for (std::uint32_t v : mapping) {
        if (v >= mapping.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Permutation Permutation::inverse() const {
    Permutation inv;
    inv.mapping.resize(mapping.size());
    for (std::size_t i = 0; i < mapping.size(); ++i) inv.mapping[mapping[i]] = static_cast<std::uint32_t>(i);
    return inv;
}

Permutation Permutation::identity(std::size_t n) {
    Permutation p;
    p.mapping.resize(n);
    std::iota(p.mapping.begin(), p.mapping.end(), 0u);
    return p;
}

PermutationPlan sample_permutations(std::uint32_t n, std::size_t m, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample_permutations: n must be at least 2");
    if (m < 1) throw std::invalid_argument("sample_permutations: M must be at least 1");

    PermutationPlan plan;
    plan.n = n;
    plan.seed = seed;
    plan.exhaustive = false;
    plan.permutations.reserve(m);

    SplitMix64 rng(seed);
    for (std::size_t k = 0; k < m; ++k) {
        Permutation p = Permutation::identity(n);
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
            const std::uint32_t j = i + static_cast<std::uint32_t>(rng.below(n - i));
            std::swap(p.mapping[i], p.mapping[j]);
        }
        assert(p.is_bijection());
        plan.permutations.push_back(std::move(p));
    }
    return plan;
}

PermutationPlan enumerate_all(std::uint32_t n, std::uint32_t cap) {
    if (n < 1) throw std::invalid_argument("enumerate_all: n must be at least 1");
    if (n > cap || n > 12) { // 13! already exceeds any sensible materialized plan
        std::ostringstream msg;
        msg << "enumerate_all: n = " << n << " exceeds the enumeration cap of "
            << std::min<std::uint32_t>(cap, 12) << "! permutations";
        throw resource_limit_error(msg.str());
    }

    std::size_t total = 1;
    for (std::uint32_t i = 2; i <= n; ++i) total *= i;

    PermutationPlan plan;
    plan.n = n;
    plan.seed = 0;
    plan.exhaustive = true;
    plan.permutations.reserve(total);

    Permutation p = Permutation::identity(n);
    do {
        plan.permutations.push_back(p);
    } while (std::next_permutation(p.mapping.begin(), p.mapping.end()));
    assert(plan.permutations.size() == total);
    return plan;
}

std::vector<double> apply(const Permutation& p, std::span<const double> v) {
    if (p.size() != v.size())
        throw std::invalid_argument("apply: permutation and vector lengths differ");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[p.mapping[i]];
    return out;
}

std::size_t duplicate_count(const PermutationPlan& plan) {
    std::set<std::vector<std::uint32_t>> seen;
    std::size_t dupes = 0;
    for (const auto& p : plan.permutations)
        if (!seen.insert(p.mapping).second) ++dupes;
    return dupes;
}

void save_plan(const PermutationPlan& plan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_plan: cannot open " + path);
    out << plan.n << ' ' << plan.permutations.size() << ' ' << plan.seed << ' '
        << (plan.exhaustive ? 1 : 0) << '\n';
    for (const auto& p : plan.permutations) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) out << ' ';
            out << p.mapping[i];
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_plan: write failed for " + path);
}

PermutationPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_plan: cannot open " + path);

    PermutationPlan plan;
    std::size_t m = 0;
    int exhaustive = 0;
    if (!(in >> plan.n >> m >> plan.seed >> exhaustive))
        throw parse_error("load_plan: malformed header in " + path, 1);
    plan.exhaustive = exhaustive != 0;
    plan.permutations.reserve(m);

    for (std::size_t k = 0; k < m; ++k) {
        Permutation p;
        p.mapping.resize(plan.n);
        for (std::uint32_t i = 0; i < plan.n; ++i) {
            if (!(in >> p.mapping[i]))
                throw parse_error("load_plan: truncated permutation row in " + path, k + 2);
        }
        if (!p.is_bijection())
            throw parse_error("load_plan: row is not a bijection in " + path, k + 2);
        plan.permutations.push_back(std::move(p));
    }
    return plan;
}

} // namespace permci
