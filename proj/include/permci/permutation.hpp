#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace permci {

// A bijection on {0..n-1}. mapping[i] is the source index of position i:
// applying p to a vector v yields v[p(0)], ..., v[p(n-1)].
struct Permutation {
    std::vector<std::uint32_t> mapping;

    Permutation() = default;
    explicit Permutation(std::vector<std::uint32_t> m) : mapping(std::move(m)) {}

    std::size_t size() const { return mapping.size(); }
    std::uint32_t operator()(std::size_t i) const { return mapping[i]; }

    bool is_identity() const;
    bool is_bijection() const;
    Permutation inverse() const;

    static Permutation identity(std::size_t n);

    bool operator==(const Permutation&) const = default;
};

// An immutable batch of permutations sharing one population size. Regenerating
// with the same (n, M, seed) reproduces the identical sequence; a finished plan
// can be shared freely across threads.
struct PermutationPlan {
    std::vector<Permutation> permutations;
    std::uint32_t n = 0;
    std::uint64_t seed = 0;
    bool exhaustive = false;

    std::size_t size() const { return permutations.size(); }
};

inline constexpr std::uint32_t kDefaultEnumerationCap = 10; // n! cap at 10!

// M i.i.d. uniform draws from S_n (sampled with replacement; the identity is
// not excluded). Fisher-Yates driven by SplitMix64, consuming randomness in a
// fixed order: draw j for position 0, then 1, ... so the plan depends only on
// (n, M, seed).
PermutationPlan sample_permutations(std::uint32_t n, std::size_t m, std::uint64_t seed);

// All n! permutations in lexicographic order. n = 1 is allowed here (a single
// identity); n! above the cap raises resource_limit_error.
PermutationPlan enumerate_all(std::uint32_t n, std::uint32_t cap = kDefaultEnumerationCap);

// result[i] = v[p(i)].
std::vector<double> apply(const Permutation& p, std::span<const double> v);

// Diagnostics: number of draws beyond the first occurrence of each distinct
// permutation (0 for exhaustive plans).
std::size_t duplicate_count(const PermutationPlan& plan);

// Text round-trip: header "n M seed exhaustive", then one row of indices per
// permutation. Bit-exact replay of an analysis only needs this file.
void save_plan(const PermutationPlan& plan, const std::string& path);
PermutationPlan load_plan(const std::string& path);

} // namespace permci
