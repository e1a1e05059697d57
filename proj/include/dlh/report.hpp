#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dlh/rational.hpp"

namespace dlh {

// Dimensions of a graded homology, keyed by homological degree.
struct HomologyTable {
    std::map<int, long> per_degree;

    long total() const;
    long long euler() const;
    bool is_zero() const { return total() == 0; }
    void add(int degree, long dim);
    HomologyTable shifted(int s) const;

    bool operator==(const HomologyTable& o) const { return per_degree == o.per_degree; }
    std::string str() const;
};

HomologyTable table_sum(const std::vector<HomologyTable>& parts);

// True if a equals b shifted by some uniform homological degree offset.
bool equal_up_to_shift(const HomologyTable& a, const HomologyTable& b);

// Componentwise sum of the parts, each allowed an independent shift, equal
// to the whole. Returns the shifts if a consistent assignment exists.
bool matches_with_shifts(const HomologyTable& whole, const std::vector<HomologyTable>& parts,
                         std::vector<int>* shifts = nullptr);

// Deterministic random source for tests and sweeps. mt19937_64 output is
// fixed by the standard, and index draws use plain modulo so sequences are
// identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    // Uniform-ish integer in [lo, hi], inclusive.
    long pick(long lo, long hi);
    Rational rational(long num_bound, long den_bound);
    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace dlh
