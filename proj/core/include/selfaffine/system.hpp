#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "selfaffine/intlinalg.hpp"
#include "selfaffine/matrix.hpp"

namespace selfaffine::system {

using intlinalg::ExpandingMatrix;

// An element of the union of A^-m Z^d, stored as (scale m, integer vector v)
// meaning A^-m v. Canonical form: m = 0, or A^-1 v is not integral.
struct ScaledVector {
    int scale = 0;
    VecZ vec;

    bool operator==(const ScaledVector& o) const { return scale == o.scale && vec == o.vec; }
};

ScaledVector canonicalize(ScaledVector sv, const ExpandingMatrix& m);

// A word over the alphabet {1..N}; letters are 1-based throughout.
struct Word {
    std::vector<int> letters;

    bool operator==(const Word& o) const { return letters == o.letters; }
    bool operator<(const Word& o) const { return letters < o.letters; }
    Word reversed() const { return Word{{letters.rbegin(), letters.rend()}}; }
    std::string str() const;
};

// x -> linear * x + translation, exact.
struct AffineMap {
    MatQ linear;
    VecQ translation;

    bool operator==(const AffineMap& o) const {
        return linear == o.linear && translation == o.translation;
    }
};

// Coordinate change C(x) = A^power * x + shift relating a system to its
// normalized form: original map = C^-1 o normalized map o C.
struct Conjugacy {
    int power = 0;
    VecQ shift;

    bool is_identity() const;
    AffineMap as_map(const ExpandingMatrix& m) const;
    AffineMap inverse_map(const ExpandingMatrix& m) const;
};

class AffineSystem {
public:
    // Validates and canonicalizes; throws Error(WrongDigitCount) when the
    // digit count differs from N = |det A|. Duplicate digits are legal (they
    // force exact overlaps).
    AffineSystem(ExpandingMatrix matrix, std::vector<ScaledVector> digits);

    const ExpandingMatrix& matrix() const { return matrix_; }
    int dim() const { return matrix_.dim(); }
    // Number of maps N as a plain int (the digit count always fits).
    int map_count() const { return static_cast<int>(digits_.size()); }
    const std::vector<ScaledVector>& digits() const { return digits_; }
    bool normalized() const { return normalized_; }

    // Digit value u_j = A^-m v as an exact rational vector; j is 1-based.
    VecQ digit_value(int j) const;
    // Integer digit of a normalized system; j is 1-based.
    const VecZ& digit_int(int j) const;

    // The map T_j x = A^-1 x + u_j; j is 1-based.
    AffineMap map(int j) const;

    bool operator==(const AffineSystem& o) const {
        return matrix_ == o.matrix_ && digits_ == o.digits_;
    }

private:
    ExpandingMatrix matrix_;
    std::vector<ScaledVector> digits_;
    bool normalized_ = false;
};

// The multiset D_n of digit sums sum_{t=0}^{n-1} A^t u_{j_{t+1}} of a
// normalized system, with the first witness word (in lexicographic order)
// recorded per distinct value. Sum-word indexing is reversed relative to map
// composition: a collision of sum-words p, q means the *reversed* words
// compose to identical affine maps.
class DigitSumSet {
public:
    struct Entry {
        uint64_t first_witness_index;  // lex rank of the first witness word
        uint64_t multiplicity;
    };

    int depth() const { return depth_; }
    int alphabet() const { return alphabet_; }
    uint64_t total_count() const { return total_count_; }
    uint64_t distinct_count() const { return values_.size(); }

    const std::unordered_map<VecZ, Entry, VecZHash>& values() const { return values_; }
    bool contains(const VecZ& v) const { return values_.count(v) > 0; }
    Word witness(const VecZ& v) const;

    // First collision in enumeration order, as (first witness, colliding
    // word), when any exists at this depth.
    const std::optional<std::pair<Word, Word>>& first_collision() const { return collision_; }

    // Lex rank <-> word conversions for this depth/alphabet.
    Word word_from_index(uint64_t index) const;

private:
    friend DigitSumSet digit_sums(const AffineSystem& sys, int depth, uint64_t budget);

    int depth_ = 0;
    int alphabet_ = 0;
    uint64_t total_count_ = 0;
    std::unordered_map<VecZ, Entry, VecZHash> values_;
    std::optional<std::pair<Word, Word>> collision_;
};

inline constexpr uint64_t kDefaultEnumerationBudget = 10'000'000;

// Validated construction from a certified matrix and digit list.
AffineSystem build_system(ExpandingMatrix matrix, std::vector<ScaledVector> digits);

// Conjugates the system to integer digits with first digit zero. The
// conjugacy record is exact; classification-relevant structure (overlaps,
// coset distinctness, character sums) transports across it. Idempotent.
std::pair<AffineSystem, Conjugacy> normalize(const AffineSystem& sys);

// Exact composition T_{j_1} ... T_{j_n}: linear part A^-n, translation
// sum_{r=1}^n A^{1-r} u_{j_r}.
AffineMap compose_word(const AffineSystem& sys, const Word& w);

// Enumerates all N^n digit sums of a normalized system in lexicographic word
// order. Throws Error(BudgetExceeded) when N^n exceeds the budget.
DigitSumSet digit_sums(const AffineSystem& sys, int depth,
                       uint64_t budget = kDefaultEnumerationBudget);

// Streaming enumeration of the same sums, invoking fn(sum, lex word rank);
// shared by digit_sums and the rasterizer.
void for_each_digit_sum(const AffineSystem& sys, int depth, uint64_t budget,
                        const std::function<void(const VecZ&, uint64_t)>& fn);

}  // namespace selfaffine::system
