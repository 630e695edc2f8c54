#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "selfaffine/system.hpp"

namespace selfaffine::overlap {

using system::AffineMap;
using system::AffineSystem;
using system::Conjugacy;
using system::Word;

// Two distinct equal-length words whose composed maps coincide exactly.
struct OverlapCertificate {
    int depth = 0;
    Word word_a, word_b;
    AffineMap composed;
};

// Scale m0 and the pairwise-distinct coset labels of A^{m0} u_j mod A Z^d.
// Existence implies the absence of exact overlaps.
struct OSCCertificate {
    int m0 = 0;
    std::vector<intlinalg::CosetLabel> labels;
};

// Exhaustive difference-graph search transcript: every integer state of
// max-norm <= state_bound reachable from the digit differences was visited
// and 0 was never reached.
struct NoOverlapProof {
    Rat state_bound;
    uint64_t explored_states = 0;
    bool reached_zero = false;
};

enum class Branch { osc, overlap, inconclusive };

const char* branch_name(Branch b);

struct ClassificationReport {
    Branch branch = Branch::inconclusive;
    std::optional<OSCCertificate> osc_certificate;
    std::optional<OverlapCertificate> overlap_certificate;
    std::optional<NoOverlapProof> no_overlap_proof;
    std::string status;  // "definitive" or "inconclusive"
    std::string detail;  // diagnostics, e.g. which budget was exhausted

    // Certificates refer to this normalized form of the input system.
    std::optional<AffineSystem> normalized_system;
    Conjugacy conjugacy;
};

inline constexpr uint64_t kDefaultStateBudget = 4'000'000;

// Depth-minimal overlap certificate with depth <= n_max, found by scanning
// digit-sum collisions depth by depth; absent when no such overlap exists.
std::optional<OverlapCertificate> find_overlap_up_to(
    const AffineSystem& sys, int n_max,
    uint64_t budget = system::kDefaultEnumerationBudget);

// Complete decision by breadth-first search over the difference graph
// z -> A z + e, e ranging over digit differences and zero. All states on a
// path to 0 have max-norm at most C = max|diff| * inverse_power_tail(A, 1),
// so the search is finite. Throws Error(StateBudgetExceeded) with C and the
// explored count when the ball is too large.
std::variant<OverlapCertificate, NoOverlapProof> decide_overlaps(
    const AffineSystem& sys, uint64_t state_budget = kDefaultStateBudget);

// Bandt residue criterion at m0 = max digit scale: certificate iff the N
// labels are pairwise distinct.
std::optional<OSCCertificate> bandt_criterion(const AffineSystem& sys);

struct ClassifyOptions {
    uint64_t state_budget = kDefaultStateBudget;
};

// Full classification: normalize, try the residue criterion, then run the
// complete decision. Budget exhaustion yields an inconclusive report, never
// a guessed branch.
ClassificationReport classify(const AffineSystem& sys, const ClassifyOptions& opts = {});

}  // namespace selfaffine::overlap
