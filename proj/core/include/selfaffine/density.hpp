#pragma once

#include <cstdint>
#include <vector>

#include "selfaffine/fourier.hpp"
#include "selfaffine/overlap.hpp"
#include "selfaffine/system.hpp"

namespace selfaffine::density {

using intlinalg::ExpandingMatrix;
using system::AffineSystem;

// Arbitrary real target tuple (v_1..v_N) with tolerance. Floating-point
// inputs convert to exact rationals, so all distance checks are exact.
struct TargetTuple {
    int dim = 0;
    std::vector<VecQ> vectors;
    Rat tolerance;

    static TargetTuple from_doubles(int dim, const std::vector<std::vector<double>>& targets,
                                    double tolerance);
};

struct OscSearchResult {
    AffineSystem system;
    overlap::OSCCertificate certificate;
    Rat achieved_sq;  // max_j ||u_j - v_j||_2^2, exact
    double achieved;  // sqrt of the above
};

// Digits within tolerance of the targets carrying a coset-distinctness
// certificate: rational approximations are scaled until the lattice mesh
// beats the tolerance, then integer representatives with pairwise-distinct
// labels are chosen greedily (candidates ordered by distance, then lex).
// Always succeeds for positive tolerance.
OscSearchResult osc_near(const ExpandingMatrix& matrix, const TargetTuple& target);

struct SingularSearchOptions {
    uint64_t candidate_budget = 20'000;
    int scale_cap = 64;
    bool perturb_all = false;  // retry over the other digit slots on exhaustion
    fourier::FourierOptions fourier;
};

struct SingularSearchResult {
    AffineSystem system;
    fourier::SingularityCertificate certificate;
    Rat achieved_sq;
    double achieved;
    uint64_t candidates_tried = 0;
    int perturbed_digit = 0;  // 1-based slot that was searched
};

// Digits within tolerance whose tuple lies in V_w: the first N-1 targets are
// approximated at a scale fine enough for tolerance/2 and the last digit is
// searched over lattice points of increasing scale (distance then lex order)
// until the membership test passes. Throws Error(SearchExhausted) with the
// scanned count when the candidate budget runs out.
SingularSearchResult singular_near(const ExpandingMatrix& matrix, const TargetTuple& target,
                                   const VecZ& w, const SingularSearchOptions& opts = {});

}  // namespace selfaffine::density
