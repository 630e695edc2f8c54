#pragma once

#include <memory>
#include <vector>

#include "selfaffine/matrix.hpp"

namespace selfaffine::intlinalg {

// Smith normal form U*A*V = S with U, V unimodular and S = diag(s_1..s_d),
// s_i > 0, s_1 | s_2 | ... | s_d. Computed with a fixed pivoting rule so the
// output is reproducible.
struct SmithData {
    MatZ U, S, V;
};

// Residues (r_1..r_d) with 0 <= r_i < s_i labelling a coset of A*Z^d in Z^d.
struct CosetLabel {
    VecZ residues;

    bool operator==(const CosetLabel& o) const { return residues == o.residues; }
    bool operator<(const CosetLabel& o) const { return lex_less(residues, o.residues); }
};

// An integer matrix certified expanding: all eigenvalues strictly outside the
// unit circle, witnessed by norm decay of exact rational powers of A^-1.
// Immutable once certified; obtain via certify_expanding (the default state
// is empty and unusable).
class ExpandingMatrix {
public:
    ExpandingMatrix() = default;

    int dim() const { return entries_.rows(); }
    const MatZ& entries() const { return entries_; }
    const Int& det_abs() const { return det_abs_; }
    const MatQ& inv() const { return inv_; }
    int expansion_index() const { return expansion_index_; }
    const SmithData& smith() const { return smith_; }

    // Operator infinity norm of A^-k for the certified index k; < 1/2.
    const Rat& certified_norm() const { return certified_norm_; }

    // Exact rational power A^n for any integer n (negative powers via inv).
    MatQ power(int n) const;

    bool operator==(const ExpandingMatrix& o) const { return entries_ == o.entries_; }

private:
    friend ExpandingMatrix certify_expanding(const MatZ& entries, int max_iter);

    MatZ entries_;
    Int det_abs_;
    MatQ inv_;
    int expansion_index_ = 0;
    Rat certified_norm_;
    SmithData smith_;
};

// Certifies that all eigenvalues of `entries` lie strictly outside the unit
// circle by locating the least k <= max_iter with ||A^-k||_inf < 1/2 in exact
// rational arithmetic. Throws Error(NotInvertible), Error(DeterminantTooSmall)
// for |det| <= 2, and Error(NotCertifiedExpanding) when no such k exists
// within max_iter (inconclusive, not a proof of non-expansion).
ExpandingMatrix certify_expanding(const MatZ& entries, int max_iter = 64);

// The cached Smith normal form of a certified matrix.
const SmithData& smith_normal_form(const ExpandingMatrix& m);

// Coset of x modulo A*Z^d, as (U*x) reduced componentwise mod diag(S).
// label(x) == label(y) iff x - y lies in A*Z^d.
CosetLabel coset_label(const VecZ& x, const ExpandingMatrix& m);

// Upper bound B >= sum_{n >= from_n} ||A^-n||_inf, via blocks of length
// expansion_index and the geometric series with ratio 1/2. Finite, positive,
// and monotone nonincreasing in from_n.
Rat inverse_power_tail(const ExpandingMatrix& m, int from_n);

}  // namespace selfaffine::intlinalg
