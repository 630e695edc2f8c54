#pragma once

#include <vector>

#include "selfaffine/errors.hpp"
#include "selfaffine/intlinalg.hpp"
#include "selfaffine/rng.hpp"
#include "selfaffine/system.hpp"

// Shared fixtures and independent brute-force oracles. The oracles stay off
// the implementation paths they check: coset membership goes through a
// rational solve, digit sums through plain nested loops.
namespace testutil {

using namespace selfaffine;

inline MatZ mat1(long a) {
    MatZ m(1, 1);
    m(0, 0) = a;
    return m;
}

inline MatZ mat2(long a, long b, long c, long d) {
    MatZ m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

inline system::AffineSystem sys1d(long a, const std::vector<long>& digits) {
    auto m = intlinalg::certify_expanding(mat1(a));
    std::vector<system::ScaledVector> ds;
    for (long v : digits) ds.push_back({0, VecZ{Int(v)}});
    return system::build_system(std::move(m), std::move(ds));
}

inline system::AffineSystem sys2d(const MatZ& a, const std::vector<std::pair<long, long>>& digits) {
    auto m = intlinalg::certify_expanding(a);
    std::vector<system::ScaledVector> ds;
    for (auto [x, y] : digits) ds.push_back({0, VecZ{Int(x), Int(y)}});
    return system::build_system(std::move(m), std::move(ds));
}

// F1: A = [3], digits 0, 1, 2 (complete residue system; tile [0, 3]).
inline system::AffineSystem f1() { return sys1d(3, {0, 1, 2}); }

// F2: A = [3], digits 0, 1, 3 (exact overlap at depth 2).
inline system::AffineSystem f2() { return sys1d(3, {0, 1, 3}); }

inline MatZ fivefold_matrix() { return mat2(1, -2, 2, 1); }

// Two planar five-map systems over the same rotation-scaling matrix: the
// first satisfies the residue criterion, the second reverses the sign of
// each second entry and has exact overlaps.
inline system::AffineSystem fivefold_osc() {
    return sys2d(fivefold_matrix(), {{-1, -1}, {-1, 0}, {0, 0}, {1, 0}, {1, 1}});
}

inline system::AffineSystem fivefold_overlap() {
    return sys2d(fivefold_matrix(), {{-1, 1}, {-1, 0}, {0, 0}, {1, 0}, {1, -1}});
}

// Oracle: x lies in A Z^d iff A^-1 x is integral (exact rational solve).
inline bool in_a_lattice(const VecZ& x, const intlinalg::ExpandingMatrix& m) {
    return vec_is_integral(m.inv().apply(vec_to_rat(x)));
}

// Random normalized systems for the soundness sweeps: d in {1, 2},
// N in {3, 5}, digit entries in [-4, 4], first digit zero.
inline system::AffineSystem random_normalized_system(SplitMix64& rng) {
    const bool planar = rng.uniform_int(2) == 1;
    for (;;) {
        try {
            if (!planar) {
                long a = rng.uniform_int(2) == 0 ? 3 : 5;
                if (rng.uniform_int(2)) a = -a;
                auto m = intlinalg::certify_expanding(mat1(a));
                int n = static_cast<int>(m.det_abs().get_si());
                std::vector<system::ScaledVector> ds;
                ds.push_back({0, VecZ{Int(0)}});
                for (int j = 1; j < n; ++j)
                    ds.push_back({0, VecZ{Int(rng.uniform_int(9) - 4)}});
                return system::build_system(std::move(m), std::move(ds));
            }
            // Integer 2x2 matrices with |det| in {3, 5}; rejection sample and
            // certify (certification can legitimately fail for eigenvalues on
            // or inside the unit circle).
            MatZ a = mat2(rng.uniform_int(7) - 3, rng.uniform_int(7) - 3, rng.uniform_int(7) - 3,
                          rng.uniform_int(7) - 3);
            Int det = a.determinant();
            if (abs(det) != 3 && abs(det) != 5) continue;
            auto m = intlinalg::certify_expanding(a, 32);
            int n = static_cast<int>(m.det_abs().get_si());
            std::vector<system::ScaledVector> ds;
            ds.push_back({0, VecZ{Int(0), Int(0)}});
            for (int j = 1; j < n; ++j)
                ds.push_back({0, VecZ{Int(rng.uniform_int(9) - 4), Int(rng.uniform_int(9) - 4)}});
            return system::build_system(std::move(m), std::move(ds));
        } catch (const Error&) {
            continue;
        }
    }
}

}  // namespace testutil
