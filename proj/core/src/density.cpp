#include "selfaffine/density.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "selfaffine/errors.hpp"

namespace selfaffine::density {

namespace {

using system::ScaledVector;

Rat frobenius_sq(const MatQ& m) {
    Rat s = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
    return s;
}

// floor(x + 1/2), deterministic nearest integer.
Int round_half_up(const Rat& x) { return rat_floor(x + Rat(1, 2)); }

// Integer upper bound on sqrt(x) for rational x >= 0.
Int sqrt_int_upper(const Rat& x) {
    Int c = rat_ceil(x);
    Int r;
    mpz_sqrt(r.get_mpz_t(), c.get_mpz_t());
    return r + 1;
}

// Exact squared Euclidean distance between A^-s z (integer z) and v.
Rat scaled_dist_sq(const MatQ& inv_pow, const VecZ& z, const VecQ& v) {
    return vec_two_norm_sq(vec_sub(inv_pow.apply(vec_to_rat(z)), v));
}

void validate_target(const ExpandingMatrix& matrix, const TargetTuple& target) {
    if (target.dim != matrix.dim())
        throw Error(ErrorCode::InvalidArgument, "target dimension does not match the matrix");
    if (Int(target.vectors.size()) != matrix.det_abs())
        throw Error(ErrorCode::WrongDigitCount, "target count must equal |det A|");
    if (sgn(target.tolerance) <= 0)
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    for (const auto& v : target.vectors)
        if (static_cast<int>(v.size()) != target.dim)
            throw Error(ErrorCode::InvalidArgument, "target vector dimension mismatch");
}

// Exact representation of v as a ScaledVector, when one exists within the
// scale cap.
std::optional<ScaledVector> try_represent(const ExpandingMatrix& matrix, const VecQ& v,
                                          int scale_cap) {
    VecQ cur = v;
    for (int s = 0; s <= scale_cap; ++s) {
        if (vec_is_integral(cur)) return ScaledVector{s, vec_to_int(cur)};
        cur = MatQ(matrix.entries()).apply(cur);
    }
    return std::nullopt;
}

// All integer points of the axis-aligned box center +- halfwidth, ordered by
// (squared distance to `center`, lex).
std::vector<std::pair<Rat, VecZ>> box_candidates(const VecQ& center, const VecZ& halfwidth) {
    const int d = static_cast<int>(center.size());
    std::vector<Int> lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = rat_floor(center[i]) - halfwidth[i];
        hi[i] = rat_ceil(center[i]) + halfwidth[i];
    }
    std::vector<std::pair<Rat, VecZ>> out;
    VecZ z(lo);
    for (;;) {
        Rat dist = 0;
        for (int i = 0; i < d; ++i) {
            Rat diff = Rat(z[i]) - center[i];
            dist += diff * diff;
        }
        out.emplace_back(std::move(dist), z);
        int i = d - 1;
        while (i >= 0 && z[i] == hi[i]) {
            z[i] = lo[i];
            --i;
        }
        if (i < 0) break;
        z[i] += 1;
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        int c = cmp(a.first, b.first);
        if (c != 0) return c < 0;
        return lex_less(a.second, b.second);
    });
    return out;
}

}  // namespace

TargetTuple TargetTuple::from_doubles(int dim, const std::vector<std::vector<double>>& targets,
                                      double tolerance) {
    TargetTuple t;
    t.dim = dim;
    t.tolerance = Rat(tolerance);
    for (const auto& v : targets) {
        VecQ q;
        for (double x : v) q.emplace_back(x);  // binary doubles convert exactly
        t.vectors.push_back(std::move(q));
    }
    return t;
}

OscSearchResult osc_near(const ExpandingMatrix& matrix, const TargetTuple& target) {
    validate_target(matrix, target);
    const int d = matrix.dim();
    const int N = static_cast<int>(target.vectors.size());
    const Rat eps_sq = target.tolerance * target.tolerance;

    // Fast path: exactly representable targets that already carry the
    // residue certificate are returned unchanged.
    {
        std::vector<ScaledVector> reps;
        bool all = true;
        for (const auto& v : target.vectors) {
            auto r = try_represent(matrix, v, 64);
            if (!r) {
                all = false;
                break;
            }
            reps.push_back(std::move(*r));
        }
        if (all) {
            AffineSystem sys = system::build_system(matrix, reps);
            if (auto cert = overlap::bandt_criterion(sys)) {
                return OscSearchResult{std::move(sys), std::move(*cert), Rat(0), 0.0};
            }
        }
    }

    // Scale until the lattice mesh beats the tolerance:
    // ||A||_2^2 * (d/4) * ||A^-s||_2^2 < eps^2, all bounded by Frobenius.
    const Rat fa = frobenius_sq(MatQ(matrix.entries()));
    const Rat d4 = Rat(d) / 4;
    int s = 1;
    MatQ inv_pow = matrix.inv();
    while (fa * d4 * frobenius_sq(inv_pow) >= eps_sq) {
        ++s;
        if (s > 4096) throw std::logic_error("scale search failed to terminate");
        inv_pow = inv_pow * matrix.inv();
    }

    // Greedy residue-distinct representatives near A^s v_j. Every coset of
    // A Z^d has a point within ||A||_2 sqrt(d)/2 of any target, so the box
    // of that radius always contains a candidate for each unused label.
    MatQ apow = matrix.power(s);
    const Int box_halfwidth = sqrt_int_upper(fa * d4);
    std::set<intlinalg::CosetLabel> used;
    std::vector<ScaledVector> digits;
    Rat achieved_sq = 0;
    for (int j = 0; j < N; ++j) {
        VecQ y = apow.apply(target.vectors[j]);
        VecZ hw(d, box_halfwidth);
        bool placed = false;
        for (auto& [dist, z] : box_candidates(y, hw)) {
            auto label = intlinalg::coset_label(z, matrix);
            if (used.count(label)) continue;
            used.insert(label);
            digits.push_back(ScaledVector{s, z});
            Rat dsq = scaled_dist_sq(inv_pow, z, target.vectors[j]);
            if (dsq > achieved_sq) achieved_sq = dsq;
            placed = true;
            break;
        }
        if (!placed) throw std::logic_error("coset-distinct candidate search failed");
    }
    if (achieved_sq > eps_sq)
        throw std::logic_error("osc_near exceeded the tolerance it guarantees");

    AffineSystem sys = system::build_system(matrix, std::move(digits));
    auto cert = overlap::bandt_criterion(sys);
    if (!cert) throw std::logic_error("constructed digits lost coset distinctness");
    double achieved = std::sqrt(achieved_sq.get_d());
    return OscSearchResult{std::move(sys), std::move(*cert), std::move(achieved_sq), achieved};
}

SingularSearchResult singular_near(const ExpandingMatrix& matrix, const TargetTuple& target,
                                   const VecZ& w, const SingularSearchOptions& opts) {
    validate_target(matrix, target);
    if (sgn(vec_inf_norm(w)) == 0)
        throw Error(ErrorCode::InvalidArgument, "frequency w must be nonzero");

    const int d = matrix.dim();
    const int N = static_cast<int>(target.vectors.size());
    const Rat eps_sq = target.tolerance * target.tolerance;
    const Rat d4 = Rat(d) / 4;

    // Fixed-slot approximations at a scale fine enough for tolerance/2:
    // (d/4) * ||A^-m||_F^2 < eps^2 / 4.
    int m = 0;
    MatQ inv_m = MatQ::identity(d);
    while (d4 * frobenius_sq(inv_m) >= eps_sq / 4) {
        ++m;
        if (m > 4096) throw std::logic_error("approximation scale search failed to terminate");
        inv_m = inv_m * matrix.inv();
    }
    MatQ apow_m = matrix.power(m);

    auto approx_digit = [&](const VecQ& v) {
        VecQ y = apow_m.apply(v);
        VecZ z(d);
        for (int i = 0; i < d; ++i) z[i] = round_half_up(y[i]);
        return ScaledVector{m, std::move(z)};
    };

    uint64_t tried_total = 0;
    std::vector<int> slots = {N};
    if (opts.perturb_all)
        for (int j = N - 1; j >= 1; --j) slots.push_back(j);

    for (int slot : slots) {
        std::vector<ScaledVector> base(N, ScaledVector{});
        for (int j = 1; j <= N; ++j)
            if (j != slot) base[j - 1] = approx_digit(target.vectors[j - 1]);

        const VecQ& target_slot = target.vectors[slot - 1];
        std::set<std::pair<int, VecZ>> seen;
        MatQ apow_s = MatQ::identity(d);
        MatQ inv_s = MatQ::identity(d);
        for (int s = 0; s <= opts.scale_cap; ++s) {
            // Integer box around A^s v covering the tolerance ball.
            VecQ y = apow_s.apply(target_slot);
            VecZ hw(d);
            for (int i = 0; i < d; ++i) {
                Rat row_sq = 0;
                for (int k = 0; k < d; ++k) row_sq += apow_s(i, k) * apow_s(i, k);
                hw[i] = sqrt_int_upper(eps_sq * row_sq);
            }
            for (auto& [dist, z] : box_candidates(y, hw)) {
                Rat dsq = scaled_dist_sq(inv_s, z, target_slot);
                if (dsq > eps_sq) continue;
                ScaledVector cand = system::canonicalize(ScaledVector{s, z}, matrix);
                if (!seen.emplace(cand.scale, cand.vec).second) continue;

                if (++tried_total > opts.candidate_budget) {
                    std::ostringstream os;
                    os << "singular_near candidate budget exhausted after " << tried_total - 1
                       << " membership tests";
                    throw BudgetError(ErrorCode::SearchExhausted, os.str());
                }

                std::vector<ScaledVector> digits = base;
                digits[slot - 1] = cand;
                AffineSystem sys = system::build_system(matrix, digits);
                auto [nsys, conj] = system::normalize(sys);
                fourier::VwResult vw;
                try {
                    vw = fourier::v_w_membership(nsys, w, opts.fourier);
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::DenominatorOverflow) continue;
                    throw;
                }
                if (vw.status != fourier::VwResult::Status::Member) continue;

                Rat achieved_sq = 0;
                for (int j = 1; j <= N; ++j) {
                    Rat dj = vec_two_norm_sq(
                        vec_sub(sys.digit_value(j), target.vectors[j - 1]));
                    if (dj > achieved_sq) achieved_sq = dj;
                }
                if (achieved_sq > eps_sq)
                    throw std::logic_error("singular_near exceeded the tolerance it guarantees");
                double achieved = std::sqrt(achieved_sq.get_d());
                return SingularSearchResult{std::move(sys), std::move(*vw.certificate),
                                            std::move(achieved_sq), achieved, tried_total, slot};
            }
            apow_s = apow_s * MatQ(matrix.entries());
            inv_s = inv_s * matrix.inv();
        }
    }

    std::ostringstream os;
    os << "singular_near scanned " << tried_total << " candidates up to scale cap "
       << opts.scale_cap << " without finding a member";
    throw BudgetError(ErrorCode::SearchExhausted, os.str());
}

}  // namespace selfaffine::density
