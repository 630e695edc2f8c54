#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selfaffine/cyclotomic.hpp"
#include "selfaffine/system.hpp"

namespace selfaffine::fourier {

using system::AffineSystem;

// Conventions, fixed once for the whole module:
//   * S_n(w) = sum_j e^{2 pi i <A^n u_j, w>} for integer n and nonzero
//     integer w; the bi-infinite product runs over the factors S_n(w)/N with
//     n ranging over all of Z (equivalently, index -n inside the exponent).
//   * The transform carries no 2 pi in the kernel: nu_hat(xi) =
//     integral of e^{i<x, xi>} d nu(x); the 2 pi enters through evaluation
//     points of the form 2 pi (A^T)^r w.
// The F1 zero-factor case in the tests pins this indexing.

inline const Int kDefaultQMax = 10'000;

// S_n(w) with exact phases. The exact encoding is the multiset of exponents
// of q-th roots of unity; `status` reports the exact zero test (NumericOnly
// when q is composite and exceeds q_max).
struct CharacterSum {
    int n = 0;
    VecZ w;
    Int q;                          // common denominator of the phases
    std::map<Int, long> exponents;  // exponent mod q -> multiplicity
    std::complex<double> numeric;
    ZeroStatus status = ZeroStatus::NumericOnly;
};

// Certificate that (u_1..u_N) lies in V_w: S_n(w) != 0 for every integer n.
// Exact checks cover the window [n_minus, n_plus]; above it phases are
// integers (S_n = N), below it the perturbation bound
// 2 pi sum_j |<A^n u_j, w>| < N forces S_n != 0.
struct SingularityCertificate {
    VecZ w;
    int n_minus = 0;
    int n_plus = 0;
    std::string outside_window_reason;
    Rat product_log_bound;  // rational lower bound on |prod_n S_n(w)/N| > 0
    Rat truncation_error;   // bound on the below-window product deficit
};

struct FailingPower {
    int n = 0;
    CharacterSum sum;
};

struct VwResult {
    enum class Status { Member, Failing, Inconclusive };
    Status status = Status::Inconclusive;
    std::optional<SingularityCertificate> certificate;
    std::optional<FailingPower> failing;
    std::string detail;
};

struct FourierOptions {
    Int q_max = kDefaultQMax;
    int mpfr_precision = 128;
};

// Exact character sum; throws Error(DenominatorOverflow) when the zero test
// is out of exact reach (composite q > q_max) and the numeric margin is
// below 1e-9.
CharacterSum character_sum(const AffineSystem& sys, const VecZ& w, int n,
                           const FourierOptions& opts = {});

// Decides membership of the system's digit tuple in V_w by exact window
// checks plus the two out-of-window arguments. Requires a normalized system
// and nonzero w.
VwResult v_w_membership(const AffineSystem& sys, const VecZ& w, const FourierOptions& opts = {});

struct ProductValue {
    std::complex<double> value;
    double error_bound = 0.0;
};

// Truncated evaluation of prod_{n in Z} S_n(w)/N, the limit of
// nu_hat(2 pi (A^T)^r w); the truncation tail is below `precision`. A factor
// that is exactly zero short-circuits to 0 with no error.
ProductValue fourier_product_limit(const AffineSystem& sys, const VecZ& w, double precision);
ProductValue fourier_product_limit(const SingularityCertificate& cert, const AffineSystem& sys,
                                   double precision);

// Numeric product of S_n(w)/N over n in [n_from, n_to]; test hook for the
// re-indexing identity.
std::complex<double> character_product(const AffineSystem& sys, const VecZ& w, int n_from,
                                       int n_to);

struct TransformValue {
    std::vector<double> xi;
    int depth = 0;
    std::complex<double> value;
    double tail_bound = 0.0;
};

// Finite product nu_hat(xi) ~ prod_{n=0}^{m-1} (1/N sum_j e^{i<A^-n u_j, xi>})
// with |nu_hat((A^T)^-m xi) - 1| bounded via the attractor radius.
TransformValue transform_truncated(const AffineSystem& sys, const std::vector<double>& xi,
                                   int depth);

struct EmpiricalTransform {
    std::complex<double> value;
    double standard_error = 0.0;
    uint64_t samples = 0;
};

// Chaos-game Monte Carlo estimate of nu_hat(xi): uniform letter choice,
// burn-in 100 steps, deterministic for a given seed.
EmpiricalTransform transform_empirical(const AffineSystem& sys, const std::vector<double>& xi,
                                       uint64_t samples, uint64_t seed);

}  // namespace selfaffine::fourier
