#include "selfaffine/fourier.hpp"

#include <cmath>
#include <sstream>

#include "selfaffine/errors.hpp"
#include "selfaffine/geometry.hpp"
#include "selfaffine/interval.hpp"
#include "selfaffine/rng.hpp"

namespace selfaffine::fourier {

namespace {

// Strict rational upper bound on 2*pi (pi < 355/113).
const Rat kTwoPiUpper = Rat(710, 113);

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// sum_j ||u_j||_inf of a normalized system.
Int digit_norm_sum(const AffineSystem& sys) {
    Int s = 0;
    for (int j = 1; j <= sys.map_count(); ++j) s += vec_inf_norm(sys.digit_int(j));
    return s;
}

// Bound D(m) >= sum_{n <= -(m+1)} 2 pi sum_j |<A^n u_j, w>| / N. Every
// below-window factor S_n/N then differs from 1 by at most its own summand.
Rat below_window_deficit(const AffineSystem& sys, const VecZ& w, int m) {
    Rat tail = intlinalg::inverse_power_tail(sys.matrix(), m + 1);
    return kTwoPiUpper * Rat(vec_one_norm(w)) * Rat(digit_norm_sum(sys)) * tail /
           Rat(sys.matrix().det_abs());
}

// Certified lower bound on |S|/N from the exact exponent encoding.
Rat factor_modulus_lower_bound(const CharacterSum& cs, const Int& N, int prec) {
    Rat re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
    for (const auto& [e, c] : cs.exponents) {
        Rat frac = Rat(e) / Rat(cs.q);
        Enclosure ce = cos_two_pi(frac, prec);
        Enclosure se = sin_two_pi(frac, prec);
        re_lo += c * ce.lo;
        re_hi += c * ce.hi;
        im_lo += c * se.lo;
        im_hi += c * se.hi;
    }
    auto sq_lower = [](const Rat& lo, const Rat& hi) -> Rat {
        if (sgn(lo) <= 0 && sgn(hi) >= 0) return Rat(0);
        Rat a = lo * lo, b = hi * hi;
        return a < b ? a : b;
    };
    Rat mod_sq = sq_lower(re_lo, re_hi) + sq_lower(im_lo, im_hi);
    return sqrt_lower_bound(mod_sq, prec) / Rat(N);
}

}  // namespace

CharacterSum character_sum(const AffineSystem& sys, const VecZ& w, int n,
                           const FourierOptions& opts) {
    if (!sys.normalized())
        throw Error(ErrorCode::InvalidArgument, "character_sum requires a normalized system");
    if (sgn(vec_inf_norm(w)) == 0)
        throw Error(ErrorCode::InvalidArgument, "frequency w must be nonzero");

    CharacterSum cs;
    cs.n = n;
    cs.w = w;

    const MatQ pw = sys.matrix().power(n);
    std::vector<Rat> fracs;
    fracs.reserve(sys.map_count());
    Int q = 1;
    for (int j = 1; j <= sys.map_count(); ++j) {
        Rat phase = dot(pw.apply(vec_to_rat(sys.digit_int(j))), w);
        Rat frac = phase - Rat(rat_floor(phase));
        q = lcm(q, frac.get_den());
        fracs.push_back(std::move(frac));
    }
    cs.q = q;
    for (const auto& f : fracs) {
        Int e = f.get_num() * (q / f.get_den());
        cs.exponents[e] += 1;
    }

    long double re = 0, im = 0;
    for (const auto& [e, c] : cs.exponents) {
        long double angle = 2.0L * 3.14159265358979323846264338327950288L *
                            static_cast<long double>(Rat(Rat(e) / Rat(q)).get_d());
        re += c * std::cos(angle);
        im += c * std::sin(angle);
    }
    cs.numeric = {static_cast<double>(re), static_cast<double>(im)};

    cs.status = root_of_unity_sum_status(cs.exponents, q, opts.q_max);
    if (cs.status == ZeroStatus::NumericOnly && std::abs(cs.numeric) < 1e-9) {
        std::ostringstream os;
        os << "phase denominator " << q << " exceeds q_max " << opts.q_max
           << " and the numeric margin " << std::abs(cs.numeric)
           << " is below 1e-9: numeric-only, inconclusive";
        throw Error(ErrorCode::DenominatorOverflow, os.str());
    }
    return cs;
}

VwResult v_w_membership(const AffineSystem& sys, const VecZ& w, const FourierOptions& opts) {
    if (!sys.normalized())
        throw Error(ErrorCode::InvalidArgument, "v_w_membership requires a normalized system");
    if (sgn(vec_inf_norm(w)) == 0)
        throw Error(ErrorCode::InvalidArgument, "frequency w must be nonzero");

    VwResult result;
    const Int N = sys.matrix().det_abs();

    // Degenerate all-zero digit tuple: every S_n equals N.
    if (sgn(digit_norm_sum(sys)) == 0) {
        SingularityCertificate cert;
        cert.w = w;
        cert.n_minus = 0;
        cert.n_plus = 0;
        cert.outside_window_reason = "integer phases above; all digits zero below";
        cert.product_log_bound = 1;
        cert.truncation_error = 0;
        result.status = VwResult::Status::Member;
        result.certificate = std::move(cert);
        return result;
    }

    // Window depth: smallest m >= 1 whose below-window deficit is <= 1/2.
    // That both forces S_n != 0 for n < -m and leaves a usable product bound.
    int m = 1;
    Rat deficit = below_window_deficit(sys, w, m);
    while (deficit > Rat(1, 2)) {
        ++m;
        if (m > 100'000) throw std::logic_error("window search failed to terminate");
        deficit = below_window_deficit(sys, w, m);
    }

    // Exact checks across the window, scanning downward from n = 0.
    std::vector<CharacterSum> window;
    for (int n = 0; n >= -m; --n) {
        CharacterSum cs = character_sum(sys, w, n, opts);
        if (cs.status == ZeroStatus::Zero) {
            result.status = VwResult::Status::Failing;
            result.failing = FailingPower{n, std::move(cs)};
            return result;
        }
        if (cs.status == ZeroStatus::NumericOnly) {
            std::ostringstream os;
            os << "window power n = " << n << " has composite denominator " << cs.q
               << " beyond q_max; zero test is numeric-only";
            result.status = VwResult::Status::Inconclusive;
            result.detail = os.str();
            return result;
        }
        window.push_back(std::move(cs));
    }

    // Certified positive lower bound for the full bi-infinite product.
    Rat product_lb = 1;
    for (const auto& cs : window) {
        if (cs.n == 0) continue;  // factor is exactly 1
        Rat lb;
        for (int prec = opts.mpfr_precision; prec <= 1024; prec *= 2) {
            lb = factor_modulus_lower_bound(cs, N, prec);
            if (sgn(lb) > 0) break;
        }
        if (sgn(lb) <= 0) {
            std::ostringstream os;
            os << "window factor at n = " << cs.n
               << " is nonzero but too small to bound at precision 1024";
            result.status = VwResult::Status::Inconclusive;
            result.detail = os.str();
            return result;
        }
        product_lb *= lb;
    }
    product_lb *= (Rat(1) - deficit);

    SingularityCertificate cert;
    cert.w = w;
    cert.n_minus = -m;
    cert.n_plus = 0;
    cert.outside_window_reason = "integer phases above; perturbation bound below";
    cert.product_log_bound = product_lb;
    cert.truncation_error = deficit;
    result.status = VwResult::Status::Member;
    result.certificate = std::move(cert);
    return result;
}

std::complex<double> character_product(const AffineSystem& sys, const VecZ& w, int n_from,
                                       int n_to) {
    const double N = sys.matrix().det_abs().get_d();
    std::complex<double> prod = 1.0;
    for (int n = n_from; n <= n_to; ++n) {
        CharacterSum cs = character_sum(sys, w, n);
        prod *= cs.numeric / N;
    }
    return prod;
}

ProductValue fourier_product_limit(const AffineSystem& sys, const VecZ& w, double precision) {
    if (!sys.normalized())
        throw Error(ErrorCode::InvalidArgument, "fourier_product_limit requires a normalized system");
    if (sgn(vec_inf_norm(w)) == 0)
        throw Error(ErrorCode::InvalidArgument, "frequency w must be nonzero");
    if (!(precision > 0)) throw Error(ErrorCode::InvalidArgument, "precision must be positive");

    if (sgn(digit_norm_sum(sys)) == 0) return {std::complex<double>(1.0, 0.0), 0.0};

    // Extend the truncation until the below-window deficit D satisfies
    // e^D - 1 <= 2 D <= precision; factors above n = -1 are exactly 1.
    int m = 1;
    Rat deficit = below_window_deficit(sys, w, m);
    while (2 * deficit > Rat(precision)) {
        ++m;
        if (m > 100'000) throw std::logic_error("truncation search failed to terminate");
        deficit = below_window_deficit(sys, w, m);
    }

    const double N = sys.matrix().det_abs().get_d();
    std::complex<double> prod = 1.0;
    for (int n = -1; n >= -m; --n) {
        CharacterSum cs = character_sum(sys, w, n);
        if (cs.status == ZeroStatus::Zero) return {std::complex<double>(0.0, 0.0), 0.0};
        prod *= cs.numeric / N;
    }
    double err = 2.0 * deficit.get_d() + 1e-14 * static_cast<double>(m);
    return {prod, err};
}

ProductValue fourier_product_limit(const SingularityCertificate& cert, const AffineSystem& sys,
                                   double precision) {
    return fourier_product_limit(sys, cert.w, precision);
}

TransformValue transform_truncated(const AffineSystem& sys, const std::vector<double>& xi,
                                   int depth) {
    if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
    if (static_cast<int>(xi.size()) != sys.dim())
        throw Error(ErrorCode::InvalidArgument, "frequency dimension mismatch");

    const int N = sys.map_count();
    const MatQ& inv = sys.matrix().inv();

    // Exact rational orbits A^-n u_j, converted per factor.
    std::vector<VecQ> scaled(N);
    for (int j = 1; j <= N; ++j) scaled[j - 1] = sys.digit_value(j);

    std::complex<double> prod = 1.0;
    for (int n = 0; n < depth; ++n) {
        std::complex<double> s = 0.0;
        for (int j = 0; j < N; ++j) {
            double phase = 0.0;
            for (int i = 0; i < sys.dim(); ++i) phase += scaled[j][i].get_d() * xi[i];
            s += std::complex<double>(std::cos(phase), std::sin(phase));
        }
        prod *= s / static_cast<double>(N);
        for (int j = 0; j < N; ++j) scaled[j] = inv.apply(scaled[j]);
    }

    // |nu_hat((A^T)^-m xi) - 1| <= R_inf * ||A^-m||_inf * ||xi||_1.
    Rat radius = geometry::attractor_radius_bound(sys);
    Rat norm = sys.matrix().power(-depth).op_inf_norm();
    double xi_one = 0.0;
    for (double x : xi) xi_one += std::abs(x);
    double tail = Rat(radius * norm).get_d() * xi_one;

    TransformValue tv;
    tv.xi = xi;
    tv.depth = depth;
    tv.value = prod;
    tv.tail_bound = tail;
    return tv;
}

EmpiricalTransform transform_empirical(const AffineSystem& sys, const std::vector<double>& xi,
                                       uint64_t samples, uint64_t seed) {
    if (samples < 1000)
        throw Error(ErrorCode::InvalidArgument, "at least 1000 samples are required");
    if (static_cast<int>(xi.size()) != sys.dim())
        throw Error(ErrorCode::InvalidArgument, "frequency dimension mismatch");

    const int d = sys.dim();
    const int N = sys.map_count();
    std::vector<double> inv(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv[i * d + j] = sys.matrix().inv()(i, j).get_d();
    std::vector<std::vector<double>> digits(N, std::vector<double>(d));
    for (int j = 1; j <= N; ++j) {
        VecQ u = sys.digit_value(j);
        for (int i = 0; i < d; ++i) digits[j - 1][i] = u[i].get_d();
    }

    SplitMix64 rng(seed);
    std::vector<double> x(d, 0.0), y(d, 0.0);
    constexpr int kBurnIn = 100;

    double sum_re = 0, sum_im = 0, sum_re2 = 0, sum_im2 = 0;
    for (uint64_t t = 0; t < kBurnIn + samples; ++t) {
        int j = rng.uniform_int(N);
        for (int i = 0; i < d; ++i) {
            double acc = digits[j][i];
            for (int k = 0; k < d; ++k) acc += inv[i * d + k] * x[k];
            y[i] = acc;
        }
        std::swap(x, y);
        if (t < kBurnIn) continue;
        double phase = 0.0;
        for (int i = 0; i < d; ++i) phase += x[i] * xi[i];
        double re = std::cos(phase), im = std::sin(phase);
        sum_re += re;
        sum_im += im;
        sum_re2 += re * re;
        sum_im2 += im * im;
    }

    const double n = static_cast<double>(samples);
    double mean_re = sum_re / n, mean_im = sum_im / n;
    double var_re = std::max(0.0, sum_re2 / n - mean_re * mean_re);
    double var_im = std::max(0.0, sum_im2 / n - mean_im * mean_im);

    EmpiricalTransform et;
    et.value = {mean_re, mean_im};
    et.standard_error = std::sqrt((var_re + var_im) / n);
    et.samples = samples;
    return et;
}

}  // namespace selfaffine::fourier
