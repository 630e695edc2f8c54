#include "selfaffine/cyclotomic.hpp"

#include <stdexcept>

namespace selfaffine::fourier {

namespace {

// Exact division of polynomials over Z by a monic divisor; returns the
// quotient and requires zero remainder unless allow_remainder.
std::vector<Int> poly_divide_monic(const std::vector<Int>& num, const std::vector<Int>& den,
                                   std::vector<Int>* remainder_out = nullptr) {
    std::vector<Int> rem = num;
    std::vector<Int> quot(num.size() >= den.size() ? num.size() - den.size() + 1 : 0);
    const size_t dd = den.size() - 1;
    for (size_t i = rem.size(); i-- > dd;) {
        Int c = rem[i];
        if (sgn(c) == 0) continue;
        quot[i - dd] = c;
        for (size_t j = 0; j < den.size(); ++j) rem[i - dd + j] -= c * den[j];
    }
    while (!rem.empty() && sgn(rem.back()) == 0) rem.pop_back();
    if (remainder_out) {
        *remainder_out = std::move(rem);
    } else if (!rem.empty()) {
        throw std::logic_error("polynomial division was expected to be exact");
    }
    while (quot.size() > 1 && sgn(quot.back()) == 0) quot.pop_back();
    return quot;
}

// Substitute x -> x^k.
std::vector<Int> poly_inflate(const std::vector<Int>& p, unsigned long k) {
    std::vector<Int> r((p.size() - 1) * k + 1);
    for (size_t i = 0; i < p.size(); ++i) r[i * k] = p[i];
    return r;
}

std::vector<unsigned long> prime_factors(unsigned long n) {
    std::vector<unsigned long> ps;
    for (unsigned long p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) ps.push_back(n);
    return ps;
}

}  // namespace

std::vector<Int> cyclotomic_polynomial(unsigned long q) {
    if (q == 0) throw std::invalid_argument("cyclotomic_polynomial: q must be positive");
    // Phi over the radical first: Phi_1 = x - 1, then for a new prime p,
    // Phi_{mp}(x) = Phi_m(x^p) / Phi_m(x). Finally Phi_q(x) =
    // Phi_rad(x^{q/rad}).
    std::vector<Int> phi = {Int(-1), Int(1)};
    unsigned long rad = 1;
    for (unsigned long p : prime_factors(q)) {
        phi = poly_divide_monic(poly_inflate(phi, p), phi);
        rad *= p;
    }
    if (q / rad > 1) phi = poly_inflate(phi, q / rad);
    return phi;
}

ZeroStatus root_of_unity_sum_status(const std::map<Int, long>& exponent_counts, const Int& q,
                                    const Int& q_max) {
    if (sgn(q) <= 0) throw std::invalid_argument("root order must be positive");
    if (q == 1) {
        long total = 0;
        for (const auto& [e, c] : exponent_counts) total += c;
        return total == 0 ? ZeroStatus::Zero : ZeroStatus::Nonzero;
    }

    // Smallest prime factor by trial division; q in this artifact divides a
    // power of N, so its prime factors are small.
    Int p = 0;
    {
        const Int trial_bound = 1'000'000;
        Int i = 2;
        while (i * i <= q && i <= trial_bound) {
            if (q % i == 0) {
                p = i;
                break;
            }
            i += (i == 2 ? 1 : 2);
        }
        // No factor below the bound: q is prime if the bound covered sqrt(q).
        if (sgn(p) == 0 && trial_bound * trial_bound >= q) p = q;
    }

    if (sgn(p) != 0) {
        // Is q a power of p?
        Int r = q;
        while (r % p == 0) r /= p;
        if (r == 1) {
            // Fiber test over residues mod q/p.
            Int step = q / p;
            std::map<Int, std::map<Int, long>> fibers;
            for (const auto& [e, c] : exponent_counts) {
                Int em;
                mpz_fdiv_r(em.get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
                fibers[em % step][em / step] += c;
            }
            for (const auto& [r0, counts] : fibers) {
                long first = counts.begin()->second;
                if (Int(counts.size()) != p) return ZeroStatus::Nonzero;
                for (const auto& [t, c] : counts)
                    if (c != first) return ZeroStatus::Nonzero;
            }
            return ZeroStatus::Zero;
        }
    }

    if (q > q_max || !q.fits_ulong_p()) return ZeroStatus::NumericOnly;

    const auto phi = cyclotomic_polynomial(q.get_ui());
    std::vector<Int> poly(q.get_ui(), Int(0));
    for (const auto& [e, c] : exponent_counts) {
        Int em;
        mpz_fdiv_r(em.get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
        poly[em.get_ui()] += c;
    }
    while (poly.size() > 1 && sgn(poly.back()) == 0) poly.pop_back();
    if (poly.size() < phi.size()) {
        bool all_zero = true;
        for (const auto& c : poly)
            if (sgn(c) != 0) all_zero = false;
        return all_zero ? ZeroStatus::Zero : ZeroStatus::Nonzero;
    }
    std::vector<Int> rem;
    poly_divide_monic(poly, phi, &rem);
    return rem.empty() ? ZeroStatus::Zero : ZeroStatus::Nonzero;
}

}  // namespace selfaffine::fourier
