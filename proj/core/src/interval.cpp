#include "selfaffine/interval.hpp"

#include <mpfr.h>

#include <stdexcept>

namespace selfaffine::fourier {

namespace {

Rat rat_from_mpfr(const mpfr_t x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

enum class Fn { Cos, Sin };

Enclosure trig_two_pi(const Rat& frac, int prec, Fn fn) {
    // Reduce the turn fraction to [0, 1); the functions have period 1 in it.
    Rat f = frac - Rat(rat_floor(frac));

    mpfr_t pi_lo, pi_hi, t_lo, t_hi, width, v_lo, v_hi, tmp;
    mpfr_inits2(prec, pi_lo, pi_hi, t_lo, t_hi, width, v_lo, v_hi, tmp, (mpfr_ptr) nullptr);

    mpfr_const_pi(pi_lo, MPFR_RNDD);
    mpfr_const_pi(pi_hi, MPFR_RNDU);
    mpfr_mul_ui(pi_lo, pi_lo, 2, MPFR_RNDD);
    mpfr_mul_ui(pi_hi, pi_hi, 2, MPFR_RNDU);
    // f >= 0, so directed rounding of the product is monotone in each factor.
    mpfr_mul_q(t_lo, pi_lo, f.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(t_hi, pi_hi, f.get_mpq_t(), MPFR_RNDU);
    mpfr_sub(width, t_hi, t_lo, MPFR_RNDU);

    // Evaluate at the left endpoint with both roundings, then widen by the
    // interval width (both functions are 1-Lipschitz).
    if (fn == Fn::Cos) {
        mpfr_cos(v_lo, t_lo, MPFR_RNDD);
        mpfr_cos(v_hi, t_lo, MPFR_RNDU);
    } else {
        mpfr_sin(v_lo, t_lo, MPFR_RNDD);
        mpfr_sin(v_hi, t_lo, MPFR_RNDU);
    }
    mpfr_sub(v_lo, v_lo, width, MPFR_RNDD);
    mpfr_add(v_hi, v_hi, width, MPFR_RNDU);

    Enclosure e{rat_from_mpfr(v_lo), rat_from_mpfr(v_hi)};
    mpfr_clears(pi_lo, pi_hi, t_lo, t_hi, width, v_lo, v_hi, tmp, (mpfr_ptr) nullptr);

    const Rat one(1);
    if (e.lo < -one) e.lo = -one;
    if (e.hi > one) e.hi = one;
    return e;
}

}  // namespace

Enclosure cos_two_pi(const Rat& frac, int precision_bits) {
    return trig_two_pi(frac, precision_bits, Fn::Cos);
}

Enclosure sin_two_pi(const Rat& frac, int precision_bits) {
    return trig_two_pi(frac, precision_bits, Fn::Sin);
}

Rat sqrt_lower_bound(const Rat& x, int precision_bits) {
    if (sgn(x) < 0) throw std::invalid_argument("sqrt_lower_bound: negative argument");
    if (sgn(x) == 0) return Rat(0);
    mpfr_t v;
    mpfr_init2(v, precision_bits);
    mpfr_set_q(v, x.get_mpq_t(), MPFR_RNDD);
    mpfr_sqrt(v, v, MPFR_RNDD);
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v);
    mpfr_clear(v);
    if (sgn(q) < 0) q = 0;
    return q;
}

}  // namespace selfaffine::fourier
