#pragma once

#include "selfaffine/matrix.hpp"

namespace selfaffine::fourier {

// Certified rational enclosures of transcendental values, backed by MPFR
// directed rounding. Used only to produce sound numeric bounds inside
// certificates; exact zero decisions never go through here.
struct Enclosure {
    Rat lo, hi;
};

// Enclosure of cos(2*pi*frac) / sin(2*pi*frac) for rational frac.
Enclosure cos_two_pi(const Rat& frac, int precision_bits = 128);
Enclosure sin_two_pi(const Rat& frac, int precision_bits = 128);

// Rational lower bound on sqrt(x) for rational x >= 0.
Rat sqrt_lower_bound(const Rat& x, int precision_bits = 128);

}  // namespace selfaffine::fourier
