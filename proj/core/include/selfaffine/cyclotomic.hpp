#pragma once

#include <map>
#include <vector>

#include "selfaffine/matrix.hpp"

namespace selfaffine::fourier {

enum class ZeroStatus { Zero, Nonzero, NumericOnly };

// The q-th cyclotomic polynomial as a dense coefficient vector (constant
// term first). q must fit in an unsigned long; intended for q <= ~10^4.
std::vector<Int> cyclotomic_polynomial(unsigned long q);

// Exact zero test for sums of q-th roots of unity given as a multiset of
// exponents (exponent -> multiplicity, exponents reduced mod q).
//
// Three routes:
//   q == 1               -> plain integer sum.
//   q == p^a prime power -> fiber test: the sum vanishes iff within every
//                           residue class r mod q/p the p multiplicities
//                           c(r + (q/p) t) agree. Works for arbitrarily
//                           large q.
//   composite q <= q_max -> divisibility of the exponent polynomial by the
//                           q-th cyclotomic polynomial.
// Composite q beyond q_max is NumericOnly.
ZeroStatus root_of_unity_sum_status(const std::map<Int, long>& exponent_counts, const Int& q,
                                    const Int& q_max);

}  // namespace selfaffine::fourier
