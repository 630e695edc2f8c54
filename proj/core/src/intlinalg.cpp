#include "selfaffine/intlinalg.hpp"

#include <sstream>

#include "selfaffine/errors.hpp"

namespace selfaffine::intlinalg {

namespace {

// Smith normal form by elementary row/column operations. Pivot rule:
// smallest absolute value in the working submatrix, ties broken by row-major
// position. This fixes the output for golden tests.
SmithData smith_decompose(const MatZ& a) {
    const int n = a.rows();
    SmithData sd{MatZ::identity(n), a, MatZ::identity(n)};
    MatZ& U = sd.U;
    MatZ& S = sd.S;
    MatZ& V = sd.V;

    auto swap_rows = [&](MatZ& m, int r1, int r2) {
        if (r1 == r2) return;
        for (int j = 0; j < m.cols(); ++j) swap(m(r1, j), m(r2, j));
    };
    auto swap_cols = [&](MatZ& m, int c1, int c2) {
        if (c1 == c2) return;
        for (int i = 0; i < m.rows(); ++i) swap(m(i, c1), m(i, c2));
    };
    auto add_row = [&](MatZ& m, int dst, int src, const Int& f) {
        for (int j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
    };
    auto add_col = [&](MatZ& m, int dst, int src, const Int& f) {
        for (int i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
    };
    auto negate_row = [&](MatZ& m, int r) {
        for (int j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
    };

    for (int t = 0; t < n; ++t) {
        for (;;) {
            int pi = -1, pj = -1;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j) {
                    if (sgn(S(i, j)) == 0) continue;
                    if (pi < 0 || mpz_cmpabs(S(i, j).get_mpz_t(), S(pi, pj).get_mpz_t()) < 0) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) break;  // submatrix all zero (singular input)
            swap_rows(S, t, pi);
            swap_rows(U, t, pi);
            swap_cols(S, t, pj);
            swap_cols(V, t, pj);

            bool clean = true;
            for (int i = t + 1; i < n; ++i) {
                if (sgn(S(i, t)) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), S(i, t).get_mpz_t(), S(t, t).get_mpz_t());
                add_row(S, i, t, -q);
                add_row(U, i, t, -q);
                if (sgn(S(i, t)) != 0) clean = false;
            }
            for (int j = t + 1; j < n; ++j) {
                if (sgn(S(t, j)) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), S(t, j).get_mpz_t(), S(t, t).get_mpz_t());
                add_col(S, j, t, -q);
                add_col(V, j, t, -q);
                if (sgn(S(t, j)) != 0) clean = false;
            }
            if (!clean) continue;

            // Pivot isolated; enforce divisibility of the remaining block.
            int bi = -1;
            for (int i = t + 1; i < n && bi < 0; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (sgn(S(i, j) % S(t, t)) != 0) {
                        bi = i;
                        break;
                    }
            if (bi >= 0) {
                add_row(S, t, bi, 1);
                add_row(U, t, bi, 1);
                continue;
            }
            if (sgn(S(t, t)) < 0) {
                negate_row(S, t);
                negate_row(U, t);
            }
            break;
        }
    }
    return sd;
}

}  // namespace

MatQ ExpandingMatrix::power(int n) const {
    const MatQ base = n >= 0 ? MatQ(entries_) : inv_;
    int e = n >= 0 ? n : -n;
    MatQ acc = MatQ::identity(dim());
    for (int i = 0; i < e; ++i) acc = acc * base;
    return acc;
}

ExpandingMatrix certify_expanding(const MatZ& entries, int max_iter) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        throw Error(ErrorCode::InvalidArgument, "matrix must be square and nonempty");
    if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be positive");

    Int det = entries.determinant();
    if (sgn(det) == 0) throw Error(ErrorCode::NotInvertible, "matrix has determinant 0");
    Int det_abs = abs(det);
    if (det_abs <= 2) {
        std::ostringstream os;
        os << "|det| = " << det_abs << " but at least 3 is required";
        throw Error(ErrorCode::DeterminantTooSmall, os.str());
    }

    ExpandingMatrix m;
    m.entries_ = entries;
    m.det_abs_ = det_abs;
    m.inv_ = MatQ(entries).inverse();

    const Rat half(1, 2);
    MatQ p = m.inv_;
    int k = 0;
    for (int i = 1; i <= max_iter; ++i) {
        Rat norm = p.op_inf_norm();
        if (norm < half) {
            k = i;
            m.certified_norm_ = norm;
            break;
        }
        p = p * m.inv_;
    }
    if (k == 0)
        throw Error(ErrorCode::NotCertifiedExpanding,
                    "no power of the inverse fell below norm 1/2 within max_iter "
                    "(inconclusive)");
    m.expansion_index_ = k;
    m.smith_ = smith_decompose(entries);
    return m;
}

const SmithData& smith_normal_form(const ExpandingMatrix& m) { return m.smith(); }

CosetLabel coset_label(const VecZ& x, const ExpandingMatrix& m) {
    const int d = m.dim();
    VecZ ux = m.smith().U.apply(x);
    CosetLabel label;
    label.residues.resize(d);
    for (int i = 0; i < d; ++i)
        mpz_fdiv_r(label.residues[i].get_mpz_t(), ux[i].get_mpz_t(), m.smith().S(i, i).get_mpz_t());
    return label;
}

Rat inverse_power_tail(const ExpandingMatrix& m, int from_n) {
    if (from_n < 0) throw Error(ErrorCode::InvalidArgument, "from_n must be >= 0");
    const int k = m.expansion_index();

    // Powers B^0 .. B^{from_n + k - 1} of B = A^-1.
    std::vector<Rat> norms;
    norms.reserve(from_n + k);
    MatQ p = MatQ::identity(m.dim());
    for (int i = 0; i < from_n + k; ++i) {
        norms.push_back(p.op_inf_norm());
        p = p * m.inv();
    }

    // raw(n0) = 2 * sum_{s=0}^{k-1} ||B^{n0+s}||: blocks of k, ratio < 1/2.
    // Any raw(n') with n' <= from_n also bounds the tail from from_n, so take
    // the prefix minimum; that makes the bound monotone in from_n.
    Rat best;
    bool have = false;
    for (int n0 = 0; n0 <= from_n; ++n0) {
        Rat s = 0;
        for (int t = 0; t < k; ++t) s += norms[n0 + t];
        Rat raw = 2 * s;
        if (!have || raw < best) {
            best = raw;
            have = true;
        }
    }
    return best;
}

}  // namespace selfaffine::intlinalg
