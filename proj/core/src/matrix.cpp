#include "selfaffine/matrix.hpp"

#include <sstream>

#include "selfaffine/errors.hpp"

namespace selfaffine {

MatZ MatZ::identity(int n) {
    MatZ m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

MatZ MatZ::operator*(const MatZ& o) const {
    MatZ r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            if (sgn((*this)(i, k)) == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
        }
    return r;
}

VecZ MatZ::apply(const VecZ& v) const {
    VecZ r(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

Int MatZ::determinant() const {
    // Bareiss fraction-free elimination with partial pivoting by first
    // nonzero. All intermediate divisions are exact.
    const int n = rows_;
    MatZ m = *this;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (sgn(m(k, k)) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (sgn(m(i, k)) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Int num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    Int det = m(n - 1, n - 1);
    return sign > 0 ? det : Int(-det);
}

std::string MatZ::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j) os << (*this)(i, j) << (j + 1 < cols_ ? "," : "");
        os << "]" << (i + 1 < rows_ ? "," : "");
    }
    os << "]";
    return os.str();
}

MatQ::MatQ(const MatZ& m) : rows_(m.rows()), cols_(m.cols()), a_(static_cast<size_t>(rows_) * cols_) {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) (*this)(i, j) = Rat(m(i, j));
}

MatQ MatQ::identity(int n) {
    MatQ m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

MatQ MatQ::operator*(const MatQ& o) const {
    MatQ r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            if (sgn((*this)(i, k)) == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
        }
    return r;
}

VecQ MatQ::apply(const VecQ& v) const {
    VecQ r(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

bool MatQ::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if ((*this)(i, j) != Rat(i == j ? 1 : 0)) return false;
    return true;
}

bool MatQ::is_integral() const {
    for (const auto& x : a_)
        if (x.get_den() != 1) return false;
    return true;
}

MatZ MatQ::to_integer() const {
    MatZ m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).get_num();
    return m;
}

MatQ MatQ::inverse() const {
    const int n = rows_;
    MatQ m = *this;
    MatQ inv = MatQ::identity(n);
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int i = k; i < n; ++i)
            if (sgn(m(i, k)) != 0) { p = i; break; }
        if (p < 0) throw Error(ErrorCode::NotInvertible, "matrix is singular");
        if (p != k)
            for (int j = 0; j < n; ++j) {
                swap(m(k, j), m(p, j));
                swap(inv(k, j), inv(p, j));
            }
        Rat piv = m(k, k);
        for (int j = 0; j < n; ++j) {
            m(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k || sgn(m(i, k)) == 0) continue;
            Rat f = m(i, k);
            for (int j = 0; j < n; ++j) {
                m(i, j) -= f * m(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

Rat MatQ::op_inf_norm() const {
    Rat best = 0;
    for (int i = 0; i < rows_; ++i) {
        Rat s = 0;
        for (int j = 0; j < cols_; ++j) s += abs((*this)(i, j));
        if (s > best) best = s;
    }
    return best;
}

Rat MatQ::max_abs_entry() const {
    Rat best = 0;
    for (const auto& x : a_) {
        Rat v = abs(x);
        if (v > best) best = v;
    }
    return best;
}

std::string MatQ::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j) os << (*this)(i, j) << (j + 1 < cols_ ? "," : "");
        os << "]" << (i + 1 < rows_ ? "," : "");
    }
    os << "]";
    return os.str();
}

VecZ vec_add(const VecZ& a, const VecZ& b) {
    VecZ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

VecZ vec_sub(const VecZ& a, const VecZ& b) {
    VecZ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

VecZ vec_neg(const VecZ& a) {
    VecZ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

Int vec_inf_norm(const VecZ& a) {
    Int best = 0;
    for (const auto& x : a) {
        Int v = abs(x);
        if (v > best) best = v;
    }
    return best;
}

Int vec_one_norm(const VecZ& a) {
    Int s = 0;
    for (const auto& x : a) s += abs(x);
    return s;
}

Rat vec_inf_norm(const VecQ& a) {
    Rat best = 0;
    for (const auto& x : a) {
        Rat v = abs(x);
        if (v > best) best = v;
    }
    return best;
}

Rat vec_two_norm_sq(const VecQ& a) {
    Rat s = 0;
    for (const auto& x : a) s += x * x;
    return s;
}

VecQ vec_to_rat(const VecZ& a) {
    VecQ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = Rat(a[i]);
    return r;
}

bool vec_is_integral(const VecQ& a) {
    for (const auto& x : a)
        if (x.get_den() != 1) return false;
    return true;
}

VecZ vec_to_int(const VecQ& a) {
    VecZ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i].get_num();
    return r;
}

VecQ vec_sub(const VecQ& a, const VecQ& b) {
    VecQ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

VecQ vec_add(const VecQ& a, const VecQ& b) {
    VecQ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Rat dot(const VecQ& a, const VecQ& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rat dot(const VecQ& a, const VecZ& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
    return s;
}

bool lex_less(const VecZ& a, const VecZ& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

std::string vec_str(const VecZ& a) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < a.size(); ++i) os << a[i] << (i + 1 < a.size() ? "," : "");
    os << ")";
    return os.str();
}

std::string vec_str(const VecQ& a) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < a.size(); ++i) os << a[i] << (i + 1 < a.size() ? "," : "");
    os << ")";
    return os.str();
}

Int rat_floor(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

Int rat_ceil(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

size_t VecZHash::operator()(const VecZ& v) const noexcept {
    // Residue hash: cheap and stable for arbitrary-precision entries.
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& x : v) {
        uint64_t r = mpz_fdiv_ui(x.get_mpz_t(), 0x1fffffffffffffffull);
        if (sgn(x) < 0) r = ~r;
        h ^= r + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
}

}  // namespace selfaffine
