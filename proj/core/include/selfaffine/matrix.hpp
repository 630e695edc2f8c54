#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace selfaffine {

using Int = mpz_class;
using Rat = mpq_class;

using VecZ = std::vector<Int>;
using VecQ = std::vector<Rat>;

// Dense d x d matrices over Z and Q. Dimensions here are tiny (the systems
// under study live in R^1..R^3), so the implementation favours exactness and
// auditability over asymptotics.
class MatZ {
public:
    MatZ() = default;
    MatZ(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static MatZ identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Int& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const MatZ& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    MatZ operator*(const MatZ& o) const;
    VecZ apply(const VecZ& v) const;

    // Exact determinant by fraction-free (Bareiss) elimination.
    Int determinant() const;

    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

class MatQ {
public:
    MatQ() = default;
    MatQ(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
    explicit MatQ(const MatZ& m);

    static MatQ identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rat& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const MatQ& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    MatQ operator*(const MatQ& o) const;
    VecQ apply(const VecQ& v) const;

    bool is_identity() const;
    bool is_integral() const;
    MatZ to_integer() const;  // precondition: is_integral()

    // Exact inverse by Gauss-Jordan elimination; throws Error(NotInvertible).
    MatQ inverse() const;

    // Operator infinity norm (max absolute row sum). Submultiplicative, which
    // the geometric tail bounds rely on.
    Rat op_inf_norm() const;

    // Max absolute entry.
    Rat max_abs_entry() const;

    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

// -- vector helpers ---------------------------------------------------------

VecZ vec_add(const VecZ& a, const VecZ& b);
VecZ vec_sub(const VecZ& a, const VecZ& b);
VecZ vec_neg(const VecZ& a);
Int vec_inf_norm(const VecZ& a);
Int vec_one_norm(const VecZ& a);
Rat vec_inf_norm(const VecQ& a);
Rat vec_two_norm_sq(const VecQ& a);

VecQ vec_to_rat(const VecZ& a);
bool vec_is_integral(const VecQ& a);
VecZ vec_to_int(const VecQ& a);  // precondition: vec_is_integral
VecQ vec_sub(const VecQ& a, const VecQ& b);
VecQ vec_add(const VecQ& a, const VecQ& b);

Rat dot(const VecQ& a, const VecQ& b);
Rat dot(const VecQ& a, const VecZ& b);

// Strict lexicographic order; used wherever a deterministic tie-break is
// required (BFS frontiers, candidate enumeration).
bool lex_less(const VecZ& a, const VecZ& b);

std::string vec_str(const VecZ& a);
std::string vec_str(const VecQ& a);

// Floor of a rational as an integer.
Int rat_floor(const Rat& x);
// Smallest integer n with n >= x.
Int rat_ceil(const Rat& x);

struct VecZHash {
    size_t operator()(const VecZ& v) const noexcept;
};

}  // namespace selfaffine
