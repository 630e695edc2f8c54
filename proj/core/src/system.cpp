#include "selfaffine/system.hpp"

#include <sstream>

#include "selfaffine/errors.hpp"

namespace selfaffine::system {

ScaledVector canonicalize(ScaledVector sv, const ExpandingMatrix& m) {
    if (sv.scale < 0) throw Error(ErrorCode::InvalidArgument, "scale must be >= 0");
    while (sv.scale > 0) {
        VecQ shifted = m.inv().apply(vec_to_rat(sv.vec));
        if (!vec_is_integral(shifted)) break;
        sv.vec = vec_to_int(shifted);
        --sv.scale;
    }
    return sv;
}

std::string Word::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < letters.size(); ++i) os << letters[i] << (i + 1 < letters.size() ? "." : "");
    return os.str();
}

bool Conjugacy::is_identity() const {
    if (power != 0) return false;
    for (const auto& x : shift)
        if (sgn(x) != 0) return false;
    return true;
}

AffineMap Conjugacy::as_map(const ExpandingMatrix& m) const {
    return AffineMap{m.power(power), shift};
}

AffineMap Conjugacy::inverse_map(const ExpandingMatrix& m) const {
    MatQ lin = m.power(-power);
    VecQ t = lin.apply(shift);
    for (auto& x : t) x = -x;
    return AffineMap{lin, t};
}

AffineSystem::AffineSystem(ExpandingMatrix matrix, std::vector<ScaledVector> digits)
    : matrix_(std::move(matrix)) {
    if (Int(digits.size()) != matrix_.det_abs()) {
        std::ostringstream os;
        os << "system over |det A| = " << matrix_.det_abs() << " needs exactly that many digits, got "
           << digits.size();
        throw Error(ErrorCode::WrongDigitCount, os.str());
    }
    digits_.reserve(digits.size());
    for (auto& d : digits) {
        if (static_cast<int>(d.vec.size()) != matrix_.dim())
            throw Error(ErrorCode::InvalidArgument, "digit dimension mismatch");
        digits_.push_back(canonicalize(std::move(d), matrix_));
    }
    normalized_ = true;
    for (const auto& d : digits_)
        if (d.scale != 0) normalized_ = false;
    if (normalized_ && sgn(vec_inf_norm(digits_[0].vec)) != 0) normalized_ = false;
}

VecQ AffineSystem::digit_value(int j) const {
    const ScaledVector& d = digits_[j - 1];
    if (d.scale == 0) return vec_to_rat(d.vec);
    return matrix_.power(-d.scale).apply(vec_to_rat(d.vec));
}

const VecZ& AffineSystem::digit_int(int j) const {
    const ScaledVector& d = digits_[j - 1];
    if (d.scale != 0)
        throw Error(ErrorCode::InvalidArgument, "digit_int requires a scale-0 digit");
    return d.vec;
}

AffineMap AffineSystem::map(int j) const { return AffineMap{matrix_.inv(), digit_value(j)}; }

AffineSystem build_system(ExpandingMatrix matrix, std::vector<ScaledVector> digits) {
    return AffineSystem(std::move(matrix), std::move(digits));
}

std::pair<AffineSystem, Conjugacy> normalize(const AffineSystem& sys) {
    const ExpandingMatrix& A = sys.matrix();
    const int d = sys.dim();

    if (sys.normalized()) {
        Conjugacy id;
        id.shift.assign(d, Rat(0));
        return {sys, id};
    }

    int m_star = 0;
    for (const auto& dig : sys.digits()) m_star = std::max(m_star, dig.scale);

    // w_j = A^{m*} u_j, integral by choice of m*.
    std::vector<VecZ> w;
    w.reserve(sys.map_count());
    for (int j = 1; j <= sys.map_count(); ++j) {
        MatQ p = A.power(m_star - sys.digits()[j - 1].scale);
        VecQ wj = p.apply(vec_to_rat(sys.digits()[j - 1].vec));
        w.push_back(vec_to_int(wj));
    }

    std::vector<ScaledVector> out;
    out.reserve(w.size());
    for (const auto& wj : w) out.push_back(ScaledVector{0, vec_sub(wj, w[0])});

    // Shift t with (I - A^-1) t = -w_1 makes the first digit zero.
    MatQ i_minus = MatQ::identity(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) i_minus(i, j) -= A.inv()(i, j);
    VecQ rhs = vec_to_rat(w[0]);
    for (auto& x : rhs) x = -x;
    VecQ t = i_minus.inverse().apply(rhs);

    Conjugacy c{m_star, std::move(t)};
    return {AffineSystem(A, std::move(out)), std::move(c)};
}

AffineMap compose_word(const AffineSystem& sys, const Word& w) {
    if (w.letters.empty()) throw Error(ErrorCode::InvalidArgument, "word must be nonempty");
    const ExpandingMatrix& A = sys.matrix();
    const int d = sys.dim();
    VecQ translation(d, Rat(0));
    MatQ pow = MatQ::identity(d);  // A^{1-r}, starting at r = 1
    for (size_t r = 0; r < w.letters.size(); ++r) {
        int j = w.letters[r];
        if (j < 1 || j > sys.map_count())
            throw Error(ErrorCode::InvalidArgument, "word letter out of range");
        translation = vec_add(translation, pow.apply(sys.digit_value(j)));
        pow = pow * A.inv();
    }
    return AffineMap{std::move(pow), std::move(translation)};
}

Word DigitSumSet::word_from_index(uint64_t index) const {
    Word w;
    w.letters.assign(depth_, 1);
    for (int t = depth_ - 1; t >= 0; --t) {
        w.letters[t] = static_cast<int>(index % alphabet_) + 1;
        index /= alphabet_;
    }
    return w;
}

Word DigitSumSet::witness(const VecZ& v) const {
    auto it = values_.find(v);
    if (it == values_.end()) throw Error(ErrorCode::InvalidArgument, "value not present");
    return word_from_index(it->second.first_witness_index);
}

void for_each_digit_sum(const AffineSystem& sys, int depth, uint64_t budget,
                        const std::function<void(const VecZ&, uint64_t)>& fn) {
    if (!sys.normalized())
        throw Error(ErrorCode::InvalidArgument, "digit-sum enumeration requires a normalized system");
    if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");

    const int N = sys.map_count();
    uint64_t total = 1;
    for (int i = 0; i < depth; ++i) {
        if (total > budget / N) {
            std::ostringstream os;
            os << "enumeration of " << N << "^" << depth << " sums exceeds budget " << budget;
            throw BudgetError(ErrorCode::BudgetExceeded, os.str());
        }
        total *= N;
    }

    // Precompute A^t u_j for t < depth (integers, since the system is
    // normalized).
    const MatZ& A = sys.matrix().entries();
    std::vector<std::vector<VecZ>> table(depth, std::vector<VecZ>(N));
    for (int j = 0; j < N; ++j) table[0][j] = sys.digit_int(j + 1);
    for (int t = 1; t < depth; ++t)
        for (int j = 0; j < N; ++j) table[t][j] = A.apply(table[t - 1][j]);

    // Depth-first in lexicographic word order; partial[t] is the sum of the
    // first t letters' contributions.
    std::vector<int> letters(depth, 1);
    std::vector<VecZ> partial(depth + 1);
    partial[0] = VecZ(sys.dim(), Int(0));
    int t = 0;
    uint64_t index = 0;
    while (true) {
        while (t < depth) {
            partial[t + 1] = vec_add(partial[t], table[t][letters[t] - 1]);
            ++t;
        }
        fn(partial[depth], index);
        ++index;
        // Advance odometer.
        while (t > 0 && letters[t - 1] == N) {
            letters[t - 1] = 1;
            --t;
        }
        if (t == 0) break;
        ++letters[t - 1];
        --t;
    }
}

DigitSumSet digit_sums(const AffineSystem& sys, int depth, uint64_t budget) {
    DigitSumSet out;
    out.depth_ = depth;
    out.alphabet_ = sys.map_count();

    for_each_digit_sum(sys, depth, budget, [&](const VecZ& sum, uint64_t index) {
        auto [it, inserted] = out.values_.try_emplace(sum, DigitSumSet::Entry{index, 0});
        it->second.multiplicity += 1;
        if (!inserted && !out.collision_) {
            out.collision_ = std::make_pair(out.word_from_index(it->second.first_witness_index),
                                            out.word_from_index(index));
        }
        out.total_count_ += 1;
    });
    return out;
}

}  // namespace selfaffine::system
