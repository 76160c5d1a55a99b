#pragma once

// counted.hpp: complex scalars whose arithmetic is tallied by an explicit,
// run-scoped counter. Every solver in this library routes its arithmetic
// through an OpCounter so that benchmark results are exact operation counts,
// not timings.
//
// Counting convention (one line, applied everywhere):
//   real_adds  counts additions and subtractions of doubles;
//   real_muls  counts multiplications, divisions and square roots of doubles.
// Comparisons, sign flips, and exponent manipulation (ldexp/frexp) are free.
//
// Fixed costs of the primitives:
//   add/sub            2 real_adds
//   add_real/sub_real  1 real_add
//   mul                4 real_muls + 2 real_adds   (schoolbook, not Karatsuba)
//   mul_real           2 real_muls
//   div                12 real_muls + 3 real_adds  (scaling guard, see below)
//   abs                4 real_muls + 1 real_add    (0 for exact zero input)
//
// Schoolbook multiplication is the baseline on purpose: comparisons of the
// two methods are made through slopes on log-log plots, which are invariant
// under a constant factor in the per-operation cost.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace polyrace {

struct Complex {
    double re = 0.0;
    double im = 0.0;

    constexpr Complex() = default;
    constexpr Complex(double r, double i) : re(r), im(i) {}
    explicit constexpr Complex(double r) : re(r), im(0.0) {}

    // Exact bitwise equality on components. Tests that need tolerances use
    // approx helpers instead.
    friend constexpr bool operator==(Complex a, Complex b) {
        return a.re == b.re && a.im == b.im;
    }
    friend constexpr bool operator!=(Complex a, Complex b) { return !(a == b); }

    bool is_zero() const { return re == 0.0 && im == 0.0; }
    bool finite() const { return std::isfinite(re) && std::isfinite(im); }

    std::complex<double> to_std() const { return {re, im}; }
    static Complex from_std(std::complex<double> z) { return {z.real(), z.imag()}; }
};

// Sign flips carry no arithmetic cost.
inline constexpr Complex neg(Complex a) { return {-a.re, -a.im}; }
inline constexpr Complex conj(Complex a) { return {a.re, -a.im}; }

class DivisionByZero : public std::domain_error {
public:
    DivisionByZero() : std::domain_error("complex division by zero") {}
};

// Snapshot of a counter, also used when merging per-orbit sub-counters.
struct OpSnapshot {
    std::uint64_t real_adds = 0;
    std::uint64_t real_muls = 0;
    std::uint64_t total() const { return real_adds + real_muls; }

    friend constexpr bool operator==(const OpSnapshot&, const OpSnapshot&) = default;
    OpSnapshot operator-(const OpSnapshot& o) const {
        return {real_adds - o.real_adds, real_muls - o.real_muls};
    }
};

// Run-scoped tally of real additions and multiplications. One counter per
// solver run; never global. All counted arithmetic goes through the member
// operations below, so the tally is exact by construction.
class OpCounter {
public:
    std::uint64_t real_adds() const { return adds_; }
    std::uint64_t real_muls() const { return muls_; }
    std::uint64_t total() const { return adds_ + muls_; }

    OpSnapshot snapshot() const { return {adds_, muls_}; }
    void reset() { adds_ = 0; muls_ = 0; }

    // Merge of an independent sub-counter (data-parallel contract).
    OpCounter& operator+=(const OpCounter& other) {
        adds_ += other.adds_;
        muls_ += other.muls_;
        return *this;
    }
    OpCounter& operator+=(const OpSnapshot& s) {
        adds_ += s.real_adds;
        muls_ += s.real_muls;
        return *this;
    }

    Complex add(Complex a, Complex b) {
        adds_ += 2;
        return {a.re + b.re, a.im + b.im};
    }

    Complex sub(Complex a, Complex b) {
        adds_ += 2;
        return {a.re - b.re, a.im - b.im};
    }

    Complex add_real(Complex a, double s) {
        adds_ += 1;
        return {a.re + s, a.im};
    }

    Complex sub_real(Complex a, double s) {
        adds_ += 1;
        return {a.re - s, a.im};
    }

    Complex mul(Complex a, Complex b) {
        muls_ += 4;
        adds_ += 2;
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }

    Complex mul_real(Complex a, double s) {
        muls_ += 2;
        return {a.re * s, a.im * s};
    }

    // Division with a scaling guard: numerator and denominator are divided by
    // max(|re b|, |im b|) before the conjugate formula, so the intermediate
    // squares cannot overflow even for b near the extremes of double range.
    Complex div(Complex a, Complex b) {
        if (b.is_zero()) throw DivisionByZero();
        const double s = std::max(std::fabs(b.re), std::fabs(b.im));
        const double ar = a.re / s, ai = a.im / s;
        const double br = b.re / s, bi = b.im / s;
        const double den = br * br + bi * bi;  // in [1, 2]
        muls_ += 12;  // 6 divisions + 6 multiplications
        adds_ += 3;
        return {(ar * br + ai * bi) / den, (ai * br - ar * bi) / den};
    }

    // |a| with a hypot-style scaling guard. Counted: magnitude tests are part
    // of the solve path (stopping criteria), so their cost is part of the run.
    double abs(Complex a) {
        double ax = std::fabs(a.re), ay = std::fabs(a.im);
        if (ax < ay) std::swap(ax, ay);
        if (ax == 0.0) return 0.0;
        const double t = ay / ax;
        muls_ += 4;  // 1 division, t*t, sqrt, final scale
        adds_ += 1;
        return ax * std::sqrt(1.0 + t * t);
    }

private:
    std::uint64_t adds_ = 0;
    std::uint64_t muls_ = 0;
};

}  // namespace polyrace
