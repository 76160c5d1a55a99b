#pragma once

// polynomial.hpp: polynomial representations and evaluation of p, p' and
// p/p'. A polynomial is not assumed to be given by coefficients; it may be a
// root list, an iterated quadratic, a Mandelbrot-center recursion, a
// Chebyshev doubling form, or a Legendre recurrence. Each form evaluates with
// its native scheme: Horner in O(d), root products in O(d), recursions in
// O(log d).
//
// All evaluation runs in a scaled "scientific representation" (mantissa plus
// base-2 exponent): at degree 2^20 a value like p(3) ~ 3^(2^20) overflows any
// double, but the Newton ratio p/p' it feeds is perfectly tame. Exponent
// bookkeeping is free; mantissa arithmetic is counted through the caller's
// OpCounter. Construction and representation changes are not counted (the
// benchmark measures solving, not setup).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "counted.hpp"

namespace polyrace {

class DerivativeZero : public std::domain_error {
public:
    DerivativeZero() : std::domain_error("p'(z) = 0 at evaluation point") {}
};

class DegreeTooLarge : public std::length_error {
public:
    explicit DegreeTooLarge(const std::string& msg) : std::length_error(msg) {}
};

class CoefficientOverflow : public std::overflow_error {
public:
    CoefficientOverflow()
        : std::overflow_error("coefficient magnitude exceeds double range") {}
};

// p(z), p'(z) and the Newton ratio p(z)/p'(z), computed together by one pass
// of the representation's native scheme. value/deriv saturate to inf when the
// true magnitude leaves double range (solvers treat non-finite as escape);
// the ratio is formed on the scaled representation and stays accurate. When
// deriv == 0 the ratio is (inf, inf); callers that need a status use
// PolyRepr::ratio instead.
struct EvalOut {
    Complex value;
    Complex deriv;
    Complex newton_ratio;
};

enum class RatioStatus {
    ok,
    at_root,          // p(z) == 0 exactly; ratio is 0, Newton keeps z fixed
    derivative_zero,  // p'(z) == 0 with p(z) != 0; no Newton step exists
};

struct RatioResult {
    RatioStatus status = RatioStatus::ok;
    Complex ratio;  // valid when status != derivative_zero
};

// p'(z)/p(z), the quantity the Ehrlich-Aberth correction consumes.
struct LogDerivResult {
    RatioStatus status = RatioStatus::ok;  // ok or at_root
    Complex value;
};

namespace detail {

// Mantissa in [2^-256, 2^256] (renormalized lazily) plus a base-2 exponent.
// Mantissa arithmetic is counted; ldexp/ilogb exponent work is free.
struct ScaledComplex {
    Complex mant{0.0, 0.0};
    long exp2 = 0;

    static ScaledComplex from(Complex z) { return {z, 0}; }
    static ScaledComplex one() { return {Complex{1.0, 0.0}, 0}; }

    bool is_zero() const { return mant.is_zero(); }

    void renormalize() {
        const double m = std::max(std::fabs(mant.re), std::fabs(mant.im));
        if (m == 0.0 || !std::isfinite(m)) {
            exp2 = 0;
            return;
        }
        const int e = std::ilogb(m);
        if (e > 256 || e < -256) {
            mant = {std::ldexp(mant.re, -e), std::ldexp(mant.im, -e)};
            exp2 += e;
        }
    }

    // Saturates to inf/0 outside double range.
    Complex to_complex() const {
        const int e = static_cast<int>(std::clamp(exp2, -4200L, 4200L));
        return {std::ldexp(mant.re, e), std::ldexp(mant.im, e)};
    }
};

inline ScaledComplex smul(OpCounter& ctx, const ScaledComplex& a, const ScaledComplex& b) {
    ScaledComplex out{ctx.mul(a.mant, b.mant), a.exp2 + b.exp2};
    out.renormalize();
    return out;
}

inline ScaledComplex smul_real(OpCounter& ctx, const ScaledComplex& a, double s) {
    ScaledComplex out{ctx.mul_real(a.mant, s), a.exp2};
    out.renormalize();
    return out;
}

inline ScaledComplex sadd(OpCounter& ctx, const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // align on the larger exponent; the shifted mantissa underflows to zero
    // when the terms differ by hundreds of binades, which is the right answer
    const ScaledComplex& hi = (a.exp2 >= b.exp2) ? a : b;
    const ScaledComplex& lo = (a.exp2 >= b.exp2) ? b : a;
    const long shift = lo.exp2 - hi.exp2;
    const int sh = static_cast<int>(std::clamp(shift, -4200L, 0L));
    const Complex lom{std::ldexp(lo.mant.re, sh), std::ldexp(lo.mant.im, sh)};
    ScaledComplex out{ctx.add(hi.mant, lom), hi.exp2};
    out.renormalize();
    return out;
}

inline ScaledComplex ssub(OpCounter& ctx, const ScaledComplex& a, const ScaledComplex& b) {
    return sadd(ctx, a, ScaledComplex{neg(b.mant), b.exp2});
}

inline ScaledComplex sdiv(OpCounter& ctx, const ScaledComplex& a, const ScaledComplex& b) {
    ScaledComplex out{ctx.div(a.mant, b.mant), a.exp2 - b.exp2};
    out.renormalize();
    return out;
}

struct ScaledEval {
    ScaledComplex value;
    ScaledComplex deriv;
};

}  // namespace detail

class PolyRepr {
public:
    // Coefficient list, lowest degree first. Families that expand products or
    // monic recursions keep the leading coefficient at exactly 1; classical
    // normalizations (Chebyshev, Legendre) keep their textbook leading
    // coefficient so values agree with the recursive forms.
    struct Coefficients {
        std::vector<Complex> coeffs;
    };
    struct Roots {
        std::vector<Complex> roots;
    };
    // P(z) = p_c^(n)(z) - z with p_c(z) = z^2 + c; degree 2^n.
    struct IterQuad {
        Complex c;
        int n = 1;
    };
    // q_n(c) with q_0 = 0, q_{k+1} = q_k^2 + c; degree 2^(n-1).
    struct MandelCenter {
        int n = 1;
    };
    // T_{2^k} by the doubling T_{2m} = 2 T_m^2 - 1.
    struct ChebyshevFast {
        int k = 0;
    };
    // T_d in coefficient form (any d), built by the three-term recurrence.
    struct ChebyshevCoeff {
        int d = 1;
        std::vector<Complex> coeffs;
    };
    // P_d by (m+1) P_{m+1} = (2m+1) z P_m - m P_{m-1}.
    struct LegendreRec {
        int d = 1;
    };

    using Variant = std::variant<Coefficients, Roots, IterQuad, MandelCenter,
                                 ChebyshevFast, ChebyshevCoeff, LegendreRec>;

    static PolyRepr coefficients(std::vector<Complex> coeffs) {
        if (coeffs.size() < 2) throw std::invalid_argument("degree must be >= 1");
        if (coeffs.back().is_zero())
            throw std::invalid_argument("leading coefficient must be nonzero");
        return PolyRepr(Coefficients{std::move(coeffs)});
    }
    static PolyRepr from_roots(std::vector<Complex> roots) {
        if (roots.empty()) throw std::invalid_argument("root list must be nonempty");
        return PolyRepr(Roots{std::move(roots)});
    }
    static PolyRepr iter_quad(Complex c, int n) {
        if (n < 1 || n > 62) throw std::invalid_argument("iterquad period out of range");
        return PolyRepr(IterQuad{c, n});
    }
    static PolyRepr mandel_center(int n) {
        if (n < 1 || n > 62) throw std::invalid_argument("mandel period out of range");
        return PolyRepr(MandelCenter{n});
    }
    static PolyRepr chebyshev_fast(int k) {
        if (k < 0 || k > 62) throw std::invalid_argument("chebyshev doubling count out of range");
        return PolyRepr(ChebyshevFast{k});
    }
    static PolyRepr chebyshev_coeff(int d);
    static PolyRepr legendre(int d) {
        if (d < 1) throw std::invalid_argument("legendre degree must be >= 1");
        return PolyRepr(LegendreRec{d});
    }

    long degree() const {
        return std::visit(
            [](const auto& r) -> long {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Coefficients>)
                    return static_cast<long>(r.coeffs.size()) - 1;
                else if constexpr (std::is_same_v<T, Roots>)
                    return static_cast<long>(r.roots.size());
                else if constexpr (std::is_same_v<T, IterQuad>)
                    return 1L << r.n;
                else if constexpr (std::is_same_v<T, MandelCenter>)
                    return 1L << (r.n - 1);
                else if constexpr (std::is_same_v<T, ChebyshevFast>)
                    return 1L << r.k;
                else if constexpr (std::is_same_v<T, ChebyshevCoeff>)
                    return r.d;
                else
                    return r.d;
            },
            repr_);
    }

    const Variant& repr() const { return repr_; }
    bool is_root_form() const { return std::holds_alternative<Roots>(repr_); }

    EvalOut evaluate(OpCounter& ctx, Complex z) const;

    // p(z)/p'(z) with an explicit status. For the root form this uses only the
    // reciprocal sum (Sum 1/(z - xi))^{-1} and skips the product entirely.
    RatioResult ratio(OpCounter& ctx, Complex z) const;

    // p'(z)/p(z). For the root form this is the reciprocal sum itself.
    LogDerivResult log_deriv(OpCounter& ctx, Complex z) const;

    // Contract form of ratio(): throws DerivativeZero instead of reporting a
    // status. Solvers use ratio() and handle the status in-band.
    Complex newton_ratio(OpCounter& ctx, Complex z) const {
        RatioResult r = ratio(ctx, z);
        if (r.status == RatioStatus::derivative_zero) throw DerivativeZero();
        return r.ratio;
    }

    // Same polynomial as an explicit coefficient list. Guarded: expansion of
    // the recursive forms squares coefficient vectors, which is O(d^2) work
    // and can overflow double range (iterated quadratics grow doubly
    // exponentially in n); both conditions are surfaced, never clamped.
    PolyRepr expand_to_coefficients() const;

    static constexpr long kMaxExpandDegree = 1L << 14;

private:
    explicit PolyRepr(Variant v) : repr_(std::move(v)) {}

    detail::ScaledEval eval_scaled(OpCounter& ctx, Complex z) const;

    struct RootFormEval {
        detail::ScaledComplex value;
        detail::ScaledComplex deriv;
        Complex recip_sum;
        int zero_factors = 0;
    };
    RootFormEval eval_root_form(OpCounter& ctx, const Roots& r, Complex z) const;

    Variant repr_;
};

inline PolyRepr::RootFormEval PolyRepr::eval_root_form(OpCounter& ctx, const Roots& r,
                                                       Complex z) const {
    using detail::ScaledComplex;
    RootFormEval out;
    ScaledComplex prod = ScaledComplex::one();  // product over nonzero factors
    Complex sum{0.0, 0.0};
    const Complex one{1.0, 0.0};
    for (const Complex& xi : r.roots) {
        const Complex w = ctx.sub(z, xi);
        if (w.is_zero()) {
            ++out.zero_factors;
            continue;
        }
        prod = detail::smul(ctx, prod, ScaledComplex::from(w));
        sum = ctx.add(sum, ctx.div(one, w));
    }
    out.recip_sum = sum;
    if (out.zero_factors == 0) {
        out.value = prod;
        // p' = p * Sum 1/(z - xi)
        out.deriv = detail::smul(ctx, prod, ScaledComplex::from(sum));
    } else if (out.zero_factors == 1) {
        // z hit a root exactly: p = 0 and p' is the product of the others
        out.value = {};
        out.deriv = prod;
    } else {
        // multiple root hit exactly: p and p' both vanish
        out.value = {};
        out.deriv = {};
    }
    return out;
}

inline detail::ScaledEval PolyRepr::eval_scaled(OpCounter& ctx, Complex z) const {
    using detail::sadd;
    using detail::ScaledComplex;
    using detail::ScaledEval;
    using detail::sdiv;
    using detail::smul;
    using detail::smul_real;
    using detail::ssub;
    return std::visit(
        [&](const auto& r) -> ScaledEval {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Coefficients> ||
                          std::is_same_v<T, ChebyshevCoeff>) {
                const std::vector<Complex>& cs = r.coeffs;
                const std::size_t d = cs.size() - 1;
                const ScaledComplex sz = ScaledComplex::from(z);
                ScaledComplex v = ScaledComplex::from(cs[d]);
                ScaledComplex dv{};
                for (std::size_t i = d; i-- > 0;) {
                    dv = sadd(ctx, smul(ctx, dv, sz), v);
                    v = sadd(ctx, smul(ctx, v, sz), ScaledComplex::from(cs[i]));
                }
                return {v, dv};
            } else if constexpr (std::is_same_v<T, Roots>) {
                const RootFormEval re = eval_root_form(ctx, r, z);
                return {re.value, re.deriv};
            } else if constexpr (std::is_same_v<T, IterQuad>) {
                // w <- w^2 + c with chain-rule derivative D <- 2 w D
                const ScaledComplex sc = ScaledComplex::from(r.c);
                ScaledComplex w = ScaledComplex::from(z);
                ScaledComplex dw = ScaledComplex::one();
                for (int i = 0; i < r.n; ++i) {
                    dw = smul_real(ctx, smul(ctx, w, dw), 2.0);
                    w = sadd(ctx, smul(ctx, w, w), sc);
                }
                return {ssub(ctx, w, ScaledComplex::from(z)),
                        ssub(ctx, dw, ScaledComplex::one())};
            } else if constexpr (std::is_same_v<T, MandelCenter>) {
                // q <- q^2 + c, q' <- 2 q q' + 1, from q = q' = 0; the
                // evaluation variable is the parameter c
                const ScaledComplex sc = ScaledComplex::from(z);
                ScaledComplex q{};
                ScaledComplex dq{};
                for (int i = 0; i < r.n; ++i) {
                    dq = sadd(ctx, smul_real(ctx, smul(ctx, q, dq), 2.0), ScaledComplex::one());
                    q = sadd(ctx, smul(ctx, q, q), sc);
                }
                return {q, dq};
            } else if constexpr (std::is_same_v<T, ChebyshevFast>) {
                // T_{2m} = 2 T_m^2 - 1, T'_{2m} = 4 T_m T'_m, from T_1 = z
                ScaledComplex t = ScaledComplex::from(z);
                ScaledComplex dt = ScaledComplex::one();
                for (int i = 0; i < r.k; ++i) {
                    dt = smul_real(ctx, smul(ctx, t, dt), 4.0);
                    t = ssub(ctx, smul_real(ctx, smul(ctx, t, t), 2.0), ScaledComplex::one());
                }
                return {t, dt};
            } else {  // LegendreRec
                const ScaledComplex sz = ScaledComplex::from(z);
                ScaledComplex pm1 = ScaledComplex::one();  // P_0
                ScaledComplex pm = sz;                     // P_1
                if (r.d == 1) return {pm, pm1};
                for (int m = 1; m < r.d; ++m) {
                    // scalar prefactors come from loop indices and are free
                    const double a = (2.0 * m + 1.0) / (m + 1.0);
                    const double b = static_cast<double>(m) / (m + 1.0);
                    const ScaledComplex next =
                        ssub(ctx, smul_real(ctx, smul(ctx, sz, pm), a), smul_real(ctx, pm1, b));
                    pm1 = pm;
                    pm = next;
                }
                // endpoint identity (z^2 - 1) P'_d = d (z P_d - P_{d-1}),
                // with a recurrence fallback near z = +-1
                const Complex w = ctx.sub_real(ctx.mul(z, z), 1.0);
                if (ctx.abs(w) >= 1e-12) {
                    const ScaledComplex u = smul_real(
                        ctx, ssub(ctx, smul(ctx, sz, pm), pm1), static_cast<double>(r.d));
                    return {pm, sdiv(ctx, u, ScaledComplex::from(w))};
                }
                ScaledComplex q = ScaledComplex::one(), dq{};  // P_0, P'_0
                ScaledComplex p = sz, dp = ScaledComplex::one();
                for (int m = 1; m < r.d; ++m) {
                    const double a = (2.0 * m + 1.0) / (m + 1.0);
                    const double b = static_cast<double>(m) / (m + 1.0);
                    const ScaledComplex next =
                        ssub(ctx, smul_real(ctx, smul(ctx, sz, p), a), smul_real(ctx, q, b));
                    const ScaledComplex dnext =
                        ssub(ctx, smul_real(ctx, sadd(ctx, p, smul(ctx, sz, dp)), a),
                             smul_real(ctx, dq, b));
                    q = p;
                    dq = dp;
                    p = next;
                    dp = dnext;
                }
                return {p, dp};
            }
        },
        repr_);
}

inline EvalOut PolyRepr::evaluate(OpCounter& ctx, Complex z) const {
    if (const auto* rf = std::get_if<Roots>(&repr_)) {
        const RootFormEval re = eval_root_form(ctx, *rf, z);
        EvalOut out;
        out.value = re.value.to_complex();
        out.deriv = re.deriv.to_complex();
        const Complex one{1.0, 0.0};
        if (re.zero_factors > 0) {
            out.newton_ratio = {0.0, 0.0};
        } else if (re.recip_sum.is_zero()) {
            constexpr double inf = std::numeric_limits<double>::infinity();
            out.newton_ratio = {inf, inf};
        } else {
            out.newton_ratio = ctx.div(one, re.recip_sum);
        }
        return out;
    }
    const detail::ScaledEval se = eval_scaled(ctx, z);
    EvalOut out;
    out.value = se.value.to_complex();
    out.deriv = se.deriv.to_complex();
    if (se.value.is_zero()) {
        out.newton_ratio = {0.0, 0.0};
    } else if (se.deriv.is_zero()) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        out.newton_ratio = {inf, inf};
    } else {
        out.newton_ratio = detail::sdiv(ctx, se.value, se.deriv).to_complex();
    }
    return out;
}

inline RatioResult PolyRepr::ratio(OpCounter& ctx, Complex z) const {
    if (const auto* rf = std::get_if<Roots>(&repr_)) {
        // only the reciprocal sum is needed: p/p' = (Sum 1/(z - xi))^{-1}
        Complex sum{0.0, 0.0};
        const Complex one{1.0, 0.0};
        for (const Complex& xi : rf->roots) {
            const Complex w = ctx.sub(z, xi);
            if (w.is_zero()) return {RatioStatus::at_root, {0.0, 0.0}};
            sum = ctx.add(sum, ctx.div(one, w));
        }
        if (sum.is_zero()) return {RatioStatus::derivative_zero, {}};
        return {RatioStatus::ok, ctx.div(one, sum)};
    }
    const detail::ScaledEval se = eval_scaled(ctx, z);
    if (se.value.is_zero()) return {RatioStatus::at_root, {0.0, 0.0}};
    if (se.deriv.is_zero()) return {RatioStatus::derivative_zero, {}};
    return {RatioStatus::ok, detail::sdiv(ctx, se.value, se.deriv).to_complex()};
}

inline LogDerivResult PolyRepr::log_deriv(OpCounter& ctx, Complex z) const {
    if (const auto* rf = std::get_if<Roots>(&repr_)) {
        Complex sum{0.0, 0.0};
        const Complex one{1.0, 0.0};
        for (const Complex& xi : rf->roots) {
            const Complex w = ctx.sub(z, xi);
            if (w.is_zero()) return {RatioStatus::at_root, {0.0, 0.0}};
            sum = ctx.add(sum, ctx.div(one, w));
        }
        return {RatioStatus::ok, sum};
    }
    const detail::ScaledEval se = eval_scaled(ctx, z);
    if (se.value.is_zero()) return {RatioStatus::at_root, {0.0, 0.0}};
    return {RatioStatus::ok, detail::sdiv(ctx, se.deriv, se.value).to_complex()};
}

namespace detail {

// Expansion helpers run on plain std::complex: representation changes happen
// before a solve starts and are not part of the counted run.
using StdPoly = std::vector<std::complex<double>>;

inline void check_finite(const StdPoly& p) {
    for (const auto& c : p)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw CoefficientOverflow();
}

inline StdPoly poly_square(const StdPoly& p) {
    StdPoly out(2 * p.size() - 1, {0.0, 0.0});
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) out[i + j] += p[i] * p[j];
    return out;
}

// Rolls T_{m+1} = 2 z T_m - T_{m-1} up to T_d.
inline StdPoly chebyshev_coeffs(int d) {
    StdPoly tm1 = {{1.0, 0.0}};                 // T_0
    StdPoly tm = {{0.0, 0.0}, {1.0, 0.0}};      // T_1
    if (d == 0) return tm1;
    for (int m = 1; m < d; ++m) {
        StdPoly next(m + 2, {0.0, 0.0});
        for (std::size_t i = 0; i < tm.size(); ++i) next[i + 1] = 2.0 * tm[i];
        for (std::size_t i = 0; i < tm1.size(); ++i) next[i] -= tm1[i];
        tm1 = std::move(tm);
        tm = std::move(next);
    }
    check_finite(tm);
    return tm;
}

inline StdPoly legendre_coeffs(int d) {
    StdPoly pm1 = {{1.0, 0.0}};
    StdPoly pm = {{0.0, 0.0}, {1.0, 0.0}};
    if (d == 0) return pm1;
    for (int m = 1; m < d; ++m) {
        const double a = (2.0 * m + 1.0) / (m + 1.0);
        const double b = static_cast<double>(m) / (m + 1.0);
        StdPoly next(m + 2, {0.0, 0.0});
        for (std::size_t i = 0; i < pm.size(); ++i) next[i + 1] = a * pm[i];
        for (std::size_t i = 0; i < pm1.size(); ++i) next[i] -= b * pm1[i];
        pm1 = std::move(pm);
        pm = std::move(next);
    }
    check_finite(pm);
    return pm;
}

inline std::vector<Complex> to_counted(const StdPoly& p) {
    std::vector<Complex> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = Complex::from_std(p[i]);
    return out;
}

}  // namespace detail

inline PolyRepr PolyRepr::chebyshev_coeff(int d) {
    if (d < 1) throw std::invalid_argument("chebyshev degree must be >= 1");
    if (d > kMaxExpandDegree) throw DegreeTooLarge("chebyshev coefficient form limited to 2^14");
    return PolyRepr(ChebyshevCoeff{d, detail::to_counted(detail::chebyshev_coeffs(d))});
}

inline PolyRepr PolyRepr::expand_to_coefficients() const {
    using namespace detail;
    if (degree() > kMaxExpandDegree)
        throw DegreeTooLarge("expansion guarded to degree <= 2^14");
    return std::visit(
        [&](const auto& r) -> PolyRepr {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Coefficients>) {
                return PolyRepr(Coefficients{r.coeffs});
            } else if constexpr (std::is_same_v<T, ChebyshevCoeff>) {
                return PolyRepr(Coefficients{r.coeffs});
            } else if constexpr (std::is_same_v<T, Roots>) {
                StdPoly p = {{1.0, 0.0}};
                for (const Complex& xi : r.roots) {
                    // multiply by (z - xi)
                    StdPoly next(p.size() + 1, {0.0, 0.0});
                    const std::complex<double> m = -xi.to_std();
                    for (std::size_t i = 0; i < p.size(); ++i) {
                        next[i + 1] += p[i];
                        next[i] += p[i] * m;
                    }
                    p = std::move(next);
                }
                check_finite(p);
                return PolyRepr(Coefficients{to_counted(p)});
            } else if constexpr (std::is_same_v<T, IterQuad>) {
                StdPoly p = {{0.0, 0.0}, {1.0, 0.0}};  // z
                for (int i = 0; i < r.n; ++i) {
                    p = poly_square(p);
                    p[0] += r.c.to_std();
                    check_finite(p);
                }
                p[1] -= 1.0;  // subtract z
                return PolyRepr(Coefficients{to_counted(p)});
            } else if constexpr (std::is_same_v<T, MandelCenter>) {
                StdPoly q = {{0.0, 0.0}};  // q_0 = 0
                for (int i = 0; i < r.n; ++i) {
                    q = poly_square(q);
                    if (q.size() < 2) q.resize(2, {0.0, 0.0});
                    q[1] += 1.0;  // + c
                    check_finite(q);
                }
                while (q.size() > 1 && q.back() == std::complex<double>{0.0, 0.0}) q.pop_back();
                return PolyRepr(Coefficients{to_counted(q)});
            } else if constexpr (std::is_same_v<T, ChebyshevFast>) {
                return PolyRepr(Coefficients{to_counted(chebyshev_coeffs(1 << r.k))});
            } else {  // LegendreRec
                return PolyRepr(Coefficients{to_counted(legendre_coeffs(r.d))});
            }
        },
        repr_);
}

}  // namespace polyrace
