#pragma once

// families.hpp: generators for the benchmark polynomial families, their
// reference roots where known, and the CLI spec grammar
//
//   iterquad:c=0+1i,n=12[,eval=fast|slow][,seed=N]
//   mandel:n=8[,eval=...]        chebyshev:d=256[,eval=...]
//   legendre:d=200               randcircle:d=256,seed=7
//   randdisk:d=256,seed=7        grid:n=8
//
// Random families use a fixed splitmix64 stream (constants in the README) so
// root sets are bit-reproducible across runs and implementations.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polynomial.hpp"

namespace polyrace {

class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

class UnsupportedEvalMode : public SpecError {
public:
    explicit UnsupportedEvalMode(const std::string& msg) : SpecError(msg) {}
};

class DegreeTooLargeForSlowMode : public SpecError {
public:
    explicit DegreeTooLargeForSlowMode(const std::string& msg) : SpecError(msg) {}
};

// splitmix64; the de-facto standard 64-bit mixing generator.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53 mantissa bits
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

enum class FamilyKind {
    iter_quad,
    mandel_center,
    chebyshev,
    legendre,
    random_circle,
    random_disk,
    grid,
};

enum class EvalMode { automatic, fast, slow };

struct FamilySpec {
    FamilyKind kind = FamilyKind::chebyshev;
    long degree = 0;            // polynomial degree (grid: n^2, iterquad: 2^n)
    Complex c{0.0, 1.0};        // iterquad parameter; i matches the headline runs
    EvalMode eval = EvalMode::automatic;
    std::uint64_t seed = 1;
};

struct ReferenceRoots {
    enum class Kind { exact_formula, constructed, unknown };
    Kind kind = Kind::unknown;
    std::optional<std::vector<Complex>> roots;

    bool known() const { return roots.has_value(); }
};

inline const char* family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::iter_quad: return "iterquad";
        case FamilyKind::mandel_center: return "mandel";
        case FamilyKind::chebyshev: return "chebyshev";
        case FamilyKind::legendre: return "legendre";
        case FamilyKind::random_circle: return "randcircle";
        case FamilyKind::random_disk: return "randdisk";
        case FamilyKind::grid: return "grid";
    }
    return "?";
}

inline bool family_fast_capable(FamilyKind k) {
    return k == FamilyKind::iter_quad || k == FamilyKind::mandel_center ||
           k == FamilyKind::chebyshev;
}

namespace detail {

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

inline int log2_exact(long v) {
    int n = 0;
    while ((1L << n) < v) ++n;
    return n;
}

inline std::string format_complex(Complex c) {
    std::ostringstream os;
    os << c.re;
    os << (c.im < 0 ? "-" : "+");
    double ai = std::fabs(c.im);
    os << ai << "i";
    return os.str();
}

}  // namespace detail

// Family identity for report rows; degree/eval/seed travel in their own
// columns, so only the c parameter is part of the name.
inline std::string family_id(const FamilySpec& spec) {
    if (spec.kind == FamilyKind::iter_quad)
        return std::string("iterquad:c=") + detail::format_complex(spec.c);
    return family_name(spec.kind);
}

inline EvalMode resolve_eval_mode(const FamilySpec& spec) {
    if (spec.eval != EvalMode::automatic) return spec.eval;
    return family_fast_capable(spec.kind) ? EvalMode::fast : EvalMode::slow;
}

inline void validate_degree(const FamilySpec& spec) {
    using detail::is_power_of_two;
    if (spec.degree < 1) throw SpecError("degree must be >= 1");
    switch (spec.kind) {
        case FamilyKind::iter_quad:
            if (!is_power_of_two(spec.degree) || spec.degree < 2)
                throw SpecError("iterquad degree must be a power of two >= 2");
            break;
        case FamilyKind::mandel_center:
            if (!is_power_of_two(spec.degree))
                throw SpecError("mandel degree must be a power of two");
            break;
        case FamilyKind::chebyshev:
            if (resolve_eval_mode(spec) == EvalMode::fast && !is_power_of_two(spec.degree))
                throw SpecError("fast chebyshev evaluation needs degree 2^k");
            break;
        case FamilyKind::grid: {
            const long n = std::lround(std::sqrt(static_cast<double>(spec.degree)));
            if (n * n != spec.degree) throw SpecError("grid degree must be a perfect square");
            break;
        }
        default:
            break;
    }
}

// Builds the polynomial and (where known) its reference roots. Deterministic:
// the random stream is seeded from (seed, degree) only.
inline std::pair<PolyRepr, ReferenceRoots> make_family(const FamilySpec& spec) {
    validate_degree(spec);
    const EvalMode mode = resolve_eval_mode(spec);
    if (mode == EvalMode::fast && !family_fast_capable(spec.kind))
        throw UnsupportedEvalMode(std::string(family_name(spec.kind)) +
                                  " has no fast evaluation form");
    const long d = spec.degree;

    auto slow_guard = [&] {
        if (d > PolyRepr::kMaxExpandDegree)
            throw DegreeTooLargeForSlowMode("slow mode materializes coefficients; degree > 2^14");
    };

    switch (spec.kind) {
        case FamilyKind::iter_quad: {
            const int n = detail::log2_exact(d);
            PolyRepr fast = PolyRepr::iter_quad(spec.c, n);
            if (mode == EvalMode::fast) return {std::move(fast), ReferenceRoots{}};
            slow_guard();
            return {fast.expand_to_coefficients(), ReferenceRoots{}};
        }
        case FamilyKind::mandel_center: {
            const int n = detail::log2_exact(d) + 1;
            PolyRepr fast = PolyRepr::mandel_center(n);
            if (mode == EvalMode::fast) return {std::move(fast), ReferenceRoots{}};
            slow_guard();
            return {fast.expand_to_coefficients(), ReferenceRoots{}};
        }
        case FamilyKind::chebyshev: {
            std::vector<Complex> roots(d);
            for (long j = 1; j <= d; ++j)
                roots[j - 1] = {std::cos((2.0 * j - 1.0) * std::numbers::pi / (2.0 * d)), 0.0};
            ReferenceRoots ref{ReferenceRoots::Kind::exact_formula, std::move(roots)};
            if (mode == EvalMode::fast)
                return {PolyRepr::chebyshev_fast(detail::log2_exact(d)), std::move(ref)};
            slow_guard();
            return {PolyRepr::chebyshev_coeff(static_cast<int>(d)), std::move(ref)};
        }
        case FamilyKind::legendre:
            return {PolyRepr::legendre(static_cast<int>(d)), ReferenceRoots{}};
        case FamilyKind::random_circle: {
            SplitMix64 rng{spec.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(d))};
            std::vector<Complex> roots(d);
            for (long j = 0; j < d; ++j) {
                const double phi = 2.0 * std::numbers::pi * rng.unit();
                roots[j] = {std::cos(phi), std::sin(phi)};
            }
            ReferenceRoots ref{ReferenceRoots::Kind::constructed, roots};
            return {PolyRepr::from_roots(std::move(roots)), std::move(ref)};
        }
        case FamilyKind::random_disk: {
            SplitMix64 rng{spec.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(d))};
            std::vector<Complex> roots(d);
            for (long j = 0; j < d; ++j) {
                // product measure on (r, phi), not area-uniform: draws r first
                const double rad = rng.unit();
                const double phi = 2.0 * std::numbers::pi * rng.unit();
                roots[j] = {rad * std::cos(phi), rad * std::sin(phi)};
            }
            ReferenceRoots ref{ReferenceRoots::Kind::constructed, roots};
            return {PolyRepr::from_roots(std::move(roots)), std::move(ref)};
        }
        case FamilyKind::grid: {
            const long n = std::lround(std::sqrt(static_cast<double>(d)));
            const double center = 0.5 * (n + 1);
            const double scale = 2.0 / (n + 1);
            std::vector<Complex> roots;
            roots.reserve(d);
            for (long a = 1; a <= n; ++a)
                for (long b = 1; b <= n; ++b)
                    roots.push_back({(a - center) * scale, (b - center) * scale});
            ReferenceRoots ref{ReferenceRoots::Kind::constructed, roots};
            return {PolyRepr::from_roots(std::move(roots)), std::move(ref)};
        }
    }
    throw SpecError("unknown family kind");
}

// ---------------------------------------------------------------------------
// spec-string grammar

namespace detail {

// complex literals: "1", "-2.5", "i", "-i", "2i", "0+1i", "1.5-0.5i"
inline Complex parse_complex(const std::string& s) {
    if (s.empty()) throw SpecError("empty complex literal");
    const char* p = s.c_str();
    auto read_signed = [&](double& out) -> bool {
        char* end = nullptr;
        // bare "i" / "+i" / "-i" have an implicit 1
        const char* q = p;
        double sign = 1.0;
        if (*q == '+' || *q == '-') {
            if (*q == '-') sign = -1.0;
            ++q;
        }
        if (*q == 'i') {
            out = sign;
            p = q;  // leave 'i' for the caller
            return true;
        }
        out = std::strtod(p, &end);
        if (end == p) return false;
        p = end;
        return true;
    };
    double first = 0.0;
    if (!read_signed(first)) throw SpecError("bad complex literal: " + s);
    if (*p == 'i') {
        ++p;
        if (*p != '\0') throw SpecError("bad complex literal: " + s);
        return {0.0, first};
    }
    if (*p == '\0') return {first, 0.0};
    double second = 0.0;
    if (!read_signed(second) || *p != 'i') throw SpecError("bad complex literal: " + s);
    ++p;
    if (*p != '\0') throw SpecError("bad complex literal: " + s);
    return {first, second};
}

inline long parse_long(const std::string& s) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw SpecError("bad integer: " + s);
    }
    if (pos != s.size()) throw SpecError("bad integer: " + s);
    return v;
}

}  // namespace detail

// Parses "name:key=val,key=val". Degree keys per family: n for iterquad,
// mandel and grid (period / period / grid side), d elsewhere.
inline FamilySpec parse_family_spec(const std::string& text) {
    FamilySpec spec;
    const std::size_t colon = text.find(':');
    const std::string name = text.substr(0, colon);

    if (name == "iterquad") spec.kind = FamilyKind::iter_quad;
    else if (name == "mandel") spec.kind = FamilyKind::mandel_center;
    else if (name == "chebyshev") spec.kind = FamilyKind::chebyshev;
    else if (name == "legendre") spec.kind = FamilyKind::legendre;
    else if (name == "randcircle") spec.kind = FamilyKind::random_circle;
    else if (name == "randdisk") spec.kind = FamilyKind::random_disk;
    else if (name == "grid") spec.kind = FamilyKind::grid;
    else throw SpecError("unknown family: " + name);

    if (colon == std::string::npos) return spec;

    std::string params = text.substr(colon + 1);
    std::istringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw SpecError("expected key=value in: " + item);
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "n") {
            const long n = detail::parse_long(val);
            if (n < 1) throw SpecError("n must be >= 1");
            switch (spec.kind) {
                case FamilyKind::iter_quad: spec.degree = 1L << n; break;
                case FamilyKind::mandel_center: spec.degree = 1L << (n - 1); break;
                case FamilyKind::grid: spec.degree = n * n; break;
                default: throw SpecError("family " + name + " takes d=, not n=");
            }
        } else if (key == "d") {
            switch (spec.kind) {
                case FamilyKind::chebyshev:
                case FamilyKind::legendre:
                case FamilyKind::random_circle:
                case FamilyKind::random_disk:
                    spec.degree = detail::parse_long(val);
                    break;
                default: throw SpecError("family " + name + " takes n=, not d=");
            }
        } else if (key == "c") {
            if (spec.kind != FamilyKind::iter_quad)
                throw SpecError("only iterquad takes a c parameter");
            spec.c = detail::parse_complex(val);
        } else if (key == "eval") {
            if (val == "fast") spec.eval = EvalMode::fast;
            else if (val == "slow") spec.eval = EvalMode::slow;
            else throw SpecError("eval must be fast or slow");
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(detail::parse_long(val));
        } else {
            throw SpecError("unknown parameter: " + key);
        }
    }
    return spec;
}

inline std::string family_grammar_help() {
    return
        "family spec grammar: name[:key=value,...]\n"
        "\n"
        "  iterquad:c=<complex>,n=<period>     degree 2^n, fast O(n) evaluation\n"
        "  mandel:n=<period>                   degree 2^(n-1), fast O(n) evaluation\n"
        "  chebyshev:d=<degree>                fast needs d=2^k; slow any d<=2^14\n"
        "  legendre:d=<degree>                 slow (three-term recurrence)\n"
        "  randcircle:d=<degree>,seed=<N>      random roots on the unit circle\n"
        "  randdisk:d=<degree>,seed=<N>        random roots in the unit disk\n"
        "  grid:n=<side>                       n^2 roots on a rescaled square grid\n"
        "\n"
        "common keys: eval=fast|slow (fast only for iterquad/mandel/chebyshev),\n"
        "             seed=<N> (random families)\n"
        "complex literals: 1, -2.5, i, -i, 2i, 0+1i, 1.5-0.5i\n";
}

}  // namespace polyrace
