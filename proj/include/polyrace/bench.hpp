#pragma once

// bench.hpp: the experiment engine behind the CLI. Runs method x family x
// degree sweeps with one fresh counter per run, verifies the roots (against
// references where they exist, a posteriori otherwise), emits CSV rows in a
// fixed schema, fits log-log slopes, and provides the equal-budget race and
// the convex-hull starting-point experiment.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "aberth.hpp"
#include "families.hpp"
#include "match.hpp"
#include "newton.hpp"

namespace polyrace {

class InsufficientData : public std::runtime_error {
public:
    InsufficientData() : std::runtime_error("need at least 3 matched rows for a fit") {}
};

enum class Method { newton, aberth, hybrid, race };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::newton: return "newton";
        case Method::aberth: return "aberth";
        case Method::hybrid: return "hybrid";
        case Method::race: return "race";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "newton") return Method::newton;
    if (s == "aberth") return Method::aberth;
    if (s == "hybrid") return Method::hybrid;
    if (s == "race") return Method::race;
    throw SpecError("unknown method: " + s);
}

struct SolveOptions {
    double eps = 1e-13;
    double delta = 1e-8;
    std::optional<NewtonConfig> newton;  // full override; eps/delta fill defaults otherwise
    std::optional<AberthConfig> aberth;
    std::uint64_t race_budget = 0;  // 0: about one EA sweep worth of ops
    bool measure_wall = false;      // wall_ms stays 0 otherwise, CSV stays byte-stable
};

// One CSV row. `missed` and `note` are derived/diagnostic and not part of the
// schema; equality compares the thirteen emitted columns.
struct SolveReport {
    std::string family;
    long degree = 0;
    std::string method;
    std::string eval_mode;
    std::uint64_t seed = 0;
    std::uint64_t real_adds = 0;
    std::uint64_t real_muls = 0;
    long iters = 0;
    long roots_found = 0;
    long expected = 0;
    double max_residual = 0.0;
    bool matched = false;
    long wall_ms = 0;

    long missed = 0;
    std::string note;

    friend bool operator==(const SolveReport& a, const SolveReport& b) {
        return a.family == b.family && a.degree == b.degree && a.method == b.method &&
               a.eval_mode == b.eval_mode && a.seed == b.seed && a.real_adds == b.real_adds &&
               a.real_muls == b.real_muls && a.iters == b.iters &&
               a.roots_found == b.roots_found && a.expected == b.expected &&
               a.max_residual == b.max_residual && a.matched == b.matched &&
               a.wall_ms == b.wall_ms;
    }
};

namespace detail {

inline NewtonConfig newton_config(const SolveOptions& o) {
    if (o.newton) return *o.newton;
    NewtonConfig cfg;
    cfg.conv_eps = o.eps;
    cfg.sep_delta = o.delta;
    return cfg;
}

inline AberthConfig aberth_config(const SolveOptions& o) {
    if (o.aberth) return *o.aberth;
    AberthConfig cfg;
    cfg.eps = o.eps;
    cfg.delta = o.delta;
    return cfg;
}

// Greedy dedup with radius 2*delta, first point wins; the survivors are
// pairwise separated by at least 2*delta by construction.
inline std::vector<Complex> cluster_points(std::span<const Complex> pts, double delta) {
    std::vector<Complex> reps;
    const double radius = 2.0 * delta;
    for (const Complex& p : pts) {
        bool joined = false;
        for (const Complex& r : reps) {
            if (std::hypot(p.re - r.re, p.im - r.im) < radius) {
                joined = true;
                break;
            }
        }
        if (!joined) reps.push_back(p);
    }
    return reps;
}

// Residuals are verification, not solving: they run on a scratch counter.
inline double max_residual_at(const PolyRepr& poly, std::span<const Complex> pts) {
    OpCounter scratch;
    double worst = 0.0;
    for (const Complex& p : pts) {
        const EvalOut ev = poly.evaluate(scratch, p);
        const double r = scratch.abs(ev.value);
        if (!(r <= worst)) worst = r;
    }
    return worst;
}

struct Verification {
    bool matched = false;
    long roots_found = 0;
    double max_residual = 0.0;
};

// With references: delta-close up to permutation. Without: a posteriori --
// exactly d approximations pairwise separated by > 2*delta, all with
// residual below 1e-6.
inline Verification verify_roots(const PolyRepr& poly, std::span<const Complex> approx,
                                 const ReferenceRoots& refs, double delta) {
    Verification v;
    if (refs.known()) {
        const MatchResult m = match_roots(approx, *refs.roots, delta);
        v.matched = m.complete();
        v.roots_found = static_cast<long>(m.pairs.size());
        v.max_residual = max_residual_at(poly, approx);
        return v;
    }
    const std::vector<Complex> reps = cluster_points(approx, delta);
    v.roots_found = static_cast<long>(reps.size());
    v.max_residual = max_residual_at(poly, reps);
    v.matched = v.roots_found == poly.degree() && v.max_residual < 1e-6;
    return v;
}

inline std::vector<Complex> root_hit_centers(const std::vector<RootHit>& hits) {
    std::vector<Complex> out;
    out.reserve(hits.size());
    for (const RootHit& h : hits) out.push_back(h.z);
    return out;
}

}  // namespace detail

struct RaceOutcome {
    enum class Winner { none, newton, aberth };
    Winner winner = Winner::none;
    OpSnapshot newton_ops;
    OpSnapshot aberth_ops;
    long winner_iters = 0;
    std::vector<Complex> approx;  // winner's roots; empty when both failed
};

// Runs both methods with interleaved op-budget slices and stops at the first
// verified success. Granularity is one Newton lockstep step vs one EA sweep;
// a slice ends once its engine has spent the budget, so slight overshoots
// carry into the next slice.
inline RaceOutcome race(const PolyRepr& poly, const ReferenceRoots& refs,
                        const NewtonConfig& ncfg, const AberthConfig& acfg, double delta,
                        std::uint64_t budget_step) {
    const long d = poly.degree();
    if (budget_step == 0)
        budget_step = static_cast<std::uint64_t>(32 * d * d + 512 * d);

    OpCounter nctx, actx;
    NewtonEngine newton(nctx, poly, ncfg);
    AberthEngine aberth(actx, poly, acfg);
    RaceOutcome out;

    std::uint64_t quota_n = 0, quota_a = 0;
    bool n_done = false, a_done = false;
    while (true) {
        if (!n_done) {
            quota_n += budget_step;
            while (nctx.total() < quota_n && newton.step()) {
            }
            if (newton.finished()) {
                n_done = true;
                const NewtonReport rep = newton.report();
                const auto centers = detail::root_hit_centers(rep.roots);
                if (detail::verify_roots(poly, centers, refs, delta).matched) {
                    out.winner = RaceOutcome::Winner::newton;
                    out.winner_iters = rep.global_steps;
                    out.approx = centers;
                }
            }
            if (out.winner != RaceOutcome::Winner::none) break;
        }
        if (!a_done) {
            quota_a += budget_step;
            while (actx.total() < quota_a && aberth.sweep_once()) {
            }
            if (aberth.finished()) {
                a_done = true;
                if (aberth.success() &&
                    detail::verify_roots(poly, aberth.state().z, refs, delta).matched) {
                    out.winner = RaceOutcome::Winner::aberth;
                    out.winner_iters = aberth.sweeps_used();
                    out.approx = aberth.state().z;
                }
            }
            if (out.winner != RaceOutcome::Winner::none) break;
        }
        if (n_done && a_done) break;  // both finished without a verified win
    }
    out.newton_ops = nctx.snapshot();
    out.aberth_ops = actx.snapshot();
    return out;
}

// Solves one (family, degree, method) cell and verifies the result.
inline SolveReport run_solve(const FamilySpec& spec, Method method, const SolveOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [poly, refs] = make_family(spec);

    SolveReport row;
    row.family = family_id(spec);
    row.degree = spec.degree;
    row.method = method_name(method);
    row.eval_mode = resolve_eval_mode(spec) == EvalMode::fast ? "fast" : "slow";
    row.seed = spec.seed;
    row.expected = poly.degree();

    OpCounter ctx;
    std::vector<Complex> approx;
    switch (method) {
        case Method::newton: {
            const NewtonReport rep = run_iterated_refinement(ctx, poly, detail::newton_config(opts));
            approx = detail::root_hit_centers(rep.roots);
            row.iters = rep.global_steps;
            if (rep.budget_exceeded) row.note = "orbit_budget";
            break;
        }
        case Method::aberth: {
            const AberthReport rep = run_aberth(ctx, poly, detail::aberth_config(opts));
            approx = rep.roots;
            row.iters = rep.sweeps;
            if (rep.max_sweeps_exceeded) row.note = "max_sweeps";
            break;
        }
        case Method::hybrid: {
            const NewtonReport nrep =
                run_iterated_refinement(ctx, poly, detail::newton_config(opts));
            const auto centers = detail::root_hit_centers(nrep.roots);
            if (nrep.missed > 0) {
                const AberthReport arep =
                    ea_postprocess(ctx, poly, centers, detail::aberth_config(opts));
                approx = arep.roots;
                row.iters = nrep.global_steps + arep.sweeps;
                row.note = "postprocessed";
            } else {
                approx = centers;
                row.iters = nrep.global_steps;
            }
            break;
        }
        case Method::race: {
            const RaceOutcome rc = race(poly, refs, detail::newton_config(opts),
                                        detail::aberth_config(opts), opts.delta,
                                        opts.race_budget);
            approx = rc.approx;
            row.iters = rc.winner_iters;
            ctx += rc.newton_ops;
            ctx += rc.aberth_ops;
            row.note = rc.winner == RaceOutcome::Winner::newton   ? "winner=newton"
                       : rc.winner == RaceOutcome::Winner::aberth ? "winner=aberth"
                                                                  : "both_failed";
            break;
        }
    }

    const detail::Verification v = detail::verify_roots(poly, approx, refs, opts.delta);
    row.real_adds = ctx.real_adds();
    row.real_muls = ctx.real_muls();
    row.roots_found = v.roots_found;
    row.max_residual = v.max_residual;
    row.matched = v.matched;
    row.missed = row.expected - v.roots_found;
    if (opts.measure_wall) {
        const auto t1 = std::chrono::steady_clock::now();
        row.wall_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    }
    return row;
}

struct ExperimentSpec {
    FamilySpec family;  // degree field is overridden per sweep entry
    std::vector<long> degrees;
    std::vector<Method> methods;
    SolveOptions options;
    std::string out_path;  // empty: no file written
};

inline constexpr const char* kCsvHeader =
    "family,degree,method,eval_mode,seed,real_adds,real_muls,iters,roots_found,"
    "expected,max_residual,matched,wall_ms";

inline std::string format_csv_row(const SolveReport& r) {
    char buf[512];
    char res[40];
    std::snprintf(res, sizeof(res), "%.17g", r.max_residual);
    std::snprintf(buf, sizeof(buf), "%s,%ld,%s,%s,%llu,%llu,%llu,%ld,%ld,%ld,%s,%d,%ld",
                  r.family.c_str(), r.degree, r.method.c_str(), r.eval_mode.c_str(),
                  static_cast<unsigned long long>(r.seed),
                  static_cast<unsigned long long>(r.real_adds),
                  static_cast<unsigned long long>(r.real_muls), r.iters, r.roots_found,
                  r.expected, res, r.matched ? 1 : 0, r.wall_ms);
    return buf;
}

inline std::string emit_csv(std::span<const SolveReport> rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const SolveReport& r : rows) {
        out += format_csv_row(r);
        out += '\n';
    }
    return out;
}

inline std::vector<SolveReport> parse_csv(const std::string& text) {
    std::vector<SolveReport> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == kCsvHeader) continue;
        }
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string item;
        while (std::getline(ls, item, ',')) f.push_back(item);
        if (f.size() != 13) throw SpecError("malformed CSV row: " + line);
        SolveReport r;
        r.family = f[0];
        r.degree = std::stol(f[1]);
        r.method = f[2];
        r.eval_mode = f[3];
        r.seed = std::stoull(f[4]);
        r.real_adds = std::stoull(f[5]);
        r.real_muls = std::stoull(f[6]);
        r.iters = std::stol(f[7]);
        r.roots_found = std::stol(f[8]);
        r.expected = std::stol(f[9]);
        r.max_residual = std::strtod(f[10].c_str(), nullptr);
        r.matched = f[11] == "1";
        r.wall_ms = std::stol(f[12]);
        r.missed = r.expected - r.roots_found;
        rows.push_back(std::move(r));
    }
    return rows;
}

// Failures (unsupported modes, coefficient overflow) become unmatched rows;
// the sweep never aborts.
inline std::vector<SolveReport> run_experiment(const ExperimentSpec& spec) {
    std::vector<SolveReport> rows;
    for (const long degree : spec.degrees) {
        for (const Method method : spec.methods) {
            FamilySpec fs = spec.family;
            fs.degree = degree;
            try {
                rows.push_back(run_solve(fs, method, spec.options));
            } catch (const std::exception& e) {
                SolveReport row;
                row.family = family_id(fs);
                row.degree = degree;
                row.method = method_name(method);
                row.eval_mode =
                    fs.eval == EvalMode::slow ? "slow"
                                              : (fs.eval == EvalMode::fast ? "fast" : "auto");
                row.seed = fs.seed;
                row.expected = degree;
                row.matched = false;
                row.note = e.what();
                rows.push_back(std::move(row));
            }
        }
    }
    if (!spec.out_path.empty()) {
        std::ofstream out(spec.out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + spec.out_path);
        out << emit_csv(rows);
    }
    return rows;
}

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least squares of log2(total ops) against log2(degree) over matched rows.
inline LogLogFit fit_loglog(std::span<const SolveReport> rows) {
    std::vector<double> xs, ys;
    for (const SolveReport& r : rows) {
        const std::uint64_t ops = r.real_adds + r.real_muls;
        if (!r.matched || ops == 0 || r.degree <= 0) continue;
        xs.push_back(std::log2(static_cast<double>(r.degree)));
        ys.push_back(std::log2(static_cast<double>(ops)));
    }
    const std::size_t n = xs.size();
    if (n < 3) throw InsufficientData();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

// ---------------------------------------------------------------------------
// convex-hull starting point experiment

struct HullCoverage {
    struct PerC {
        double c = 0.0;
        int starts = 0;
        int covered = 0;
        std::vector<char> hit;  // per hull-boundary root
    };
    std::vector<int> hull_roots;  // indices of reference roots on the hull boundary
    std::vector<PerC> rows;
    double min_full_c = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Monotone chain; returns polygon vertices. Degenerate (collinear) inputs
// give a 2-point "polygon", whose boundary is the segment itself.
inline std::vector<Complex> convex_hull(std::vector<Complex> pts) {
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](Complex o, Complex a, Complex b) {
        return (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re);
    };
    std::vector<Complex> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline double point_segment_dist(Complex p, Complex a, Complex b) {
    const double vx = b.re - a.re, vy = b.im - a.im;
    const double wx = p.re - a.re, wy = p.im - a.im;
    const double vv = vx * vx + vy * vy;
    double t = vv == 0.0 ? 0.0 : (wx * vx + wy * vy) / vv;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.re - (a.re + t * vx), p.im - (a.im + t * vy));
}

inline bool on_hull_boundary(Complex p, const std::vector<Complex>& hull, double tol) {
    if (hull.size() == 1) return std::hypot(p.re - hull[0].re, p.im - hull[0].im) <= tol;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Complex a = hull[i];
        const Complex b = hull[(i + 1) % hull.size()];
        if (point_segment_dist(p, a, b) <= tol) return true;
    }
    return false;
}

}  // namespace detail

// Plain Newton (no refinement) from ceil(c*d) circle points, for a ladder of
// c values; reports which hull-boundary roots were reached and the smallest
// tested c that covers all of them.
inline HullCoverage convex_hull_experiment(const FamilySpec& spec, std::span<const double> cs,
                                           const SolveOptions& opts) {
    auto [poly, refs] = make_family(spec);
    if (!refs.known())
        throw SpecError("convex hull experiment needs a family with reference roots");
    const std::vector<Complex>& roots = *refs.roots;

    const auto hull = detail::convex_hull(roots);
    HullCoverage out;
    for (int i = 0; i < static_cast<int>(roots.size()); ++i)
        if (detail::on_hull_boundary(roots[i], hull, 1e-9)) out.hull_roots.push_back(i);

    const NewtonConfig cfg = detail::newton_config(opts);
    for (const double c : cs) {
        const int count = static_cast<int>(std::ceil(c * static_cast<double>(poly.degree())));
        OpCounter ctx;
        const auto starts = starting_points(cfg.start_radius, count, cfg.start_phase);
        const NewtonReport rep = run_plain_newton(ctx, poly, starts, cfg);

        HullCoverage::PerC row;
        row.c = c;
        row.starts = count;
        row.hit.assign(out.hull_roots.size(), 0);
        for (std::size_t j = 0; j < out.hull_roots.size(); ++j) {
            const Complex target = roots[out.hull_roots[j]];
            for (const RootHit& h : rep.roots) {
                if (std::hypot(h.z.re - target.re, h.z.im - target.im) < opts.delta) {
                    row.hit[j] = 1;
                    break;
                }
            }
            if (row.hit[j]) ++row.covered;
        }
        if (row.covered == static_cast<int>(out.hull_roots.size()) &&
            std::isnan(out.min_full_c))
            out.min_full_c = c;
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// empirical convergence-order probes (scratch counters; measurement only)

// |z_t - root| along a single Newton orbit.
inline std::vector<double> newton_error_sequence(const PolyRepr& poly, Complex z0, Complex root,
                                                 int max_steps) {
    OpCounter scratch;
    std::vector<double> errs;
    Complex z = z0;
    for (int t = 0; t < max_steps; ++t) {
        errs.push_back(std::hypot(z.re - root.re, z.im - root.im));
        const RatioResult rr = poly.ratio(scratch, z);
        if (rr.status != RatioStatus::ok) break;
        z = scratch.sub(z, rr.ratio);
        if (!z.finite()) break;
    }
    return errs;
}

// max_k |z_k - alpha_{sigma(k)}| after each EA sweep, matched injectively.
inline std::vector<double> aberth_error_sequence(const PolyRepr& poly,
                                                 std::span<const Complex> reference,
                                                 AberthConfig cfg, int sweeps) {
    OpCounter scratch;
    cfg.max_sweeps = sweeps;
    cfg.stop_mode = AberthStop::step_size;
    AberthEngine engine(scratch, poly, cfg);
    std::vector<double> errs;
    for (int t = 0; t < sweeps; ++t) {
        const MatchResult m = match_roots(engine.state().z, reference, 1e9);
        double worst = 0.0;
        for (const auto& p : m.pairs)
            if (p.distance > worst) worst = p.distance;
        if (!m.unmatched_reference.empty()) worst = std::numeric_limits<double>::infinity();
        errs.push_back(worst);
        if (!engine.sweep_once()) break;
    }
    return errs;
}

// log e_{t+1} / log e_t over consecutive errors inside (lo, hi); the window
// keeps rounding noise and pre-asymptotic steps out of the estimate.
inline std::vector<double> empirical_orders(std::span<const double> errors, double lo = 1e-13,
                                            double hi = 1e-2) {
    std::vector<double> orders;
    for (std::size_t t = 0; t + 1 < errors.size(); ++t) {
        const double e0 = errors[t], e1 = errors[t + 1];
        if (e0 > lo && e0 < hi && e1 > lo && e1 < hi && e1 < e0)
            orders.push_back(std::log(e1) / std::log(e0));
    }
    return orders;
}

}  // namespace polyrace
