#pragma once

// aberth.hpp: the Ehrlich-Aberth simultaneous iteration on C^d. Every
// coordinate takes a Newton step against p(z) / prod_{i != k} (z - z_i), so
// approximations are attracted by the roots and repelled by each other. The
// correction is evaluated in the electrostatic form
//
//   z'_k = z_k - 1 / ( p'(z_k)/p(z_k) - Sum_{i != k} 1/(z_k - z_i) )
//
// which is algebraically equivalent to the textbook formula but needs only
// the logarithmic derivative. Sweeps run Jacobi style (corrections from the
// pre-sweep vector) or Gauss-Seidel style (fresh coordinates used
// immediately, ascending index, the default); all coordinates are updated
// every sweep even after they individually converge.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "match.hpp"
#include "newton.hpp"
#include "polynomial.hpp"

namespace polyrace {

enum class SweepStyle { jacobi, gauss_seidel };
enum class AberthStop { step_size, reference };

struct AberthConfig {
    SweepStyle style = SweepStyle::gauss_seidel;
    // Far from the roots every coordinate moves only ~2|z|/d per sweep, so a
    // start circle of radius R costs about (d/2) ln R sweeps of pure travel.
    // The default hugs the unit disk the families are normalized into;
    // Newton keeps its larger control radius, this iteration does not need it.
    double start_radius = 1.05;
    long max_sweeps = 0;  // 0: max(100, degree)
    AberthStop stop_mode = AberthStop::step_size;
    double eps = 1e-13;   // step_size mode: stop when max_k |z'_k - z_k| < eps
    double delta = 1e-8;  // reference mode: stop when matched up to permutation
    std::optional<std::vector<Complex>> reference;
    double collision_eps = 0.0;  // 0 resolves to 1e-12 * start_radius
    bool detect_cycles = false;
    double start_phase = std::numeric_limits<double>::quiet_NaN();
};

struct AberthState {
    std::vector<Complex> z;
    long sweep = 0;
    std::vector<std::uint8_t> converged_mask;  // |step| < eps last sweep
    int held = 0;         // coordinates held across the whole run
    int collisions = 0;   // collision perturbations across the whole run
    double last_max_step = std::numeric_limits<double>::infinity();
};

struct CorrectionOut {
    enum class Status {
        ok,
        at_root,           // p(z_k) == 0 exactly; the coordinate stays fixed
        zero_denominator,  // net charge vanished (or blew up); hold for the sweep
        collision,         // z_k coincides with some z_i; caller perturbs
    };
    Status status = Status::ok;
    Complex z_new;
};

// One Ehrlich-Aberth correction in the electrostatic form. The collision
// screen compares components against collision_eps; comparisons are not
// arithmetic, so the screen itself costs no counted ops.
inline CorrectionOut aberth_correction(OpCounter& ctx, const PolyRepr& poly,
                                       std::span<const Complex> zvec, std::size_t k,
                                       double collision_eps) {
    using Status = CorrectionOut::Status;
    const Complex zk = zvec[k];
    const LogDerivResult ld = poly.log_deriv(ctx, zk);
    if (ld.status == RatioStatus::at_root) return {Status::at_root, zk};

    Complex sum{0.0, 0.0};
    const Complex one{1.0, 0.0};
    for (std::size_t i = 0; i < zvec.size(); ++i) {
        if (i == k) continue;
        const Complex w = ctx.sub(zk, zvec[i]);
        if (std::max(std::fabs(w.re), std::fabs(w.im)) < collision_eps)
            return {Status::collision, zk};
        sum = ctx.add(sum, ctx.div(one, w));
    }
    const Complex net = ctx.sub(ld.value, sum);
    if (net.is_zero()) return {Status::zero_denominator, zk};
    const Complex znew = ctx.sub(zk, ctx.div(one, net));
    if (!znew.finite()) return {Status::zero_denominator, zk};
    return {Status::ok, znew};
}

// The literal Eq-form z_k - ratio / (1 - ratio * Sum); kept as the second
// algebraic route for equivalence checks against the electrostatic form.
inline std::optional<Complex> aberth_correction_direct(OpCounter& ctx, const PolyRepr& poly,
                                                       std::span<const Complex> zvec,
                                                       std::size_t k) {
    const Complex zk = zvec[k];
    const RatioResult rr = poly.ratio(ctx, zk);
    if (rr.status == RatioStatus::at_root) return zk;
    if (rr.status == RatioStatus::derivative_zero) return std::nullopt;

    Complex sum{0.0, 0.0};
    const Complex one{1.0, 0.0};
    for (std::size_t i = 0; i < zvec.size(); ++i) {
        if (i == k) continue;
        const Complex w = ctx.sub(zk, zvec[i]);
        if (w.is_zero()) return std::nullopt;
        sum = ctx.add(sum, ctx.div(one, w));
    }
    const Complex den = ctx.sub(one, ctx.mul(rr.ratio, sum));
    if (den.is_zero()) return std::nullopt;
    return ctx.sub(zk, ctx.div(rr.ratio, den));
}

// One full sweep over the vector. Jacobi reads only the pre-sweep
// coordinates; Gauss-Seidel consumes each fresh coordinate immediately in
// ascending index order (the order is fixed and part of the determinism
// guarantee). Collisions are resolved by a deterministic nudge of
// collision_eps * e^{ik} and a bounded retry.
inline void aberth_sweep(OpCounter& ctx, const PolyRepr& poly, AberthState& state,
                         SweepStyle style, double collision_eps, double eps) {
    const std::size_t d = state.z.size();
    std::vector<Complex> pre;
    if (style == SweepStyle::jacobi) pre = state.z;
    std::vector<Complex>& work = (style == SweepStyle::jacobi) ? pre : state.z;
    std::vector<Complex> next(style == SweepStyle::jacobi ? d : 0);

    double max_step = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const Complex original = work[k];
        CorrectionOut out;
        for (int attempt = 0;; ++attempt) {
            out = aberth_correction(ctx, poly, work, k, collision_eps);
            if (out.status != CorrectionOut::Status::collision) break;
            if (attempt >= 8) {
                out = {CorrectionOut::Status::zero_denominator, work[k]};
                break;
            }
            ++state.collisions;
            const double th = static_cast<double>(k);
            work[k] = ctx.add(work[k], ctx.mul_real(Complex{std::cos(th), std::sin(th)},
                                                    collision_eps));
        }
        if (out.status == CorrectionOut::Status::zero_denominator) ++state.held;

        const double step_mag = ctx.abs(ctx.sub(out.z_new, original));
        if (step_mag > max_step) max_step = step_mag;
        state.converged_mask[k] = step_mag < eps ? 1 : 0;
        if (style == SweepStyle::jacobi)
            next[k] = out.z_new;
        else
            state.z[k] = out.z_new;
    }
    if (style == SweepStyle::jacobi) state.z = std::move(next);
    state.last_max_step = max_step;
    ++state.sweep;
}

struct AberthReport {
    std::vector<Complex> roots;  // final approximation vector
    long degree = 0;
    long sweeps = 0;
    bool success = false;
    bool max_sweeps_exceeded = false;
    int held = 0;
    int collisions = 0;
    bool cycle_suspected = false;
    OpSnapshot ops;
};

class AberthEngine {
public:
    AberthEngine(OpCounter& ctx, const PolyRepr& poly, AberthConfig cfg,
                 std::optional<std::vector<Complex>> start_override = std::nullopt)
        : ctx_(&ctx), poly_(&poly), cfg_(std::move(cfg)) {
        start_ops_ = ctx.snapshot();
        if (cfg_.collision_eps <= 0.0) cfg_.collision_eps = 1e-12 * cfg_.start_radius;
        const long d = poly.degree();
        if (cfg_.max_sweeps == 0) cfg_.max_sweeps = std::max(100L, d);
        if (start_override) {
            state_.z = std::move(*start_override);
        } else {
            state_.z = starting_points(cfg_.start_radius, static_cast<int>(d),
                                       cfg_.start_phase);
        }
        state_.converged_mask.assign(state_.z.size(), 0);
        if (cfg_.stop_mode == AberthStop::reference) {
            if (!cfg_.reference)
                throw std::invalid_argument("reference stop mode needs reference roots");
            // a start vector that already matches needs no sweeps at all
            if (matches_reference()) {
                done_ = true;
                success_ = true;
            }
        }
    }

    bool finished() const { return done_; }
    bool success() const { return success_; }
    const AberthState& state() const { return state_; }
    long sweeps_used() const { return state_.sweep; }
    bool cycle_suspected() const { return cycle_suspected_; }
    OpSnapshot ops_used() const { return ctx_->snapshot() - start_ops_; }

    bool sweep_once() {
        if (done_) return false;
        aberth_sweep(*ctx_, *poly_, state_, cfg_.style, cfg_.collision_eps, cfg_.eps);
        if (cfg_.detect_cycles) check_cycle();
        switch (cfg_.stop_mode) {
            case AberthStop::step_size:
                if (state_.last_max_step < cfg_.eps) {
                    done_ = true;
                    success_ = true;
                }
                break;
            case AberthStop::reference:
                if (matches_reference()) {
                    done_ = true;
                    success_ = true;
                }
                break;
        }
        if (!done_ && state_.sweep >= cfg_.max_sweeps) done_ = true;
        return !done_;
    }

    void run() {
        while (sweep_once()) {
        }
    }

    AberthReport report() const {
        AberthReport rep;
        rep.roots = state_.z;
        rep.degree = poly_->degree();
        rep.sweeps = state_.sweep;
        rep.success = success_;
        rep.max_sweeps_exceeded = !success_ && state_.sweep >= cfg_.max_sweeps;
        rep.held = state_.held;
        rep.collisions = state_.collisions;
        rep.cycle_suspected = cycle_suspected_;
        rep.ops = ctx_->snapshot() - start_ops_;
        return rep;
    }

private:
    bool matches_reference() const {
        return match_roots(state_.z, *cfg_.reference, cfg_.delta).complete();
    }

    // Optional probe for periodic behavior: quantized states that repeat
    // within the run raise a flag, nothing more.
    void check_cycle() {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](double v) {
            const double q = std::round(v * 1e10);
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(q));
            std::memcpy(&bits, &q, sizeof(bits));
            h = (h ^ bits) * 1099511628211ULL;
        };
        for (const Complex& z : state_.z) {
            mix(z.re);
            mix(z.im);
        }
        auto [it, inserted] = seen_states_.emplace(h, state_.sweep);
        if (!inserted && it->second < state_.sweep) cycle_suspected_ = true;
    }

    OpCounter* ctx_;
    const PolyRepr* poly_;
    AberthConfig cfg_;
    AberthState state_;
    bool done_ = false;
    bool success_ = false;
    bool cycle_suspected_ = false;
    std::unordered_map<std::uint64_t, long> seen_states_;
    OpSnapshot start_ops_;
};

inline AberthReport run_aberth(OpCounter& ctx, const PolyRepr& poly, const AberthConfig& cfg) {
    AberthEngine engine(ctx, poly, cfg);
    engine.run();
    return engine.report();
}

// Postprocessing entry point: the roots Newton already found seed the vector
// as-is and the remaining coordinates start fresh on the circle.
inline AberthReport ea_postprocess(OpCounter& ctx, const PolyRepr& poly,
                                   std::span<const Complex> found, const AberthConfig& cfg) {
    const long d = poly.degree();
    if (static_cast<long>(found.size()) > d)
        throw std::invalid_argument("more seed roots than the degree allows");
    std::vector<Complex> start(found.begin(), found.end());
    const int fresh = static_cast<int>(d - static_cast<long>(found.size()));
    if (fresh > 0) {
        const auto pts = starting_points(cfg.start_radius, fresh, cfg.start_phase);
        start.insert(start.end(), pts.begin(), pts.end());
    }
    AberthEngine engine(ctx, poly, cfg, std::move(start));
    engine.run();
    return engine.report();
}

}  // namespace polyrace
