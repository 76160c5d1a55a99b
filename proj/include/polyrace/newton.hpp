#pragma once

// newton.hpp: Newton's method run as a dynamical system. Orbits start on a
// circle enclosing all roots and are iterated in lockstep; while adjacent
// orbits move "in parallel" (their cross ratio with infinity drifts little
// between steps) few orbits are needed, and new orbits are spliced in where
// that stops being true. When a whole cascade dies out with roots still
// missing, a fresh ring with twice as many starting points is seeded and the
// hunt continues, within the same orbit budget. Convergence needs 3
// consecutive steps below eps; collected endpoints are deduplicated and
// verified a posteriori.

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "polynomial.hpp"

namespace polyrace {

enum class OrbitStatus { active, converged, escaped, stalled };

struct OrbitState {
    int id = 0;
    Complex z;
    long steps = 0;
    OrbitStatus status = OrbitStatus::active;
    int left = -1;   // neighbor ids; the live orbits always form one cycle
    int right = -1;
    Complex prev_cross_ratio;
    bool has_prev_cross_ratio = false;
    double deviation = 0.0;  // cross-ratio drift measured this step
    int small_step_streak = 0;
    int stall_events = 0;
    int spawn_credit = 2;  // insertions this orbit may still parent
    int depth = 0;          // subdivision generation; ring orbits are 0
    double residual = std::numeric_limits<double>::quiet_NaN();
};

struct NewtonConfig {
    double start_radius = 3.0;  // roots are normalized into the unit disk
    int initial_orbits = 64;
    double refine_threshold = 0.02;
    double conv_eps = 1e-13;
    double sep_delta = 1e-8;
    long max_steps = 0;   // 0: max(3000, 12 * degree), cumulative over waves
    long max_orbits = 0;  // 0: max(1024, 8 * degree), cap on live orbits
    // phase offset of the starting circle; NaN selects pi/(2*count), which
    // keeps real polynomials from trapping orbits on the real axis
    double start_phase = std::numeric_limits<double>::quiet_NaN();
};

struct RootHit {
    Complex z;
    double residual = 0.0;
    int hits = 0;
};

struct NewtonReport {
    std::vector<RootHit> roots;
    long degree = 0;
    int orbits_total = 0;
    int converged = 0;
    int escaped = 0;
    int stalled = 0;
    int waves = 1;  // starting rings seeded (1 = no reseeding was needed)
    long global_steps = 0;
    bool budget_exceeded = false;
    long missed = 0;  // degree - distinct roots found
    OpSnapshot ops;
    std::map<long, int> steps_histogram;  // termination step count -> orbits
};

// One Newton step z - p(z)/p'(z); exact roots stay fixed. Throws
// DerivativeZero when p'(z) = 0 with p(z) != 0 (the engine handles that case
// in-band and perturbs instead).
inline Complex newton_step(OpCounter& ctx, const PolyRepr& poly, Complex z) {
    const RatioResult r = poly.ratio(ctx, z);
    if (r.status == RatioStatus::derivative_zero) throw DerivativeZero();
    return ctx.sub(z, r.ratio);
}

// count points r e^{i(2 pi j / count + phase)}; the default phase breaks the
// real-axis symmetry that traps real starting vectors.
inline std::vector<Complex> starting_points(double r, int count,
                                            double phase = std::numeric_limits<double>::quiet_NaN()) {
    if (std::isnan(phase)) phase = std::numbers::pi / (2.0 * count);
    std::vector<Complex> pts(count);
    for (int j = 0; j < count; ++j) {
        const double th = 2.0 * std::numbers::pi * j / count + phase;
        pts[j] = {r * std::cos(th), r * std::sin(th)};
    }
    return pts;
}

struct CrossRatioOut {
    double measure = 0.0;  // |cr - prev|, or +inf for a degenerate triple
    Complex cr;
    bool degenerate = false;
};

// Cross ratio (a, b; c, inf) = (a - c)/(b - c) of three adjacent orbits, and
// its drift against the previous step's value. Translation and scaling leave
// it unchanged, so parallel-moving orbits have zero drift.
inline CrossRatioOut cross_ratio_deviation(OpCounter& ctx, Complex a, Complex b, Complex c,
                                           std::optional<Complex> prev) {
    const Complex num = ctx.sub(a, c);
    const Complex den = ctx.sub(b, c);
    if (std::max(std::fabs(den.re), std::fabs(den.im)) < 1e-300) {
        return {std::numeric_limits<double>::infinity(), Complex{0.0, 0.0}, true};
    }
    const Complex cr = ctx.div(num, den);
    double measure = 0.0;
    if (prev) measure = ctx.abs(ctx.sub(cr, *prev));
    return {measure, cr, false};
}

// Clusters converged orbit endpoints with dedup radius 2*delta. First arrival
// (lowest id) fixes the cluster center, so the result is deterministic; the
// greedy rule keeps centers pairwise separated by construction.
inline std::vector<RootHit> collect_roots(std::span<const OrbitState> orbits, double delta) {
    std::vector<RootHit> clusters;
    const double radius = 2.0 * delta;
    for (const OrbitState& ob : orbits) {
        if (ob.status != OrbitStatus::converged) continue;
        bool joined = false;
        for (RootHit& c : clusters) {
            if (std::hypot(ob.z.re - c.z.re, ob.z.im - c.z.im) < radius) {
                ++c.hits;
                if (!(ob.residual <= c.residual)) c.residual = ob.residual;
                joined = true;
                break;
            }
        }
        if (!joined) clusters.push_back({ob.z, ob.residual, 1});
    }
    return clusters;
}

struct InsertionEvent {
    long step;
    int new_id;
    int left_id;
    int right_id;
    double left_deviation;
    double right_deviation;
};

class NewtonEngine {
public:
    static constexpr int kMaxDepth = 6;

    NewtonEngine(OpCounter& ctx, const PolyRepr& poly, NewtonConfig cfg)
        : ctx_(&ctx), poly_(&poly), cfg_(resolve(cfg, poly.degree())), refine_(true) {
        start_ops_ = ctx.snapshot();
        ring_size_ = cfg_.initial_orbits;
        seed_ring(ring_size_);
    }

    // Plain mode: explicit starting points, no neighbor structure, no
    // refinement and no reseeding; the baseline the refinement scheme is
    // measured against.
    NewtonEngine(OpCounter& ctx, const PolyRepr& poly, std::span<const Complex> starts,
                 NewtonConfig cfg)
        : ctx_(&ctx), poly_(&poly), cfg_(resolve(cfg, poly.degree())), refine_(false) {
        start_ops_ = ctx.snapshot();
        orbits_.reserve(starts.size());
        for (const Complex& z : starts) append_orbit(z, -1, -1);
        active_count_ = static_cast<int>(starts.size());
    }

    bool finished() const { return done_; }

    // One lockstep sweep over all active orbits, then one refinement pass.
    // Returns false once the run is over (every orbit terminal with no wave
    // left to seed, or the step budget exhausted, in which case survivors
    // are marked stalled).
    bool step() {
        if (done_) return false;
        if (global_step_ >= cfg_.max_steps) {
            mark_survivors_stalled();
            done_ = true;
            return false;
        }
        if (active_count_ == 0 && !reseed()) {
            done_ = true;
            return false;
        }

        for (OrbitState& ob : orbits_) {
            if (ob.status != OrbitStatus::active) continue;
            advance_orbit(ob);
        }
        ++global_step_;

        if (refine_ && active_count_ >= 3) refine_pass();

        if (active_count_ == 0 && !reseed()) done_ = true;
        if (!done_ && global_step_ >= cfg_.max_steps) {
            mark_survivors_stalled();
            done_ = true;
        }
        return !done_;
    }

    void run() {
        while (step()) {
        }
    }

    NewtonReport report() const {
        NewtonReport rep;
        rep.degree = poly_->degree();
        rep.roots = collect_roots(orbits_, cfg_.sep_delta);
        rep.orbits_total = static_cast<int>(orbits_.size());
        for (const OrbitState& ob : orbits_) {
            switch (ob.status) {
                case OrbitStatus::converged: ++rep.converged; break;
                case OrbitStatus::escaped: ++rep.escaped; break;
                case OrbitStatus::stalled: ++rep.stalled; break;
                case OrbitStatus::active: break;
            }
            rep.steps_histogram[ob.steps] += 1;
        }
        rep.waves = waves_;
        rep.global_steps = global_step_;
        rep.budget_exceeded = budget_exceeded_;
        rep.missed = rep.degree - static_cast<long>(rep.roots.size());
        rep.ops = ctx_->snapshot() - start_ops_;
        return rep;
    }

    const std::vector<OrbitState>& orbits() const { return orbits_; }
    const std::vector<InsertionEvent>& insertions() const { return insertions_; }
    long global_steps() const { return global_step_; }
    const NewtonConfig& config() const { return cfg_; }
    OpSnapshot ops_used() const { return ctx_->snapshot() - start_ops_; }

private:
    static NewtonConfig resolve(NewtonConfig cfg, long degree) {
        if (cfg.max_steps == 0) cfg.max_steps = std::max(3000L, 12 * degree);
        if (cfg.max_orbits == 0) cfg.max_orbits = std::max(1024L, 8 * degree);
        return cfg;
    }

    int append_orbit(Complex z, int left, int right) {
        OrbitState ob;
        ob.id = static_cast<int>(orbits_.size());
        ob.z = z;
        ob.left = left;
        ob.right = right;
        orbits_.push_back(ob);
        return ob.id;
    }

    void seed_ring(int count) {
        const int base = static_cast<int>(orbits_.size());
        const auto pts = starting_points(cfg_.start_radius, count, cfg_.start_phase);
        for (int i = 0; i < count; ++i)
            append_orbit(pts[i], base + (i + count - 1) % count, base + (i + 1) % count);
        active_count_ += count;
    }

    // A cascade that dies out with roots still missing gets a fresh ring with
    // twice the starting points (denser angles reach channels the previous
    // wave missed). Ring size and step limits bound the escalation.
    bool reseed() {
        if (!refine_) return false;
        const long found = static_cast<long>(collect_roots(orbits_, cfg_.sep_delta).size());
        if (found >= poly_->degree()) return false;
        if (ring_size_ >= cfg_.max_orbits) {
            budget_exceeded_ = true;
            return false;
        }
        if (global_step_ >= cfg_.max_steps) return false;
        ring_size_ = static_cast<int>(std::min(2L * ring_size_, cfg_.max_orbits));
        seed_ring(ring_size_);
        ++waves_;
        return true;
    }

    void advance_orbit(OrbitState& ob) {
        const RatioResult rr = poly_->ratio(*ctx_, ob.z);
        if (rr.status == RatioStatus::derivative_zero) {
            ++ob.stall_events;
            if (ob.stall_events > 4) {
                kill(ob, OrbitStatus::stalled);
                return;
            }
            // deterministic kick off the critical point, direction from the id
            const double th = 2.399963229728653 * ob.id;
            ob.z = ctx_->add(ob.z, ctx_->mul_real(Complex{std::cos(th), std::sin(th)},
                                                  cfg_.conv_eps));
            ++ob.steps;
            ob.small_step_streak = 0;
            return;
        }

        ob.z = ctx_->sub(ob.z, rr.ratio);
        ++ob.steps;
        if (!ob.z.finite()) {
            kill(ob, OrbitStatus::escaped);
            return;
        }
        const double step_mag = ctx_->abs(rr.ratio);
        if (step_mag < cfg_.conv_eps) {
            if (++ob.small_step_streak >= 3) {
                const EvalOut ev = poly_->evaluate(*ctx_, ob.z);
                ob.residual = ctx_->abs(ev.value);
                kill(ob, OrbitStatus::converged);
                return;
            }
        } else {
            ob.small_step_streak = 0;
        }
        if (ctx_->abs(ob.z) > 4.0 * cfg_.start_radius) kill(ob, OrbitStatus::escaped);
    }

    void kill(OrbitState& ob, OrbitStatus status) {
        ob.status = status;
        --active_count_;
        if (!refine_ || ob.left < 0 || active_count_ == 0) return;
        OrbitState& l = orbits_[ob.left];
        OrbitState& r = orbits_[ob.right];
        l.right = ob.right;
        r.left = ob.left;
        // their adjacent triples changed; drift history restarts
        l.has_prev_cross_ratio = false;
        r.has_prev_cross_ratio = false;
    }

    std::vector<int> cycle_order() const {
        std::vector<int> order;
        order.reserve(active_count_);
        int head = -1;
        for (const OrbitState& ob : orbits_) {
            if (ob.status == OrbitStatus::active) {
                head = ob.id;
                break;
            }
        }
        if (head < 0) return order;
        int cur = head;
        do {
            order.push_back(cur);
            cur = orbits_[cur].right;
        } while (cur != head && static_cast<int>(order.size()) <= active_count_);
        return order;
    }

    void refine_pass() {
        const std::vector<int> order = cycle_order();
        if (order.size() < 3) return;

        for (int id : order) {
            OrbitState& b = orbits_[id];
            const Complex a = orbits_[b.left].z;
            const Complex c = orbits_[b.right].z;
            std::optional<Complex> prev;
            if (b.has_prev_cross_ratio) prev = b.prev_cross_ratio;
            const CrossRatioOut out = cross_ratio_deviation(*ctx_, a, b.z, c, prev);
            if (out.degenerate) {
                b.deviation = std::numeric_limits<double>::infinity();
                b.has_prev_cross_ratio = false;
            } else {
                b.deviation = out.measure;
                b.prev_cross_ratio = out.cr;
                b.has_prev_cross_ratio = true;
            }
        }

        // an edge refines when both of its endpoint orbits stopped moving in
        // parallel with their neighborhoods. Two throttles keep landing-phase
        // drift from spawning forever: spent orbits may not parent again, and
        // subdivision depth is capped (a ring orbit heads a bounded tree);
        // rings that die out incomplete escalate through waves instead
        std::vector<std::pair<int, int>> edges;
        for (int id : order) {
            const int rid = orbits_[id].right;
            const OrbitState& b = orbits_[id];
            const OrbitState& c = orbits_[rid];
            if (b.spawn_credit > 0 && c.spawn_credit > 0 &&
                std::max(b.depth, c.depth) < kMaxDepth &&
                b.deviation > cfg_.refine_threshold &&
                c.deviation > cfg_.refine_threshold) {
                edges.emplace_back(id, rid);
            }
        }
        for (const auto& [b, c] : edges) {
            // the cap applies to live orbits; deaths free capacity again
            if (static_cast<long>(active_count_) >= cfg_.max_orbits) {
                budget_exceeded_ = true;
                break;
            }
            insert_between(b, c);
        }
    }

    void insert_between(int left_id, int right_id) {
        const Complex mid =
            ctx_->mul_real(ctx_->add(orbits_[left_id].z, orbits_[right_id].z), 0.5);
        insertions_.push_back({global_step_, static_cast<int>(orbits_.size()), left_id,
                               right_id, orbits_[left_id].deviation,
                               orbits_[right_id].deviation});
        const int id = append_orbit(mid, left_id, right_id);
        orbits_[id].depth = std::max(orbits_[left_id].depth, orbits_[right_id].depth) + 1;
        orbits_[left_id].right = id;
        orbits_[right_id].left = id;
        orbits_[left_id].has_prev_cross_ratio = false;
        orbits_[right_id].has_prev_cross_ratio = false;
        --orbits_[left_id].spawn_credit;
        --orbits_[right_id].spawn_credit;
        ++active_count_;
    }

    void mark_survivors_stalled() {
        for (OrbitState& ob : orbits_) {
            if (ob.status == OrbitStatus::active) kill(ob, OrbitStatus::stalled);
        }
    }

    OpCounter* ctx_;
    const PolyRepr* poly_;
    NewtonConfig cfg_;
    bool refine_;
    std::vector<OrbitState> orbits_;
    std::vector<InsertionEvent> insertions_;
    int active_count_ = 0;
    int ring_size_ = 0;
    int waves_ = 1;
    long global_step_ = 0;
    bool budget_exceeded_ = false;
    bool done_ = false;
    OpSnapshot start_ops_;
};

inline NewtonReport run_iterated_refinement(OpCounter& ctx, const PolyRepr& poly,
                                            const NewtonConfig& cfg) {
    NewtonEngine engine(ctx, poly, cfg);
    engine.run();
    return engine.report();
}

inline NewtonReport run_plain_newton(OpCounter& ctx, const PolyRepr& poly,
                                     std::span<const Complex> starts, const NewtonConfig& cfg) {
    NewtonEngine engine(ctx, poly, starts, cfg);
    engine.run();
    return engine.report();
}

}  // namespace polyrace
