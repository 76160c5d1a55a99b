#include <catch2/catch_amalgamated.hpp>

#include "polyrace/aberth.hpp"
#include "polyrace/bench.hpp"
#include "polyrace/newton.hpp"

using namespace polyrace;

namespace {

// p(z) = z^3 - 2z + 2, the classical polynomial whose Newton map has a
// superattracting 2-cycle through the critical point 0.
PolyRepr cubic_with_cycle() {
    return PolyRepr::coefficients({{2, 0}, {-2, 0}, {0, 0}, {1, 0}});
}

}  // namespace

TEST_CASE("newton_step on the superattracting 2-cycle is exact") {
    OpCounter ctx;
    const PolyRepr p = cubic_with_cycle();
    // N(0) = 0 - 2/(-2) = 1 and N(1) = 1 - 1/1 = 0, bit-exact
    const Complex a = newton_step(ctx, p, {0, 0});
    CHECK(a == Complex{1, 0});
    const Complex b = newton_step(ctx, p, a);
    CHECK(b == Complex{0, 0});
    // and off the cycle: N(-1) = -1 - 3/1 = -4
    CHECK(newton_step(ctx, p, {-1, 0}) == Complex{-4, 0});
}

TEST_CASE("newton_step: z^2-1 at z=2 gives 1.25") {
    OpCounter ctx;
    const PolyRepr p = PolyRepr::coefficients({{-1, 0}, {0, 0}, {1, 0}});
    CHECK(newton_step(ctx, p, {2, 0}) == Complex{1.25, 0});
}

TEST_CASE("roots are fixed points, exactly") {
    SplitMix64 rng{314};
    OpCounter ctx;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + int(rng.next() % 16);
        std::vector<Complex> roots(d);
        for (auto& r : roots) r = {2 * rng.unit() - 1, 2 * rng.unit() - 1};
        const PolyRepr p = PolyRepr::from_roots(roots);
        const Complex root = roots[rng.next() % d];
        REQUIRE(newton_step(ctx, p, root) == root);
    }
}

TEST_CASE("starting points sit on the circle with equal gaps") {
    const auto pts = starting_points(2.0, 4, 0.0);
    REQUIRE(pts.size() == 4);
    CHECK(std::hypot(pts[0].re - 2, pts[0].im) < 1e-15);
    CHECK(std::hypot(pts[1].re, pts[1].im - 2) < 1e-15);
    CHECK(std::hypot(pts[2].re + 2, pts[2].im) < 1e-15);
    CHECK(std::hypot(pts[3].re, pts[3].im + 2) < 1e-15);

    const auto many = starting_points(3.0, 17);
    for (const Complex& z : many)
        CHECK(std::hypot(z.re, z.im) == Catch::Approx(3.0).epsilon(1e-14));
    for (std::size_t j = 0; j + 1 < many.size(); ++j) {
        const double a0 = std::atan2(many[j].im, many[j].re);
        const double a1 = std::atan2(many[j + 1].im, many[j + 1].re);
        double gap = a1 - a0;
        while (gap < 0) gap += 2 * std::numbers::pi;
        CHECK(gap == Catch::Approx(2 * std::numbers::pi / 17).epsilon(1e-10));
    }

    // default phase keeps every point off the real axis
    for (const Complex& z : starting_points(3.0, 64))
        CHECK(std::fabs(z.im) > 1e-3);
}

TEST_CASE("cross ratio of collinear equally spaced points is 2") {
    OpCounter ctx;
    const CrossRatioOut out =
        cross_ratio_deviation(ctx, {0, 0}, {1, 0}, {2, 0}, std::nullopt);
    CHECK(out.cr == Complex{2, 0});
    CHECK(out.measure == 0.0);
    CHECK_FALSE(out.degenerate);
}

TEST_CASE("cross ratio is a Moebius invariant of the triple") {
    SplitMix64 rng{271};
    OpCounter ctx;
    for (int trial = 0; trial < 50; ++trial) {
        const Complex a{rng.unit(), rng.unit()};
        const Complex b{rng.unit() + 2, rng.unit()};
        const Complex c{rng.unit() + 4, rng.unit()};
        const Complex w{10 * rng.unit() - 5, 10 * rng.unit() - 5};
        const double lam = 0.1 + 5 * rng.unit();

        const Complex base = cross_ratio_deviation(ctx, a, b, c, std::nullopt).cr;
        const Complex shifted =
            cross_ratio_deviation(ctx, ctx.add(a, w), ctx.add(b, w), ctx.add(c, w),
                                  std::nullopt)
                .cr;
        const Complex scaled =
            cross_ratio_deviation(ctx, ctx.mul_real(a, lam), ctx.mul_real(b, lam),
                                  ctx.mul_real(c, lam), std::nullopt)
                .cr;
        REQUIRE(std::hypot(shifted.re - base.re, shifted.im - base.im) < 1e-9);
        REQUIRE(std::hypot(scaled.re - base.re, scaled.im - base.im) < 1e-9);
    }
}

TEST_CASE("degenerate triples report maximal deviation") {
    OpCounter ctx;
    const CrossRatioOut out =
        cross_ratio_deviation(ctx, {0, 0}, {1, 0}, {1, 0}, Complex{2, 0});
    CHECK(out.degenerate);
    CHECK(out.measure == std::numeric_limits<double>::infinity());
}

TEST_CASE("local quadratic order at simple roots") {
    const PolyRepr p = PolyRepr::from_roots({{0.9, 0.1}, {-0.4, 0.7}, {-0.3, -0.8}, {0.1, 0}});
    const Complex root{0.9, 0.1};
    const auto errs = newton_error_sequence(p, {1.15, 0.35}, root, 40);
    const auto orders = empirical_orders(errs);
    REQUIRE_FALSE(orders.empty());
    for (const double q : orders) {
        CHECK(q >= 1.7);
        CHECK(q <= 2.3);
    }
}

TEST_CASE("multiple roots contract linearly with ratio (k-1)/k") {
    OpCounter ctx;
    for (int k = 2; k <= 4; ++k) {
        std::vector<Complex> coeffs(k + 1, Complex{0, 0});
        coeffs[k] = {1, 0};  // z^k
        const PolyRepr p = PolyRepr::coefficients(coeffs);
        Complex z{1, 0};
        for (int t = 0; t < 25; ++t) {
            const Complex next = newton_step(ctx, p, z);
            const double ratio = ctx.abs(next) / ctx.abs(z);
            REQUIRE(ratio == Catch::Approx((k - 1.0) / k).margin(1e-3));
            z = next;
        }
    }
}

TEST_CASE("iterated refinement on z^2-1 finds both roots") {
    OpCounter ctx;
    const PolyRepr p = PolyRepr::coefficients({{-1, 0}, {0, 0}, {1, 0}});
    const NewtonReport rep = run_iterated_refinement(ctx, p, NewtonConfig{});
    REQUIRE(rep.roots.size() == 2);
    CHECK(rep.missed == 0);
    for (const RootHit& h : rep.roots) CHECK(h.residual < 1e-12);
}

TEST_CASE("refinement recovers all periodic points, cross-checked against EA") {
    // degree 16; the Ehrlich-Aberth run is the independent oracle
    const PolyRepr p = PolyRepr::iter_quad({0, 1}, 4);

    OpCounter nctx;
    const NewtonReport nrep = run_iterated_refinement(nctx, p, NewtonConfig{});
    REQUIRE(nrep.roots.size() == 16);
    for (const RootHit& h : nrep.roots) CHECK(h.residual < 1e-9);

    OpCounter actx;
    AberthConfig acfg;
    acfg.eps = 1e-13;
    const AberthReport arep = run_aberth(actx, p, acfg);
    REQUIRE(arep.success);

    std::vector<Complex> centers;
    for (const RootHit& h : nrep.roots) centers.push_back(h.z);
    CHECK(match_roots(centers, arep.roots, 1e-8).complete());
}

TEST_CASE("the attracting cycle does not stop the cubic's roots being found") {
    OpCounter ctx;
    const PolyRepr p = cubic_with_cycle();
    NewtonEngine engine(ctx, p, NewtonConfig{});
    engine.run();
    const NewtonReport rep = engine.report();
    REQUIRE(rep.roots.size() == 3);
    // orbits captured by the 2-cycle basin may remain: they end stalled (or
    // escaped), never converged
    for (const OrbitState& ob : engine.orbits())
        CHECK((ob.status == OrbitStatus::converged || ob.status == OrbitStatus::stalled ||
               ob.status == OrbitStatus::escaped));
}

TEST_CASE("real starting points on z^2+1 never converge") {
    OpCounter ctx;
    const PolyRepr p = PolyRepr::coefficients({{1, 0}, {0, 0}, {1, 0}});
    NewtonConfig cfg;
    cfg.max_steps = 500;
    const std::vector<Complex> starts = {{2, 0}, {-2, 0}};
    NewtonEngine engine(ctx, p, starts, cfg);
    engine.run();
    for (const OrbitState& ob : engine.orbits()) {
        CHECK(ob.status != OrbitStatus::converged);
        CHECK(ob.z.im == 0.0);  // the real line is invariant
    }
}

TEST_CASE("refinement bookkeeping: growth is sound and triggers are honest") {
    OpCounter ctx;
    FamilySpec spec;
    spec.kind = FamilyKind::chebyshev;
    spec.degree = 128;
    auto [p, refs] = make_family(spec);
    NewtonEngine engine(ctx, p, NewtonConfig{});
    engine.run();
    const NewtonReport rep = engine.report();

    // 64 starting orbits cannot cover 128 roots without refinement
    REQUIRE_FALSE(engine.insertions().empty());
    CHECK(rep.orbits_total > 64);
    for (const InsertionEvent& ev : engine.insertions()) {
        CHECK(ev.left_deviation > engine.config().refine_threshold);
        CHECK(ev.right_deviation > engine.config().refine_threshold);
    }
    CHECK(rep.missed == 0);

    // reported roots are pairwise separated beyond the dedup radius
    for (std::size_t i = 0; i < rep.roots.size(); ++i)
        for (std::size_t j = i + 1; j < rep.roots.size(); ++j)
            REQUIRE(std::hypot(rep.roots[i].z.re - rep.roots[j].z.re,
                               rep.roots[i].z.im - rep.roots[j].z.im) >
                    2 * engine.config().sep_delta);
}

TEST_CASE("plain newton from four circle points finds both roots of z^2-1") {
    OpCounter ctx;
    const PolyRepr p = PolyRepr::coefficients({{-1, 0}, {0, 0}, {1, 0}});
    const std::vector<Complex> starts = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
    const NewtonReport rep = run_plain_newton(ctx, p, starts, NewtonConfig{});
    REQUIRE(rep.roots.size() == 2);

    // against the EA oracle on the same polynomial
    OpCounter actx;
    const AberthReport oracle = run_aberth(actx, p, AberthConfig{});
    std::vector<Complex> centers;
    for (const RootHit& h : rep.roots) centers.push_back(h.z);
    CHECK(match_roots(centers, oracle.roots, 1e-8).complete());
}

TEST_CASE("newton runs are deterministic") {
    const PolyRepr p = PolyRepr::iter_quad({0, 1}, 5);
    OpCounter c1, c2;
    const NewtonReport a = run_iterated_refinement(c1, p, NewtonConfig{});
    const NewtonReport b = run_iterated_refinement(c2, p, NewtonConfig{});
    REQUIRE(a.roots.size() == b.roots.size());
    for (std::size_t i = 0; i < a.roots.size(); ++i) {
        REQUIRE(a.roots[i].z == b.roots[i].z);
        REQUIRE(a.roots[i].residual == b.roots[i].residual);
    }
    CHECK(a.ops == b.ops);
    CHECK(a.global_steps == b.global_steps);
}

TEST_CASE("collect_roots clusters and reports shortfall") {
    std::vector<OrbitState> orbits(3);
    orbits[0].z = {1, 0};
    orbits[0].status = OrbitStatus::converged;
    orbits[0].residual = 1e-14;
    orbits[1].z = {1 + 1e-9, 0};
    orbits[1].status = OrbitStatus::converged;
    orbits[1].residual = 3e-14;
    orbits[2].z = {-1, 0};
    orbits[2].status = OrbitStatus::converged;
    orbits[2].residual = 2e-14;

    const auto clusters = collect_roots(orbits, 1e-8);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].hits == 2);
    CHECK(clusters[0].residual == 3e-14);  // max over members
    CHECK(clusters[1].hits == 1);

    // no converged orbits: nothing found
    std::vector<OrbitState> none(2);
    CHECK(collect_roots(none, 1e-8).empty());

    // exact-root starts converge in place with zero residual
    OpCounter ctx;
    const PolyRepr p = PolyRepr::from_roots({{0.5, 0}, {-0.5, 0}});
    const std::vector<Complex> starts = {{0.5, 0}, {-0.5, 0}};
    const NewtonReport rep = run_plain_newton(ctx, p, starts, NewtonConfig{});
    REQUIRE(rep.roots.size() == 2);
    CHECK(rep.roots[0].z == Complex{0.5, 0});
    CHECK(rep.roots[0].residual == 0.0);
}
