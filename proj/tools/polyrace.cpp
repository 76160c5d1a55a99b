// polyrace: op-count benchmarks for Newton vs Ehrlich-Aberth root finding.
//
//   polyrace solve --family chebyshev:d=64 --method newton
//   polyrace bench --family randdisk:seed=7 --degrees 2^4..2^8 \
//       --methods newton,aberth --out results.csv
//   polyrace families
//
// Exit codes: 0 success, 2 some runs unmatched, 3 invalid spec.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyrace/polyrace.hpp"

using namespace polyrace;

namespace {

long parse_degree_token(const std::string& tok) {
    if (tok.rfind("2^", 0) == 0) {
        const long k = std::stol(tok.substr(2));
        if (k < 0 || k > 30) throw SpecError("degree exponent out of range: " + tok);
        return 1L << k;
    }
    return std::stol(tok);
}

// "2^4..2^12" doubles through the range; "16,32,64" lists explicitly.
std::vector<long> parse_degrees(const std::string& text) {
    std::vector<long> out;
    const std::size_t dots = text.find("..");
    if (dots != std::string::npos) {
        const long lo = parse_degree_token(text.substr(0, dots));
        const long hi = parse_degree_token(text.substr(dots + 2));
        if (lo < 1 || hi < lo) throw SpecError("bad degree range: " + text);
        for (long d = lo; d <= hi; d *= 2) out.push_back(d);
        return out;
    }
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_degree_token(item));
    }
    if (out.empty()) throw SpecError("no degrees in: " + text);
    return out;
}

std::vector<long> default_degrees(FamilyKind kind) {
    if (kind == FamilyKind::grid) {
        // grid side doubles 4..32, topping out at the 40 end of the range
        return {16, 64, 256, 1024, 1600};
    }
    return {16, 32, 64, 128, 256};
}

void print_report(const SolveReport& r) {
    std::printf("family: %s  degree: %ld  method: %s  eval: %s  seed: %llu\n",
                r.family.c_str(), r.degree, r.method.c_str(), r.eval_mode.c_str(),
                static_cast<unsigned long long>(r.seed));
    std::printf("ops: real_adds=%llu real_muls=%llu total=%llu\n",
                static_cast<unsigned long long>(r.real_adds),
                static_cast<unsigned long long>(r.real_muls),
                static_cast<unsigned long long>(r.real_adds + r.real_muls));
    std::printf("iters: %ld  roots found: %ld/%ld  matched: %s  max residual: %.3e\n",
                r.iters, r.roots_found, r.expected, r.matched ? "yes" : "no",
                r.max_residual);
    if (!r.note.empty()) std::printf("note: %s\n", r.note.c_str());
}

nlohmann::json report_json(const SolveReport& r) {
    return nlohmann::json{{"family", r.family},
                          {"degree", r.degree},
                          {"method", r.method},
                          {"eval_mode", r.eval_mode},
                          {"seed", r.seed},
                          {"real_adds", r.real_adds},
                          {"real_muls", r.real_muls},
                          {"iters", r.iters},
                          {"roots_found", r.roots_found},
                          {"expected", r.expected},
                          {"max_residual", r.max_residual},
                          {"matched", r.matched},
                          {"missed", r.missed},
                          {"wall_ms", r.wall_ms},
                          {"note", r.note}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"op-count benchmarks for Newton and Ehrlich-Aberth root finders"};
    app.require_subcommand(1);

    // solve
    std::string family_str, method_str = "newton", eval_str;
    double eps = 1e-13, delta = 1e-8;
    std::uint64_t seed = 0;
    bool json_out = false, wall = false;

    CLI::App* solve = app.add_subcommand("solve", "solve one polynomial and verify the roots");
    solve->add_option("--family", family_str, "family spec, see `polyrace families`")
        ->required();
    solve->add_option("--method", method_str, "newton|aberth|hybrid|race");
    solve->add_option("--eval", eval_str, "fast|slow (overrides the family spec)");
    solve->add_option("--eps", eps, "step-size convergence threshold");
    solve->add_option("--delta", delta, "root matching tolerance");
    solve->add_option("--seed", seed, "seed override for random families");
    solve->add_flag("--json", json_out, "machine-readable output");
    solve->add_flag("--timings", wall, "measure wall time (breaks byte reproducibility)");

    // bench
    std::string degrees_str, methods_str = "newton,aberth", out_path;
    CLI::App* bench = app.add_subcommand("bench", "run a degree sweep and emit CSV");
    bench->add_option("--family", family_str, "family spec")->required();
    bench->add_option("--degrees", degrees_str, "e.g. 2^4..2^12 or 16,32,64");
    bench->add_option("--methods", methods_str, "comma list of newton,aberth,hybrid,race");
    bench->add_option("--out", out_path, "CSV output path");
    bench->add_option("--eps", eps, "step-size convergence threshold");
    bench->add_option("--delta", delta, "root matching tolerance");
    bench->add_option("--seed", seed, "seed override for random families");
    bench->add_flag("--timings", wall, "fill the wall_ms column");

    CLI::App* families = app.add_subcommand("families", "list the family spec grammar");

    CLI11_PARSE(app, argc, argv);

    try {
        if (families->parsed()) {
            std::cout << family_grammar_help();
            return 0;
        }

        FamilySpec spec = parse_family_spec(family_str);
        if (seed != 0) spec.seed = seed;
        if (!eval_str.empty()) {
            if (eval_str == "fast") spec.eval = EvalMode::fast;
            else if (eval_str == "slow") spec.eval = EvalMode::slow;
            else throw SpecError("eval must be fast or slow");
        }

        SolveOptions opts;
        opts.eps = eps;
        opts.delta = delta;
        opts.measure_wall = wall;

        if (solve->parsed()) {
            if (spec.degree < 1) throw SpecError("family spec needs a degree (n= or d=)");
            const SolveReport row = run_solve(spec, parse_method(method_str), opts);
            if (json_out)
                std::cout << report_json(row).dump(2) << "\n";
            else
                print_report(row);
            return row.matched ? 0 : 2;
        }

        // bench
        ExperimentSpec ex;
        ex.family = spec;
        ex.degrees = degrees_str.empty() ? default_degrees(spec.kind)
                                         : parse_degrees(degrees_str);
        {
            std::istringstream ss(methods_str);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) ex.methods.push_back(parse_method(item));
            if (ex.methods.empty()) throw SpecError("no methods given");
        }
        ex.options = opts;
        ex.out_path = out_path;

        const std::vector<SolveReport> rows = run_experiment(ex);
        if (out_path.empty()) std::cout << emit_csv(rows);

        bool all_matched = true;
        for (const SolveReport& r : rows) all_matched = all_matched && r.matched;
        // slope summaries per method on stderr so the CSV stream stays clean
        for (const Method m : ex.methods) {
            std::vector<SolveReport> mine;
            for (const SolveReport& r : rows)
                if (r.method == method_name(m)) mine.push_back(r);
            try {
                const LogLogFit fit = fit_loglog(mine);
                std::fprintf(stderr, "# %s: slope %.3f  intercept %.2f  r2 %.4f\n",
                             method_name(m), fit.slope, fit.intercept, fit.r2);
            } catch (const InsufficientData&) {
                std::fprintf(stderr, "# %s: not enough matched rows for a slope fit\n",
                             method_name(m));
            }
        }
        return all_matched ? 0 : 2;
    } catch (const SpecError& e) {
        std::fprintf(stderr, "invalid spec: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
