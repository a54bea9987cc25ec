#include "greedyjump_cli/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>

#include "greedyjump/greedy.hpp"
#include "greedyjump/radial.hpp"
#include "greedyjump/vdc_geometry.hpp"

namespace greedyjump::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

struct Scale {
    bool quick;
    std::uint64_t n(std::uint64_t full, std::uint64_t reduced) const { return quick ? reduced : full; }
    double tol(double full, double reduced) const { return quick ? reduced : full; }
};

Vec2 uniform_in_disc(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double r = radius * std::sqrt(unif(rng));
    const double t = 2.0 * std::numbers::pi * unif(rng);
    return {r * std::cos(t), r * std::sin(t)};
}

CriterionResult mc_mean(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"mc-mean", "radial", "Stationary mean, closed form vs Monte Carlo", false, "", "", 0.0};
    // Hand-evaluated Gamma ratios: d=8 gives (sqrt(pi)/2) Gamma(9/2)/Gamma(4) = 105 pi / 192.
    const std::vector<std::pair<int, double>> oracle{
        {2, std::numbers::pi / 4.0}, {3, 1.0}, {4, 3.0 * std::numbers::pi / 8.0}, {8, 105.0 * std::numbers::pi / 192.0}};
    const double tol = s.tol(0.01, 0.03);
    const std::uint64_t samples = s.n(1'000'000, 100'000);
    bool ok = true;
    double worst_time = 0.0;
    std::string detail;
    for (const auto& [d, exact] : oracle) {
        const auto t0 = Clock::now();
        McOptions opt;
        opt.d = d;
        opt.burn_in = 10'000;
        opt.n_steps = samples + opt.burn_in;
        opt.seed = seed + static_cast<std::uint64_t>(d);
        const RadialHistogram h = mc_invariant(opt);
        const double dt = seconds_since(t0);
        worst_time = std::max(worst_time, dt);
        const bool closed_ok = std::abs(stationary_mean(d) - exact) <= 1e-12;
        const bool mc_ok = std::abs(h.mean() - exact) <= tol && dt <= 60.0;
        ok = ok && closed_ok && mc_ok;
        detail += fmt("d=%d mc=%.5f exact=%.5f; ", d, h.mean(), exact);
    }
    r.passed = ok;
    r.measured = detail + fmt("max runtime %.2fs", worst_time);
    r.expected = fmt("|mc - exact| <= %g over %llu samples, <= 60 s per d", tol, static_cast<unsigned long long>(samples));
    return r;
}

CriterionResult slope(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"slope", "radial", "Asymptotic slope mean(d)/sqrt(d) at d=64", false, "", "", 0.0};
    const double target = std::sqrt(std::numbers::pi / 8.0);
    const double closed = stationary_mean(64) / 8.0;
    McOptions opt;
    opt.d = 64;
    opt.burn_in = 10'000;
    opt.n_steps = s.n(1'000'000, 100'000) + opt.burn_in;
    opt.seed = seed;
    const double mc = mc_invariant(opt).mean() / 8.0;
    const double closed_rel = std::abs(closed - target) / target;
    const double mc_rel = std::abs(mc - target) / target;
    r.passed = closed_rel <= 0.03 && mc_rel <= 0.05;
    r.measured = fmt("closed %.5f (%.2f%%), mc %.5f (%.2f%%) vs %.5f", closed, 100 * closed_rel, mc, 100 * mc_rel, target);
    r.expected = "closed form within 3%, Monte Carlo within 5%";
    return r;
}

CriterionResult kernel_norm(const Scale&) {
    CriterionResult r{"kernel", "radial", "Kernel normalization and d=3 kernel y/x", false, "", "", 0.0};
    double worst_row = 0.0;
    double worst_d3 = 0.0;
    for (int d = 2; d <= 10; ++d) {
        for (int i = 0; i < 50; ++i) {
            const double x = 0.1 + 19.9 * i / 49.0;
            worst_row = std::max(worst_row, std::abs(kernel_row_integral(d, x) - 1.0));
            if (d == 3) {
                const double lo = std::abs(x - 1.0);
                const double hi = std::sqrt(x * x + 1.0);
                for (int j = 1; j < 20; ++j) {
                    const double y = lo + (hi - lo) * j / 20.0;
                    worst_d3 = std::max(worst_d3, std::abs(kernel(3, x, y) - y / x) / (y / x));
                }
            }
        }
    }
    r.passed = worst_row <= 1e-6 && worst_d3 <= 1e-12;
    r.measured = fmt("max |row integral - 1| = %.2e, max rel |P_3 - y/x| = %.2e", worst_row, worst_d3);
    r.expected = "<= 1e-6 for 50 x in [0.1,20], d=2..10; d=3 pointwise <= 1e-12";
    return r;
}

CriterionResult solver(const Scale& s) {
    CriterionResult r{"solver", "radial", "Fixed-point solver for d=3", false, "", "", 0.0};
    const auto t0 = Clock::now();
    SolverOptions opt;
    opt.d = 3;
    opt.nodes = s.n(2000, 1000);
    opt.max_iters = 500;
    opt.tol = 1e-10;
    opt.estimate_discretization = true;
    try {
        const DensityGrid g = solve_stationary(opt);
        const double dt = seconds_since(t0);
        const double identity = d3_identity_residual(g, 1.0, 5.0);
        // The identity is exact for the continuous equation; the discrete solve
        // carries its reported discretization error on top of the iteration tolerance.
        const double identity_tol = std::max(opt.tol, g.discretization_error.value_or(0.0));
        const double mean_err = std::abs(g.mean() - 1.0);
        r.passed = identity <= identity_tol && mean_err <= 5e-3 && g.iterations <= 500 && dt <= 120.0;
        r.measured = fmt("identity residual %.2e (tol %.2e), mean %.7f, %zu iterations, %.2fs", identity, identity_tol,
                         g.mean(), g.iterations, dt);
    } catch (const SolverError& e) {
        r.passed = false;
        r.measured = fmt("no convergence: %zu iterations, residual %.2e", e.iterations(), e.residual());
    }
    r.expected = "identity within solver tolerance on y in [1,5], |mean - 1| <= 5e-3, <= 500 iterations, <= 120 s";
    return r;
}

CriterionResult representation(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"ks", "radial", "Representation equivalence (KS, d=4)", false, "", "", 0.0};
    const std::size_t n = s.n(100'000, 20'000);
    const double radius = 1.5;
    Point x{0.3, -0.5, 0.7, 0.4};
    x *= radius / x.norm();
    DirectionSource dirs(SourceSpec::uniform_sphere(4, seed), 0);
    std::vector<double> full(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto step = greedy_step(x, dirs.next(), {1e-12, TieMode::choose_plus});
        full[i] = step->next.norm();
    }
    std::mt19937_64 rng(splitmix64(seed));
    std::vector<double> radial(n);
    for (std::size_t i = 0; i < n; ++i) radial[i] = radial_step(radius, sample_first_coord(4, rng));
    const double stat = ks_statistic(full, radial);
    const double crit = ks_critical_1pct(n, n);
    r.passed = stat < crit;
    r.measured = fmt("D = %.5f with n = m = %zu", stat, n);
    r.expected = fmt("D < %.5f (1%% critical value)", crit);
    return r;
}

CriterionResult lyapunov(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"lyapunov", "radial", "Lyapunov inequality grid", false, "", "", 0.0};
    const std::uint64_t trials = s.n(100'000, 20'000);
    bool ok = true;
    double worst = -INFINITY;
    int degenerate = 0;
    std::uint64_t k = 0;
    for (int d : {3, 5}) {
        for (double rad : {5.0, 10.0, 20.0}) {
            for (double alpha : {0.1, 0.5}) {
                const LyapunovReport rep = lyapunov_check(d, rad, alpha, trials, seed + ++k);
                ok = ok && rep.passed;
                worst = std::max(worst, rep.ratio - 3.0 * rep.ratio_se);
                degenerate += rep.degenerate ? 1 : 0;
            }
        }
    }
    r.passed = ok;
    r.measured = fmt("max(ratio - 3 se) = %.5f over 12 cases, %d flagged degenerate", worst, degenerate);
    r.expected = fmt("E e^{a|x'|^2} / bound - 3 se <= 1 for every case, %llu trials",
                     static_cast<unsigned long long>(trials));
    return r;
}

CriterionResult base2_periodic(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"base2-periodic", "vdc", "Base-2 periodicity and semicircle structure", false, "", "", 0.0};
    const std::uint64_t starts = s.n(1000, 200);
    std::mt19937_64 rng(seed);
    const VdcTable table(2, 200);
    std::uint64_t periodic = 0;
    std::uint64_t semicircle = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < starts; ++i) {
        Vec2 z;
        do {
            z = uniform_in_disc(rng, 1.0);
        } while (norm(z) < 1e-6 || norm(z) >= 1.0);
        const PeriodicityReport rep = is_periodic_start(z, 2, 100, 1e-9, &table);
        worst = std::max(worst, rep.max_return_error);
        if (rep.is_periodic && rep.max_return_error <= 1e-9) ++periodic;
        const Trajectory traj = simulate(to_point(z), SourceSpec::van_der_corput(2), 200);
        const SemicircleReport sc = semicircle_check(traj, 1e-9);
        if (sc.passed && sc.entered_at == -1) ++semicircle;
    }
    r.passed = periodic == starts && semicircle == starts;
    r.measured = fmt("%llu/%llu periodic over 100 cycles, max return error %.2e, %llu/%llu semicircle checks",
                     static_cast<unsigned long long>(periodic), static_cast<unsigned long long>(starts), worst,
                     static_cast<unsigned long long>(semicircle), static_cast<unsigned long long>(starts));
    r.expected = "all starts in B(0,1)\\{0} periodic with return error <= 1e-9 and semicircle check passing";
    return r;
}

CriterionResult base2_hitting(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"base2-hitting", "vdc", "Base-2 hitting time bound and slope", false, "", "", 0.0};
    const std::uint64_t starts = s.n(200, 50);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(5.0, 100.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uint64_t within = 0;
    double worst = 0.0;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::uint64_t i = 0; i < starts; ++i) {
        const double rr = radius(rng);
        const double t = angle(rng);
        const HittingResult h = hitting_time({rr * std::cos(t), rr * std::sin(t)}, 2, std::numbers::sqrt2, 100'000);
        if (!h.steps) continue;
        const double steps = static_cast<double>(*h.steps);
        worst = std::max(worst, steps / hitting_bound(rr));
        if (steps <= hitting_bound(rr)) ++within;
        xs.push_back(rr);
        ys.push_back(steps);
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double fitted = sxy / sxx;
    const double slope_bound = 8.0 / (2.0 * (std::numbers::sqrt2 - 1.0));
    r.passed = within == starts && fitted <= slope_bound;
    r.measured = fmt("%llu/%llu within 8(|z0|-2)+8 (max ratio %.3f), slope %.4f",
                     static_cast<unsigned long long>(within), static_cast<unsigned long long>(starts), worst, fitted);
    r.expected = fmt("all within bound, slope <= %.4f", slope_bound);
    return r;
}

CriterionResult base2_pairs(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"base2-pairs", "vdc", "Base-2 pair monotonicity", false, "", "", 0.0};
    const std::uint64_t starts = s.n(20, 5);
    const std::uint64_t steps = s.n(1'000'000, 100'000);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    std::size_t violations = 0;
    std::uint64_t halted = 0;
    std::uint64_t checked = 0;
    SimulateOptions opt;
    opt.norms_only = true;
    for (std::uint64_t i = 0; i < starts; ++i) {
        const Point z{coord(rng), coord(rng)};
        const Trajectory traj = simulate(z, SourceSpec::van_der_corput(2), steps, opt);
        if (traj.halted()) ++halted;
        violations += monotone_pairs_check(traj).size();
        checked += traj.steps();
    }
    r.passed = violations == 0 && halted == 0;
    r.measured = fmt("%zu violations over %llu steps from %llu starts (%llu halted)", violations,
                     static_cast<unsigned long long>(checked), static_cast<unsigned long long>(starts),
                     static_cast<unsigned long long>(halted));
    r.expected = fmt("0 violations of |z_{2n-1}| >= |z_{2n+1}| over %llu steps per start",
                     static_cast<unsigned long long>(steps));
    return r;
}

CriterionResult odd_regions(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"odd-regions", "vdc", "Odd-base periodic triangles", false, "", "", 0.0};
    const std::uint64_t samples = s.n(1000, 200);
    bool ok = true;
    std::string detail;
    for (std::uint64_t b : {5u, 7u, 9u}) {
        const auto [t1, t2] = triangle_region(b);
        std::mt19937_64 rng(seed + b);
        const VdcTable inside_table(b, 100 * b);
        std::uint64_t inside_ok = 0;
        for (std::uint64_t i = 0; i < samples; ++i) {
            const Vec2 z = (i % 2 == 0 ? t1 : t2).sample(rng);
            if (is_periodic_start(z, b, 100, 1e-9, &inside_table).is_periodic) ++inside_ok;
        }

        // Outside points fail once some block rotation gets close enough to
        // 2 pi / b; b^4 blocks bring the rotation within 2 pi / b^5 of it.
        // Boundary classification uses the looser 1e-6 return tolerance.
        const std::uint64_t outside_cycles = b * b * b * b;
        const VdcTable outside_table(b, static_cast<std::size_t>(outside_cycles * b));
        std::uniform_real_distribution<double> coord(-2.0, 2.0);
        std::uint64_t outside_fail = 0;
        double nearest = INFINITY;
        for (std::uint64_t i = 0; i < samples; ++i) {
            Vec2 z;
            double dist = 0.0;
            const double cap = (i % 2 == 0) ? 0.02 : INFINITY;  // half the samples hug the boundary
            do {
                z = {coord(rng), coord(rng)};
                dist = std::min(t1.distance(z), t2.distance(z));
            } while (dist < 0.01 || dist > cap);
            nearest = std::min(nearest, dist);
            if (!is_periodic_start(z, b, outside_cycles, 1e-6, &outside_table).is_periodic) ++outside_fail;
        }

        double chord = 0.0;
        for (const TriangleRegion* t : {&t1, &t2}) {
            chord = std::max(chord, polygon_trace(t->centroid(), b, 100).max_chord_error);
        }
        const bool b_ok = inside_ok == samples && outside_fail == samples && chord <= 1e-9;
        ok = ok && b_ok;
        detail += fmt("b=%llu in %llu/%llu out-fail %llu/%llu chord %.1e; ", static_cast<unsigned long long>(b),
                      static_cast<unsigned long long>(inside_ok), static_cast<unsigned long long>(samples),
                      static_cast<unsigned long long>(outside_fail), static_cast<unsigned long long>(samples), chord);
    }
    r.passed = ok;
    r.measured = detail;
    r.expected = "inside periodic over 100 cycles; outside (dist >= 0.01) not periodic within b^4 cycles; chord error <= 1e-9";
    return r;
}

CriterionResult even_bases(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"even-stop", "vdc", "Even-base emptiness and stop cycles", false, "", "", 0.0};
    const std::uint64_t samples = s.n(100'000, 20'000);
    bool empty = true;
    std::string detail;
    for (std::uint64_t b : {4u, 6u, 8u}) {
        const PeriodicSearch found = count_periodic_starts(b, samples, 3.0, 50, seed + b);
        empty = empty && found.periodic == 0;
        detail += fmt("b=%llu: %llu/%llu periodic at 50 cycles; ", static_cast<unsigned long long>(b),
                      static_cast<unsigned long long>(found.periodic), static_cast<unsigned long long>(samples));
    }
    bool stops = true;
    for (double eps : {0.2, 0.05, 0.01}) {
        const StopCyclePrediction p = predicted_stop_cycle(8, eps);
        const auto sim = simulate_stop_cycle(8, eps, 100'000);
        const bool agree = sim && *sim == p.k && p.k_digits == p.k;
        stops = stops && agree;
        detail += fmt("eps=%g k=%llu sim=%lld; ", eps, static_cast<unsigned long long>(p.k),
                      sim ? static_cast<long long>(*sim) : -1LL);
    }
    r.passed = empty && stops;
    r.measured = detail + "rule: first k with 2 pi Vdc_b(kb) >= threshold";
    r.expected = "0 periodic starts in [-3,3]^2 for b=4,6,8; simulated stop cycle = predicted k for b=8";
    return r;
}

CriterionResult stall(const Scale&) {
    CriterionResult r{"stall", "vdc", "Stall construction", false, "", "", 0.0};
    bool ok = true;
    std::string detail;
    for (std::uint64_t n : {4u, 16u, 64u}) {
        const StallStart st = stall_start(n);
        ok = ok && st.verified && norm(st.z) > 1.0;
        detail += fmt("n=%llu |z|=%.6f alpha=%.6f ok=%d; ", static_cast<unsigned long long>(n), norm(st.z), st.alpha,
                      st.verified ? 1 : 0);
    }
    bool decreasing = true;
    double prev = INFINITY;
    for (unsigned k = 2; k <= 20; ++k) {
        const double a = stall_alpha(k);
        decreasing = decreasing && a < prev && a > 1.0;
        prev = a;
    }
    ok = ok && decreasing && prev - 1.0 < 1e-6;
    r.passed = ok;
    r.measured = detail + fmt("alpha_k decreasing over k=2..20: %s, alpha_20 - 1 = %.2e", decreasing ? "yes" : "no",
                              prev - 1.0);
    r.expected = "z_{-1} = z_{2i-1} for all i <= n; alpha_k strictly decreasing to 1";
    return r;
}

CriterionResult exp_tail(const Scale& s, std::uint64_t seed) {
    CriterionResult r{"exp-tail", "radial", "Exponential moment sanity (tail above mean + 5)", false, "", "", 0.0};
    McOptions opt;
    opt.d = 3;
    opt.burn_in = 10'000;
    opt.n_steps = s.n(1'000'000, 100'000) + opt.burn_in;
    opt.seed = seed;
    const RadialHistogram h = mc_invariant(opt);
    r.passed = h.tail_fraction() < 1e-4;
    r.measured = fmt("%llu of %llu samples above %.1f (fraction %.2e), max r %.3f",
                     static_cast<unsigned long long>(h.tail_count), static_cast<unsigned long long>(h.n_samples),
                     h.tail_threshold, h.tail_fraction(), h.max_r);
    r.expected = "fraction < 1e-4";
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* progress) {
    const Scale s{options.quick};
    const std::uint64_t seed = options.seed;
    const std::vector<std::pair<std::pair<std::string, std::string>, std::function<CriterionResult()>>> battery{
        {{"mc-mean", "radial"}, [&] { return mc_mean(s, seed); }},
        {{"slope", "radial"}, [&] { return slope(s, seed + 100); }},
        {{"kernel", "radial"}, [&] { return kernel_norm(s); }},
        {{"solver", "radial"}, [&] { return solver(s); }},
        {{"ks", "radial"}, [&] { return representation(s, seed + 200); }},
        {{"lyapunov", "radial"}, [&] { return lyapunov(s, seed + 300); }},
        {{"base2-periodic", "vdc"}, [&] { return base2_periodic(s, seed + 400); }},
        {{"base2-hitting", "vdc"}, [&] { return base2_hitting(s, seed + 500); }},
        {{"base2-pairs", "vdc"}, [&] { return base2_pairs(s, seed + 600); }},
        {{"odd-regions", "vdc"}, [&] { return odd_regions(s, seed + 700); }},
        {{"even-stop", "vdc"}, [&] { return even_bases(s, seed + 800); }},
        {{"stall", "vdc"}, [&] { return stall(s); }},
        {{"exp-tail", "radial"}, [&] { return exp_tail(s, seed + 900); }},
    };
    std::vector<CriterionResult> results;
    for (const auto& [key, fn] : battery) {
        if (!options.only.empty() && options.only != key.first && options.only != key.second) continue;
        const auto t0 = Clock::now();
        CriterionResult res = fn();
        res.seconds = seconds_since(t0);
        if (progress) *progress << format_result(res) << std::endl;
        results.push_back(std::move(res));
    }
    return results;
}

std::string format_result(const CriterionResult& r) {
    return fmt("[%s] %-15s %s | measured: %s | expected: %s | %.1fs", r.passed ? "PASS" : "FAIL", r.id.c_str(),
               r.title.c_str(), r.measured.c_str(), r.expected.c_str(), r.seconds);
}

}  // namespace greedyjump::cli
