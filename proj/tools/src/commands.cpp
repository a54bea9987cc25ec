#include "greedyjump_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "greedyjump/greedy.hpp"
#include "greedyjump/io.hpp"
#include "greedyjump/literals.hpp"
#include "greedyjump/radial.hpp"
#include "greedyjump/vdc_geometry.hpp"

namespace greedyjump::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct Output {
    int exit_code = kExitOk;
    std::vector<std::string> files;
};

class Writer {
public:
    Writer(const ExperimentConfig& config, Output& out) : config_(config), out_(out) {}

    void csv(const std::string& name, const std::string& body, const std::string& extra_header = {}) {
        std::string text = "# config: " + config_.canonical() + "\n" + extra_header + body;
        write(name, text);
    }

    void json_file(const std::string& name, json doc) {
        doc["config"] = config_.canonical();
        doc["manifest"] = "manifest.json";
        write(name, doc.dump(2) + "\n");
    }

private:
    void write(const std::string& name, const std::string& text) {
        write_file_atomic(config_.out_dir / name, text);
        out_.files.push_back(name);
    }

    const ExperimentConfig& config_;
    Output& out_;
};

json to_json(Vec2 v) { return json::array({v.x, v.y}); }

json to_json(const Point& p) {
    json a = json::array();
    for (double c : p.coords()) a.push_back(c);
    return a;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Output cmd_simulate(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    const SourceSpec source = c.source("source");
    const std::uint64_t n = c.count("n");
    SimulateOptions opt;
    opt.policy.tolerance = c.real("tie-tol");
    opt.policy.mode = c.text("tie-mode") == "halt" ? TieMode::halt : TieMode::choose_plus;
    opt.norms_only = c.flag("norms-only") || (!c.flag("full-states") && n > c.count("full-limit"));
    opt.reservoir_size = opt.norms_only ? static_cast<std::size_t>(c.count("reservoir")) : 0;
    opt.reservoir_seed = splitmix64(c.seed);
    const Trajectory traj = simulate(c.point("start"), source, n, opt);

    w.csv("trajectory.csv", trajectory_csv(traj));
    if (opt.norms_only) w.csv("samples.csv", samples_csv(traj));

    json overrides = json::array();
    for (std::size_t i = 0; i < traj.tie_overrides.size() && i < 1000; ++i) {
        overrides.push_back({{"step", traj.tie_overrides[i].step}, {"inner_product", traj.tie_overrides[i].inner_product}});
    }
    json doc{
        {"source", source.canonical()},
        {"seed", c.seed},
        {"start_index", traj.start_index},
        {"steps_taken", traj.steps()},
        {"norms_only", traj.norms_only},
        {"final_state", to_json(traj.last)},
        {"final_norm", traj.norms.back()},
        {"indeterminate_at", traj.indeterminate_at ? json(*traj.indeterminate_at) : json(nullptr)},
        {"tie_policy", {{"tolerance", opt.policy.tolerance}, {"mode", c.text("tie-mode")}}},
        {"tie_override_count", traj.tie_overrides.size()},
        {"tie_overrides", overrides},
    };
    w.json_file("simulate.json", doc);
    if (traj.halted()) {
        log << "indeterminate step at index " << *traj.indeterminate_at << "; trajectory truncated\n";
        out.exit_code = kExitIndeterminate;
    } else {
        log << "simulated " << traj.steps() << " steps, final norm " << format_real(traj.norms.back()) << "\n";
    }
    return out;
}

json histogram_summary(const RadialHistogram& h) {
    return {
        {"d", h.d},
        {"seed", h.seed},
        {"n_samples", h.n_samples},
        {"burn_in", h.burn_in},
        {"shards", h.shards},
        {"mean", h.mean()},
        {"variance", h.variance()},
        {"standard_error", h.standard_error()},
        {"raw_moments", {{"sum", h.sum}, {"sum_sq", h.sum_sq}}},
        {"max_r", h.max_r},
        {"overflow", h.overflow},
        {"alpha", h.alpha},
        {"exp_moment_sum", h.exp_moment_sum},
        {"exp_moment_capped", h.exp_capped},
        {"tail_threshold", h.tail_threshold},
        {"tail_count", h.tail_count},
        {"tail_fraction", h.tail_fraction()},
    };
}

Output cmd_invariant(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    McOptions opt;
    opt.d = static_cast<int>(c.integer("d"));
    opt.n_steps = c.count("steps");
    opt.burn_in = c.count("burnin");
    opt.bins = static_cast<std::size_t>(c.count("bins"));
    opt.alpha = c.real("alpha");
    opt.seed = c.seed;
    const unsigned shards = static_cast<unsigned>(c.count("shards"));
    const RadialHistogram h = shards > 1 ? mc_invariant_sharded(opt, shards) : mc_invariant(opt);
    const std::string header = "# d=" + std::to_string(h.d) + " n_samples=" + std::to_string(h.n_samples) +
                               " mean=" + format_real(h.mean()) + " variance=" + format_real(h.variance()) +
                               " overflow=" + std::to_string(h.overflow) + "\n";
    w.csv("histogram.csv", histogram_csv(h), header);
    json doc = histogram_summary(h);
    doc["stationary_mean"] = stationary_mean(opt.d);
    w.json_file("invariant.json", doc);
    log << "d=" << h.d << " mean " << format_real(h.mean()) << " (closed form " << format_real(stationary_mean(opt.d))
        << ")\n";
    return out;
}

Output cmd_solve(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    SolverOptions opt;
    opt.d = static_cast<int>(c.integer("d"));
    opt.nodes = static_cast<std::size_t>(c.count("nodes"));
    opt.max_iters = static_cast<std::size_t>(c.count("max-iters"));
    opt.tol = c.real("tol");
    opt.estimate_discretization = c.flag("discretization");
    try {
        const DensityGrid g = solve_stationary(opt);
        w.csv("density.csv", density_csv(g));
        json doc{
            {"d", g.d},
            {"converged", true},
            {"nodes", g.nodes.size()},
            {"r_max", g.r_max},
            {"iterations", g.iterations},
            {"residual", g.residual},
            {"tolerance", opt.tol},
            {"eigenvalue", g.eigenvalue},
            {"integral", g.integral()},
            {"mean", g.mean()},
            {"variance", g.variance()},
            {"stationary_mean", stationary_mean(g.d)},
            {"truncation_residual", g.truncation_residual},
            {"discretization_error", g.discretization_error ? json(*g.discretization_error) : json(nullptr)},
        };
        if (g.d == 3) doc["d3_identity_residual"] = d3_identity_residual(g);
        w.json_file("solve.json", doc);
        log << "converged after " << g.iterations << " iterations, mean " << format_real(g.mean()) << "\n";
    } catch (const SolverError& e) {
        w.json_file("solve.json", {{"d", opt.d},
                                   {"converged", false},
                                   {"iterations", e.iterations()},
                                   {"residual", e.residual()},
                                   {"tolerance", opt.tol}});
        log << e.what() << "\n";
        out.exit_code = kExitError;
    }
    return out;
}

Output cmd_kernel(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    const int d = static_cast<int>(c.integer("d"));
    const double x = c.real("x");
    const std::uint64_t points = c.count("points");
    if (points == 0) throw std::invalid_argument("--points must be positive");
    const double lo = std::abs(x - 1.0);
    const double hi = std::sqrt(x * x + 1.0);
    std::string body = "y,density\n";
    for (std::uint64_t i = 0; i < points; ++i) {
        const double y = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(points);
        body += format_real(y) + ',' + format_real(kernel(d, x, y)) + '\n';
    }
    w.csv("kernel.csv", body);
    const double row = kernel_row_integral(d, x);
    w.json_file("kernel.json", {{"d", d}, {"x", x}, {"y_min", lo}, {"y_max", hi}, {"row_integral", row},
                                {"c_d", sphere_coord_constant(d)}});
    log << "row integral " << format_real(row) << "\n";
    return out;
}

json report_json(const PeriodicityReport& r) {
    return {
        {"b", r.b},
        {"z_start", to_json(r.z_start)},
        {"cycles_checked", r.cycles_checked},
        {"is_periodic", r.is_periodic},
        {"sign_constant", r.sign_constant},
        {"uniform_sign", r.uniform_sign},
        {"first_sign", r.first_sign},
        {"first_violation_step", r.first_violation_step ? json(*r.first_violation_step) : json(nullptr)},
        {"indeterminate_at", r.indeterminate_at ? json(*r.indeterminate_at) : json(nullptr)},
        {"max_return_error", r.max_return_error},
    };
}

Output cmd_vdc_periodic(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    const PeriodicityReport r =
        is_periodic_start(to_vec2(c.point("start")), c.count("b"), c.count("cycles"), c.real("tol"));
    json doc = report_json(r);
    doc["tolerance"] = c.real("tol");
    w.json_file("vdc-periodic.json", doc);
    log << (r.is_periodic ? "periodic" : "not periodic") << " over " << r.cycles_checked << " cycles\n";
    if (r.indeterminate_at) out.exit_code = kExitIndeterminate;
    return out;
}

Output cmd_vdc_region(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    const std::uint64_t b = c.count("b");
    RasterOptions opt;
    opt.resolution = static_cast<std::size_t>(c.count("resolution"));
    opt.half_width = c.real("width");
    opt.steps = c.count("steps");
    opt.threshold = c.real("threshold");
    const std::vector<RasterCell> cells = raster_region(b, opt);
    w.csv("raster.csv", raster_csv(cells));
    std::size_t periodic = 0;
    for (const RasterCell& cell : cells) periodic += cell.periodic ? 1 : 0;
    json doc{{"b", b}, {"cells", cells.size()}, {"periodic_cells", periodic}, {"empirical_only", true}};
    if (b >= 5 && b % 2 == 1) {
        const auto [t1, t2] = triangle_region(b);
        auto tri = [](const TriangleRegion& t) {
            return json{{"vertices", {to_json(t.vertices[0]), to_json(t.vertices[1]), to_json(t.vertices[2])}},
                        {"sign_family", t.family == SignFamily::minus ? "minus" : "plus"},
                        {"area", t.area()}};
        };
        doc["triangles"] = {tri(t1), tri(t2)};
        doc["empirical_only"] = false;
        doc["apex_offset"] = triangle_apex_offset(b);
    }
    if (b >= 3) {
        json inner = json::array();
        for (Vec2 v : inner_polygon(b, 0.0, {0.0, 0.0})) inner.push_back(to_json(v));
        doc["inner_polygon_from_origin"] = inner;
    }
    w.json_file("vdc-region.json", doc);
    log << periodic << " of " << cells.size() << " cells periodic\n";
    return out;
}

Output cmd_hitting(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    const Vec2 z0 = to_vec2(c.point("start"));
    const std::uint64_t b = c.count("b");
    const HittingResult h = hitting_time(z0, b, c.real("radius"), c.count("max-steps"));
    json doc{{"b", b},
             {"start", to_json(z0)},
             {"start_norm", norm(z0)},
             {"target_radius", c.real("radius")},
             {"steps", h.steps ? json(*h.steps) : json(nullptr)},
             {"halted_at", h.halted_at ? json(*h.halted_at) : json(nullptr)}};
    if (b == 2) doc["bound"] = hitting_bound(norm(z0));
    w.json_file("hitting.json", doc);
    if (h.halted_at) {
        log << "indeterminate step at index " << *h.halted_at << "\n";
        out.exit_code = kExitIndeterminate;
    } else if (h.steps) {
        log << "reached the target after " << *h.steps << " steps\n";
    } else {
        log << "target not reached within the step limit\n";
    }
    return out;
}

Output cmd_stall(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    const StallStart s = stall_start(c.count("n"));
    const Trajectory traj = simulate(to_point(s.z), SourceSpec::van_der_corput(2), 2 * s.n);
    w.csv("trajectory.csv", trajectory_csv(traj));
    w.json_file("stall.json", {{"n", s.n},
                               {"k", s.k},
                               {"alpha_n", s.alpha},
                               {"exact_bound", s.exact_bound},
                               {"angle", s.angle},
                               {"radius", s.radius},
                               {"z", to_json(s.z)},
                               {"verified", s.verified},
                               {"max_return_error", s.max_return_error}});
    log << "z = (" << format_real(s.z.x) << ", " << format_real(s.z.y) << "), verified: " << std::boolalpha
        << s.verified << "\n";
    return out;
}

Output cmd_stopcycle(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    const std::uint64_t b = c.count("b");
    const double eps = c.real("eps");
    const StopCyclePrediction p = predicted_stop_cycle(b, eps);
    const auto simulated = simulate_stop_cycle(b, eps, c.count("max-cycles"));
    const std::uint64_t orbit_steps = std::min<std::uint64_t>((p.k + 1) * b, 100000);
    const Trajectory traj = simulate(Point{eps, 0.5 * p.height}, SourceSpec::van_der_corput(b), orbit_steps);
    w.csv("trajectory.csv", trajectory_csv(traj));
    w.json_file("stopcycle.json", {{"b", b},
                                   {"epsilon", eps},
                                   {"height", p.height},
                                   {"cot_pi_over_b", 1.0 / std::tan(std::numbers::pi / static_cast<double>(b))},
                                   {"threshold", p.threshold},
                                   {"predicted_k", p.k},
                                   {"digit_algorithm_k", p.k_digits},
                                   {"step_budget", p.step_budget},
                                   {"step_budget_base_b", p.step_budget_base_b},
                                   {"simulated_k", simulated ? json(*simulated) : json(nullptr)},
                                   {"agree", simulated && *simulated == p.k},
                                   {"rule", "first k with 2 pi Vdc_b(kb) >= threshold"}});
    log << "predicted k " << p.k << ", simulated " << (simulated ? std::to_string(*simulated) : "none") << "\n";
    return out;
}

Output cmd_harmonic(const ExperimentConfig& c, std::ostream& log) {
    Output out;
    Writer w(c, out);
    const double target = c.real("target");
    const std::uint64_t n = c.count("n");
    const std::uint64_t every = std::max<std::uint64_t>(1, c.count("every"));
    const std::vector<double> xs = greedy_harmonic(target, n);
    std::string body = "k,x,abs_error\n";
    // K: the first index after which |x_k - target| <= 2/k holds for good.
    std::uint64_t settled = n + 1;
    for (std::uint64_t k = n; k >= 1; --k) {
        if (std::abs(xs[k - 1] - target) > 2.0 / static_cast<double>(k)) break;
        settled = k;
    }
    double min_error = INFINITY;
    std::uint64_t below_square = 0;
    for (std::uint64_t k = 1; k <= n; ++k) {
        const double err = std::abs(xs[k - 1] - target);
        if (k % every == 0 || k == 1) body += std::to_string(k) + ',' + format_real(xs[k - 1]) + ',' + format_real(err) + '\n';
        if (k >= settled) {
            min_error = std::min(min_error, err);
            if (err < 1.0 / (static_cast<double>(k) * static_cast<double>(k))) ++below_square;
        }
    }
    w.csv("harmonic.csv", body);
    w.json_file("harmonic.json", {{"target", target},
                                  {"n", n},
                                  {"settled_from", settled <= n ? json(settled) : json(nullptr)},
                                  {"min_error_after_settling", finite_or_null(min_error)},
                                  {"count_error_below_k_minus_2", below_square},
                                  {"final", xs.back()}});
    log << "x_n = " << format_real(xs.back()) << "\n";
    return out;
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    const std::string started_at = utc_now();
    Output out;
    std::string error;
    try {
        fs::create_directories(config.out_dir);
        switch (config.command) {
            case Command::simulate: out = cmd_simulate(config, log); break;
            case Command::invariant: out = cmd_invariant(config, log); break;
            case Command::solve: out = cmd_solve(config, log); break;
            case Command::kernel: out = cmd_kernel(config, log); break;
            case Command::vdc_periodic: out = cmd_vdc_periodic(config, log); break;
            case Command::vdc_region: out = cmd_vdc_region(config, log); break;
            case Command::hitting: out = cmd_hitting(config, log); break;
            case Command::stall: out = cmd_stall(config, log); break;
            case Command::stopcycle: out = cmd_stopcycle(config, log); break;
            case Command::harmonic: out = cmd_harmonic(config, log); break;
        }
    } catch (const std::exception& e) {
        error = e.what();
        log << "error: " << error << "\n";
        out.exit_code = kExitError;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json params = json::object();
    for (const auto& [k, v] : config.params) params[k] = v;
    json manifest{
        {"tool", "greedyjump"},
        {"version", kVersion},
        {"command", std::string(command_name(config.command))},
        {"config", config.canonical()},
        {"params", params},
        {"seed", config.seed},
        {"seed_origin", config.seed_origin},
        {"files", out.files},
        {"exit_code", out.exit_code},
        {"started_at", started_at},
        {"wall_time_s", wall},
        {"compiler", __VERSION__},
    };
    if (!error.empty()) manifest["error"] = error;
    try {
        write_file_atomic(config.out_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        log << "error: cannot write manifest: " << e.what() << "\n";
        return kExitError;
    }
    return out.exit_code;
}

}  // namespace greedyjump::cli
