#include "greedyjump/vdc_geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace greedyjump {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTieTolerance = 1e-12;

// One base-b greedy step on a plane point. Returns the sign, or 0 on a tie.
int plane_step(Vec2& x, Vec2 v) noexcept {
    const double ip = x.x * v.x + x.y * v.y;
    if (std::abs(ip) <= kTieTolerance * norm(x)) return 0;
    const int s = ip > 0.0 ? -1 : 1;
    x.x += s * v.x;
    x.y += s * v.y;
    return s;
}

unsigned resolve_threads(unsigned threads, std::size_t work) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, work)));
}

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    threads = resolve_threads(threads, count);
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) noexcept {
    const Vec2 ab = b - a;
    const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
    return norm(p - (a + t * ab));
}

std::vector<Vec2> clip(const std::vector<Vec2>& poly, const HalfPlane& h) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const double fa = dot(h.normal, a) - h.offset;
        const double fb = dot(h.normal, b) - h.offset;
        if (fa >= 0.0) out.push_back(a);
        if ((fa >= 0.0) != (fb >= 0.0)) {
            const double t = fa / (fa - fb);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

Vec2 unit_turns(double turns) {
    const Point p = unit_from_turns(turns);
    return {p[0], p[1]};
}

}  // namespace

double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }

Vec2 to_vec2(const Point& p) {
    if (p.dim() != 2) throw std::invalid_argument("expected a 2-D point");
    return {p[0], p[1]};
}

Point to_point(Vec2 v) { return Point{v.x, v.y}; }

VdcTable::VdcTable(std::uint64_t base, std::size_t count) : base_(base), dirs_(count) {
    if (base < 2) throw std::invalid_argument("VdcTable: base must be >= 2");
    for (std::size_t n = 0; n < count; ++n) dirs_[n] = unit_turns(vdc(n, base));
}

PeriodicityReport is_periodic_start(Vec2 z, std::uint64_t b, std::uint64_t cycles, double tol,
                                    const VdcTable* table) {
    if (b < 2) throw std::invalid_argument("is_periodic_start: base must be >= 2");
    if (cycles < 1) throw std::invalid_argument("is_periodic_start: cycles must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("is_periodic_start: tol must be positive");
    const std::size_t needed = static_cast<std::size_t>(cycles * b);
    std::optional<VdcTable> local;
    if (table == nullptr || table->base() != b || table->size() < needed) {
        local.emplace(b, needed);
        table = &*local;
    }

    PeriodicityReport rep;
    rep.b = b;
    rep.z_start = z;
    rep.sign_constant = true;
    rep.uniform_sign = true;
    Vec2 x = z;
    for (std::uint64_t k = 0; k < cycles; ++k) {
        int block_sign = 0;
        for (std::uint64_t j = 0; j < b; ++j) {
            const std::uint64_t n = k * b + j;
            const int s = plane_step(x, (*table)[static_cast<std::size_t>(n)]);
            if (s == 0) {
                rep.indeterminate_at = static_cast<std::int64_t>(n);
                rep.first_violation_step = static_cast<std::int64_t>(n);
                return rep;
            }
            if (rep.first_sign == 0) rep.first_sign = s;
            if (s != rep.first_sign) rep.uniform_sign = false;
            if (j == 0) {
                block_sign = s;
            } else if (s != block_sign) {
                rep.sign_constant = false;
                rep.first_violation_step = static_cast<std::int64_t>(n);
                return rep;
            }
        }
        const double err = norm(x - z);
        rep.max_return_error = std::max(rep.max_return_error, err);
        if (err > tol) {
            rep.first_violation_step = static_cast<std::int64_t>((k + 1) * b - 1);
            return rep;
        }
        ++rep.cycles_checked;
    }
    rep.is_periodic = true;
    return rep;
}

double chord_radius(std::uint64_t b, std::uint64_t j) {
    if (b < 2) throw std::invalid_argument("chord_radius: base must be >= 2");
    if (j >= b) throw std::invalid_argument("chord_radius: need 0 <= j < b");
    if (j == 0) return 0.0;
    const double bb = static_cast<double>(b);
    return std::sin(static_cast<double>(j) * std::numbers::pi / bb) / std::sin(std::numbers::pi / bb);
}

std::vector<Vec2> intersect_halfplanes(const std::vector<HalfPlane>& planes, double extent) {
    std::vector<Vec2> poly{{-extent, -extent}, {extent, -extent}, {extent, extent}, {-extent, extent}};
    for (const HalfPlane& h : planes) {
        poly = clip(poly, h);
        if (poly.empty()) return poly;
    }
    std::vector<Vec2> merged;
    for (const Vec2& p : poly) {
        if (merged.empty() || norm(p - merged.back()) > 1e-12) merged.push_back(p);
    }
    while (merged.size() > 1 && norm(merged.front() - merged.back()) <= 1e-12) merged.pop_back();
    return merged;
}

std::vector<Vec2> polygon_vertices(std::uint64_t b, double rotation_turns, Vec2 z_start) {
    if (b < 2) throw std::invalid_argument("polygon_vertices: base must be >= 2");
    std::vector<Vec2> verts{z_start};
    Vec2 z = z_start;
    for (std::uint64_t j = 0; j + 1 < b; ++j) {
        z = z - unit_turns(rotation_turns + static_cast<double>(j) / static_cast<double>(b));
        verts.push_back(z);
    }
    return verts;
}

std::vector<Vec2> inner_polygon(std::uint64_t b, double rotation_turns, Vec2 z_start) {
    if (b < 3) throw std::invalid_argument("inner_polygon: base must be >= 3");
    const std::vector<Vec2> verts = polygon_vertices(b, rotation_turns, z_start);
    std::vector<HalfPlane> planes;
    for (std::size_t k = 0; k < verts.size(); ++k) {
        const Vec2 from = verts[k];
        const Vec2 to = verts[(k + 1) % verts.size()];
        const Vec2 side = to - from;
        planes.push_back({side, dot(side, from)});
    }
    return intersect_halfplanes(planes);
}

bool TriangleRegion::contains(Vec2 p) const noexcept {
    const double c0 = cross(vertices[1] - vertices[0], p - vertices[0]);
    const double c1 = cross(vertices[2] - vertices[1], p - vertices[1]);
    const double c2 = cross(vertices[0] - vertices[2], p - vertices[2]);
    return (c0 > 0 && c1 > 0 && c2 > 0) || (c0 < 0 && c1 < 0 && c2 < 0);
}

Vec2 TriangleRegion::centroid() const noexcept {
    return (1.0 / 3.0) * (vertices[0] + vertices[1] + vertices[2]);
}

double TriangleRegion::distance(Vec2 p) const noexcept {
    if (contains(p)) return 0.0;
    return std::min({segment_distance(p, vertices[0], vertices[1]), segment_distance(p, vertices[1], vertices[2]),
                     segment_distance(p, vertices[2], vertices[0])});
}

double TriangleRegion::area() const noexcept {
    return 0.5 * std::abs(cross(vertices[1] - vertices[0], vertices[2] - vertices[0]));
}

Vec2 TriangleRegion::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double r1 = unif(rng);
    double r2 = unif(rng);
    if (r1 + r2 > 1.0) {
        r1 = 1.0 - r1;
        r2 = 1.0 - r2;
    }
    return vertices[0] + r1 * (vertices[1] - vertices[0]) + r2 * (vertices[2] - vertices[0]);
}

std::pair<TriangleRegion, TriangleRegion> triangle_region(std::uint64_t b) {
    if (b < 5 || b % 2 == 0) throw std::invalid_argument("triangle_region: base must be odd and >= 5");
    // All-minus block with rotation rho and directions u_j = e^{2 pi i (rho + j/b)}
    // requires <z, u_j> > c_j = sum_{m=1..j} cos(2 pi m / b). The rotation
    // rho = 1/b shifts the thresholds by one index, so the intersection over
    // both extreme rotations keeps the larger threshold per direction.
    const double bb = static_cast<double>(b);
    std::vector<double> c(b, 0.0);
    for (std::uint64_t j = 1; j < b; ++j) c[j] = c[j - 1] + std::cos(kTwoPi * static_cast<double>(j) / bb);
    std::vector<HalfPlane> planes;
    for (std::uint64_t m = 0; m < b; ++m) {
        const double offset = std::max(c[m], c[(m + b - 1) % b]);
        planes.push_back({unit_turns(static_cast<double>(m) / bb), offset});
    }
    const std::vector<Vec2> poly = intersect_halfplanes(planes);
    if (poly.size() != 3) {
        throw std::logic_error("triangle_region: expected a triangle, got " + std::to_string(poly.size()) +
                               " vertices");
    }
    TriangleRegion t1{{poly[0], poly[1], poly[2]}, SignFamily::minus};
    TriangleRegion t2{{-poly[0], -poly[1], -poly[2]}, SignFamily::plus};
    return {t1, t2};
}

double triangle_apex_offset(std::uint64_t b) {
    return 0.5 - 1.0 / (2.0 * std::cos(std::numbers::pi / static_cast<double>(b)));
}

double triangle_adjacent_offset(std::uint64_t b) {
    const double bb = static_cast<double>(b);
    return 0.5 - std::cos(kTwoPi / bb) / (2.0 * std::cos(std::numbers::pi / bb));
}

PolygonTrace polygon_trace(Vec2 z_start, std::uint64_t b, std::uint64_t cycles) {
    if (b < 2 || cycles < 1) throw std::invalid_argument("polygon_trace: need b >= 2 and cycles >= 1");
    const VdcTable table(b, static_cast<std::size_t>(cycles * b));
    PolygonTrace tr;
    tr.b = b;
    Vec2 x = z_start;
    Vec2 prev_step{};
    for (std::uint64_t k = 0; k < cycles; ++k) {
        tr.rotations.push_back(kTwoPi * vdc(k * b, b));
        for (std::uint64_t j = 0; j < b; ++j) {
            const std::uint64_t n = k * b + j;
            const Vec2 before = x;
            if (plane_step(x, table[static_cast<std::size_t>(n)]) == 0) {
                throw std::runtime_error("polygon_trace: indeterminate step " + std::to_string(n));
            }
            const Vec2 step = x - before;
            if (j > 0) {
                const double turn = std::atan2(cross(prev_step, step), dot(prev_step, step));
                tr.max_turn_error = std::max(tr.max_turn_error, std::abs(turn - kTwoPi / static_cast<double>(b)));
            }
            prev_step = step;
            const double r = norm(x - z_start);
            tr.chord_radii.push_back(r);
            tr.max_chord_error = std::max(tr.max_chord_error, std::abs(r - chord_radius(b, (n + 1) % b)));
        }
    }
    return tr;
}

HittingResult hitting_time(Vec2 z0, std::uint64_t b, double target_radius, std::uint64_t max_steps) {
    if (!std::isfinite(z0.x) || !std::isfinite(z0.y)) throw std::invalid_argument("hitting_time: start must be finite");
    if (b < 2) throw std::invalid_argument("hitting_time: base must be >= 2");
    HittingResult res;
    if (norm(z0) < target_radius) {
        res.steps = 0;
        return res;
    }
    Vec2 x = z0;
    for (std::uint64_t n = 0; n < max_steps; ++n) {
        if (plane_step(x, unit_turns(vdc(n, b))) == 0) {
            res.halted_at = static_cast<std::int64_t>(n);
            return res;
        }
        if (norm(x) < target_radius) {
            res.steps = n + 1;
            return res;
        }
    }
    return res;
}

double hitting_bound(double start_norm) noexcept { return 8.0 * (start_norm - 2.0) + 8.0; }

namespace {

void require_base2(const Trajectory& traj, const char* what) {
    if (traj.source.kind != SourceKind::VanDerCorput || traj.source.base != 2) {
        throw std::invalid_argument(std::string(what) + ": trajectory must come from the base-2 van der Corput source");
    }
    if (traj.start_index != -1) throw std::invalid_argument(std::string(what) + ": trajectory must start at z_{-1}");
}

}  // namespace

std::vector<PairViolation> monotone_pairs_check(const Trajectory& traj, double tol) {
    require_base2(traj, "monotone_pairs_check");
    std::vector<PairViolation> out;
    // Entry k holds z_{k-1}; z_{2n-1} and z_{2n+1} are entries 2n and 2n + 2.
    // A base-2 pair either returns or moves by twice a unit vector, so equal
    // norms at points more than a unit apart mean a genuine sideways move.
    const bool with_states = !traj.states.empty();
    for (std::size_t k = 0; k + 2 < traj.norms.size(); k += 2) {
        const double before = traj.norms[k];
        const double after = traj.norms[k + 2];
        bool bad = after > before + tol;
        if (!bad && with_states && std::abs(after - before) <= tol) {
            bad = distance(traj.states[k], traj.states[k + 2]) > 1.0;
        }
        if (bad) out.push_back({static_cast<std::int64_t>(k / 2), before, after});
    }
    return out;
}

SemicircleReport semicircle_check(const Trajectory& traj, double tol) {
    require_base2(traj, "semicircle_check");
    if (traj.states.empty()) throw std::invalid_argument("semicircle_check: needs recorded states");
    std::size_t entry = traj.states.size();
    for (std::size_t k = 0; k < traj.states.size(); k += 2) {
        if (traj.norms[k] < 1.0) {
            entry = k;
            break;
        }
    }
    if (entry == traj.states.size()) throw std::domain_error("semicircle_check: no odd-index entry into B(0,1)");
    SemicircleReport rep;
    rep.entered_at = traj.label(entry);
    const Vec2 c = to_vec2(traj.states[entry]);
    for (std::size_t k = entry + 1; k < traj.states.size(); k += 2) {
        const Vec2 p = to_vec2(traj.states[k]);
        rep.max_radius_error = std::max(rep.max_radius_error, std::abs(norm(p - c) - 1.0));
        rep.max_halfplane_excess = std::max(rep.max_halfplane_excess, dot(p - c, c));
        if (k + 1 < traj.states.size()) {
            rep.max_return_error = std::max(rep.max_return_error, norm(to_vec2(traj.states[k + 1]) - c));
            ++rep.pairs_checked;
        }
    }
    rep.passed = !traj.halted() && rep.max_return_error <= tol && rep.max_radius_error <= tol &&
                 rep.max_halfplane_excess <= tol;
    return rep;
}

double stall_alpha(unsigned k) {
    const double c = std::cos(std::numbers::pi * std::ldexp(1.0, -static_cast<int>(k) - 1));
    const double disc = 16.0 * c * c - 12.0;
    if (disc < 0.0) throw std::domain_error("stall_alpha: no real root for this k");
    return (4.0 * c - std::sqrt(disc)) / 2.0;
}

StallStart stall_start(std::uint64_t n) {
    if (n < 4) throw std::domain_error("stall_start: need floor(log2 n) >= 2");
    StallStart st;
    st.n = n;
    st.k = static_cast<unsigned>(std::bit_width(n) - 1);
    st.alpha = stall_alpha(st.k);

    // The pair (2i, 2i+1) returns iff |<z, v_{2i}>| < 1, and v_{2i} lies on the
    // line at angle pi Vdc_2(i). Aim between the two widest-apart lines, nudged
    // off the exact bisector so no inner product is tied.
    std::vector<double> lines;
    for (std::uint64_t i = 0; i < n; ++i) lines.push_back(std::numbers::pi * vdc(i, 2));
    std::sort(lines.begin(), lines.end());
    double best_gap = lines.front() + std::numbers::pi - lines.back();
    double best_mid = lines.back() + 0.5 * best_gap;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        const double gap = lines[i + 1] - lines[i];
        if (gap > best_gap) {
            best_gap = gap;
            best_mid = lines[i] + 0.5 * gap;
        }
    }
    constexpr double kOffset = 1e-3;
    st.angle = best_mid + kOffset;
    double worst = 0.0;
    for (double theta : lines) worst = std::max(worst, std::abs(std::cos(st.angle - theta)));
    st.exact_bound = 1.0 / worst;
    st.radius = 0.5 * (1.0 + std::min(st.alpha, st.exact_bound));
    st.z = {st.radius * std::cos(st.angle), st.radius * std::sin(st.angle)};

    const VdcTable table(2, static_cast<std::size_t>(2 * n));
    Vec2 x = st.z;
    st.verified = true;
    for (std::uint64_t s = 0; s < 2 * n; ++s) {
        if (plane_step(x, table[static_cast<std::size_t>(s)]) == 0) {
            st.verified = false;
            break;
        }
        if (s % 2 == 1) {
            const double err = norm(x - st.z);
            st.max_return_error = std::max(st.max_return_error, err);
            if (err > 1e-12) st.verified = false;
        }
    }
    return st;
}

double bgon_height(std::uint64_t b) {
    if (b < 3) throw std::invalid_argument("bgon_height: base must be >= 3");
    Vec2 z{};
    double lo = 0.0;
    double hi = 0.0;
    for (std::uint64_t j = 0; j < b; ++j) {
        z = z + unit_turns(static_cast<double>(j) / static_cast<double>(b));
        lo = std::min(lo, z.y);
        hi = std::max(hi, z.y);
    }
    return hi - lo;
}

StopCyclePrediction predicted_stop_cycle(std::uint64_t b, double epsilon, std::uint64_t max_k) {
    if (b < 4 || b % 2 != 0) throw std::invalid_argument("predicted_stop_cycle: base must be even and >= 4");
    if (!(epsilon > 0.0)) throw std::invalid_argument("predicted_stop_cycle: epsilon must be positive");
    StopCyclePrediction p;
    p.b = b;
    p.epsilon = epsilon;
    p.height = bgon_height(b);
    const double bb = static_cast<double>(b);
    p.threshold = std::atan(p.height / (2.0 * epsilon)) - 0.5 * std::numbers::pi + kTwoPi / bb;

    bool found = false;
    for (std::uint64_t k = 0; k <= max_k; ++k) {
        if (kTwoPi * vdc(k * b, b) >= p.threshold) {
            p.k = k;
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("predicted_stop_cycle: no block within max_k");

    // Digits of s = b theta / (2 pi) = 0.d_1 d_2 ... in base b. The smallest k
    // with Vdc_b(k) >= s keeps the leading run of (b-1) digits and bumps the
    // first smaller digit.
    const double s = bb * p.threshold / kTwoPi;
    if (s <= 0.0) {
        p.k_digits = 0;
    } else {
        double t = s;
        std::uint64_t scale = 1;
        for (int i = 1; i < 64; ++i) {
            t *= bb;
            const double d = std::floor(t);
            t -= d;
            if (d < bb - 1.0) {
                const std::uint64_t lead = static_cast<std::uint64_t>(d) + (t > 0.0 ? 1 : 0);
                p.k_digits = lead * scale + (scale - 1);
                break;
            }
            scale *= b;
        }
    }

    p.step_budget = p.k * b;
    std::uint64_t v = p.step_budget;
    std::string digits;
    do {
        const std::uint64_t d = v % b;
        digits.insert(digits.begin(), static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
        v /= b;
    } while (v > 0);
    p.step_budget_base_b = digits;
    return p;
}

std::optional<std::uint64_t> simulate_stop_cycle(std::uint64_t b, double epsilon, std::uint64_t max_cycles) {
    const Vec2 z{epsilon, 0.5 * bgon_height(b)};
    const PeriodicityReport rep = is_periodic_start(z, b, max_cycles, 1e-9);
    if (rep.is_periodic) return std::nullopt;
    return rep.cycles_checked;
}

std::vector<RasterCell> raster_region(std::uint64_t b, const RasterOptions& options) {
    if (options.resolution == 0 || options.steps == 0) throw std::invalid_argument("raster_region: empty grid");
    const std::size_t res = options.resolution;
    const VdcTable table(b, static_cast<std::size_t>(options.steps));
    std::vector<RasterCell> cells(res * res);
    const double cell = 2.0 * options.half_width / static_cast<double>(res);
    parallel_for(res, options.threads, [&](std::size_t row) {
        const double y = -options.half_width + (static_cast<double>(row) + 0.5) * cell;
        for (std::size_t col = 0; col < res; ++col) {
            const double x0 = -options.half_width + (static_cast<double>(col) + 0.5) * cell;
            const Vec2 z{x0, y};
            Vec2 x = z;
            bool halted = false;
            for (std::uint64_t n = 0; n < options.steps; ++n) {
                if (plane_step(x, table[static_cast<std::size_t>(n)]) == 0) {
                    halted = true;
                    break;
                }
            }
            RasterCell& c = cells[row * res + col];
            c.x = x0;
            c.y = y;
            c.return_error = halted ? std::numeric_limits<double>::infinity() : norm(x - z);
            c.periodic = !halted && c.return_error < options.threshold;
        }
    });
    return cells;
}

PeriodicSearch count_periodic_starts(std::uint64_t b, std::uint64_t samples, double half_width,
                                     std::uint64_t cycles, std::uint64_t seed, double tol, unsigned threads) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-half_width, half_width);
    std::vector<Vec2> starts(samples);
    for (Vec2& z : starts) {
        z.x = unif(rng);
        z.y = unif(rng);
    }
    const VdcTable table(b, static_cast<std::size_t>(cycles * b));
    std::vector<char> flags(samples, 0);
    parallel_for(samples, threads, [&](std::size_t i) {
        flags[i] = is_periodic_start(starts[i], b, cycles, tol, &table).is_periodic ? 1 : 0;
    });
    PeriodicSearch out;
    out.samples = samples;
    for (std::size_t i = 0; i < samples; ++i) {
        if (!flags[i]) continue;
        ++out.periodic;
        if (out.examples.size() < 10) out.examples.push_back(starts[i]);
    }
    return out;
}

}  // namespace greedyjump
