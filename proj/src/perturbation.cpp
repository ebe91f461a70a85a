#include "flatnorm/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flatnorm/dual_flow.hpp"
#include "flatnorm/errors.hpp"
#include "flatnorm/parallel.hpp"

namespace flatnorm {

std::vector<Segment> PWLCurrent::segments() const {
    std::vector<Segment> out;
    for (std::size_t i = 0; i < num_edges(); ++i) out.push_back(edge(i));
    return out;
}

double PWLCurrent::length() const { return length_between(0, num_edges()); }

double PWLCurrent::length_between(std::size_t i, std::size_t j) const {
    double total = 0.0;
    for (std::size_t k = i; k < j; ++k) total += edge(k).length();
    return total;
}

bool PWLCurrent::is_simple() const {
    const std::size_t m = num_edges();
    for (std::size_t i = 0; i < m; ++i) {
        if (nodes[i] == nodes[i + 1]) return false;
        for (std::size_t j = i + 1; j < m; ++j) {
            bool adjacent = j == i + 1 || (i == 0 && j == m - 1 && nodes.front() == nodes.back());
            if (adjacent ? segments_cross_properly(edge(i), edge(j)) : segments_intersect(edge(i), edge(j)))
                return false;
        }
    }
    return true;
}

namespace {

bool shares_endpoint(const Segment& a, const Segment& b) {
    return a.a == b.a || a.a == b.b || a.b == b.a || a.b == b.b;
}

bool conflicts(const Segment& fresh, const Segment& other) {
    return shares_endpoint(fresh, other) ? segments_cross_properly(fresh, other) : segments_intersect(fresh, other);
}

}  // namespace

Point2 allowed_region_sample(const PWLCurrent& current, std::size_t index, double epsilon, bool positive, Rng& rng,
                             const PWLCurrent* original, int max_attempts) {
    if (!(epsilon > 0)) throw InputError("epsilon must be positive");
    const std::size_t n = current.num_edges();
    if (n < 1 || index > n) throw InputError("node index out of range");
    const Point2 v = current.nodes[index];
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        double r = epsilon * std::sqrt(rng.uniform01());
        double theta = 2 * M_PI * rng.uniform01();
        Point2 x{v.x + r * std::cos(theta), v.y + r * std::sin(theta)};
        if (!(distance(x, v) < epsilon) || x == v) continue;
        if (positive) {
            if (index > 0 && !(cross(x - v, v - current.nodes[index - 1]) > 0)) continue;
            if (index < n && !(cross(x - v, current.nodes[index + 1] - v) > 0)) continue;
        }
        std::vector<Segment> fresh;
        if (index > 0) fresh.push_back({current.nodes[index - 1], x});
        if (index < n) fresh.push_back({x, current.nodes[index + 1]});
        bool ok = fresh.size() < 2 || !segments_cross_properly(fresh[0], fresh[1]);
        for (std::size_t e = 0; ok && e < n; ++e) {
            if (e + 1 == index || e == index) continue;  // the replaced edges
            for (const auto& f : fresh)
                if (conflicts(f, current.edge(e))) ok = false;
        }
        if (ok && original) {
            for (std::size_t e = 0; ok && e < original->num_edges(); ++e) {
                Segment o = original->edge(e);
                for (const auto& f : fresh) {
                    if (f.a == o.a && f.b == o.b) continue;
                    if (conflicts(f, o)) ok = false;
                }
            }
        }
        if (ok) return x;
    }
    throw RegionEmpty("no admissible perturbation of node " + std::to_string(index) + " after " +
                      std::to_string(max_attempts) + " attempts");
}

double PerturbationTrace::total_patch_area() const {
    double total = 0.0;
    for (const auto& s : steps) total += s.patch_area;
    return total;
}

PerturbationTrace perturb_sequence_positive(const PWLCurrent& t0, double epsilon, std::size_t first, std::size_t last,
                                            Rng& rng) {
    const std::size_t n = t0.num_edges();
    if (n < 1 || first > last || last > n) throw InputError("invalid node range");
    std::vector<std::size_t> order;
    for (std::size_t i = std::max<std::size_t>(first, 1); i <= std::min(last, n - 1); ++i) order.push_back(i);
    if (first == 0) order.push_back(0);
    if (last == n) order.push_back(n);

    PerturbationTrace trace;
    trace.epsilon = epsilon;
    trace.first = first;
    trace.last = last;
    PWLCurrent cur = t0;
    auto tri_area = [](const std::array<Point2, 3>& t) { return std::fabs(polygon_signed_area(t)); };
    for (std::size_t i : order) {
        PerturbationStep step;
        step.node = i;
        step.old_position = cur.nodes[i];
        Point2 nv = allowed_region_sample(cur, i, epsilon, true, rng, &t0);
        step.new_position = nv;
        const Point2 v = cur.nodes[i];
        if (i > 0 && i < n) {
            Point2 u = cur.nodes[i - 1], w = cur.nodes[i + 1];
            step.patch = {{v, w, nv}, {nv, u, v}};
            step.old_edge_lengths = {distance(u, v), distance(v, w)};
            step.new_edge_lengths = {distance(u, nv), distance(nv, w)};
        } else if (i == 0) {
            Point2 w = cur.nodes[1];
            step.patch = {{v, w, nv}};
            step.old_edge_lengths = {distance(v, w)};
            step.new_edge_lengths = {distance(nv, w)};
        } else {
            Point2 u = cur.nodes[n - 1];
            step.patch = {{nv, u, v}};
            step.old_edge_lengths = {distance(u, v)};
            step.new_edge_lengths = {distance(u, nv)};
        }
        for (const auto& t : step.patch) step.patch_area += tri_area(t);
        double replaced = 0.0;
        for (double l : step.old_edge_lengths) replaced += l;
        step.area_bound = epsilon / 2 * replaced;
        cur.nodes[i] = nv;
        trace.steps.push_back(std::move(step));
    }
    trace.result = std::move(cur);
    return trace;
}

PairSetup perturbation_pair(const PWLCurrent& t0, const PWLCurrent& t1) {
    std::vector<Segment> moved = t1.segments();
    if (t1.nodes.front() != t0.nodes.front()) moved.push_back({t0.nodes.front(), t1.nodes.front()});
    if (t1.nodes.back() != t0.nodes.back()) moved.push_back({t1.nodes.back(), t0.nodes.back()});
    PairOptions opts;
    opts.oriented = true;
    return prepare_pair(moved, t0.segments(), Crs::euclidean(), opts);
}

namespace {

// Area of the 2-chain bounded by the cycle t (zero on the outer void).
double filling_area(const PairSetup& setup) {
    DualGraph g = build_dual_graph(setup.complex, setup.t, setup.weights, 1.0);
    auto labels = dist_labels(g);
    double area = 0.0;
    for (std::size_t j = 0; j < setup.complex.num_triangles(); ++j)
        area += setup.weights.v[j] * static_cast<double>(std::llabs(labels[j]));
    return area;
}

}  // namespace

double choose_lambda_filled(const PWLCurrent& t0, const PWLCurrent& t1, double lambda0) {
    if (!(lambda0 > 0)) throw InputError("lambda0 must be positive");
    PairSetup setup = perturbation_pair(t0, t1);
    if (std::all_of(setup.t.begin(), setup.t.end(), [](long long c) { return c == 0; })) return lambda0;
    double fill;
    try {
        fill = filling_area(setup);
    } catch (const CycleRequired&) {
        throw AssumptionUnsatisfiable("T1 - T0 is not closed; no filling exists");
    }
    double lambda = lambda0;
    for (int k = 0; k <= 60; ++k, lambda /= 2) {
        auto d = solve_lp({setup.complex, setup.weights, setup.t, lambda});
        bool filled = d.length_component == 0.0;
        // a tie between filling and keeping length also counts as filled
        if (!filled && std::fabs(d.objective - lambda * fill) <= 1e-9 * std::max(d.objective, 1e-300)) filled = true;
        if (filled) return lambda;
    }
    throw AssumptionUnsatisfiable("voids stay unfilled after 60 halvings");
}

namespace {

std::vector<Point2> clip_convex(const std::vector<Point2>& subject, const std::array<Point2, 3>& clip_tri) {
    std::array<Point2, 3> c = clip_tri;
    if (polygon_signed_area(c) < 0) std::swap(c[1], c[2]);
    std::vector<Point2> poly = subject;
    for (int k = 0; k < 3 && !poly.empty(); ++k) {
        Point2 a = c[k], b = c[(k + 1) % 3];
        auto inside = [&](Point2 p) { return cross(b - a, p - a) >= 0; };
        std::vector<Point2> out;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            Point2 p = poly[i], q = poly[(i + 1) % poly.size()];
            bool pin = inside(p), qin = inside(q);
            if (pin) out.push_back(p);
            if (pin != qin) {
                double dp = cross(b - a, p - a), dq = cross(b - a, q - a);
                double t = dp / (dp - dq);
                out.push_back(p + t * (q - p));
            }
        }
        poly = std::move(out);
    }
    return poly;
}

}  // namespace

double overlap_area(std::span<const std::array<Point2, 3>> a, std::span<const std::array<Point2, 3>> b) {
    double total = 0.0;
    for (const auto& ta : a) {
        for (const auto& tb : b) {
            auto poly = clip_convex({ta.begin(), ta.end()}, tb);
            if (poly.size() >= 3) total += std::fabs(polygon_signed_area(poly));
        }
    }
    return total;
}

std::vector<BoundReport> check_bounds(const PWLCurrent& t0, const PerturbationTrace& trace, double lambda) {
    const std::size_t n = t0.num_edges();
    const double eps = trace.epsilon;
    const double len0 = t0.length(), len1 = trace.result.length();
    PairSetup setup = perturbation_pair(t0, trace.result);
    auto d = solve_lp({setup.complex, setup.weights, setup.t, lambda});
    const double measured = d.objective;
    const double normalized = measured / (len0 + len1);

    BoundReport base;
    base.lambda = lambda;
    base.epsilon = eps;
    base.n = n;
    base.length_t0 = len0;
    base.e_hat = len0 / static_cast<double>(n);
    base.e_hat_perturbed = len1 / static_cast<double>(n);

    std::vector<BoundReport> out;
    auto add = [&](std::string kind, double bound, double value) {
        BoundReport r = base;
        r.kind = std::move(kind);
        r.bound = bound;
        r.measured = value;
        r.slack = bound - value;
        r.satisfied = r.slack >= -1e-12 * std::max(1.0, std::fabs(bound));
        out.push_back(r);
    };

    // per-step checks, reported by their worst case
    double edge_slack = std::numeric_limits<double>::infinity();
    double patch_slack = std::numeric_limits<double>::infinity();
    double worst_patch = 0.0, worst_patch_bound = 0.0;
    for (const auto& step : trace.steps) {
        for (std::size_t e = 0; e < step.old_edge_lengths.size(); ++e) {
            double o = step.old_edge_lengths[e], nw = step.new_edge_lengths[e];
            edge_slack = std::min({edge_slack, nw - (o - eps), (o + eps) - nw});
        }
        if (step.area_bound - step.patch_area < patch_slack) {
            patch_slack = step.area_bound - step.patch_area;
            worst_patch = step.patch_area;
            worst_patch_bound = step.area_bound;
        }
    }
    if (!trace.steps.empty()) {
        add("edge_length", edge_slack, 0.0);
        add("patch_area", worst_patch_bound, worst_patch);
    }
    double overlap = 0.0;
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
        for (std::size_t j = i + 1; j < trace.steps.size(); ++j)
            overlap = std::max(overlap, overlap_area(trace.steps[i].patch, trace.steps[j].patch));
    {
        BoundReport r = base;
        r.kind = "disjointness";
        r.bound = 1e-12;
        r.measured = overlap;
        r.slack = 1e-12 - overlap;
        r.satisfied = overlap < 1e-12;
        out.push_back(r);
    }
    {
        double predicted = lambda * trace.total_patch_area();
        BoundReport r = base;
        r.kind = "additivity";
        r.bound = predicted;
        r.measured = measured;
        double rel = std::fabs(measured - predicted) / std::max(std::fabs(measured), 1e-300);
        r.slack = 1e-6 - rel;
        r.satisfied = rel <= 1e-6;
        out.push_back(r);
    }

    const bool complete = trace.first == 0 && trace.last == n;
    if (!complete && n >= 2) {
        std::size_t a = std::max<std::size_t>(trace.first, 1), b = std::min(trace.last, n - 1);
        if (a == b) add("single", lambda * eps / 2 * t0.length_between(a - 1, a + 1), measured);
        if (b > a) {
            double k_bound = lambda * eps / 2 *
                             (t0.length_between(a - 1, b + 1) + t0.length_between(a, b) + static_cast<double>(b - a) * eps);
            add("k_perturbation", k_bound, measured);
        }
        if (a == 1 && b == n - 1) {
            add("complete_interior",
                lambda * eps / 2 * (len0 + t0.length_between(1, n - 1) + static_cast<double>(n - 2) * eps), measured);
        }
    }
    if (complete) {
        const double nn = static_cast<double>(n);
        const double e_hat = base.e_hat, e_tilde = base.e_hat_perturbed;
        add("complete", lambda * eps * (len0 + nn * eps / 2), measured);
        add("normalized_loose", lambda * eps * (1 + eps / (2 * e_hat)), normalized);
        double tight = lambda * eps * (0.25 + (e_hat + eps) / (2 * (e_hat + e_tilde)));
        add("normalized_tight", tight, normalized);
        add("normalized_tight_truncated", std::min(tight, 1.0), normalized);
        if (len1 >= len0) add("normalized_non_shrinking", lambda * eps * (0.75 + eps / (4 * e_hat)), normalized);
    }
    return out;
}

namespace {

PWLCurrent random_current(Rng& rng, std::size_t edges) {
    PWLCurrent c;
    double x = 0.0;
    for (std::size_t i = 0; i <= edges; ++i) {
        c.nodes.push_back({x, rng.uniform(-0.5, 0.5)});
        x += rng.uniform(0.5, 1.5);
    }
    return c;
}

}  // namespace

std::vector<TrialResult> run_perturbation_trials(std::size_t trials, std::uint64_t seed, const TrialConfig& cfg) {
    std::vector<TrialResult> results(trials);
    parallel_for(trials, [&](std::size_t trial) {
        TrialResult& res = results[trial];
        res.trial = trial;
        Rng rng(derive_seed(seed, trial));
        std::size_t n = static_cast<std::size_t>(
            rng.uniform_int(static_cast<long long>(cfg.min_edges), static_cast<long long>(cfg.max_edges)));
        res.n = n;
        PWLCurrent t0 = random_current(rng, n);
        double min_edge = std::numeric_limits<double>::infinity();
        for (const auto& s : t0.segments()) min_edge = std::min(min_edge, s.length());
        double eps = rng.uniform(0.2, 1.0) * cfg.epsilon_fraction * min_edge;

        struct Sequence {
            std::string name;
            std::size_t first, last;
        };
        std::vector<Sequence> seqs;
        if (n >= 2) {
            auto i = static_cast<std::size_t>(rng.uniform_int(1, static_cast<long long>(n - 1)));
            seqs.push_back({"single", i, i});
        }
        if (n >= 3) {
            auto a = static_cast<std::size_t>(rng.uniform_int(1, static_cast<long long>(n - 2)));
            auto b = static_cast<std::size_t>(rng.uniform_int(static_cast<long long>(a + 1), static_cast<long long>(n - 1)));
            seqs.push_back({"k_range", a, b});
        }
        if (n >= 2) seqs.push_back({"interior", 1, n - 1});
        seqs.push_back({"complete", 0, n});
        try {
            for (const auto& seq : seqs) {
                auto trace = perturb_sequence_positive(t0, eps, seq.first, seq.last, rng);
                double lambda = choose_lambda_filled(t0, trace.result, cfg.lambda0);
                for (auto r : check_bounds(t0, trace, lambda)) {
                    r.kind = seq.name + ":" + r.kind;
                    res.reports.push_back(std::move(r));
                }
            }
        } catch (const Error& e) {
            res.error = e.what();
        }
    });
    return results;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string trials_to_csv(std::span<const TrialResult> trials, std::uint64_t seed) {
    std::string out = std::string("# rng=") + kRngAlgorithm + " seed=" + std::to_string(seed) + "\n";
    out += "trial,n,kind,bound,measured,slack,satisfied,lambda,epsilon,len_t0,e_hat,e_hat_perturbed,error\n";
    for (const auto& t : trials) {
        if (!t.error.empty()) {
            out += std::to_string(t.trial) + "," + std::to_string(t.n) + ",error,,,,,,,,,,\"" + t.error + "\"\n";
            continue;
        }
        for (const auto& r : t.reports) {
            out += std::to_string(t.trial) + "," + std::to_string(t.n) + "," + r.kind + "," + fmt(r.bound) + "," +
                   fmt(r.measured) + "," + fmt(r.slack) + "," + (r.satisfied ? "1" : "0") + "," + fmt(r.lambda) + "," +
                   fmt(r.epsilon) + "," + fmt(r.length_t0) + "," + fmt(r.e_hat) + "," + fmt(r.e_hat_perturbed) + ",\n";
        }
    }
    return out;
}

namespace {

PWLCurrent lifted(const PWLCurrent& base, const std::vector<double>& heights) {
    PWLCurrent c = base;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) c.nodes[i].y += heights[i];
    return c;
}

struct Measure {
    double hausdorff;
    double fnorm;
};

Measure measure(const PWLCurrent& t0, const PWLCurrent& t1, double lambda) {
    auto segs0 = t0.segments(), segs1 = t1.segments();
    double dh = hausdorff_distance(segs1, segs0);
    PairSetup setup = perturbation_pair(t0, t1);
    auto d = solve_lp({setup.complex, setup.weights, setup.t, lambda});
    return {dh, d.objective / (t0.length() + t1.length())};
}

DecouplingRow compare_rows(std::string name, const Measure& before, const Measure& after) {
    DecouplingRow row;
    row.name = std::move(name);
    row.hausdorff_before = before.hausdorff;
    row.hausdorff_after = after.hausdorff;
    row.fnorm_before = before.fnorm;
    row.fnorm_after = after.fnorm;
    row.pct_hausdorff = before.hausdorff > 0 ? 100 * (after.hausdorff - before.hausdorff) / before.hausdorff : 0.0;
    row.pct_fnorm = before.fnorm > 0 ? 100 * (after.fnorm - before.fnorm) / before.fnorm : 0.0;
    return row;
}

}  // namespace

std::vector<DecouplingRow> hausdorff_decoupling_experiments(const PWLCurrent& base, const DecouplingConfig& cfg) {
    const std::size_t count = base.nodes.size();
    if (count < 3) throw InputError("decoupling experiments need an interior node");
    std::vector<DecouplingRow> rows;
    const double h = cfg.height;

    std::vector<double> plateau(count, h);
    plateau.front() = plateau.back() = 0.0;
    PWLCurrent flat = lifted(base, plateau);
    Measure flat_m = measure(base, flat, cfg.lambda);
    rows.push_back(compare_rows("zero", flat_m, measure(base, flat, cfg.lambda)));

    // narrow spike at the middle node
    const std::size_t mid = count / 2;
    PWLCurrent spiked;
    for (std::size_t i = 0; i < count; ++i) {
        if (i != mid) {
            spiked.nodes.push_back(flat.nodes[i]);
            continue;
        }
        Point2 p = flat.nodes[i];
        Point2 dir = base.nodes[i + 1] - base.nodes[i - 1];
        dir = (1.0 / std::hypot(dir.x, dir.y)) * dir;
        spiked.nodes.push_back(p - (cfg.spike_width / 2) * dir);
        spiked.nodes.push_back({p.x, base.nodes[i].y + cfg.spike_factor * h});
        spiked.nodes.push_back(p + (cfg.spike_width / 2) * dir);
    }
    rows.push_back(compare_rows("spike", flat_m, measure(base, spiked, cfg.lambda)));

    // tent profile with its peak at the middle node; lifting the rest keeps the peak
    std::vector<double> tent(count, 0.0);
    const double half = static_cast<double>(count - 1) / 2;
    for (std::size_t i = 1; i + 1 < count; ++i)
        tent[i] = h * std::max(0.0, 1.0 - std::fabs(static_cast<double>(i) - static_cast<double>(mid)) / half);
    tent[mid] = h;
    PWLCurrent tent_c = lifted(base, tent);
    Measure tent_m = measure(base, tent_c, cfg.lambda);
    for (double shift : cfg.envelope_shifts) {
        std::vector<double> lifted_h = tent;
        for (std::size_t i = 1; i + 1 < count; ++i)
            if (i != mid) lifted_h[i] = std::min(h, tent[i] + shift);
        char name[64];
        std::snprintf(name, sizeof name, "envelope_%.6g", shift);
        rows.push_back(compare_rows(name, tent_m, measure(base, lifted(base, lifted_h), cfg.lambda)));
    }
    return rows;
}

std::string decoupling_to_csv(std::span<const DecouplingRow> rows) {
    std::string out = "experiment,hausdorff_before,hausdorff_after,fnorm_before,fnorm_after,pct_hausdorff,pct_fnorm\n";
    for (const auto& r : rows) {
        out += r.name + "," + fmt(r.hausdorff_before) + "," + fmt(r.hausdorff_after) + "," + fmt(r.fnorm_before) + "," +
               fmt(r.fnorm_after) + "," + fmt(r.pct_hausdorff) + "," + fmt(r.pct_fnorm) + "\n";
    }
    return out;
}

}  // namespace flatnorm
