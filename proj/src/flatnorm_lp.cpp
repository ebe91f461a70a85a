#include "flatnorm/flatnorm_lp.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "flatnorm/errors.hpp"

namespace flatnorm {

void evaluate(FlatNormDecomposition& d, const WeightVectors& weights) {
    d.length_component = 0.0;
    d.area_component = 0.0;
    for (std::size_t i = 0; i < d.x.size(); ++i)
        d.length_component += weights.w[i] * static_cast<double>(std::llabs(d.x[i]));
    for (std::size_t j = 0; j < d.s.size(); ++j)
        d.area_component += weights.v[j] * static_cast<double>(std::llabs(d.s[j]));
    d.objective = d.length_component + d.lambda * d.area_component;
}

namespace {

void check_problem(const FlatNormProblem& p) {
    if (p.lambda < 0 || !std::isfinite(p.lambda)) throw InputError("lambda must be finite and non-negative");
    if (p.t.size() != p.complex.num_edges() || p.weights.w.size() != p.complex.num_edges() ||
        p.weights.v.size() != p.complex.num_triangles())
        throw InputError("problem dimensions do not match the complex");
}

FlatNormDecomposition zero_solution(const FlatNormProblem& p) {
    FlatNormDecomposition d;
    d.x.assign(p.t.begin(), p.t.end());
    d.s.assign(p.complex.num_triangles(), 0);
    d.lambda = p.lambda;
    evaluate(d, p.weights);
    return d;
}

long long round_checked(double v) {
    double r = std::round(v);
    if (std::fabs(v - r) > 1e-6) throw IntegralityViolation("LP vertex is fractional: " + std::to_string(v));
    return static_cast<long long>(r);
}

}  // namespace

FlatNormDecomposition solve_lp(const FlatNormProblem& p, const SimplexOptions& opts) {
    check_problem(p);
    const std::size_t m = p.complex.num_edges(), n = p.complex.num_triangles();
    if (std::all_of(p.t.begin(), p.t.end(), [](long long v) { return v == 0; })) return zero_solution(p);

    double scale = 0.0;
    for (double w : p.weights.w) scale = std::max(scale, w);
    for (double v : p.weights.v) scale = std::max(scale, p.lambda * v);
    if (scale <= 0.0) scale = 1.0;

    // columns: x+ | x- | s+ | s-
    SimplexProblem lp;
    lp.rows = static_cast<int>(m);
    lp.rhs.assign(p.t.begin(), p.t.end());
    lp.columns.reserve(2 * m + 2 * n);
    for (int sign : {1, -1}) {
        for (std::size_t i = 0; i < m; ++i) {
            lp.columns.push_back({{static_cast<int>(i), static_cast<double>(sign)}});
            lp.cost.push_back(p.weights.w[i] / scale);
        }
    }
    for (int sign : {1, -1}) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto& tri = p.complex.triangles()[j];
            std::vector<std::pair<int, double>> col;
            for (int k = 0; k < 3; ++k) col.emplace_back(tri.edges[k], static_cast<double>(sign * tri.signs[k]));
            lp.columns.push_back(std::move(col));
            lp.cost.push_back(p.lambda * p.weights.v[j] / scale);
        }
    }
    for (std::size_t i = 0; i < m; ++i) lp.initial_basis.push_back(p.t[i] >= 0 ? static_cast<int>(i) : static_cast<int>(m + i));

    SimplexResult res = solve_simplex(lp, opts);
    FlatNormDecomposition d;
    d.lambda = p.lambda;
    d.x.resize(m);
    d.s.resize(n);
    for (std::size_t i = 0; i < m; ++i) d.x[i] = round_checked(res.values[i]) - round_checked(res.values[m + i]);
    for (std::size_t j = 0; j < n; ++j)
        d.s[j] = round_checked(res.values[2 * m + j]) - round_checked(res.values[2 * m + n + j]);
    Chain ds = p.complex.boundary(d.s);
    for (std::size_t i = 0; i < m; ++i) {
        if (d.x[i] != p.t[i] - ds[i]) throw IntegralityViolation("rounded solution violates x = t - ∂s");
    }
    evaluate(d, p.weights);
    return d;
}

FlatNormDecomposition solve_exhaustive(const FlatNormProblem& p, int s_bound) {
    check_problem(p);
    const std::size_t n = p.complex.num_triangles();
    if (n > 16) throw TooLarge("exhaustive enumeration is capped at 16 triangles");
    if (s_bound < 0) throw InputError("s_bound must be non-negative");
    const auto& tris = p.complex.triangles();
    const auto& w = p.weights.w;

    // Depth-first branch and bound: an edge's cost is final once its last coface
    // in enumeration order is assigned, and every term is non-negative.
    std::vector<int> closes_at(w.size(), -1);
    for (std::size_t j = 0; j < n; ++j)
        for (int e : tris[j].edges) closes_at[e] = static_cast<int>(j);
    std::vector<std::vector<int>> closing(n);
    double fixed = 0.0;
    for (std::size_t e = 0; e < w.size(); ++e) {
        if (closes_at[e] < 0)
            fixed += w[e] * static_cast<double>(std::llabs(p.t[e]));
        else
            closing[closes_at[e]].push_back(static_cast<int>(e));
    }
    std::vector<long long> values{0};
    for (long long k = 1; k <= s_bound; ++k) {
        values.push_back(k);
        values.push_back(-k);
    }

    std::vector<long long> s(n, 0), best_s(n, 0);
    Chain x(p.t.begin(), p.t.end());
    double best = fixed;
    for (std::size_t e = 0; e < w.size(); ++e)
        if (closes_at[e] >= 0) best += w[e] * static_cast<double>(std::llabs(p.t[e]));
    const double eps = 1e-12 * std::max(1.0, best);

    auto search = [&](auto&& self, std::size_t j, double partial) -> void {
        if (partial >= best - eps) return;
        if (j == n) {
            best = partial;
            best_s = s;
            return;
        }
        for (long long val : values) {
            for (int k = 0; k < 3; ++k) x[tris[j].edges[k]] -= tris[j].signs[k] * val;
            s[j] = val;
            double next = partial + p.lambda * p.weights.v[j] * static_cast<double>(std::llabs(val));
            for (int e : closing[j]) next += w[e] * static_cast<double>(std::llabs(x[e]));
            self(self, j + 1, next);
            for (int k = 0; k < 3; ++k) x[tris[j].edges[k]] += tris[j].signs[k] * val;
        }
        s[j] = 0;
    };
    search(search, 0, fixed);

    FlatNormDecomposition d;
    d.lambda = p.lambda;
    d.s = best_s;
    Chain bs = p.complex.boundary(d.s);
    d.x.assign(p.t.begin(), p.t.end());
    for (std::size_t i = 0; i < d.x.size(); ++i) d.x[i] -= bs[i];
    evaluate(d, p.weights);
    return d;
}

namespace {

double crs_length(std::span<const Segment> segs, const Crs& crs) {
    double total = 0.0;
    const double f = crs.mode == CrsMode::geographic ? crs.earth_radius_km * M_PI / 180.0 : 1.0;
    for (const auto& s : segs) total += f * s.length();
    return total;
}

}  // namespace

PairSetup prepare_pair(std::span<const Segment> n1, std::span<const Segment> n2, const Crs& crs,
                       const PairOptions& opts) {
    if (n1.empty() && n2.empty()) throw EmptyInput("both networks are empty");
    std::vector<std::vector<Segment>> nets(2);
    for (int k = 0; k < 2; ++k) {
        auto src = k == 0 ? n1 : n2;
        for (const auto& s : src) nets[k].push_back(opts.oriented ? s : orient_left_right(s));
    }
    std::vector<Segment> all(nets[0]);
    all.insert(all.end(), nets[1].begin(), nets[1].end());
    double tol = opts.snap_tol >= 0 ? opts.snap_tol : default_snap_tol(all);
    NodedUnion noded = node_union(nets, tol);

    PairSetup setup;
    setup.crs = crs;
    setup.box = opts.box ? *opts.box : bounding_rect(noded.pieces, opts.margin_frac);
    setup.complex = constrained_triangulate(noded.pieces, setup.box);
    setup.weights = compute_weights(setup.complex, crs);
    for (int k = 0; k < 2; ++k) {
        Chain& t = k == 0 ? setup.t1 : setup.t2;
        t.assign(setup.complex.num_edges(), 0);
        for (std::size_t p = 0; p < noded.pieces.size(); ++p) {
            long long mult = noded.multiplicity[k][p];
            if (!opts.oriented) mult = mult != 0 ? 1 : 0;
            if (mult == 0) continue;
            Segment piece = noded.pieces[p];
            Chain c = embed_oriented(setup.complex, std::span<const Segment>(&piece, 1));
            for (std::size_t i = 0; i < t.size(); ++i) t[i] += mult * c[i];
        }
    }
    setup.t = input_chain(setup.t1, setup.t2);
    setup.length1 = crs_length(n1, crs);
    setup.length2 = crs_length(n2, crs);
    return setup;
}

PairSetup prepare_pair(const PlanarNetwork& n1, const PlanarNetwork& n2, const PairOptions& opts) {
    return prepare_pair(n1.segments, n2.segments, n1.crs, opts);
}

FlatNormDecomposition flat_norm_distance(const PlanarNetwork& n1, const PlanarNetwork& n2, double lambda,
                                         const Crs& crs) {
    PairSetup setup = prepare_pair(n1.segments, n2.segments, crs);
    return solve_lp({setup.complex, setup.weights, setup.t, lambda});
}

std::vector<SweepPoint> lambda_sweep(const PairSetup& setup, std::span<const double> lambdas) {
    if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw InputError("lambdas must be sorted ascending");
    std::vector<SweepPoint> out;
    for (double lambda : lambdas) {
        auto d = solve_lp({setup.complex, setup.weights, setup.t, lambda});
        out.push_back({lambda, d.objective, d.length_component, d.area_component});
    }
    return out;
}

std::vector<SweepPoint> lambda_sweep(const PlanarNetwork& n1, const PlanarNetwork& n2,
                                     std::span<const double> lambdas, const Crs& crs) {
    return lambda_sweep(prepare_pair(n1.segments, n2.segments, crs), lambdas);
}

std::string decomposition_to_json(const SimplicialComplex2& k, const FlatNormDecomposition& d) {
    using nlohmann::json;
    json doc;
    doc["lambda"] = d.lambda;
    doc["objective"] = d.objective;
    doc["length_component"] = d.length_component;
    doc["area_component"] = d.area_component;
    doc["edges"] = json::array();
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        if (d.x[i] == 0) continue;
        Segment s = k.edge_segment(static_cast<int>(i));
        doc["edges"].push_back(
            {{"index", i}, {"multiplicity", d.x[i]}, {"from", {s.a.x, s.a.y}}, {"to", {s.b.x, s.b.y}}});
    }
    doc["triangles"] = json::array();
    for (std::size_t j = 0; j < d.s.size(); ++j) {
        if (d.s[j] == 0) continue;
        json pts = json::array();
        for (int v : k.triangles()[j].vertices) pts.push_back({k.vertices()[v].x, k.vertices()[v].y});
        doc["triangles"].push_back({{"index", j}, {"multiplicity", d.s[j]}, {"vertices", pts}});
    }
    return doc.dump(2);
}

}  // namespace flatnorm
