#include "flatnorm/instances.hpp"

#include <algorithm>
#include <cmath>

#include "flatnorm/dual_flow.hpp"
#include "flatnorm/errors.hpp"

namespace flatnorm {

namespace {

bool far_from(const std::vector<Point2>& pts, Point2 p, double gap) {
    return std::all_of(pts.begin(), pts.end(), [&](Point2 q) { return distance(p, q) >= gap; });
}

std::vector<Point2> scatter(Rng& rng, int count, const BBox& box, const std::vector<BBox>& holes, double gap) {
    std::vector<Point2> pts;
    for (int attempt = 0; static_cast<int>(pts.size()) < count; ++attempt) {
        if (attempt > 100000) throw SamplingExhausted("cannot place interior points");
        Point2 p{rng.uniform(box.min.x + gap, box.max.x - gap), rng.uniform(box.min.y + gap, box.max.y - gap)};
        bool ok = far_from(pts, p, gap);
        for (const auto& h : holes) {
            BBox grown{{h.min.x - gap, h.min.y - gap}, {h.max.x + gap, h.max.y + gap}};
            if (grown.contains(p)) ok = false;
        }
        if (ok) pts.push_back(p);
    }
    return pts;
}

std::vector<Segment> square_sides(const BBox& b) {
    Point2 c[4] = {b.min, {b.max.x, b.min.y}, b.max, {b.min.x, b.max.y}};
    std::vector<Segment> out;
    for (int i = 0; i < 4; ++i) out.push_back(orient_left_right({c[i], c[(i + 1) % 4]}));
    return out;
}

}  // namespace

SimplicialComplex2 random_disk_complex(Rng& rng, int interior_points, const BBox& box) {
    double gap = 0.05 * std::min(box.width(), box.height());
    auto pts = scatter(rng, interior_points, box, {}, gap);
    return constrained_triangulate(std::span<const Segment>{}, box, pts);
}

SimplicialComplex2 random_void_complex(Rng& rng, int holes, int interior_points) {
    if (holes < 1 || holes > 2) throw InputError("one or two holes supported");
    BBox box{{0, 0}, {4, 4}};
    std::vector<BBox> hole_boxes;
    if (holes == 1)
        hole_boxes.push_back({{1.5, 1.5}, {2.5, 2.5}});
    else
        hole_boxes = {{{0.5, 1.5}, {1.5, 2.5}}, {{2.5, 1.5}, {3.5, 2.5}}};
    std::vector<Segment> sides;
    for (const auto& h : hole_boxes) {
        auto s = square_sides(h);
        sides.insert(sides.end(), s.begin(), s.end());
    }
    auto pts = scatter(rng, interior_points, box, hole_boxes, 0.2);
    SimplicialComplex2 full = constrained_triangulate(sides, box, pts);

    // drop the triangles inside the holes
    std::vector<std::array<int, 3>> kept;
    for (const auto& tri : full.triangles()) {
        Point2 c{0, 0};
        for (int v : tri.vertices) c = c + (1.0 / 3) * full.vertices()[v];
        bool inside = std::any_of(hole_boxes.begin(), hole_boxes.end(), [&](const BBox& h) { return h.contains(c); });
        if (!inside) kept.push_back(tri.vertices);
    }
    std::vector<std::pair<int, int>> constrained;
    for (std::size_t e = 0; e < full.num_edges(); ++e)
        if (full.constraint_flags()[e]) constrained.emplace_back(full.edges()[e].v0, full.edges()[e].v1);
    return complex_from_triangles(full.vertices(), kept, constrained);
}

Chain random_difference_chain(const SimplicialComplex2& k, Rng& rng, double density) {
    Chain t(k.num_edges(), 0);
    for (auto& c : t) {
        long long a = rng.chance(density) ? 1 : 0;
        long long b = rng.chance(density) ? 1 : 0;
        c = a - b;
    }
    return t;
}

Chain random_cycle(const SimplicialComplex2& k, Rng& rng, int s_max, int void_max) {
    Chain s(k.num_triangles());
    for (auto& c : s) c = rng.uniform_int(-s_max, s_max);
    Chain t = k.boundary(s);
    if (void_max > 0) {
        VoidStructure voids = find_voids(k);
        for (int v = 1; v < voids.count; ++v) {
            long long m = rng.uniform_int(-void_max, void_max);
            Chain b = void_boundary(k, voids, v);
            for (std::size_t e = 0; e < t.size(); ++e) t[e] += m * b[e];
        }
    }
    return t;
}

Instance random_oracle_instance(Rng& rng) {
    Instance inst;
    inst.complex = random_disk_complex(rng, static_cast<int>(rng.uniform_int(0, 5)), {{0, 0}, {1, 1}});
    inst.weights = compute_weights(inst.complex, Crs::euclidean());
    inst.t = random_difference_chain(inst.complex, rng, 0.35);
    inst.lambda = std::exp(rng.uniform(std::log(0.1), std::log(20.0)));
    return inst;
}

Instance random_cycle_instance(Rng& rng, bool multi_void) {
    Instance inst;
    if (multi_void)
        inst.complex = random_void_complex(rng, static_cast<int>(rng.uniform_int(1, 2)),
                                           static_cast<int>(rng.uniform_int(0, 12)));
    else
        inst.complex = random_disk_complex(rng, static_cast<int>(rng.uniform_int(3, 25)), {{0, 0}, {2, 1.5}});
    inst.weights = compute_weights(inst.complex, Crs::euclidean());
    do {
        inst.t = random_cycle(inst.complex, rng, 2, multi_void ? 2 : 0);
    } while (std::all_of(inst.t.begin(), inst.t.end(), [](long long c) { return c == 0; }));
    inst.lambda = std::exp(rng.uniform(std::log(0.05), std::log(50.0)));
    return inst;
}

Instance random_ohcp_instance(Rng& rng) {
    Instance inst;
    int holes = static_cast<int>(rng.uniform_int(1, 2));
    inst.complex = random_void_complex(rng, holes, holes == 1 ? static_cast<int>(rng.uniform_int(0, 2)) : 0);
    inst.weights = compute_weights(inst.complex, Crs::euclidean());
    VoidStructure voids = find_voids(inst.complex);
    Chain s(inst.complex.num_triangles());
    for (auto& c : s) c = rng.chance(0.5) ? 1 : 0;
    inst.t = inst.complex.boundary(s);
    for (int v = 1; v < voids.count; ++v) {
        if (!rng.chance(0.6)) continue;
        Chain b = void_boundary(inst.complex, voids, v);
        for (std::size_t e = 0; e < b.size(); ++e) inst.t[e] += b[e];
    }
    if (rng.chance(0.5))
        for (auto& c : inst.t) c = -c;
    inst.lambda = 0.0;
    return inst;
}

NetworkPair unit_square_pair() {
    PlanarNetwork a, b;
    a.segments = {{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}};
    b.segments = {{{0, 0}, {0, 1}}, {{0, 1}, {1, 1}}};
    return {a, b};
}

NetworkPair crossing_segments(double angle_degrees) {
    double th = angle_degrees * M_PI / 180.0;
    PlanarNetwork a, b;
    a.segments = {{{-0.5, 0}, {0.5, 0}}};
    b.segments = {orient_left_right({{-0.5 * std::cos(th), -0.5 * std::sin(th)}, {0.5 * std::cos(th), 0.5 * std::sin(th)}})};
    return {a, b};
}

NetworkPair random_network_pair(Rng& rng, int segments_per_network, double extent) {
    auto polyline = [&] {
        PlanarNetwork n;
        Point2 p{rng.uniform(0, extent), rng.uniform(0, extent)};
        for (int i = 0; i < segments_per_network; ++i) {
            Point2 q;
            do {
                q = {rng.uniform(0, extent), rng.uniform(0, extent)};
            } while (distance(p, q) < 0.05 * extent);
            n.segments.push_back(orient_left_right({p, q}));
            p = q;
        }
        return n;
    };
    PlanarNetwork a = polyline();
    PlanarNetwork b = polyline();
    return {a, b};
}

NetworkPair grid_pair(int cells, double spacing, double jitter, std::uint64_t seed) {
    Rng rng(seed);
    const int m = cells + 1;
    std::vector<Point2> exact, moved;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            Point2 p{i * spacing, j * spacing};
            exact.push_back(p);
            moved.push_back({p.x + rng.uniform(-jitter, jitter), p.y + rng.uniform(-jitter, jitter)});
        }
    }
    auto build = [&](const std::vector<Point2>& pts) {
        PlanarNetwork n;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (i + 1 < m) n.segments.push_back(orient_left_right({pts[i * m + j], pts[(i + 1) * m + j]}));
                if (j + 1 < m) n.segments.push_back(orient_left_right({pts[i * m + j], pts[i * m + j + 1]}));
            }
        }
        return n;
    };
    return {build(exact), build(moved)};
}

}  // namespace flatnorm
