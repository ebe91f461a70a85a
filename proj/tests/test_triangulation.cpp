#include <cmath>
#include <numeric>

#include "doctest.h"
#include "flatnorm/errors.hpp"
#include "flatnorm/instances.hpp"
#include "flatnorm/predicates.hpp"
#include "flatnorm/triangulation.hpp"

using namespace flatnorm;

namespace {

const BBox kUnit{{0, 0}, {1, 1}};

// ∂∘∂ = 0, orientation, coface and area-partition checks shared by the cases below.
void check_complex(const SimplicialComplex2& k, const BBox& box) {
    const auto& pts = k.vertices();
    for (std::size_t j = 0; j < k.num_triangles(); ++j) {
        const auto& tri = k.triangles()[j];
        CHECK(orient2d(pts[tri.vertices[0]], pts[tri.vertices[1]], pts[tri.vertices[2]]) > 0);
        Chain s(k.num_triangles(), 0);
        s[j] = 1;
        Chain bd = k.boundary(s);
        Chain bdbd = k.vertex_boundary(bd);
        CHECK(std::all_of(bdbd.begin(), bdbd.end(), [](long long c) { return c == 0; }));
    }
    for (std::size_t e = 0; e < k.num_edges(); ++e) {
        const auto& cf = k.cofaces(static_cast<int>(e));
        int count = (cf[0] >= 0) + (cf[1] >= 0);
        Segment seg = k.edge_segment(static_cast<int>(e));
        bool on_box = (seg.a.x == box.min.x && seg.b.x == box.min.x) || (seg.a.x == box.max.x && seg.b.x == box.max.x) ||
                      (seg.a.y == box.min.y && seg.b.y == box.min.y) || (seg.a.y == box.max.y && seg.b.y == box.max.y);
        CHECK(count == (on_box ? 1 : 2));
        CHECK(lex_less(pts[k.edges()[e].v0], pts[k.edges()[e].v1]));
    }
    WeightVectors w = compute_weights(k, Crs::euclidean());
    double area = std::accumulate(w.v.begin(), w.v.end(), 0.0);
    CHECK(area == doctest::Approx(box.area()).epsilon(1e-9));
    long long euler = static_cast<long long>(pts.size()) - static_cast<long long>(k.num_edges()) +
                      static_cast<long long>(k.num_triangles());
    CHECK(euler == 1);
}

// Unconstrained interior edges satisfy the empty-circle test.
void check_delaunay(const SimplicialComplex2& k) {
    const auto& pts = k.vertices();
    for (std::size_t e = 0; e < k.num_edges(); ++e) {
        if (k.constraint_flags()[e]) continue;
        const auto& cf = k.cofaces(static_cast<int>(e));
        if (cf[0] < 0 || cf[1] < 0) continue;
        const auto& a = k.triangles()[cf[0]];
        const auto& b = k.triangles()[cf[1]];
        int opposite = -1;
        for (int v : b.vertices)
            if (v != k.edges()[e].v0 && v != k.edges()[e].v1) opposite = v;
        CHECK(incircle(pts[a.vertices[0]], pts[a.vertices[1]], pts[a.vertices[2]], pts[opposite]) <= 0);
    }
}

}  // namespace

TEST_CASE("unit box triangulations") {
    auto empty = constrained_triangulate(std::span<const Segment>{}, kUnit);
    CHECK(empty.num_triangles() == 2);
    CHECK(empty.num_edges() == 5);
    check_complex(empty, kUnit);

    std::vector<Segment> diag{{{0, 0}, {1, 1}}};
    auto d = constrained_triangulate(diag, kUnit);
    CHECK(d.num_triangles() == 2);
    CHECK(d.find_edge(d.find_vertex({0, 0}), d.find_vertex({1, 1})) >= 0);

    std::vector<Segment> inner{{{0.25, 0.5}, {0.75, 0.5}}};
    auto in = constrained_triangulate(inner, kUnit);
    int a = in.find_vertex({0.25, 0.5}), b = in.find_vertex({0.75, 0.5});
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    int e = in.find_edge(a, b);
    REQUIRE(e >= 0);
    CHECK(in.constraint_flags()[e]);
    check_complex(in, kUnit);
}

TEST_CASE("random constrained triangulations keep every constraint") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Segment> raw;
        for (int i = 0; i < 6; ++i)
            raw.push_back({{rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)},
                           {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)}});
        PlanarNetwork net = node_segments(raw);
        auto k = constrained_triangulate(net, kUnit);
        check_complex(k, kUnit);
        check_delaunay(k);
        Chain t = embed_chain(k, net);
        WeightVectors w = compute_weights(k, Crs::euclidean());
        double len = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(std::llabs(t[i]) <= 1);
            len += w.w[i] * std::fabs(static_cast<double>(t[i]));
        }
        CHECK(len == doctest::Approx(net.length()).epsilon(1e-9));
    }
}

TEST_CASE("Delaunay property on random point sets") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto k = random_disk_complex(rng, 20, kUnit);
        check_complex(k, kUnit);
        check_delaunay(k);
    }
}

TEST_CASE("weights") {
    std::vector<Segment> s{{{0.0, 0.0}, {3.0, 4.0}}};
    BBox box{{0, 0}, {3, 4}};
    auto k = constrained_triangulate(s, box);
    auto w = compute_weights(k, Crs::euclidean());
    int e = k.find_edge(k.find_vertex({0, 0}), k.find_vertex({3, 4}));
    REQUIRE(e >= 0);
    CHECK(w.w[e] == doctest::Approx(5.0));
    for (double v : w.v) CHECK(v == doctest::Approx(6.0));

    std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}};
    std::vector<std::array<int, 3>> tris{{0, 1, 2}};
    auto tri = complex_from_triangles(pts, tris);
    CHECK(compute_weights(tri, Crs::euclidean()).v[0] == doctest::Approx(0.5));

    double deg = 0.001 * 180.0 / M_PI;
    std::vector<Point2> gp{{0, 0}, {deg, 0}, {0, deg}};
    auto g = complex_from_triangles(gp, tris);
    auto gw = compute_weights(g, Crs::geographic(6371.0));
    int ge = g.find_edge(g.find_vertex({0, 0}), g.find_vertex({deg, 0}));
    CHECK(gw.w[ge] == doctest::Approx(6.371).epsilon(1e-12));
    CHECK(gw.v[0] == doctest::Approx(0.5 * 6.371 * 6.371).epsilon(1e-9));
}

TEST_CASE("chain embedding") {
    PlanarNetwork n;
    n.segments = {{{0.2, 0.5}, {0.8, 0.5}}};
    auto k = constrained_triangulate(n, kUnit);
    Chain t = embed_chain(k, n);
    int e = k.find_edge(k.find_vertex({0.2, 0.5}), k.find_vertex({0.8, 0.5}));
    CHECK(t[e] == 1);
    CHECK(std::count(t.begin(), t.end(), 0) == static_cast<long>(t.size()) - 1);

    PlanarNetwork reversed;
    reversed.segments = {{{0.8, 0.5}, {0.2, 0.5}}};
    CHECK(embed_chain(k, reversed) == t);

    // a crossing splits the horizontal into two +1 pieces
    PlanarNetwork cross = node_segments(std::vector<Segment>{{{0.2, 0.5}, {0.8, 0.5}}, {{0.5, 0.2}, {0.5, 0.8}}});
    auto kc = constrained_triangulate(cross, kUnit);
    PlanarNetwork horizontal;
    horizontal.segments = {{{0.2, 0.5}, {0.8, 0.5}}};
    Chain th = embed_chain(kc, horizontal);
    int m = kc.find_vertex({0.5, 0.5});
    CHECK(th[kc.find_edge(kc.find_vertex({0.2, 0.5}), m)] == 1);
    CHECK(th[kc.find_edge(m, kc.find_vertex({0.8, 0.5}))] == 1);

    PlanarNetwork off;
    off.segments = {{{0.1, 0.1}, {0.3, 0.9}}};
    CHECK_THROWS_AS(embed_chain(k, off), ChainEmbeddingError);
}

TEST_CASE("input chain difference") {
    Chain a{1, 0, -1, 1}, b{1, 1, 0, 1};
    CHECK(input_chain(a, a) == Chain{0, 0, 0, 0});
    CHECK(input_chain(a, b) == Chain{0, -1, -1, 0});
}

TEST_CASE("deterministic construction") {
    Rng r1(3), r2(3);
    auto a = random_disk_complex(r1, 15, kUnit);
    auto b = random_disk_complex(r2, 15, kUnit);
    CHECK(complex_to_json(a) == complex_to_json(b));
}

TEST_CASE("multi-void complexes") {
    Rng rng(8);
    auto one = random_void_complex(rng, 1, 0);
    CHECK(one.num_triangles() == 8);
    auto two = random_void_complex(rng, 2, 0);
    CHECK(two.num_triangles() == 14);
    auto w = compute_weights(two, Crs::euclidean());
    CHECK(std::accumulate(w.v.begin(), w.v.end(), 0.0) == doctest::Approx(16.0 - 2.0));
}
