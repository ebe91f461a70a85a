#include <algorithm>

#include "doctest.h"
#include "flatnorm/dual_flow.hpp"
#include "flatnorm/errors.hpp"
#include "flatnorm/flatnorm_lp.hpp"
#include "flatnorm/instances.hpp"

using namespace flatnorm;

namespace {

struct SquareCase {
    std::vector<Point2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    std::vector<std::array<int, 3>> tris{{0, 1, 2}, {0, 2, 3}};
    SimplicialComplex2 k = complex_from_triangles(pts, tris);
    WeightVectors w = compute_weights(k, Crs::euclidean());
    Chain ccw;
    SquareCase() {
        ccw.assign(k.num_edges(), 0);
        for (int i = 0; i < 4; ++i) {
            int a = k.find_vertex(pts[i]), b = k.find_vertex(pts[(i + 1) % 4]);
            int e = k.find_edge(a, b);
            ccw[e] = k.edges()[e].v0 == a ? 1 : -1;
        }
    }
    Chain cw() const {
        Chain c = ccw;
        for (auto& v : c) v = -v;
        return c;
    }
};

}  // namespace

TEST_CASE("dual graph of the split square") {
    SquareCase sq;
    DualGraph g = build_dual_graph(sq.k, sq.ccw, sq.w, 1e-6);
    CHECK(g.num_triangles == 2);
    CHECK(g.num_voids == 1);
    CHECK(g.left.size() == 5);
    DualGraph fine = build_dual_graph(sq.k, sq.ccw, sq.w, 0.5e-6);
    for (std::size_t e = 0; e < g.capacity.size(); ++e) CHECK(std::llabs(fine.capacity[e] - 2 * g.capacity[e]) <= 1);

    Chain open(sq.k.num_edges(), 0);
    open[0] = 1;
    CHECK_THROWS_AS(build_dual_graph(sq.k, open, sq.w, 1e-6), CycleRequired);
}

TEST_CASE("dist labels follow the curl") {
    SquareCase sq;
    auto cw = dist_labels(build_dual_graph(sq.k, sq.cw(), sq.w, 1e-6));
    CHECK(cw[0] == 1);
    CHECK(cw[1] == 1);
    CHECK(cw[2] == 0);
    auto ccw = dist_labels(build_dual_graph(sq.k, sq.ccw, sq.w, 1e-6));
    CHECK(ccw[0] == -1);
    CHECK(ccw[1] == -1);
    Chain zero(sq.k.num_edges(), 0);
    auto z = dist_labels(build_dual_graph(sq.k, zero, sq.w, 1e-6));
    CHECK(std::all_of(z.begin(), z.end(), [](long long c) { return c == 0; }));
}

TEST_CASE("void partition branches") {
    SquareCase sq;
    DualGraph g = build_dual_graph(sq.k, sq.ccw, sq.w, 1e-6);
    auto labels = dist_labels(g);
    FlowNetwork fn = build_fn_network(g, labels, 1.0, sq.w.v, 1e-6);
    // only the outer void, with label 0: a transit
    CHECK(fn.transits == std::vector<int>{0});
    CHECK(fn.roles.size() == static_cast<std::size_t>(2 + 0 + 5));
    FlowNetwork oh = build_ohcp_network(g, labels);
    CHECK(oh.roles.size() == static_cast<std::size_t>(2 + 0 + 3));

    // one inner void with positive label: source; the outer void becomes a sink
    Rng rng(5);
    auto k = random_void_complex(rng, 1, 0);
    auto w = compute_weights(k, Crs::euclidean());
    VoidStructure voids = find_voids(k);
    REQUIRE(voids.count == 2);
    Chain t = void_boundary(k, voids, 1);
    DualGraph vg = build_dual_graph(k, t, w, 1e-6);
    auto vl = dist_labels(vg);
    long long inner = vl[vg.num_triangles + 1];
    CHECK(std::llabs(inner) == 1);
    FlowNetwork vn = build_fn_network(vg, vl, 1.0, w.v, 1e-6);
    if (inner > 0) {
        CHECK(vn.sources == std::vector<int>{1});
        CHECK(vn.sinks == std::vector<int>{0});
    } else {
        CHECK(vn.sinks == std::vector<int>{1});
        CHECK(vn.sources == std::vector<int>{0});
    }
    CHECK(vn.transits.empty());
    CHECK(vn.roles.size() == static_cast<std::size_t>(vg.num_triangles + 1 + 5));
}

TEST_CASE("unit square through the flow backend") {
    SquareCase sq;
    for (double lambda : {2.0, 8.0}) {
        auto res = solve_flat_norm_flow({sq.k, sq.w, sq.ccw, lambda});
        CHECK(res.certificate.certified);
        CHECK(res.decomposition.objective == doctest::Approx(std::min(lambda, 4.0)).epsilon(1e-6));
        if (lambda == 2.0) {
            CHECK(res.decomposition.s == Chain{1, 1});
            CHECK(std::all_of(res.decomposition.x.begin(), res.decomposition.x.end(), [](long long c) { return c == 0; }));
        } else {
            CHECK(res.decomposition.x == sq.ccw);
        }
    }
    Chain zero(sq.k.num_edges(), 0);
    auto z = solve_flat_norm_flow({sq.k, sq.w, zero, 1.0});
    CHECK(z.decomposition.objective == 0.0);
}

TEST_CASE("flow and LP agree on random cycles") {
    Rng rng(101);
    for (int i = 0; i < 40; ++i) {
        Instance inst = random_cycle_instance(rng, i % 2 == 1);
        auto flow = solve_flat_norm_flow({inst.complex, inst.weights, inst.t, inst.lambda});
        CHECK(flow.certificate.certified);
        WeightVectors qw = quantized_weights(inst.weights, inst.lambda, flow.dual.quantum);
        auto lp = solve_lp({inst.complex, qw, inst.t, 1.0});
        CHECK(std::llround(lp.objective) == flow.certificate.dual_quanta);
        CHECK(flow.certificate.primal_quanta == flow.certificate.dual_quanta);
        Chain ds = inst.complex.boundary(flow.decomposition.s);
        for (std::size_t e = 0; e < ds.size(); ++e) CHECK(flow.decomposition.x[e] == inst.t[e] - ds[e]);
    }
}

TEST_CASE("tampered flows fail certification") {
    Rng rng(9);
    Instance inst = random_cycle_instance(rng, false);
    double q = default_quantum(inst.weights, inst.lambda);
    DualGraph g = build_dual_graph(inst.complex, inst.t, inst.weights, q);
    auto labels = dist_labels(g);
    auto sol = solve_min_cost_flow(build_fn_network(g, labels, inst.lambda, inst.weights.v, q));
    sol.objective_quanta += 1;
    std::vector<long long> caps;
    for (double v : inst.weights.v) caps.push_back(std::llround(inst.lambda * v / q));
    auto rec = recover_and_certify(sol, g, inst.complex, caps, inst.lambda, inst.weights, false);
    CHECK_FALSE(rec.certificate.certified);
    CHECK_THROWS_AS(recover_and_certify(sol, g, inst.complex, caps, inst.lambda, inst.weights, true),
                    CertificationFailure);
}

TEST_CASE("OHCP on disks and multi-void complexes") {
    SquareCase sq;
    auto r = solve_ohcp(sq.k, sq.ccw, sq.w);
    CHECK(r.cost_quanta == 0);
    CHECK(std::all_of(r.x.begin(), r.x.end(), [](long long c) { return c == 0; }));

    Rng rng(55);
    for (int i = 0; i < 10; ++i) {
        Instance disk = random_cycle_instance(rng, false);
        CHECK(solve_ohcp(disk.complex, disk.t, disk.weights).cost_quanta == 0);
    }
    for (int i = 0; i < 10; ++i) {
        Instance inst = random_ohcp_instance(rng);
        auto res = solve_ohcp(inst.complex, inst.t, inst.weights);
        CHECK(res.certificate.certified);
        double q = default_quantum(inst.weights, 0.0);
        WeightVectors qw = quantized_weights(inst.weights, 0.0, q);
        auto ex = solve_exhaustive({inst.complex, qw, inst.t, 0.0});
        CHECK(std::llround(ex.objective) == res.cost_quanta);
    }
}

TEST_CASE("network JSON dump") {
    SquareCase sq;
    DualGraph g = build_dual_graph(sq.k, sq.ccw, sq.w, 1e-6);
    auto text = network_to_json(build_fn_network(g, dist_labels(g), 1.0, sq.w.v, 1e-6));
    CHECK(text.find("\"role\": \"U\"") != std::string::npos);
    CHECK(text.find("\"dist\"") != std::string::npos);
}
