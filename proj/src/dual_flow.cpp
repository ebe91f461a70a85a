#include "flatnorm/dual_flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

#include <json.hpp>

#include "flatnorm/errors.hpp"

namespace flatnorm {

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

VoidStructure find_voids(const SimplicialComplex2& k) {
    const std::size_t m = k.num_edges();
    VoidStructure out;
    out.side.assign(m, {-1, -1});
    if (m == 0) return out;
    DisjointSets sets(2 * m);
    auto element = [](int e, int slot) { return 2 * e + slot; };
    int outer_element = -1;

    for (std::size_t v = 0; v < k.vertices().size(); ++v) {
        const auto& inc = k.incident_edges(static_cast<int>(v));
        if (inc.empty()) continue;
        struct Spoke {
            double angle;
            int edge;
            bool low;  // v is the edge's lexicographically smaller end
        };
        std::vector<Spoke> spokes;
        for (int e : inc) {
            bool low = k.edges()[e].v0 == static_cast<int>(v);
            Point2 d = k.vertices()[low ? k.edges()[e].v1 : k.edges()[e].v0] - k.vertices()[v];
            spokes.push_back({std::atan2(d.y, d.x), e, low});
        }
        std::sort(spokes.begin(), spokes.end(), [](const Spoke& a, const Spoke& b) { return a.angle < b.angle; });
        for (std::size_t i = 0; i < spokes.size(); ++i) {
            const Spoke& a = spokes[i];
            const Spoke& b = spokes[(i + 1) % spokes.size()];
            // sector counter-clockwise from a to b
            int slot_a = a.low ? 0 : 1;
            int slot_b = b.low ? 1 : 0;
            if (k.cofaces(a.edge)[slot_a] >= 0) continue;
            sets.unite(element(a.edge, slot_a), element(b.edge, slot_b));
            if (v == 0 && i + 1 == spokes.size()) outer_element = element(a.edge, slot_a);
        }
    }
    if (outer_element < 0) throw TriangulationFailure("lowest vertex is not on the outer boundary");

    std::vector<int> id_of_root(2 * m, -1);
    id_of_root[sets.find(outer_element)] = 0;
    out.count = 1;
    for (std::size_t e = 0; e < m; ++e) {
        for (int slot = 0; slot < 2; ++slot) {
            if (k.cofaces(static_cast<int>(e))[slot] >= 0) continue;
            int root = sets.find(element(static_cast<int>(e), slot));
            if (id_of_root[root] < 0) id_of_root[root] = out.count++;
            out.side[e][slot] = id_of_root[root];
        }
    }
    return out;
}

Chain void_boundary(const SimplicialComplex2& k, const VoidStructure& voids, int v) {
    Chain c(k.num_edges(), 0);
    for (std::size_t e = 0; e < k.num_edges(); ++e) {
        if (voids.side[e][0] == v) c[e] += 1;
        if (voids.side[e][1] == v) c[e] -= 1;
    }
    return c;
}

double default_quantum(const WeightVectors& weights, double lambda) {
    double top = 0.0;
    for (double w : weights.w) top = std::max(top, w);
    for (double v : weights.v) top = std::max(top, lambda * v);
    return top > 0.0 ? 1e-6 * top : 1.0;
}

DualGraph build_dual_graph(const SimplicialComplex2& k, std::span<const long long> t, const WeightVectors& weights,
                           double quantum) {
    if (t.size() != k.num_edges()) throw InputError("chain length does not match the complex");
    if (!(quantum > 0.0)) throw InputError("quantum must be positive");
    Chain bd = k.vertex_boundary(t);
    if (std::any_of(bd.begin(), bd.end(), [](long long c) { return c != 0; }))
        throw CycleRequired("input chain is not a cycle; use the LP backend");
    VoidStructure voids = find_voids(k);
    DualGraph g;
    g.num_triangles = static_cast<int>(k.num_triangles());
    g.num_voids = voids.count;
    g.quantum = quantum;
    for (std::size_t e = 0; e < k.num_edges(); ++e) {
        const auto& cf = k.cofaces(static_cast<int>(e));
        g.left.push_back(cf[0] >= 0 ? cf[0] : g.num_triangles + voids.side[e][0]);
        g.right.push_back(cf[1] >= 0 ? cf[1] : g.num_triangles + voids.side[e][1]);
        g.z.push_back(t[e]);
        g.capacity.push_back(std::llround(weights.w[e] / quantum));
    }
    return g;
}

std::vector<long long> dist_labels(const DualGraph& g) {
    const int n = g.num_nodes();
    std::vector<std::vector<std::pair<int, long long>>> adj(static_cast<std::size_t>(n));
    for (std::size_t e = 0; e < g.z.size(); ++e) {
        adj[g.left[e]].push_back({g.right[e], g.z[e]});
        adj[g.right[e]].push_back({g.left[e], -g.z[e]});
    }
    constexpr long long unset = std::numeric_limits<long long>::max();
    std::vector<long long> dist(static_cast<std::size_t>(n), unset);
    std::vector<int> relaxed(static_cast<std::size_t>(n), 0);
    std::vector<char> queued(static_cast<std::size_t>(n), 0);
    std::deque<int> queue{g.outer_void()};
    dist[g.outer_void()] = 0;
    queued[g.outer_void()] = 1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        queued[u] = 0;
        for (auto [v, c] : adj[u]) {
            if (dist[v] == unset || dist[u] + c < dist[v]) {
                dist[v] = dist[u] + c;
                if (++relaxed[v] > n) throw NegativeCycle("dual graph has a negative cycle; the chain is not a cycle");
                if (!queued[v]) {
                    queued[v] = 1;
                    queue.push_back(v);
                }
            }
        }
    }
    for (auto& d : dist)
        if (d == unset) d = 0;
    return dist;
}

namespace {

FlowNetwork build_common(const DualGraph& g, std::span<const long long> labels, bool with_area) {
    FlowNetwork net;
    const int n = g.num_nodes();
    net.graph = FlowGraph(n);
    net.labels.assign(labels.begin(), labels.end());
    for (int i = 0; i < n; ++i) net.roles.push_back(i < g.num_triangles ? NodeRole::facet : NodeRole::void_node);
    net.source = net.graph.add_node();
    net.roles.push_back(NodeRole::source);
    net.sink = net.graph.add_node();
    net.roles.push_back(NodeRole::sink);
    if (with_area) {
        net.up = net.graph.add_node();
        net.roles.push_back(NodeRole::up);
        net.down = net.graph.add_node();
        net.roles.push_back(NodeRole::down);
    }
    auto add = [&](int from, int to, long long cost, long long cap, ArcKind kind, int ref) {
        net.graph.add_arc(from, to, cost, cap);
        net.kinds.push_back(kind);
        net.arc_ref.push_back(ref);
    };
    for (std::size_t e = 0; e < g.z.size(); ++e) {
        add(g.left[e], g.right[e], g.z[e], g.capacity[e], ArcKind::dual_positive, static_cast<int>(e));
        add(g.right[e], g.left[e], -g.z[e], g.capacity[e], ArcKind::dual_negative, static_cast<int>(e));
    }

    std::vector<int> pos, neg, zero;
    for (int v = 0; v < g.num_voids; ++v) {
        long long d = labels[g.num_triangles + v];
        (d > 0 ? pos : d < 0 ? neg : zero).push_back(v);
    }
    net.sources = pos;
    net.sinks = neg;
    if (!pos.empty() && neg.empty()) {
        net.sinks = zero;
    } else if (pos.empty() && !neg.empty()) {
        net.sources = zero;
    } else {
        net.transits = zero;
    }
    // capacity placeholders are patched to the final infinity below
    for (int v : net.sources) add(net.source, g.num_triangles + v, 0, -1, ArcKind::source_void, v);
    for (int v : net.transits) add(net.source, g.num_triangles + v, 0, -1, ArcKind::source_void, v);
    for (int v : net.sinks) add(g.num_triangles + v, net.sink, 0, -1, ArcKind::void_sink, v);
    for (int v : net.transits) add(g.num_triangles + v, net.sink, 0, -1, ArcKind::void_sink, v);
    add(net.sink, net.source, 0, -1, ArcKind::ret, -1);
    if (with_area) {
        add(net.source, net.up, 0, -1, ArcKind::source_up, -1);
        add(net.down, net.sink, 0, -1, ArcKind::down_sink, -1);
    }
    return net;
}

void finalize_infinity(FlowNetwork& net) {
    long long finite = 0;
    for (const auto& a : net.graph.arcs())
        if (a.capacity >= 0) finite += a.capacity;
    net.infinity = finite + 1;
    for (auto& a : net.graph.arcs())
        if (a.capacity < 0) a.capacity = net.infinity;
}

}  // namespace

FlowNetwork build_fn_network(const DualGraph& g, std::span<const long long> labels, double lambda,
                             std::span<const double> areas, double quantum) {
    FlowNetwork net = build_common(g, labels, true);
    for (int j = 0; j < g.num_triangles; ++j) {
        long long cap = std::llround(lambda * areas[j] / quantum);
        net.graph.add_arc(net.up, j, 0, cap);
        net.kinds.push_back(ArcKind::up_facet);
        net.arc_ref.push_back(j);
        net.graph.add_arc(j, net.down, 0, cap);
        net.kinds.push_back(ArcKind::facet_down);
        net.arc_ref.push_back(j);
    }
    finalize_infinity(net);
    return net;
}

FlowNetwork build_ohcp_network(const DualGraph& g, std::span<const long long> labels) {
    FlowNetwork net = build_common(g, labels, false);
    finalize_infinity(net);
    return net;
}

FlowSolution solve_min_cost_flow(FlowNetwork net) {
    FlowSolution sol;
    sol.circulation = min_cost_circulation(net.graph);
    sol.objective_quanta = -sol.circulation.cost;
    sol.network = std::move(net);
    return sol;
}

WeightVectors quantized_weights(const WeightVectors& weights, double lambda, double quantum) {
    WeightVectors q;
    for (double w : weights.w) q.w.push_back(static_cast<double>(std::llround(w / quantum)));
    for (double v : weights.v) q.v.push_back(static_cast<double>(std::llround(lambda * v / quantum)));
    return q;
}

FlowDecomposition recover_and_certify(FlowSolution sol, const DualGraph& g, const SimplicialComplex2& k,
                                      std::span<const long long> area_capacity, double lambda,
                                      const WeightVectors& weights, bool throw_on_failure) {
    const FlowNetwork& net = sol.network;
    const auto& arcs = net.graph.arcs();
    const int facets = g.num_triangles;
    Certificate cert;
    auto fail = [&](std::string msg) { cert.failures.push_back(std::move(msg)); };

    // potentials on the residual graph with voids and S, T, U, D merged into one ground node
    auto contract = [&](int v) { return v < facets ? v : facets; };
    std::vector<long long> p(static_cast<std::size_t>(facets + 1), 0);
    bool stable = false;
    for (int round = 0; round <= facets + 1 && !stable; ++round) {
        stable = true;
        for (const auto& a : arcs) {
            int u = contract(a.from), v = contract(a.to);
            if (u == v) {
                if ((a.flow < a.capacity && a.cost < 0) || (a.flow > 0 && a.cost > 0)) {
                    fail("negative residual loop at the merged void node");
                    stable = true;
                    round = facets + 2;
                    break;
                }
                continue;
            }
            if (a.flow < a.capacity && p[u] + a.cost < p[v]) {
                p[v] = p[u] + a.cost;
                stable = false;
            }
            if (a.flow > 0 && p[v] - a.cost < p[u]) {
                p[u] = p[v] - a.cost;
                stable = false;
            }
        }
    }
    if (!stable) fail("negative residual cycle after merging voids");

    FlatNormDecomposition dec;
    dec.lambda = lambda;
    dec.s.assign(static_cast<std::size_t>(facets), 0);
    for (int j = 0; j < facets; ++j) dec.s[j] = p[facets] - p[j];
    Chain ds = k.boundary(dec.s);
    dec.x.resize(k.num_edges());
    for (std::size_t e = 0; e < k.num_edges(); ++e) {
        dec.x[e] = g.z[e] - ds[e];
        long long reduced = g.z[e] + p[contract(g.left[e])] - p[contract(g.right[e])];
        if (reduced != dec.x[e]) fail("x differs from the reduced cost of its positive arc");
    }
    evaluate(dec, weights);

    // net coflow per edge and per triangle
    std::vector<long long> ge(k.num_edges(), 0), gj(static_cast<std::size_t>(facets), 0);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        switch (net.kinds[i]) {
            case ArcKind::dual_positive: ge[net.arc_ref[i]] += arcs[i].flow; break;
            case ArcKind::dual_negative: ge[net.arc_ref[i]] -= arcs[i].flow; break;
            case ArcKind::facet_down: gj[net.arc_ref[i]] += arcs[i].flow; break;
            case ArcKind::up_facet: gj[net.arc_ref[i]] -= arcs[i].flow; break;
            default: break;
        }
    }

    for (std::size_t e = 0; e < k.num_edges(); ++e) {
        cert.primal_quanta += g.capacity[e] * std::llabs(dec.x[e]);
        if (dec.x[e] > 0 && ge[e] != -g.capacity[e]) fail("edge " + std::to_string(e) + ": x > 0 without saturated coflow");
        if (dec.x[e] < 0 && ge[e] != g.capacity[e]) fail("edge " + std::to_string(e) + ": x < 0 without saturated coflow");
    }
    for (int j = 0; j < facets; ++j) {
        long long cap = area_capacity.empty() ? 0 : area_capacity[j];
        cert.primal_quanta += cap * std::llabs(dec.s[j]);
        if (area_capacity.empty()) continue;
        if (dec.s[j] > 0 && gj[j] != cap) fail("triangle " + std::to_string(j) + ": π > 0 without saturated up/down arcs");
        if (dec.s[j] < 0 && gj[j] != -cap) fail("triangle " + std::to_string(j) + ": π < 0 without saturated up/down arcs");
    }
    cert.dual_quanta = sol.objective_quanta;
    if (cert.primal_quanta != cert.dual_quanta)
        fail("primal " + std::to_string(cert.primal_quanta) + " differs from dual " + std::to_string(cert.dual_quanta));

    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (arcs[i].flow < 0 || arcs[i].flow > arcs[i].capacity) fail("capacity violated on arc " + std::to_string(i));
    auto imbalance = net.graph.imbalance();
    if (std::any_of(imbalance.begin(), imbalance.end(), [](long long b) { return b != 0; }))
        fail("flow conservation violated");
    if (auto msg = check_reduced_costs(net.graph, sol.circulation.potential); !msg.empty()) fail(msg);

    long long trivial = 0;
    for (std::size_t e = 0; e < k.num_edges(); ++e) trivial += g.capacity[e] * std::llabs(g.z[e]);
    if (cert.dual_quanta < 0 || cert.dual_quanta > trivial) fail("weak duality violated");

    auto flux = [&](std::span<const long long> chain) {
        long long f = 0;
        for (std::size_t e = 0; e < chain.size(); ++e) f += chain[e] * ge[e];
        return f;
    };
    cert.flux_on_input = flux(g.z);
    long long pi_g = 0;
    for (int j = 0; j < facets; ++j) pi_g += dec.s[j] * gj[j];
    if (cert.flux_on_input != flux(dec.x) - pi_g) fail("flux of the input differs from flux of the recovered cycle");
    if (-cert.flux_on_input != cert.dual_quanta) fail("min cost differs from the input flux");
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<int> coin(-1, 1);
    for (int trial = 0; trial < 3; ++trial) {
        Chain shift(static_cast<std::size_t>(facets));
        for (auto& c : shift) c = coin(rng);
        Chain moved = k.boundary(shift);
        for (std::size_t e = 0; e < moved.size(); ++e) moved[e] += g.z[e];
        long long pg = 0;
        for (int j = 0; j < facets; ++j) pg += shift[j] * gj[j];
        if (flux(moved) + pg != cert.flux_on_input) fail("flux not preserved within the homology class");
    }

    cert.certified = cert.failures.empty();
    if (!cert.certified && throw_on_failure) throw CertificationFailure(cert.failures.front());
    FlowDecomposition out;
    out.decomposition = std::move(dec);
    out.certificate = std::move(cert);
    out.solution = std::move(sol);
    out.dual = g;
    out.area_capacity.assign(area_capacity.begin(), area_capacity.end());
    return out;
}

FlowDecomposition solve_flat_norm_flow(const FlatNormProblem& problem, double quantum, bool throw_on_failure) {
    const auto& k = problem.complex;
    if (quantum <= 0.0) quantum = default_quantum(problem.weights, problem.lambda);
    DualGraph g = build_dual_graph(k, problem.t, problem.weights, quantum);
    std::vector<long long> area_cap;
    for (double v : problem.weights.v) area_cap.push_back(std::llround(problem.lambda * v / quantum));
    if (std::all_of(problem.t.begin(), problem.t.end(), [](long long c) { return c == 0; })) {
        FlowDecomposition out;
        out.decomposition.x.assign(k.num_edges(), 0);
        out.decomposition.s.assign(k.num_triangles(), 0);
        out.decomposition.lambda = problem.lambda;
        out.certificate.certified = true;
        out.dual = std::move(g);
        out.area_capacity = std::move(area_cap);
        return out;
    }
    auto labels = dist_labels(g);
    FlowNetwork net = build_fn_network(g, labels, problem.lambda, problem.weights.v, quantum);
    auto rec = recover_and_certify(solve_min_cost_flow(std::move(net)), g, k, area_cap, problem.lambda,
                                   problem.weights, false);
    if (rec.certificate.certified) return rec;
    // The signature partition can cut off optimal coflows for cycles that wind
    // more than once around a void; every void as a transit is the exact dual.
    std::vector<long long> free_voids(labels.size(), 0);
    net = build_fn_network(g, free_voids, problem.lambda, problem.weights.v, quantum);
    rec = recover_and_certify(solve_min_cost_flow(std::move(net)), g, k, area_cap, problem.lambda, problem.weights,
                              throw_on_failure);
    rec.certificate.free_voids = true;
    return rec;
}

OhcpResult solve_ohcp(const SimplicialComplex2& k, std::span<const long long> t, const WeightVectors& weights,
                      double quantum) {
    if (quantum <= 0.0) quantum = default_quantum(weights, 0.0);
    DualGraph g = build_dual_graph(k, t, weights, quantum);
    OhcpResult res;
    if (std::all_of(t.begin(), t.end(), [](long long c) { return c == 0; })) {
        res.x.assign(k.num_edges(), 0);
        res.pi.assign(k.num_triangles(), 0);
        res.certificate.certified = true;
        return res;
    }
    auto labels = dist_labels(g);
    FlowNetwork net = build_ohcp_network(g, labels);
    WeightVectors no_area{weights.w, std::vector<double>(k.num_triangles(), 0.0)};
    auto rec = recover_and_certify(solve_min_cost_flow(std::move(net)), g, k, {}, 0.0, no_area, false);
    if (!rec.certificate.certified) {
        std::vector<long long> free_voids(labels.size(), 0);
        net = build_ohcp_network(g, free_voids);
        rec = recover_and_certify(solve_min_cost_flow(std::move(net)), g, k, {}, 0.0, no_area, true);
        rec.certificate.free_voids = true;
    }
    res.x = rec.decomposition.x;
    res.pi = rec.decomposition.s;
    res.cost_quanta = rec.certificate.primal_quanta;
    res.cost = rec.decomposition.length_component;
    res.certificate = rec.certificate;
    return res;
}

std::string network_to_json(const FlowNetwork& net) {
    using nlohmann::json;
    static const char* role_names[] = {"facet", "void", "S", "T", "U", "D"};
    static const char* kind_names[] = {"dual_positive", "dual_negative", "source_void", "void_sink", "return",
                                       "source_up", "down_sink", "up_facet", "facet_down"};
    json doc;
    doc["infinity"] = net.infinity;
    doc["nodes"] = json::array();
    for (std::size_t i = 0; i < net.roles.size(); ++i) {
        json node{{"id", i}, {"role", role_names[static_cast<int>(net.roles[i])]}};
        if (i < net.labels.size()) node["dist"] = net.labels[i];
        doc["nodes"].push_back(node);
    }
    doc["arcs"] = json::array();
    for (std::size_t i = 0; i < net.graph.arcs().size(); ++i) {
        const auto& a = net.graph.arcs()[i];
        doc["arcs"].push_back({{"from", a.from},
                               {"to", a.to},
                               {"cost", a.cost},
                               {"capacity", a.capacity},
                               {"flow", a.flow},
                               {"kind", kind_names[static_cast<int>(net.kinds[i])]}});
    }
    doc["sources"] = net.sources;
    doc["sinks"] = net.sinks;
    doc["transits"] = net.transits;
    return doc.dump(2);
}

}  // namespace flatnorm
