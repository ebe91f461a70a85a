#pragma once

#include <span>
#include <string>
#include <vector>

#include "flatnorm/flatnorm_lp.hpp"
#include "flatnorm/min_cost_flow.hpp"
#include "flatnorm/triangulation.hpp"

namespace flatnorm {

// Connected components of the plane outside the complex. Void 0 is the
// unbounded one.
struct VoidStructure {
    int count = 0;
    // Per edge: void on its left / right side, or -1 where a triangle sits.
    std::vector<std::array<int, 2>> side;
};

VoidStructure find_voids(const SimplicialComplex2& k);

// Chain around void v, oriented so the void lies on its left.
Chain void_boundary(const SimplicialComplex2& k, const VoidStructure& voids, int v);

// Dual nodes are triangles [0, F) followed by voids [F, F + V). For each edge
// the positive arc runs from the triangle/void on its left to the one on its
// right with cost t(e); the negative arc is its reverse with cost -t(e).
struct DualGraph {
    int num_triangles = 0;
    int num_voids = 0;
    std::vector<int> left;   // dual node on the left of each edge
    std::vector<int> right;  // dual node on the right
    std::vector<long long> z;
    std::vector<long long> capacity;  // round(w / quantum)
    double quantum = 1.0;

    int num_nodes() const { return num_triangles + num_voids; }
    int outer_void() const { return num_triangles; }
};

// Default quantum: 1e-6 of the largest edge weight or scaled triangle area.
double default_quantum(const WeightVectors& weights, double lambda);

// Throws CycleRequired when t has a nonzero vertex boundary.
DualGraph build_dual_graph(const SimplicialComplex2& k, std::span<const long long> t,
                           const WeightVectors& weights, double quantum);

// Shortest-path labels from the outer void with arc lengths ±t(e).
std::vector<long long> dist_labels(const DualGraph& g);

enum class NodeRole { facet, void_node, source, sink, up, down };
enum class ArcKind { dual_positive, dual_negative, source_void, void_sink, ret, source_up, down_sink, up_facet, facet_down };

struct FlowNetwork {
    FlowGraph graph;
    std::vector<NodeRole> roles;
    std::vector<ArcKind> kinds;
    std::vector<int> arc_ref;  // edge index for dual arcs, triangle for up/down arcs, void for void arcs
    std::vector<long long> labels;
    int source = -1, sink = -1, up = -1, down = -1;
    long long infinity = 0;
    // void partition
    std::vector<int> sources, sinks, transits;
};

// Flat norm network with up/down nodes; area capacity round(λ a_j / quantum).
FlowNetwork build_fn_network(const DualGraph& g, std::span<const long long> labels, double lambda,
                             std::span<const double> areas, double quantum);
FlowNetwork build_ohcp_network(const DualGraph& g, std::span<const long long> labels);

struct FlowSolution {
    FlowNetwork network;
    CirculationResult circulation;
    long long objective_quanta = 0;  // -(min cost)
};

FlowSolution solve_min_cost_flow(FlowNetwork net);

struct Certificate {
    bool certified = false;
    std::vector<std::string> failures;
    long long primal_quanta = 0;  // Σ c|x| + Σ A|π|
    long long dual_quanta = 0;    // -(min cost)
    long long flux_on_input = 0;  // Σ z g
    bool free_voids = false;      // solved with every void as a transit
};

struct FlowDecomposition {
    FlatNormDecomposition decomposition;  // objective in real units
    Certificate certificate;
    FlowSolution solution;
    DualGraph dual;
    std::vector<long long> area_capacity;
};

// Recovers (x, π) from the optimal flow and checks every certificate.
// Throws CertificationFailure unless throw_on_failure is false.
FlowDecomposition recover_and_certify(FlowSolution sol, const DualGraph& g, const SimplicialComplex2& k,
                                      std::span<const long long> area_capacity, double lambda,
                                      const WeightVectors& weights, bool throw_on_failure = true);

// Full dual backend for a cycle input. quantum <= 0 picks the default.
FlowDecomposition solve_flat_norm_flow(const FlatNormProblem& problem, double quantum = 0.0,
                                       bool throw_on_failure = true);

// Weights rounded to the flow resolution: w' = round(w/q), v' = round(λ v/q)
// so that the LP with λ' = 1 has the same optimum as the flow network.
WeightVectors quantized_weights(const WeightVectors& weights, double lambda, double quantum);

struct OhcpResult {
    Chain x;
    Chain pi;
    long long cost_quanta = 0;
    double cost = 0.0;
    Certificate certificate;
};

// Minimal chain homologous to the cycle t (no area cost).
OhcpResult solve_ohcp(const SimplicialComplex2& k, std::span<const long long> t, const WeightVectors& weights,
                      double quantum = 0.0);

std::string network_to_json(const FlowNetwork& net);

}  // namespace flatnorm
