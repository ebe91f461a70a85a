#pragma once

#include <string>
#include <vector>

namespace flatnorm {

struct FlowArc {
    int from;
    int to;
    long long cost;
    long long capacity;
    long long flow = 0;
};

class FlowGraph {
public:
    explicit FlowGraph(int nodes = 0) : nodes_(nodes) {}

    int add_node() { return nodes_++; }
    int add_arc(int from, int to, long long cost, long long capacity) {
        arcs_.push_back({from, to, cost, capacity, 0});
        return static_cast<int>(arcs_.size()) - 1;
    }

    int num_nodes() const { return nodes_; }
    const std::vector<FlowArc>& arcs() const { return arcs_; }
    std::vector<FlowArc>& arcs() { return arcs_; }

    long long total_cost() const;
    // Net outflow minus inflow per node.
    std::vector<long long> imbalance() const;

private:
    int nodes_;
    std::vector<FlowArc> arcs_;
};

struct CirculationResult {
    long long cost = 0;
    // Reduced costs cost + p[from] - p[to] are non-negative on every arc with
    // residual capacity.
    std::vector<long long> potential;
    long long augmentations = 0;
};

// Minimum-cost circulation. Negative-cost arcs are saturated first (they must
// have finite capacity); the resulting imbalances are cancelled by successive
// shortest paths with Dijkstra on reduced costs. Flows are written into g.
CirculationResult min_cost_circulation(FlowGraph& g);

// Empty when every residual arc has non-negative reduced cost.
std::string check_reduced_costs(const FlowGraph& g, const std::vector<long long>& potential);

}  // namespace flatnorm
