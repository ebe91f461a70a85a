#include "flatnorm/min_cost_flow.hpp"

#include <limits>
#include <queue>

namespace flatnorm {

long long FlowGraph::total_cost() const {
    long long c = 0;
    for (const auto& a : arcs_) c += a.cost * a.flow;
    return c;
}

std::vector<long long> FlowGraph::imbalance() const {
    std::vector<long long> out(static_cast<std::size_t>(nodes_), 0);
    for (const auto& a : arcs_) {
        out[a.from] += a.flow;
        out[a.to] -= a.flow;
    }
    return out;
}

namespace {

// Residual arcs are 2*i (forward) and 2*i+1 (backward) for arc i.
struct Residual {
    const FlowGraph& g;
    std::vector<std::vector<int>> out;

    explicit Residual(const FlowGraph& graph) : g(graph), out(static_cast<std::size_t>(graph.num_nodes())) {
        for (std::size_t i = 0; i < g.arcs().size(); ++i) {
            out[g.arcs()[i].from].push_back(static_cast<int>(2 * i));
            out[g.arcs()[i].to].push_back(static_cast<int>(2 * i + 1));
        }
    }
    int head(int r) const { const auto& a = g.arcs()[r / 2]; return r % 2 ? a.from : a.to; }
    long long cost(int r) const { const auto& a = g.arcs()[r / 2]; return r % 2 ? -a.cost : a.cost; }
    long long cap(int r) const { const auto& a = g.arcs()[r / 2]; return r % 2 ? a.flow : a.capacity - a.flow; }
};

}  // namespace

CirculationResult min_cost_circulation(FlowGraph& g) {
    const std::size_t n = static_cast<std::size_t>(g.num_nodes());
    std::vector<long long> excess(n, 0);
    for (auto& a : g.arcs()) {
        a.flow = 0;
        if (a.cost < 0) {
            a.flow = a.capacity;
            excess[a.to] += a.capacity;
            excess[a.from] -= a.capacity;
        }
    }
    CirculationResult res;
    res.potential.assign(n, 0);
    Residual resid(g);
    constexpr long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> dist(n);
    std::vector<int> via(n);
    std::vector<char> done(n);
    using Item = std::pair<long long, int>;

    while (true) {
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(via.begin(), via.end(), -1);
        std::fill(done.begin(), done.end(), 0);
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        for (std::size_t v = 0; v < n; ++v) {
            if (excess[v] > 0) {
                dist[v] = 0;
                heap.push({0, static_cast<int>(v)});
            }
        }
        if (heap.empty()) break;
        int sink = -1;
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (done[u] || d != dist[u]) continue;
            done[u] = 1;
            if (excess[u] < 0) {
                sink = u;
                break;
            }
            for (int r : resid.out[u]) {
                if (resid.cap(r) <= 0) continue;
                int v = resid.head(r);
                long long nd = d + resid.cost(r) + res.potential[u] - res.potential[v];
                if (nd < dist[v]) {
                    dist[v] = nd;
                    via[v] = r;
                    heap.push({nd, v});
                }
            }
        }
        if (sink < 0) break;  // cannot happen: every excess came with a backward path
        long long limit = dist[sink];
        for (std::size_t v = 0; v < n; ++v) res.potential[v] += std::min(dist[v], limit);

        long long amount = -excess[sink];
        int v = sink;
        while (via[v] >= 0) {
            amount = std::min(amount, resid.cap(via[v]));
            v = g.arcs()[via[v] / 2].from == resid.head(via[v]) ? g.arcs()[via[v] / 2].to
                                                                  : g.arcs()[via[v] / 2].from;
        }
        amount = std::min(amount, excess[v]);
        int source = v;
        v = sink;
        while (via[v] >= 0) {
            int r = via[v];
            auto& a = g.arcs()[r / 2];
            if (r % 2) {
                a.flow -= amount;
                v = a.to;
            } else {
                a.flow += amount;
                v = a.from;
            }
        }
        excess[source] -= amount;
        excess[sink] += amount;
        ++res.augmentations;
    }
    res.cost = g.total_cost();
    return res;
}

std::string check_reduced_costs(const FlowGraph& g, const std::vector<long long>& potential) {
    for (std::size_t i = 0; i < g.arcs().size(); ++i) {
        const auto& a = g.arcs()[i];
        long long rc = a.cost + potential[a.from] - potential[a.to];
        if (a.flow < a.capacity && rc < 0) return "arc " + std::to_string(i) + " has residual capacity and negative reduced cost";
        if (a.flow > 0 && rc > 0) return "arc " + std::to_string(i) + " carries flow with positive reduced cost";
    }
    return {};
}

}  // namespace flatnorm
