#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flatnorm/flatnorm_lp.hpp"
#include "flatnorm/geometry.hpp"
#include "flatnorm/rng.hpp"

namespace flatnorm {

// Simple polyline from nodes.front() (s) to nodes.back() (t).
struct PWLCurrent {
    std::vector<Point2> nodes;

    std::size_t num_edges() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    Segment edge(std::size_t i) const { return {nodes[i], nodes[i + 1]}; }  // edge from node i to node i+1
    std::vector<Segment> segments() const;
    double length() const;
    // Length of the sub-polyline between node i and node j (i <= j).
    double length_between(std::size_t i, std::size_t j) const;
    bool is_simple() const;
};

// Point in the open epsilon-disk around node `index` whose new edges cross
// neither the current nor `original`. With positive = true the point also
// lies in the positive cone: det[x - v, e_in] > 0 and det[x - v, e_out] > 0,
// det[a, b] = a.x b.y - a.y b.x (for an end node only its one edge counts).
// Throws RegionEmpty after max_attempts rejections.
Point2 allowed_region_sample(const PWLCurrent& current, std::size_t index, double epsilon, bool positive, Rng& rng,
                             const PWLCurrent* original = nullptr, int max_attempts = 10'000);

struct PerturbationStep {
    std::size_t node = 0;
    Point2 old_position;
    Point2 new_position;
    std::vector<std::array<Point2, 3>> patch;  // triangles covering the swept region
    double patch_area = 0.0;
    double area_bound = 0.0;  // epsilon/2 times the replaced edge lengths
    std::vector<double> old_edge_lengths;
    std::vector<double> new_edge_lengths;
};

struct PerturbationTrace {
    double epsilon = 0.0;
    std::size_t first = 0;  // inclusive node range that was perturbed
    std::size_t last = 0;
    std::vector<PerturbationStep> steps;
    PWLCurrent result;
    double total_patch_area() const;
};

// Positive perturbations of nodes first..last of t0, interior nodes in
// increasing order, then s, then t.
PerturbationTrace perturb_sequence_positive(const PWLCurrent& t0, double epsilon, std::size_t first, std::size_t last,
                                            Rng& rng);

// Chain T1 - T0, closed with the segments s->s1 and t1->t when the end nodes moved.
PairSetup perturbation_pair(const PWLCurrent& t0, const PWLCurrent& t1);

// Largest lambda0 / 2^k whose optimal decomposition fills every void.
// Throws AssumptionUnsatisfiable after 60 halvings or when T1 - T0 is not closed.
double choose_lambda_filled(const PWLCurrent& t0, const PWLCurrent& t1, double lambda0);

struct BoundReport {
    std::string kind;
    double bound = 0.0;
    double measured = 0.0;
    double slack = 0.0;
    bool satisfied = true;
    double lambda = 0.0;
    double epsilon = 0.0;
    std::size_t n = 0;
    double length_t0 = 0.0;
    double e_hat = 0.0;
    double e_hat_perturbed = 0.0;
};

// Every bound that applies to the node range of the trace, the additivity
// check and the per-step edge, patch and disjointness checks.
std::vector<BoundReport> check_bounds(const PWLCurrent& t0, const PerturbationTrace& trace, double lambda);

// Total overlap area of two triangle sets (exact convex clipping).
double overlap_area(std::span<const std::array<Point2, 3>> a, std::span<const std::array<Point2, 3>> b);

struct TrialConfig {
    std::size_t min_edges = 2;
    std::size_t max_edges = 20;
    double epsilon_fraction = 0.1;  // upper limit of epsilon relative to the shortest edge
    double lambda0 = 1.0;
};

struct TrialResult {
    std::size_t trial = 0;
    std::size_t n = 0;
    std::vector<BoundReport> reports;
    std::string error;  // non-empty when the trial could not run
};

// Random x-monotone currents; each trial runs a single, a k-range, a complete
// interior and a complete perturbation sequence.
std::vector<TrialResult> run_perturbation_trials(std::size_t trials, std::uint64_t seed, const TrialConfig& cfg = {});
std::string trials_to_csv(std::span<const TrialResult> trials, std::uint64_t seed);

struct DecouplingConfig {
    double height = 1.0 / 128;
    double spike_factor = 10.0;
    double spike_width = 1e-3;
    double lambda = 1.0;
    std::vector<double> envelope_shifts{1.0 / 1024, 1.0 / 512, 1.0 / 256};
};

struct DecouplingRow {
    std::string name;
    double hausdorff_before = 0.0;
    double hausdorff_after = 0.0;
    double fnorm_before = 0.0;  // normalized
    double fnorm_after = 0.0;
    double pct_hausdorff = 0.0;
    double pct_fnorm = 0.0;
};

// Base profile: every interior node of `base` lifted by `height` (plateau).
// Rows: zero change, a spike at the middle node, and envelope lifts of a
// tent profile that keep the peak.
std::vector<DecouplingRow> hausdorff_decoupling_experiments(const PWLCurrent& base, const DecouplingConfig& cfg = {});
std::string decoupling_to_csv(std::span<const DecouplingRow> rows);

}  // namespace flatnorm
