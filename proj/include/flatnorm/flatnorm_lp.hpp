#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flatnorm/geometry.hpp"
#include "flatnorm/simplex.hpp"
#include "flatnorm/triangulation.hpp"

namespace flatnorm {

// Views into a complex, its weights and an input chain. The referenced
// objects must outlive the problem.
struct FlatNormProblem {
    const SimplicialComplex2& complex;
    const WeightVectors& weights;
    std::span<const long long> t;
    double lambda = 1.0;
};

struct FlatNormDecomposition {
    Chain x;  // t - ∂s, per edge
    Chain s;  // per triangle
    double objective = 0.0;
    double length_component = 0.0;  // Σ w|x|
    double area_component = 0.0;    // Σ v|s|, not scaled by λ
    double lambda = 0.0;
};

// Fills the objective and both components from x and s.
void evaluate(FlatNormDecomposition& d, const WeightVectors& weights);

FlatNormDecomposition solve_lp(const FlatNormProblem& problem, const SimplexOptions& opts = {});

// Brute-force minimum over s in {-bound..bound}^n. Throws TooLarge for n > 16.
FlatNormDecomposition solve_exhaustive(const FlatNormProblem& problem, int s_bound = 1);

// A pair of networks noded together and triangulated once.
struct PairSetup {
    BBox box;
    SimplicialComplex2 complex;
    WeightVectors weights;
    Chain t1;
    Chain t2;
    Chain t;  // t1 - t2
    double length1 = 0.0;  // network lengths in the CRS metric
    double length2 = 0.0;
    Crs crs;
};

struct PairOptions {
    double margin_frac = 0.05;
    std::optional<BBox> box;  // overrides the bounding rectangle
    double snap_tol = -1.0;   // negative: 1e-9 of the bounding diagonal
    // Keep each segment's given direction and add multiplicities instead of
    // orienting left-to-right (oriented currents).
    bool oriented = false;
};

PairSetup prepare_pair(std::span<const Segment> n1, std::span<const Segment> n2, const Crs& crs,
                       const PairOptions& opts = {});
PairSetup prepare_pair(const PlanarNetwork& n1, const PlanarNetwork& n2, const PairOptions& opts = {});

FlatNormDecomposition flat_norm_distance(const PlanarNetwork& n1, const PlanarNetwork& n2, double lambda,
                                         const Crs& crs);

struct SweepPoint {
    double lambda;
    double objective;
    double length_component;
    double area_component;
};

std::vector<SweepPoint> lambda_sweep(const PlanarNetwork& n1, const PlanarNetwork& n2,
                                     std::span<const double> lambdas, const Crs& crs);
std::vector<SweepPoint> lambda_sweep(const PairSetup& setup, std::span<const double> lambdas);

// Plot-ready payload: nonzero x with edge coordinates, nonzero s with
// triangle coordinates, the two components and the objective.
std::string decomposition_to_json(const SimplicialComplex2& k, const FlatNormDecomposition& d);

}  // namespace flatnorm
