#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "flatnorm/geometry.hpp"
#include "flatnorm/rng.hpp"
#include "flatnorm/triangulation.hpp"

namespace flatnorm {

// Synthetic complexes, chains and network pairs for tests and the verify command.

struct Instance {
    SimplicialComplex2 complex;
    WeightVectors weights;
    Chain t;
    double lambda = 1.0;
};

// Delaunay triangulation of the box with random interior points kept apart
// from each other and from the box sides.
SimplicialComplex2 random_disk_complex(Rng& rng, int interior_points, const BBox& box);

// The square [0,4]^2 with one or two square holes removed, plus random interior points.
SimplicialComplex2 random_void_complex(Rng& rng, int holes, int interior_points);

// t1 - t2 for random edge subsets, so entries lie in {-1, 0, 1}.
Chain random_difference_chain(const SimplicialComplex2& k, Rng& rng, double density = 0.3);

// ∂s for random s in [-s_max, s_max] plus random multiples (in [-void_max, void_max])
// of the inner void boundaries.
Chain random_cycle(const SimplicialComplex2& k, Rng& rng, int s_max, int void_max);

// Small instance for the brute-force oracle (at most 12 triangles).
Instance random_oracle_instance(Rng& rng);

// Cycle on a disk (or multi-void complex) for the two-backend comparison.
Instance random_cycle_instance(Rng& rng, bool multi_void);

// Cycle on a multi-void complex whose minimal filling takes values in {-1, 0, 1}.
Instance random_ohcp_instance(Rng& rng);

using NetworkPair = std::pair<PlanarNetwork, PlanarNetwork>;

// (0,0)-(1,0)-(1,1) against (0,0)-(0,1)-(1,1); their difference bounds the unit square.
NetworkPair unit_square_pair();

// Two unit segments crossing at their midpoints at the given angle.
NetworkPair crossing_segments(double angle_degrees);

// Two random polylines in [0, extent]^2.
NetworkPair random_network_pair(Rng& rng, int segments_per_network, double extent = 10.0);

// A cells x cells street grid against a copy with jittered intersections.
NetworkPair grid_pair(int cells, double spacing, double jitter, std::uint64_t seed);

}  // namespace flatnorm
