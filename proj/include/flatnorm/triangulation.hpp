#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flatnorm/geometry.hpp"

namespace flatnorm {

// Integer coefficients on the edges (or triangles) of a complex.
using Chain = std::vector<long long>;

struct ComplexEdge {
    int v0;  // lexicographically smaller endpoint
    int v1;
};

struct ComplexTriangle {
    std::array<int, 3> vertices;  // counter-clockwise
    std::array<int, 3> edges;
    std::array<int, 3> signs;  // +1 when the edge runs along the counter-clockwise loop
};

// Oriented 2-complex. Vertices are sorted lexicographically, edges by their
// vertex pair and triangles by their sorted vertex triple, so construction is
// deterministic for a given input.
class SimplicialComplex2 {
public:
    SimplicialComplex2() = default;

    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<ComplexEdge>& edges() const { return edges_; }
    const std::vector<ComplexTriangle>& triangles() const { return triangles_; }
    const std::vector<char>& constraint_flags() const { return constrained_; }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }

    // Index of the edge joining two vertices, or -1.
    int find_edge(int a, int b) const;
    // Index of the vertex at p (within tol), or -1.
    int find_vertex(Point2 p, double tol = 0.0) const;
    // Triangles incident to an edge: {on its left (sign +1), on its right (sign -1)}; -1 if none.
    const std::array<int, 2>& cofaces(int edge) const { return cofaces_[edge]; }
    const std::vector<int>& incident_edges(int vertex) const { return vertex_edges_[vertex]; }
    Segment edge_segment(int e) const { return {vertices_[edges_[e].v0], vertices_[edges_[e].v1]}; }

    // ∂ applied to a triangle chain.
    Chain boundary(std::span<const long long> s) const;
    // ∂ applied to an edge chain (per-vertex coefficients).
    Chain vertex_boundary(std::span<const long long> t) const;

    friend SimplicialComplex2 complex_from_triangles(std::span<const Point2> points,
                                                     std::span<const std::array<int, 3>> tris,
                                                     std::span<const std::pair<int, int>> constrained);

private:
    std::vector<Point2> vertices_;
    std::vector<ComplexEdge> edges_;
    std::vector<ComplexTriangle> triangles_;
    std::vector<char> constrained_;
    std::vector<std::array<int, 2>> cofaces_;
    std::vector<std::vector<int>> vertex_edges_;
};

// Builds a complex from triangles given as point-index triples (any
// orientation). Constrained pairs index into points as well.
SimplicialComplex2 complex_from_triangles(std::span<const Point2> points,
                                          std::span<const std::array<int, 3>> tris,
                                          std::span<const std::pair<int, int>> constrained = {});

// Constrained Delaunay triangulation of the box with the given noded segments
// as constraints. Box sides are always edges and marked constrained.
SimplicialComplex2 constrained_triangulate(const PlanarNetwork& sigma, const BBox& box);
SimplicialComplex2 constrained_triangulate(std::span<const Segment> sigma, const BBox& box);
// Extra points become vertices without constraints.
SimplicialComplex2 constrained_triangulate(std::span<const Segment> sigma, const BBox& box,
                                           std::span<const Point2> points);

struct WeightVectors {
    std::vector<double> w;  // per-edge length
    std::vector<double> v;  // per-triangle area
};

WeightVectors compute_weights(const SimplicialComplex2& k, const Crs& crs);

// Orients every segment left-to-right and returns the edge chain covering it.
Chain embed_chain(const SimplicialComplex2& k, const PlanarNetwork& net);
// Same but keeps each segment's given direction (used for oriented currents).
Chain embed_oriented(const SimplicialComplex2& k, std::span<const Segment> segs);
Chain input_chain(std::span<const long long> t1, std::span<const long long> t2);

std::string complex_to_json(const SimplicialComplex2& k, const WeightVectors* weights = nullptr);

}  // namespace flatnorm
