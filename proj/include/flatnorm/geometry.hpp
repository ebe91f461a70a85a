#pragma once

#include <compare>
#include <span>
#include <vector>

namespace flatnorm {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend auto operator<=>(const Point2&, const Point2&) = default;
    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
// det[a, b] = a.x*b.y - a.y*b.x
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double distance(Point2 a, Point2 b);

struct Segment {
    Point2 a;
    Point2 b;

    double length() const { return distance(a, b); }
    friend bool operator==(const Segment&, const Segment&) = default;
};

enum class CrsMode { euclidean, geographic };

struct Crs {
    CrsMode mode = CrsMode::euclidean;
    double earth_radius_km = 6371.0;

    static Crs euclidean() { return {}; }
    static Crs geographic(double radius_km = 6371.0) { return {CrsMode::geographic, radius_km}; }
};

struct BBox {
    Point2 min;
    Point2 max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double diagonal() const;
    double area() const { return width() * height(); }
    bool contains(Point2 p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
    Point2 center() const { return {(min.x + max.x) / 2, (min.y + max.y) / 2}; }
    static BBox square(Point2 center, double half_size) {
        return {{center.x - half_size, center.y - half_size}, {center.x + half_size, center.y + half_size}};
    }
};

// A set of oriented segments. After noding the segments meet only at shared
// endpoints and each one runs left-to-right (bottom-to-top when vertical).
struct PlanarNetwork {
    std::vector<Segment> segments;
    Crs crs;

    bool empty() const { return segments.empty(); }
    // Sum of segment lengths in coordinate units.
    double length() const;
};

bool lex_less(Point2 a, Point2 b);
Segment orient_left_right(const Segment& s);

// Default snap tolerance for a set of segments: 1e-9 of the bounding diagonal.
double default_snap_tol(std::span<const Segment> segs);

PlanarNetwork node_segments(std::span<const Segment> raw, double snap_tol);
PlanarNetwork node_segments(std::span<const Segment> raw);

// Noding of several networks at once. Every output piece is oriented
// left-to-right; multiplicity[k][p] is the signed count of network k's
// segments covering piece p (+1 when the input ran the same way as the piece).
struct NodedUnion {
    std::vector<Segment> pieces;
    std::vector<std::vector<int>> multiplicity;
};
NodedUnion node_union(std::span<const std::vector<Segment>> networks, double snap_tol);

BBox bounding_rect(const PlanarNetwork& n1, const PlanarNetwork& n2, double margin_frac = 0.05);
BBox bounding_rect(std::span<const Segment> segs, double margin_frac);

// Cuts every segment at the box boundary and keeps the inside parts.
PlanarNetwork clip_to_region(const PlanarNetwork& n, const BBox& box);
// Clips a single segment; returns false when nothing of positive length remains.
bool clip_segment(const Segment& s, const BBox& box, Segment& out);

double point_segment_distance(Point2 p, const Segment& s);
bool segments_intersect(const Segment& s1, const Segment& s2);
// True when the segments share a point that is not a common endpoint.
bool segments_cross_properly(const Segment& s1, const Segment& s2);

double directed_hausdorff(std::span<const Segment> from, std::span<const Segment> to);
double hausdorff_distance(const PlanarNetwork& n1, const PlanarNetwork& n2);
double hausdorff_distance(std::span<const Segment> a, std::span<const Segment> b);

double polygon_signed_area(std::span<const Point2> poly);

}  // namespace flatnorm
