#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

using flatnorm::Point2;
using flatnorm::Segment;

namespace {

double point_to_segment(Point2 p, const Segment& s) {
    double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    double len2 = dx * dx + dy * dy;
    double u = len2 > 0 ? ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    return std::hypot(p.x - (s.a.x + u * dx), p.y - (s.a.y + u * dy));
}

double to_set(Point2 p, std::span<const Segment> b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : b) best = std::min(best, point_to_segment(p, s));
    return best;
}

Point2 at(const Segment& s, double u) { return {s.a.x + u * (s.b.x - s.a.x), s.a.y + u * (s.b.y - s.a.y)}; }

double directed(std::span<const Segment> a, std::span<const Segment> b, int samples) {
    double result = 0.0;
    for (const auto& s : a) {
        int best_i = 0;
        double best = -1.0;
        for (int i = 0; i <= samples; ++i) {
            double d = to_set(at(s, static_cast<double>(i) / samples), b);
            if (d > best) {
                best = d;
                best_i = i;
            }
        }
        // golden-section maximization on the bracket around the best sample
        double lo = std::max(0.0, (best_i - 1.0) / samples), hi = std::min(1.0, (best_i + 1.0) / samples);
        const double g = (std::sqrt(5.0) - 1) / 2;
        double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
        double fc = to_set(at(s, c), b), fd = to_set(at(s, d), b);
        for (int it = 0; it < 80; ++it) {
            if (fc > fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = to_set(at(s, c), b);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = to_set(at(s, d), b);
            }
        }
        result = std::max({result, best, fc, fd});
    }
    return result;
}

double orient(Point2 a, Point2 b, Point2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

// Some edge line of a or b has a on one closed side and b on the other.
bool separated(const std::array<Point2, 3>& a, const std::array<Point2, 3>& b) {
    for (int i = 0; i < 3; ++i) {
        Point2 p = a[i], q = a[(i + 1) % 3];
        double side = orient(p, q, a[(i + 2) % 3]);
        bool ok = true;
        for (const auto& v : b)
            if (orient(p, q, v) * side > 0) ok = false;
        if (ok) return true;
    }
    return false;
}

}  // namespace

double sampled_hausdorff(std::span<const Segment> a, std::span<const Segment> b, int samples_per_segment) {
    return std::max(directed(a, b, samples_per_segment), directed(b, a, samples_per_segment));
}

bool interiors_disjoint(const std::array<Point2, 3>& a, const std::array<Point2, 3>& b) {
    return separated(a, b) || separated(b, a);
}

}  // namespace oracle
