#include "flatnorm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "flatnorm/errors.hpp"
#include "flatnorm/predicates.hpp"

namespace flatnorm {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double BBox::diagonal() const { return std::hypot(width(), height()); }

double PlanarNetwork::length() const {
    double total = 0.0;
    for (const auto& s : segments) total += s.length();
    return total;
}

bool lex_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

Segment orient_left_right(const Segment& s) { return lex_less(s.b, s.a) ? Segment{s.b, s.a} : s; }

BBox bounding_rect(std::span<const Segment> segs, double margin_frac) {
    if (segs.empty()) throw EmptyInput("bounding rectangle of an empty segment set");
    constexpr double inf = std::numeric_limits<double>::infinity();
    BBox box{{inf, inf}, {-inf, -inf}};
    for (const auto& s : segs) {
        for (Point2 p : {s.a, s.b}) {
            box.min.x = std::min(box.min.x, p.x);
            box.min.y = std::min(box.min.y, p.y);
            box.max.x = std::max(box.max.x, p.x);
            box.max.y = std::max(box.max.y, p.y);
        }
    }
    double pad = margin_frac * box.diagonal();
    box.min = box.min - Point2{pad, pad};
    box.max = box.max + Point2{pad, pad};
    return box;
}

BBox bounding_rect(const PlanarNetwork& n1, const PlanarNetwork& n2, double margin_frac) {
    std::vector<Segment> all(n1.segments);
    all.insert(all.end(), n2.segments.begin(), n2.segments.end());
    return bounding_rect(all, margin_frac);
}

double default_snap_tol(std::span<const Segment> segs) {
    if (segs.empty()) return 0.0;
    return 1e-9 * bounding_rect(segs, 0.0).diagonal();
}

double point_segment_distance(Point2 p, const Segment& s) {
    Point2 d = s.b - s.a;
    double len2 = dot(d, d);
    if (len2 == 0.0) return distance(p, s.a);
    double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return distance(p, s.a + t * d);
}

bool segments_intersect(const Segment& s1, const Segment& s2) {
    int o1 = orient2d(s1.a, s1.b, s2.a), o2 = orient2d(s1.a, s1.b, s2.b);
    int o3 = orient2d(s2.a, s2.b, s1.a), o4 = orient2d(s2.a, s2.b, s1.b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_closed_segment(s1.a, s1.b, s2.a)) return true;
    if (o2 == 0 && on_closed_segment(s1.a, s1.b, s2.b)) return true;
    if (o3 == 0 && on_closed_segment(s2.a, s2.b, s1.a)) return true;
    if (o4 == 0 && on_closed_segment(s2.a, s2.b, s1.b)) return true;
    return false;
}

bool segments_cross_properly(const Segment& s1, const Segment& s2) {
    if (!segments_intersect(s1, s2)) return false;
    auto shared = [](Point2 p, const Segment& s) { return p == s.a || p == s.b; };
    int o1 = orient2d(s1.a, s1.b, s2.a), o2 = orient2d(s1.a, s1.b, s2.b);
    if (o1 == 0 && o2 == 0) {
        // collinear: they overlap in more than a point unless they only share an endpoint
        Segment c1 = orient_left_right(s1), c2 = orient_left_right(s2);
        return !(c1.b == c2.a || c2.b == c1.a);
    }
    // a single touching point; fine only when it is a shared endpoint
    bool touch_a = shared(s2.a, s1) || shared(s2.b, s1);
    return !touch_a;
}

namespace {

// Merges points closer than the snap tolerance into one vertex id.
class VertexPool {
public:
    explicit VertexPool(double tol) : tol_(tol) {}

    int add(Point2 p) {
        if (tol_ <= 0.0) {
            auto [it, inserted] = exact_.try_emplace(p, static_cast<int>(points_.size()));
            if (inserted) points_.push_back(p);
            return it->second;
        }
        auto cx = cell(p.x), cy = cell(p.y);
        int best = -1;
        double best_d = tol_;
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid_.find(key(cx + dx, cy + dy));
                if (it == grid_.end()) continue;
                for (int id : it->second) {
                    double d = distance(points_[id], p);
                    if (d <= best_d && (best < 0 || d < best_d || id < best)) {
                        best = id;
                        best_d = d;
                    }
                }
            }
        }
        if (best >= 0) return best;
        int id = static_cast<int>(points_.size());
        points_.push_back(p);
        grid_[key(cx, cy)].push_back(id);
        return id;
    }

    Point2 at(int id) const { return points_[id]; }

private:
    long long cell(double v) const { return static_cast<long long>(std::floor(v / tol_)); }
    static std::uint64_t key(long long x, long long y) {
        return static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(y);
    }

    double tol_;
    std::vector<Point2> points_;
    std::map<Point2, int> exact_;
    std::unordered_map<std::uint64_t, std::vector<int>> grid_;
};

struct WorkEdge {
    int u;
    int v;
    std::vector<int> mult;
};

// Orders vertex ids so that the segment runs left-to-right; flips the tags.
void canonicalize(WorkEdge& e, const VertexPool& pool) {
    if (lex_less(pool.at(e.v), pool.at(e.u))) {
        std::swap(e.u, e.v);
        for (int& m : e.mult) m = -m;
    }
}

bool intersect_point(Point2 p0, Point2 p1, Point2 q0, Point2 q1, Point2& out) {
    Point2 d = p1 - p0, e = q1 - q0;
    double denom = cross(d, e);
    if (denom == 0.0) return false;
    double t = cross(q0 - p0, e) / denom;
    t = std::clamp(t, 0.0, 1.0);
    out = p0 + t * d;
    return true;
}

}  // namespace

NodedUnion node_union(std::span<const std::vector<Segment>> networks, double snap_tol) {
    const std::size_t nets = networks.size();
    VertexPool pool(snap_tol);
    std::vector<WorkEdge> edges;
    for (std::size_t k = 0; k < nets; ++k) {
        for (const auto& s : networks[k]) {
            for (double c : {s.a.x, s.a.y, s.b.x, s.b.y})
                if (!std::isfinite(c)) throw InputError("non-finite coordinate");
            WorkEdge e{pool.add(s.a), pool.add(s.b), std::vector<int>(nets, 0)};
            if (e.u == e.v) throw DegenerateInput("segment shorter than the snap tolerance");
            e.mult[k] = 1;
            canonicalize(e, pool);
            edges.push_back(std::move(e));
        }
    }

    auto merge_duplicates = [&]() {
        std::map<std::pair<int, int>, std::size_t> index;
        std::vector<WorkEdge> merged;
        for (auto& e : edges) {
            auto [it, inserted] = index.try_emplace({e.u, e.v}, merged.size());
            if (inserted) {
                merged.push_back(std::move(e));
            } else {
                auto& m = merged[it->second].mult;
                for (std::size_t k = 0; k < nets; ++k) m[k] += e.mult[k];
            }
        }
        edges = std::move(merged);
    };
    merge_duplicates();

    for (int pass = 0; pass < 8; ++pass) {
        const std::size_t n = edges.size();
        std::vector<std::vector<int>> splits(n);
        std::vector<std::size_t> order(n);
        std::vector<double> lo(n), hi(n);
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
            lo[i] = std::min(pool.at(edges[i].u).x, pool.at(edges[i].v).x) - snap_tol;
            hi[i] = std::max(pool.at(edges[i].u).x, pool.at(edges[i].v).x) + snap_tol;
        }
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return lo[a] < lo[b]; });

        auto touch = [&](std::size_t target, int vid) {
            const auto& e = edges[target];
            if (vid == e.u || vid == e.v) return;
            Point2 p = pool.at(vid);
            Segment s{pool.at(e.u), pool.at(e.v)};
            bool on = orient2d(s.a, s.b, p) == 0 && on_closed_segment(s.a, s.b, p);
            if (on || (snap_tol > 0.0 && point_segment_distance(p, s) <= snap_tol))
                splits[target].push_back(vid);
        };

        for (std::size_t oi = 0; oi < n; ++oi) {
            std::size_t i = order[oi];
            for (std::size_t oj = oi + 1; oj < n && lo[order[oj]] <= hi[i]; ++oj) {
                std::size_t j = order[oj];
                const auto& ei = edges[i];
                const auto& ej = edges[j];
                Point2 a0 = pool.at(ei.u), a1 = pool.at(ei.v);
                Point2 b0 = pool.at(ej.u), b1 = pool.at(ej.v);
                if (std::min(a0.y, a1.y) - snap_tol > std::max(b0.y, b1.y) ||
                    std::min(b0.y, b1.y) - snap_tol > std::max(a0.y, a1.y))
                    continue;
                touch(i, ej.u);
                touch(i, ej.v);
                touch(j, ei.u);
                touch(j, ei.v);
                int o1 = orient2d(a0, a1, b0), o2 = orient2d(a0, a1, b1);
                int o3 = orient2d(b0, b1, a0), o4 = orient2d(b0, b1, a1);
                if (o1 * o2 < 0 && o3 * o4 < 0) {
                    Point2 x;
                    if (intersect_point(a0, a1, b0, b1, x)) {
                        int vid = pool.add(x);
                        if (vid != ei.u && vid != ei.v) splits[i].push_back(vid);
                        if (vid != ej.u && vid != ej.v) splits[j].push_back(vid);
                    }
                }
            }
        }

        bool changed = false;
        std::vector<WorkEdge> next;
        for (std::size_t i = 0; i < n; ++i) {
            auto& e = edges[i];
            if (splits[i].empty()) {
                next.push_back(std::move(e));
                continue;
            }
            changed = true;
            Point2 a = pool.at(e.u), d = pool.at(e.v) - a;
            auto& sp = splits[i];
            std::sort(sp.begin(), sp.end(), [&](int p, int q) {
                return dot(pool.at(p) - a, d) < dot(pool.at(q) - a, d);
            });
            sp.erase(std::unique(sp.begin(), sp.end()), sp.end());
            std::vector<int> chain{e.u};
            chain.insert(chain.end(), sp.begin(), sp.end());
            chain.push_back(e.v);
            for (std::size_t c = 0; c + 1 < chain.size(); ++c) {
                if (chain[c] == chain[c + 1]) continue;
                WorkEdge piece{chain[c], chain[c + 1], e.mult};
                canonicalize(piece, pool);
                next.push_back(std::move(piece));
            }
        }
        edges = std::move(next);
        merge_duplicates();
        if (!changed) break;
    }

    std::sort(edges.begin(), edges.end(), [&](const WorkEdge& p, const WorkEdge& q) {
        auto key = [&](const WorkEdge& e) { return std::pair{pool.at(e.u), pool.at(e.v)}; };
        return key(p) < key(q);
    });
    NodedUnion out;
    out.multiplicity.assign(nets, {});
    for (const auto& e : edges) {
        out.pieces.push_back({pool.at(e.u), pool.at(e.v)});
        for (std::size_t k = 0; k < nets; ++k) out.multiplicity[k].push_back(e.mult[k]);
    }
    return out;
}

PlanarNetwork node_segments(std::span<const Segment> raw, double snap_tol) {
    std::vector<std::vector<Segment>> one{std::vector<Segment>(raw.begin(), raw.end())};
    auto noded = node_union(one, snap_tol);
    return PlanarNetwork{std::move(noded.pieces), {}};
}

PlanarNetwork node_segments(std::span<const Segment> raw) {
    return node_segments(raw, default_snap_tol(raw));
}

bool clip_segment(const Segment& s, const BBox& box, Segment& out) {
    double t0 = 0.0, t1 = 1.0;
    Point2 d = s.b - s.a;
    const double p[4] = {-d.x, d.x, -d.y, d.y};
    const double q[4] = {s.a.x - box.min.x, box.max.x - s.a.x, s.a.y - box.min.y, box.max.y - s.a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        double r = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, r);
        } else {
            t1 = std::min(t1, r);
        }
        if (t0 > t1) return false;
    }
    auto at = [&](double t) {
        if (t == 0.0) return s.a;
        if (t == 1.0) return s.b;
        Point2 r = s.a + t * d;
        r.x = std::clamp(r.x, box.min.x, box.max.x);
        r.y = std::clamp(r.y, box.min.y, box.max.y);
        return r;
    };
    out = {at(t0), at(t1)};
    return out.length() > 1e-12 * box.diagonal();
}

PlanarNetwork clip_to_region(const PlanarNetwork& n, const BBox& box) {
    PlanarNetwork out{{}, n.crs};
    for (const auto& s : n.segments) {
        Segment c;
        if (clip_segment(s, box, c)) out.segments.push_back(c);
    }
    return out;
}

namespace {

// Squared distance from a + t*(b - a) to a fixed segment, as quadratic pieces
// c0 + c1 t + c2 t^2 over consecutive t-intervals of [0, 1].
struct QuadPiece {
    double lo, hi, c0, c1, c2;
    double eval(double t) const { return c0 + t * (c1 + t * c2); }
};

std::vector<QuadPiece> squared_distance_pieces(const Segment& moving, const Segment& target) {
    Point2 a = moving.a, d = moving.b - moving.a;
    Point2 q0 = target.a, e = target.b - target.a;
    double ee = dot(e, e);
    auto to_point = [&](Point2 q, double lo, double hi) {
        Point2 w = a - q;
        return QuadPiece{lo, hi, dot(w, w), 2 * dot(d, w), dot(d, d)};
    };
    if (ee == 0.0) return {to_point(q0, 0, 1)};
    // projection parameter along target: s(t) = s0 + t*s1
    double s0 = dot(a - q0, e) / ee, s1 = dot(d, e) / ee;
    Point2 n{-e.y, e.x};
    double nn = std::sqrt(ee);
    double h0 = dot(a - q0, n) / nn, h1 = dot(d, n) / nn;
    auto region = [&](double t) {
        double s = s0 + t * s1;
        return s < 0 ? 0 : (s > 1 ? 2 : 1);
    };
    std::vector<double> cuts{0.0};
    if (s1 != 0.0) {
        for (double target_s : {0.0, 1.0}) {
            double t = (target_s - s0) / s1;
            if (t > 0.0 && t < 1.0) cuts.push_back(t);
        }
    }
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    std::vector<QuadPiece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        if (hi <= lo) continue;
        switch (region((lo + hi) / 2)) {
            case 0: out.push_back(to_point(target.a, lo, hi)); break;
            case 2: out.push_back(to_point(target.b, lo, hi)); break;
            default: out.push_back({lo, hi, h0 * h0, 2 * h0 * h1, h1 * h1}); break;
        }
    }
    return out;
}

void equal_value_roots(const std::vector<QuadPiece>& f, const std::vector<QuadPiece>& g,
                       std::vector<double>& roots) {
    std::size_t i = 0, j = 0;
    while (i < f.size() && j < g.size()) {
        double lo = std::max(f[i].lo, g[j].lo), hi = std::min(f[i].hi, g[j].hi);
        if (lo < hi) {
            double a = f[i].c2 - g[j].c2, b = f[i].c1 - g[j].c1, c = f[i].c0 - g[j].c0;
            auto keep = [&](double t) {
                if (t >= lo && t <= hi) roots.push_back(t);
            };
            double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c), 1e-300});
            if (std::fabs(a) <= 1e-14 * scale) {
                if (std::fabs(b) > 1e-14 * scale) keep(-c / b);
            } else {
                double disc = b * b - 4 * a * c;
                if (disc >= 0) {
                    double sq = std::sqrt(disc);
                    double qv = -0.5 * (b + (b >= 0 ? sq : -sq));
                    keep(qv / a);
                    if (qv != 0.0) keep(c / qv);
                }
            }
        }
        if (f[i].hi < g[j].hi) {
            ++i;
        } else {
            ++j;
        }
    }
}

}  // namespace

double directed_hausdorff(std::span<const Segment> from, std::span<const Segment> to) {
    if (from.empty() || to.empty()) throw EmptyInput("Hausdorff distance of an empty network");
    double worst = 0.0;
    for (const auto& s : from) {
        std::vector<std::vector<QuadPiece>> fs;
        fs.reserve(to.size());
        for (const auto& q : to) fs.push_back(squared_distance_pieces(s, q));
        // within a stretch where one target is nearest the distance is convex,
        // so the maximum sits at an endpoint or where two targets tie
        std::vector<double> cand{0.0, 1.0};
        for (std::size_t j = 0; j < fs.size(); ++j)
            for (std::size_t k = j + 1; k < fs.size(); ++k) equal_value_roots(fs[j], fs[k], cand);
        Point2 d = s.b - s.a;
        for (double t : cand) {
            Point2 p = t == 1.0 ? s.b : s.a + t * d;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, point_segment_distance(p, q));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

double hausdorff_distance(std::span<const Segment> a, std::span<const Segment> b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double hausdorff_distance(const PlanarNetwork& n1, const PlanarNetwork& n2) {
    return hausdorff_distance(n1.segments, n2.segments);
}

double polygon_signed_area(std::span<const Point2> poly) {
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % poly.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    return twice / 2;
}

}  // namespace flatnorm
