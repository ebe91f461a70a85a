#include "flatnorm/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "flatnorm/errors.hpp"
#include "flatnorm/predicates.hpp"

namespace flatnorm {

SimplicialComplex2 complex_from_triangles(std::span<const Point2> points,
                                          std::span<const std::array<int, 3>> tris,
                                          std::span<const std::pair<int, int>> constrained) {
    // keep only referenced points, in lexicographic order
    std::vector<char> used(points.size(), 0);
    for (const auto& t : tris)
        for (int v : t) used.at(v) = 1;
    for (const auto& [a, b] : constrained) used.at(a) = used.at(b) = 1;
    std::vector<int> order;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (used[i]) order.push_back(static_cast<int>(i));
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lex_less(points[a], points[b]); });

    SimplicialComplex2 k;
    std::vector<int> remap(points.size(), -1);
    for (int idx : order) {
        if (!k.vertices_.empty() && k.vertices_.back() == points[idx]) {
            remap[idx] = static_cast<int>(k.vertices_.size()) - 1;
            continue;
        }
        remap[idx] = static_cast<int>(k.vertices_.size());
        k.vertices_.push_back(points[idx]);
    }

    std::vector<std::array<int, 3>> ccw;
    for (const auto& t : tris) {
        std::array<int, 3> r{remap[t[0]], remap[t[1]], remap[t[2]]};
        int o = orient2d(k.vertices_[r[0]], k.vertices_[r[1]], k.vertices_[r[2]]);
        if (o == 0) throw TriangulationFailure("degenerate triangle");
        if (o < 0) std::swap(r[1], r[2]);
        ccw.push_back(r);
    }
    std::sort(ccw.begin(), ccw.end(), [](const auto& p, const auto& q) {
        auto sp = p, sq = q;
        std::sort(sp.begin(), sp.end());
        std::sort(sq.begin(), sq.end());
        return sp < sq;
    });

    std::set<std::pair<int, int>> edge_set;
    for (const auto& t : ccw)
        for (int i = 0; i < 3; ++i) edge_set.insert(std::minmax(t[i], t[(i + 1) % 3]));
    for (const auto& [a, b] : constrained) {
        if (remap[a] != remap[b]) edge_set.insert(std::minmax(remap[a], remap[b]));
    }
    std::map<std::pair<int, int>, int> edge_index;
    for (const auto& [a, b] : edge_set) {
        edge_index[{a, b}] = static_cast<int>(k.edges_.size());
        k.edges_.push_back({a, b});
    }
    k.constrained_.assign(k.edges_.size(), 0);
    for (const auto& [a, b] : constrained)
        if (remap[a] != remap[b]) k.constrained_[edge_index.at(std::minmax(remap[a], remap[b]))] = 1;

    k.cofaces_.assign(k.edges_.size(), {-1, -1});
    for (const auto& t : ccw) {
        ComplexTriangle tri{t, {}, {}};
        for (int i = 0; i < 3; ++i) {
            int a = t[i], b = t[(i + 1) % 3];
            int e = edge_index.at(std::minmax(a, b));
            tri.edges[i] = e;
            tri.signs[i] = a < b ? 1 : -1;
            int slot = tri.signs[i] > 0 ? 0 : 1;
            if (k.cofaces_[e][slot] != -1) throw TriangulationFailure("edge shared by overlapping triangles");
            k.cofaces_[e][slot] = static_cast<int>(k.triangles_.size());
        }
        k.triangles_.push_back(tri);
    }
    k.vertex_edges_.assign(k.vertices_.size(), {});
    for (std::size_t e = 0; e < k.edges_.size(); ++e) {
        k.vertex_edges_[k.edges_[e].v0].push_back(static_cast<int>(e));
        k.vertex_edges_[k.edges_[e].v1].push_back(static_cast<int>(e));
    }
    return k;
}

int SimplicialComplex2::find_edge(int a, int b) const {
    if (a < 0 || b < 0) return -1;
    for (int e : vertex_edges_[a]) {
        if (edges_[e].v0 == b || edges_[e].v1 == b) return e;
    }
    return -1;
}

int SimplicialComplex2::find_vertex(Point2 p, double tol) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), p,
                               [](Point2 a, Point2 b) { return lex_less(a, b); });
    if (it != vertices_.end() && *it == p) return static_cast<int>(it - vertices_.begin());
    if (tol <= 0.0) return -1;
    int best = -1;
    double best_d = tol;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        double d = distance(vertices_[i], p);
        if (d <= best_d) {
            best = static_cast<int>(i);
            best_d = d;
        }
    }
    return best;
}

Chain SimplicialComplex2::boundary(std::span<const long long> s) const {
    Chain out(edges_.size(), 0);
    for (std::size_t j = 0; j < triangles_.size(); ++j) {
        if (s[j] == 0) continue;
        for (int i = 0; i < 3; ++i) out[triangles_[j].edges[i]] += triangles_[j].signs[i] * s[j];
    }
    return out;
}

Chain SimplicialComplex2::vertex_boundary(std::span<const long long> t) const {
    Chain out(vertices_.size(), 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        out[edges_[e].v1] += t[e];
        out[edges_[e].v0] -= t[e];
    }
    return out;
}

namespace {

// Incremental constrained Delaunay triangulation over a directed-edge map.
class Cdt {
public:
    explicit Cdt(const BBox& box) {
        int c0 = add_point(box.min), c1 = add_point({box.max.x, box.min.y});
        int c2 = add_point(box.max), c3 = add_point({box.min.x, box.max.y});
        add_tri(c0, c1, c2);
        add_tri(c0, c2, c3);
        box_ = box;
    }

    int insert(Point2 p) {
        if (!box_.contains(p)) throw TriangulationFailure("point outside the triangulation box");
        auto found = index_.find(p);
        if (found != index_.end()) return found->second;
        int t = locate(p);
        const auto tri = tris_[t];
        int id = add_point(p);
        int zero = -1, zeros = 0;
        for (int i = 0; i < 3; ++i) {
            if (orient2d(pts_[tri[i]], pts_[tri[(i + 1) % 3]], p) == 0) {
                zero = i;
                ++zeros;
            }
        }
        if (zeros >= 2) throw TriangulationFailure("duplicate vertex slipped through");
        if (zeros == 0) {
            remove_tri(t);
            add_tri(tri[0], tri[1], id);
            add_tri(tri[1], tri[2], id);
            add_tri(tri[2], tri[0], id);
            legalize(id, tri[0], tri[1]);
            legalize(id, tri[1], tri[2]);
            legalize(id, tri[2], tri[0]);
        } else {
            int u = tri[zero], v = tri[(zero + 1) % 3], w = tri[(zero + 2) % 3];
            int other = owner(v, u);
            remove_tri(t);
            add_tri(id, v, w);
            add_tri(id, w, u);
            int x = -1;
            if (other >= 0) {
                x = third(other, v, u);
                remove_tri(other);
                add_tri(id, u, x);
                add_tri(id, x, v);
            }
            legalize(id, v, w);
            legalize(id, w, u);
            if (x >= 0) {
                legalize(id, u, x);
                legalize(id, x, v);
            }
        }
        return id;
    }

    void insert_constraint(int u, int v) {
        while (u != v) {
            if (owner(u, v) >= 0 || owner(v, u) >= 0) {
                constrained_.insert(std::minmax(u, v));
                return;
            }
            u = insert_crossing(u, v);
        }
    }

    SimplicialComplex2 finish() const {
        std::vector<std::array<int, 3>> out;
        std::vector<std::pair<int, int>> cons(constrained_.begin(), constrained_.end());
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (!alive_[t]) continue;
            out.push_back(tris_[t]);
            for (int i = 0; i < 3; ++i) {
                int a = tris_[t][i], b = tris_[t][(i + 1) % 3];
                if (owner(b, a) < 0) cons.emplace_back(a, b);
            }
        }
        return complex_from_triangles(pts_, out, cons);
    }

    int vertex_id(Point2 p) const { return index_.at(p); }

private:
    static std::uint64_t key(int a, int b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
    }

    int add_point(Point2 p) {
        int id = static_cast<int>(pts_.size());
        pts_.push_back(p);
        index_.emplace(p, id);
        vtri_.push_back(-1);
        return id;
    }

    int add_tri(int a, int b, int c) {
        int id;
        if (!free_.empty()) {
            id = free_.back();
            free_.pop_back();
            tris_[id] = {a, b, c};
            alive_[id] = 1;
        } else {
            id = static_cast<int>(tris_.size());
            tris_.push_back({a, b, c});
            alive_.push_back(1);
        }
        for (int i = 0; i < 3; ++i) {
            int p = tris_[id][i], q = tris_[id][(i + 1) % 3];
            edge_owner_[key(p, q)] = id;
            vtri_[p] = id;
        }
        last_ = id;
        return id;
    }

    void remove_tri(int id) {
        for (int i = 0; i < 3; ++i) edge_owner_.erase(key(tris_[id][i], tris_[id][(i + 1) % 3]));
        alive_[id] = 0;
        free_.push_back(id);
    }

    int owner(int a, int b) const {
        auto it = edge_owner_.find(key(a, b));
        return it == edge_owner_.end() ? -1 : it->second;
    }

    int third(int t, int a, int b) const {
        for (int v : tris_[t])
            if (v != a && v != b) return v;
        throw TriangulationFailure("corrupt triangle");
    }

    int locate(Point2 p) {
        int t = (last_ >= 0 && alive_[last_]) ? last_ : first_alive();
        std::size_t guard = 0;
        while (true) {
            if (++guard > 4 * tris_.size() + 64) throw TriangulationFailure("point location did not terminate");
            bool moved = false;
            int start = static_cast<int>(rng_() % 3);
            for (int k = 0; k < 3; ++k) {
                int i = (start + k) % 3;
                int a = tris_[t][i], b = tris_[t][(i + 1) % 3];
                if (orient2d(pts_[a], pts_[b], p) < 0) {
                    int next = owner(b, a);
                    if (next < 0) throw TriangulationFailure("walked out of the box");
                    t = next;
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
    }

    int first_alive() const {
        for (std::size_t t = 0; t < tris_.size(); ++t)
            if (alive_[t]) return static_cast<int>(t);
        throw TriangulationFailure("empty triangulation");
    }

    // Triangle (p, u, v) exists; flip edge uv if it is not locally Delaunay.
    void legalize(int p, int u, int v) {
        std::vector<std::array<int, 3>> stack{{p, u, v}};
        while (!stack.empty()) {
            auto [a, b, c] = stack.back();
            stack.pop_back();
            int here = owner(b, c);
            if (here < 0 || third(here, b, c) != a) continue;
            if (constrained_.count(std::minmax(b, c))) continue;
            int other = owner(c, b);
            if (other < 0) continue;
            int q = third(other, c, b);
            if (incircle(pts_[a], pts_[b], pts_[c], pts_[q]) <= 0) continue;
            remove_tri(here);
            remove_tri(other);
            add_tri(a, b, q);
            add_tri(a, q, c);
            stack.push_back({a, b, q});
            stack.push_back({a, q, c});
        }
    }

    // Triangles around vertex u.
    std::vector<int> fan(int u) const {
        std::vector<int> out;
        int start = vtri_[u];
        if (start < 0 || !alive_[start] || !std::count(tris_[start].begin(), tris_[start].end(), u)) {
            for (std::size_t t = 0; t < tris_.size(); ++t)
                if (alive_[t] && std::count(tris_[t].begin(), tris_[t].end(), u)) out.push_back(static_cast<int>(t));
            return out;
        }
        auto next_ccw = [&](int t) {
            int b = tris_[t][(index_in(t, u) + 2) % 3];  // edge (b, u) precedes u
            return owner(u, b);
        };
        auto next_cw = [&](int t) {
            int a = tris_[t][(index_in(t, u) + 1) % 3];
            return owner(a, u);
        };
        int t = start;
        do {
            out.push_back(t);
            t = next_ccw(t);
        } while (t >= 0 && t != start);
        if (t < 0) {
            for (int s = next_cw(start); s >= 0; s = next_cw(s)) out.push_back(s);
        }
        return out;
    }

    int index_in(int t, int v) const {
        for (int i = 0; i < 3; ++i)
            if (tris_[t][i] == v) return i;
        throw TriangulationFailure("vertex not in triangle");
    }

    // Removes the triangles crossed by segment uv, inserts the edge (or the
    // part up to a collinear vertex) and returns where the edge stopped.
    int insert_crossing(int u, int v) {
        Point2 pu = pts_[u], pv = pts_[v];
        int start = -1, r = -1, l = -1;
        for (int t : fan(u)) {
            int i = index_in(t, u);
            int a = tris_[t][(i + 1) % 3], b = tris_[t][(i + 2) % 3];
            int oa = orient2d(pu, pv, pts_[a]), ob = orient2d(pu, pv, pts_[b]);
            if (oa == 0 && dot(pts_[a] - pu, pv - pu) > 0) {
                constrained_.insert(std::minmax(u, a));
                return a;
            }
            if (ob == 0 && dot(pts_[b] - pu, pv - pu) > 0) {
                constrained_.insert(std::minmax(u, b));
                return b;
            }
            if (oa < 0 && ob > 0) {
                start = t;
                r = a;
                l = b;
                break;
            }
        }
        if (start < 0) throw TriangulationFailure("constraint leaves the triangulation");

        std::vector<int> left, right{r};
        left.push_back(l);
        std::vector<int> doomed{start};
        int stop = v;
        while (true) {
            if (constrained_.count(std::minmax(r, l))) throw TriangulationFailure("constraints cross");
            int t = owner(l, r);
            if (t < 0) throw TriangulationFailure("constraint walk left the box");
            doomed.push_back(t);
            int q = third(t, l, r);
            if (q == v) break;
            int o = orient2d(pu, pv, pts_[q]);
            if (o == 0) {
                stop = q;
                break;
            }
            if (o > 0) {
                left.push_back(q);
                l = q;
            } else {
                right.push_back(q);
                r = q;
            }
        }
        for (int t : doomed) remove_tri(t);
        fill(u, stop, left);
        std::reverse(right.begin(), right.end());
        fill(stop, u, right);
        constrained_.insert(std::minmax(u, stop));
        return stop;
    }

    // Triangulates the pseudo-polygon formed by base a->b and the chain to its left.
    void fill(int a, int b, const std::vector<int>& chain) {
        if (chain.empty()) return;
        std::size_t best = 0;
        for (std::size_t i = 1; i < chain.size(); ++i) {
            if (incircle(pts_[a], pts_[b], pts_[chain[best]], pts_[chain[i]]) > 0) best = i;
        }
        int c = chain[best];
        fill(a, c, std::vector<int>(chain.begin(), chain.begin() + static_cast<long>(best)));
        fill(c, b, std::vector<int>(chain.begin() + static_cast<long>(best) + 1, chain.end()));
        add_tri(a, b, c);
    }

    BBox box_{};
    std::vector<Point2> pts_;
    std::map<Point2, int> index_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<char> alive_;
    std::vector<int> free_;
    std::vector<int> vtri_;
    std::unordered_map<std::uint64_t, int> edge_owner_;
    std::set<std::pair<int, int>> constrained_;
    int last_ = -1;
    std::uint64_t rng_state_ = 0x2545F4914F6CDD1DULL;
    std::uint64_t rng_() {
        rng_state_ ^= rng_state_ << 13;
        rng_state_ ^= rng_state_ >> 7;
        rng_state_ ^= rng_state_ << 17;
        return rng_state_;
    }
};

}  // namespace

SimplicialComplex2 constrained_triangulate(std::span<const Segment> sigma, const BBox& box,
                                           std::span<const Point2> points) {
    if (!(box.width() > 0) || !(box.height() > 0)) throw TriangulationFailure("degenerate box");
    Cdt cdt(box);
    std::vector<Point2> pts(points.begin(), points.end());
    for (const auto& s : sigma) {
        pts.push_back(s.a);
        pts.push_back(s.b);
    }
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (Point2 p : pts) cdt.insert(p);
    for (const auto& s : sigma) {
        int u = cdt.vertex_id(s.a), v = cdt.vertex_id(s.b);
        if (u == v) throw TriangulationFailure("zero-length constraint");
        cdt.insert_constraint(u, v);
    }
    return cdt.finish();
}

SimplicialComplex2 constrained_triangulate(std::span<const Segment> sigma, const BBox& box) {
    return constrained_triangulate(sigma, box, {});
}

SimplicialComplex2 constrained_triangulate(const PlanarNetwork& sigma, const BBox& box) {
    return constrained_triangulate(std::span<const Segment>(sigma.segments), box);
}

WeightVectors compute_weights(const SimplicialComplex2& k, const Crs& crs) {
    const bool geo = crs.mode == CrsMode::geographic;
    const double to_rad = geo ? M_PI / 180.0 : 1.0;
    const double radius = geo ? crs.earth_radius_km : 1.0;
    auto conv = [&](Point2 p) { return Point2{p.x * to_rad, p.y * to_rad}; };
    WeightVectors wv;
    for (const auto& e : k.edges()) {
        wv.w.push_back(radius * distance(conv(k.vertices()[e.v0]), conv(k.vertices()[e.v1])));
    }
    for (const auto& t : k.triangles()) {
        std::array<Point2, 3> p{conv(k.vertices()[t.vertices[0]]), conv(k.vertices()[t.vertices[1]]),
                                conv(k.vertices()[t.vertices[2]])};
        wv.v.push_back(radius * radius * std::fabs(polygon_signed_area(p)));
    }
    return wv;
}

Chain embed_oriented(const SimplicialComplex2& k, std::span<const Segment> segs) {
    Chain t(k.num_edges(), 0);
    double tol = 0.0;
    if (!k.vertices().empty()) {
        Point2 lo = k.vertices().front(), hi = lo;
        for (Point2 p : k.vertices()) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        }
        tol = 1e-9 * distance(lo, hi);
    }
    for (const auto& s : segs) {
        int cur = k.find_vertex(s.a, tol), goal = k.find_vertex(s.b, tol);
        if (cur < 0 || goal < 0) throw ChainEmbeddingError("segment endpoint is not a complex vertex");
        Point2 a = k.vertices()[cur], b = k.vertices()[goal];
        Point2 dir = b - a;
        std::size_t guard = 0;
        while (cur != goal) {
            if (++guard > k.vertices().size()) throw ChainEmbeddingError("segment walk did not terminate");
            int step = -1, next = -1;
            double best_progress = dot(k.vertices()[cur] - a, dir);
            for (int e : k.incident_edges(cur)) {
                int w = k.edges()[e].v0 == cur ? k.edges()[e].v1 : k.edges()[e].v0;
                Point2 pw = k.vertices()[w];
                if (point_segment_distance(pw, {a, b}) > tol) continue;
                double progress = dot(pw - a, dir);
                if (progress > best_progress) {
                    if (next < 0 || progress < dot(k.vertices()[next] - a, dir)) {
                        step = e;
                        next = w;
                    }
                }
            }
            if (step < 0) throw ChainEmbeddingError("segment is not a union of complex edges");
            t[step] += k.edges()[step].v0 == cur ? 1 : -1;
            cur = next;
        }
    }
    return t;
}

Chain embed_chain(const SimplicialComplex2& k, const PlanarNetwork& net) {
    std::vector<Segment> oriented;
    oriented.reserve(net.segments.size());
    for (const auto& s : net.segments) oriented.push_back(orient_left_right(s));
    return embed_oriented(k, oriented);
}

Chain input_chain(std::span<const long long> t1, std::span<const long long> t2) {
    Chain t(t1.size());
    for (std::size_t i = 0; i < t1.size(); ++i) t[i] = t1[i] - t2[i];
    return t;
}

std::string complex_to_json(const SimplicialComplex2& k, const WeightVectors* weights) {
    using nlohmann::json;
    json doc;
    doc["vertices"] = json::array();
    for (Point2 p : k.vertices()) doc["vertices"].push_back({p.x, p.y});
    doc["edges"] = json::array();
    for (std::size_t e = 0; e < k.num_edges(); ++e) {
        json item{{"v", {k.edges()[e].v0, k.edges()[e].v1}}, {"constraint", k.constraint_flags()[e] != 0}};
        if (weights) item["w"] = weights->w[e];
        doc["edges"].push_back(item);
    }
    doc["triangles"] = json::array();
    for (std::size_t j = 0; j < k.num_triangles(); ++j) {
        const auto& t = k.triangles()[j];
        json item{{"vertices", t.vertices}, {"edges", t.edges}, {"signs", t.signs}};
        if (weights) item["v"] = weights->v[j];
        doc["triangles"].push_back(item);
    }
    return doc.dump(2);
}

}  // namespace flatnorm
