#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "flatnorm/errors.hpp"
#include "flatnorm/geojson.hpp"
#include "flatnorm/geometry.hpp"
#include "flatnorm/rng.hpp"
#include "oracles.hpp"

using namespace flatnorm;

namespace {

bool has_segment(const PlanarNetwork& n, Segment s) {
    s = orient_left_right(s);
    return std::any_of(n.segments.begin(), n.segments.end(), [&](const Segment& t) {
        return distance(t.a, s.a) < 1e-12 && distance(t.b, s.b) < 1e-12;
    });
}

}  // namespace

TEST_CASE("noding splits crossings and T-junctions") {
    std::vector<Segment> cross{{{0, 0}, {2, 0}}, {{1, -1}, {1, 1}}};
    auto n = node_segments(cross);
    CHECK(n.segments.size() == 4);
    CHECK(has_segment(n, {{0, 0}, {1, 0}}));
    CHECK(has_segment(n, {{1, 0}, {2, 0}}));
    CHECK(has_segment(n, {{1, -1}, {1, 0}}));
    CHECK(has_segment(n, {{1, 0}, {1, 1}}));

    std::vector<Segment> single{{{0, 0}, {1, 0}}};
    auto one = node_segments(single);
    REQUIRE(one.segments.size() == 1);
    CHECK(one.segments[0] == Segment{{0, 0}, {1, 0}});

    std::vector<Segment> tee{{{0, 0}, {2, 0}}, {{1, 0}, {1, 1}}};
    auto t = node_segments(tee);
    CHECK(t.segments.size() == 3);
    CHECK(has_segment(t, {{0, 0}, {1, 0}}));
    CHECK(has_segment(t, {{1, 0}, {2, 0}}));
}

TEST_CASE("noding is idempotent and keeps length") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Segment> raw;
        for (int i = 0; i < 8; ++i)
            raw.push_back({{rng.uniform(0, 1), rng.uniform(0, 1)}, {rng.uniform(0, 1), rng.uniform(0, 1)}});
        auto once = node_segments(raw);
        auto twice = node_segments(once.segments);
        CHECK(once.segments == twice.segments);
        double raw_len = 0;
        for (const auto& s : raw) raw_len += s.length();
        CHECK(once.length() == doctest::Approx(raw_len).epsilon(1e-9));
        for (std::size_t i = 0; i < once.segments.size(); ++i)
            for (std::size_t j = i + 1; j < once.segments.size(); ++j)
                CHECK_FALSE(segments_cross_properly(once.segments[i], once.segments[j]));
    }
}

TEST_CASE("noding rejects segments collapsed by snapping") {
    std::vector<Segment> tiny{{{0, 0}, {1e-12, 0}}, {{0, 0}, {1, 1}}};
    CHECK_THROWS_AS(node_segments(tiny, 1e-6), DegenerateInput);
}

TEST_CASE("left-to-right orientation") {
    CHECK(orient_left_right({{2, 0}, {0, 0}}) == Segment{{0, 0}, {2, 0}});
    CHECK(orient_left_right({{0, 0}, {2, 0}}) == Segment{{0, 0}, {2, 0}});
    CHECK(orient_left_right({{0, 1}, {0, 0}}) == Segment{{0, 0}, {0, 1}});
    Segment s{{3, 1}, {-1, 4}};
    CHECK(orient_left_right(orient_left_right(s)) == orient_left_right(s));
}

TEST_CASE("bounding rectangle") {
    PlanarNetwork sq;
    sq.segments = {{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{0, 1}, {1, 1}}, {{0, 0}, {0, 1}}};
    PlanarNetwork none;
    BBox b0 = bounding_rect(sq, none, 0.0);
    CHECK(b0.min == Point2{0, 0});
    CHECK(b0.max == Point2{1, 1});
    BBox b1 = bounding_rect(sq, none, 0.05);
    CHECK(b1.min.x == doctest::Approx(-0.0707106781).epsilon(1e-9));
    CHECK(b1.max.y == doctest::Approx(1.0707106781).epsilon(1e-9));

    PlanarNetwork a, b;
    a.segments = {{{0, 0}, {1, 0}}};
    b.segments = {{{0, 2}, {1, 2}}};
    BBox ab = bounding_rect(a, b, 0.0);
    CHECK(ab.min == Point2{0, 0});
    CHECK(ab.max == Point2{1, 2});
    CHECK_THROWS_AS(bounding_rect(none, none, 0.05), EmptyInput);
}

TEST_CASE("clipping to a region") {
    BBox unit{{0, 0}, {1, 1}};
    PlanarNetwork n;
    n.segments = {{{-1, 0.5}, {2, 0.5}}};
    auto c = clip_to_region(n, unit);
    REQUIRE(c.segments.size() == 1);
    CHECK(c.segments[0].a.x == doctest::Approx(0.0));
    CHECK(c.segments[0].b.x == doctest::Approx(1.0));
    CHECK(c.segments[0].a.y == doctest::Approx(0.5));

    PlanarNetwork inside;
    inside.segments = {{{0.1, 0.1}, {0.9, 0.4}}, {{0.2, 0.8}, {0.3, 0.9}}};
    CHECK(clip_to_region(inside, unit).segments == inside.segments);

    PlanarNetwork outside;
    outside.segments = {{{2, 2}, {3, 3}}};
    CHECK(clip_to_region(outside, unit).segments.empty());

    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        PlanarNetwork r;
        r.segments = {{{rng.uniform(-1, 2), rng.uniform(-1, 2)}, {rng.uniform(-1, 2), rng.uniform(-1, 2)}}};
        auto cl = clip_to_region(r, unit);
        CHECK(cl.length() <= r.length() + 1e-12);
        for (const auto& s : cl.segments) {
            CHECK(unit.contains(s.a));
            CHECK(unit.contains(s.b));
        }
    }
}

TEST_CASE("Hausdorff distance examples") {
    std::vector<Segment> a{{{0, 0}, {1, 0}}}, b{{{0, 0.3}, {1, 0.3}}}, half{{{0, 0}, {0.5, 0}}};
    CHECK(hausdorff_distance(a, b) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, half) == doctest::Approx(0.5).epsilon(1e-12));
    PlanarNetwork e, n;
    n.segments = a;
    CHECK_THROWS_AS(hausdorff_distance(n, e), EmptyInput);
}

TEST_CASE("Hausdorff distance matches the sampling oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Segment> a, b;
        int na = static_cast<int>(rng.uniform_int(1, 3)), nb = static_cast<int>(rng.uniform_int(1, 3));
        for (int i = 0; i < na; ++i)
            a.push_back({{rng.uniform(0, 1), rng.uniform(0, 1)}, {rng.uniform(0, 1), rng.uniform(0, 1)}});
        for (int i = 0; i < nb; ++i)
            b.push_back({{rng.uniform(0, 1), rng.uniform(0, 1)}, {rng.uniform(0, 1), rng.uniform(0, 1)}});
        double exact = hausdorff_distance(a, b);
        CHECK(std::fabs(exact - oracle::sampled_hausdorff(a, b)) <= 1e-6);
        CHECK(exact == doctest::Approx(hausdorff_distance(b, a)).epsilon(1e-12));
    }
}

TEST_CASE("GeoJSON round trip and rejection") {
    PlanarNetwork n;
    n.segments = {{{0, 0}, {1, 2}}, {{1, 2}, {3, 1}}};
    n.crs = Crs::geographic();
    auto back = parse_geojson(to_geojson(n));
    CHECK(back.segments == n.segments);
    CHECK(back.crs.mode == CrsMode::geographic);
    CHECK_THROWS_AS(parse_geojson(R"({"type":"FeatureCollection","features":[{"type":"Feature","geometry":{"type":"Point","coordinates":[0,0]}}]})"),
                    InputError);
    CHECK_THROWS_AS(parse_geojson("not json"), InputError);
    CHECK_THROWS_AS(load_geojson("/nonexistent/file.geojson"), InputError);
}
