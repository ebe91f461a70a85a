#include "flatnorm/geojson.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flatnorm/errors.hpp"

namespace flatnorm {

using nlohmann::json;

PlanarNetwork parse_geojson(const std::string& text, double earth_radius_km) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
        throw InputError("expected a GeoJSON FeatureCollection");
    PlanarNetwork net;
    std::string mode = doc.value("crs_mode", "euclidean");
    if (mode == "euclidean") {
        net.crs = Crs::euclidean();
    } else if (mode == "geographic") {
        net.crs = Crs::geographic(earth_radius_km);
    } else {
        throw InputError("crs_mode must be euclidean or geographic, got " + mode);
    }
    if (!doc.contains("features") || !doc["features"].is_array()) throw InputError("missing features array");
    for (const auto& feature : doc["features"]) {
        if (!feature.is_object() || !feature.contains("geometry") || !feature["geometry"].is_object())
            throw InputError("feature without geometry");
        const auto& geom = feature["geometry"];
        std::string type = geom.value("type", "");
        if (type != "LineString") throw InputError("unsupported geometry type: " + type);
        const auto& coords = geom.value("coordinates", json::array());
        if (!coords.is_array() || coords.size() < 2) throw InputError("LineString needs at least two positions");
        std::vector<Point2> pts;
        for (const auto& c : coords) {
            if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
                throw InputError("malformed position");
            Point2 p{c[0].get<double>(), c[1].get<double>()};
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InputError("non-finite coordinate");
            pts.push_back(p);
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i] == pts[i + 1]) continue;
            net.segments.push_back({pts[i], pts[i + 1]});
        }
    }
    return net;
}

PlanarNetwork load_geojson(const std::string& path, double earth_radius_km) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_geojson(buf.str(), earth_radius_km);
}

std::string to_geojson(const PlanarNetwork& net) {
    json doc;
    doc["type"] = "FeatureCollection";
    doc["crs_mode"] = net.crs.mode == CrsMode::geographic ? "geographic" : "euclidean";
    doc["features"] = json::array();
    for (const auto& s : net.segments) {
        doc["features"].push_back({{"type", "Feature"},
                                   {"properties", json::object()},
                                   {"geometry",
                                    {{"type", "LineString"},
                                     {"coordinates", {{s.a.x, s.a.y}, {s.b.x, s.b.y}}}}}});
    }
    return doc.dump(2);
}

void save_geojson(const PlanarNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << to_geojson(net) << '\n';
}

}  // namespace flatnorm
