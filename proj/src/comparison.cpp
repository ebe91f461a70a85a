#include "flatnorm/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "flatnorm/errors.hpp"
#include "flatnorm/parallel.hpp"
#include "flatnorm/rng.hpp"

namespace flatnorm {

namespace {

double crs_scale(const Crs& crs) {
    return crs.mode == CrsMode::geographic ? crs.earth_radius_km * M_PI / 180.0 : 1.0;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Keeping the whole chain is always feasible, so the ratio is at most 1 up to
// summation order.
double ratio_to_total(double objective, double total) {
    if (total <= 0) return 0.0;
    double r = objective / total;
    return r > 1.0 && r <= 1.0 + 1e-12 ? 1.0 : r;
}

}  // namespace

NormalizedValue normalized_flat_norm(const PlanarNetwork& n1, const PlanarNetwork& n2, double lambda,
                                     const Crs& crs) {
    if (n1.empty() && n2.empty()) throw EmptyInput("both networks are empty");
    PairSetup setup = prepare_pair(n1.segments, n2.segments, crs);
    auto d = solve_lp({setup.complex, setup.weights, setup.t, lambda});
    double total = setup.length1 + setup.length2;
    return {d.objective, ratio_to_total(d.objective, total)};
}

GlobalValue global_value(const PlanarNetwork& n1, const PlanarNetwork& n2, double lambda, const Crs& crs) {
    auto nv = normalized_flat_norm(n1, n2, lambda, crs);
    BBox rect = bounding_rect(n1, n2, 0.0);
    GlobalValue g;
    g.lambda = lambda;
    g.f_lambda = nv.f_lambda;
    g.f_norm = nv.f_norm;
    g.half_size = std::max(rect.width(), rect.height()) / 2;
    double total = crs_scale(crs) * (n1.length() + n2.length());
    g.ratio = g.half_size > 0 ? total / g.half_size : 0.0;
    return g;
}

std::vector<BBox> sample_regions(const PlanarNetwork& n1, const PlanarNetwork& n2, std::size_t count,
                                 double half_size, std::uint64_t seed, const SamplingConfig& cfg) {
    if (count == 0) throw InputError("region count must be at least 1");
    if (!(half_size > 0)) throw InputError("epsilon must be positive");
    if (n1.empty() || n2.empty()) throw SamplingExhausted("a network is empty; no region can meet both");
    BBox rect = bounding_rect(n1, n2, 0.0);
    Rng rng(seed);
    std::vector<BBox> out;
    long long attempts = 0;
    while (out.size() < count) {
        if (attempts++ >= cfg.max_attempts)
            throw SamplingExhausted("accepted " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                    " regions after " + std::to_string(cfg.max_attempts) + " attempts");
        Point2 c{rect.min.x + rng.uniform01() * rect.width(), rect.min.y + rng.uniform01() * rect.height()};
        BBox box = BBox::square(c, half_size);
        PlanarNetwork c1 = clip_to_region(n1, box);
        if (c1.empty()) continue;
        PlanarNetwork c2 = clip_to_region(n2, box);
        if (c2.empty()) continue;
        if (cfg.strict_intersection) {
            bool touch = false;
            for (const auto& a : c1.segments) {
                for (const auto& b : c2.segments) {
                    if (segments_intersect(a, b)) {
                        touch = true;
                        break;
                    }
                }
                if (touch) break;
            }
            if (!touch) continue;
        }
        out.push_back(box);
    }
    return out;
}

Histogram make_histogram(std::span<const double> values, int bins) {
    if (bins < 1) throw InputError("histogram needs at least one bin");
    Histogram h;
    for (int i = 0; i <= bins; ++i) h.edges.push_back(static_cast<double>(i) / bins);
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        int b = static_cast<int>(std::floor(std::clamp(v, 0.0, 1.0) * bins));
        h.counts[static_cast<std::size_t>(std::min(b, bins - 1))]++;
    }
    return h;
}

std::vector<RegionStats> region_statistics(const PlanarNetwork& n1, const PlanarNetwork& n2,
                                           std::span<const BBox> regions, std::span<const double> lambdas,
                                           const Crs& crs, const StatsConfig& cfg) {
    if (regions.empty()) throw InputError("no regions to evaluate");
    const std::size_t nl = lambdas.size();
    // per region, per lambda; empty optional-like flag via `present`
    std::vector<std::vector<RegionSample>> per_region(regions.size());
    std::vector<char> present(regions.size(), 0);
    const double scale = crs_scale(crs);

    parallel_for(regions.size(), [&](std::size_t r) {
        const BBox& box = regions[r];
        PlanarNetwork c1 = clip_to_region(n1, box), c2 = clip_to_region(n2, box);
        RegionSample base;
        base.id = r;
        base.center = box.center();
        base.half_size = std::max(box.width(), box.height()) / 2;
        base.len1 = scale * c1.length();
        base.len2 = scale * c2.length();
        base.ratio = (base.len1 + base.len2) / base.half_size;
        if (c1.empty() && c2.empty()) return;
        if (c1.empty() || c2.empty()) {
            if (cfg.empty_side == EmptySidePolicy::skip) return;
            base.empty_side = true;
        }
        std::vector<RegionSample> row;
        if (base.empty_side) {
            for (double lambda : lambdas) {
                RegionSample s = base;
                s.lambda = lambda;
                s.f_lambda = base.len1 + base.len2;
                s.f_norm = 1.0;
                row.push_back(s);
            }
        } else {
            PairOptions opts;
            opts.box = box;
            PairSetup setup = prepare_pair(c1.segments, c2.segments, crs, opts);
            for (double lambda : lambdas) {
                auto d = solve_lp({setup.complex, setup.weights, setup.t, lambda});
                RegionSample s = base;
                s.lambda = lambda;
                s.f_lambda = d.objective;
                s.f_norm = ratio_to_total(d.objective, base.len1 + base.len2);
                row.push_back(s);
            }
        }
        per_region[r] = std::move(row);
        present[r] = 1;
    });

    std::vector<RegionStats> out(nl);
    for (std::size_t l = 0; l < nl; ++l) {
        auto& st = out[l];
        for (std::size_t r = 0; r < regions.size(); ++r)
            if (present[r]) st.samples.push_back(per_region[r][l]);
        std::vector<double> values;
        for (const auto& s : st.samples) values.push_back(s.f_norm);
        st.summary.count = values.size();
        if (!values.empty()) {
            double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            st.summary.mean = mean;
            st.summary.std = std::sqrt(var / static_cast<double>(values.size()));
        }
        st.summary.histogram = make_histogram(values, cfg.bins);
        if (cfg.with_global) st.summary.global = global_value(n1, n2, lambdas[l], crs);
    }
    return out;
}

RegionStats region_statistics(const PlanarNetwork& n1, const PlanarNetwork& n2, std::span<const BBox> regions,
                              double lambda, const Crs& crs, const StatsConfig& cfg) {
    return region_statistics(n1, n2, regions, std::span<const double>(&lambda, 1), crs, cfg).front();
}

Report global_vs_local_report(const PlanarNetwork& n1, const PlanarNetwork& n2, std::span<const double> epsilons,
                              std::span<const double> lambdas, std::size_t count, std::uint64_t seed,
                              const Crs& crs, const SamplingConfig& sampling, const StatsConfig& stats) {
    if (epsilons.empty() || lambdas.empty()) throw InputError("epsilon and lambda grids must be non-empty");
    Report rep;
    rep.seed = seed;
    for (double lambda : lambdas) rep.globals.push_back(global_value(n1, n2, lambda, crs));
    StatsConfig local = stats;
    local.with_global = false;
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        auto regions = sample_regions(n1, n2, count, epsilons[e], derive_seed(seed, e), sampling);
        auto per_lambda = region_statistics(n1, n2, regions, lambdas, crs, local);
        for (std::size_t l = 0; l < lambdas.size(); ++l) {
            per_lambda[l].summary.global = rep.globals[l];
            rep.rows.push_back({epsilons[e], lambdas[l], per_lambda[l].summary});
            for (auto s : per_lambda[l].samples) {
                s.id = rep.samples.size();
                rep.samples.push_back(s);
            }
        }
    }
    return rep;
}

std::string samples_to_csv(std::span<const RegionSample> samples, std::uint64_t seed) {
    std::string out = std::string("# rng=") + kRngAlgorithm + " seed=" + std::to_string(seed) + "\n";
    out += "region_id,cx,cy,epsilon,lambda,len1,len2,ratio,fnorm_objective,fnorm_normalized\n";
    for (const auto& s : samples) {
        out += std::to_string(s.id) + "," + fmt(s.center.x) + "," + fmt(s.center.y) + "," + fmt(s.half_size) + "," +
               fmt(s.lambda) + "," + fmt(s.len1) + "," + fmt(s.len2) + "," + fmt(s.ratio) + "," + fmt(s.f_lambda) +
               "," + fmt(s.f_norm) + "\n";
    }
    return out;
}

std::string report_to_csv(const Report& report) {
    std::string out = std::string("# rng=") + kRngAlgorithm + " seed=" + std::to_string(report.seed) + "\n";
    out += "kind,epsilon,lambda,count,mean,std,ratio,histogram\n";
    for (const auto& row : report.rows) {
        std::string hist;
        for (std::size_t i = 0; i < row.summary.histogram.counts.size(); ++i) {
            if (i) hist += ";";
            hist += std::to_string(row.summary.histogram.counts[i]);
        }
        out += "local," + fmt(row.epsilon) + "," + fmt(row.lambda) + "," + std::to_string(row.summary.count) + "," +
               fmt(row.summary.mean) + "," + fmt(row.summary.std) + ",," + hist + "\n";
    }
    for (const auto& g : report.globals)
        out += "global," + fmt(g.half_size) + "," + fmt(g.lambda) + ",1," + fmt(g.f_norm) + ",0," + fmt(g.ratio) + ",\n";
    return out;
}

std::string report_to_json(const Report& report) {
    using nlohmann::json;
    json doc;
    doc["rng"] = kRngAlgorithm;
    doc["seed"] = report.seed;
    doc["summaries"] = json::array();
    for (const auto& row : report.rows) {
        doc["summaries"].push_back({{"epsilon", row.epsilon},
                                    {"lambda", row.lambda},
                                    {"count", row.summary.count},
                                    {"mean", row.summary.mean},
                                    {"std", row.summary.std},
                                    {"histogram",
                                     {{"edges", row.summary.histogram.edges},
                                      {"counts", row.summary.histogram.counts}}},
                                    {"global_fnorm", row.summary.global.f_norm}});
    }
    doc["global"] = json::array();
    for (const auto& g : report.globals) {
        doc["global"].push_back({{"lambda", g.lambda},
                                 {"fnorm_objective", g.f_lambda},
                                 {"fnorm_normalized", g.f_norm},
                                 {"epsilon", g.half_size},
                                 {"ratio", g.ratio}});
    }
    return doc.dump(2);
}

}  // namespace flatnorm
