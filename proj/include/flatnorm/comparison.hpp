#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flatnorm/flatnorm_lp.hpp"
#include "flatnorm/geometry.hpp"

namespace flatnorm {

struct NormalizedValue {
    double f_lambda = 0.0;
    double f_norm = 0.0;
};

// Flat norm of the pair and its value divided by |T1| + |T2|.
NormalizedValue normalized_flat_norm(const PlanarNetwork& n1, const PlanarNetwork& n2, double lambda,
                                     const Crs& crs);

struct SamplingConfig {
    // Accept a region only when the clipped networks touch each other, instead
    // of when each network meets the region.
    bool strict_intersection = false;
    long long max_attempts = 1'000'000;
};

// Squares of half-size epsilon whose centers are uniform in the bounding
// rectangle of the pair. Throws SamplingExhausted.
std::vector<BBox> sample_regions(const PlanarNetwork& n1, const PlanarNetwork& n2, std::size_t count,
                                 double half_size, std::uint64_t seed, const SamplingConfig& cfg = {});

enum class EmptySidePolicy { skip, record_one };

struct StatsConfig {
    int bins = 20;
    EmptySidePolicy empty_side = EmptySidePolicy::skip;
    bool with_global = true;  // also solve the whole pair for each lambda
};

struct RegionSample {
    std::size_t id = 0;
    Point2 center;
    double half_size = 0.0;
    double lambda = 0.0;
    double len1 = 0.0;
    double len2 = 0.0;
    double ratio = 0.0;  // (len1 + len2) / half_size
    double f_lambda = 0.0;
    double f_norm = 0.0;
    bool empty_side = false;  // recorded as 1 under EmptySidePolicy::record_one
};

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
};

struct GlobalValue {
    double lambda = 0.0;
    double f_lambda = 0.0;
    double f_norm = 0.0;
    double half_size = 0.0;  // half the longer side of the bounding rectangle
    double ratio = 0.0;      // (|T1| + |T2|) / half_size
};

struct StatsSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    Histogram histogram;
    GlobalValue global;
};

struct RegionStats {
    std::vector<RegionSample> samples;
    StatsSummary summary;
};

GlobalValue global_value(const PlanarNetwork& n1, const PlanarNetwork& n2, double lambda, const Crs& crs);

Histogram make_histogram(std::span<const double> values, int bins);

RegionStats region_statistics(const PlanarNetwork& n1, const PlanarNetwork& n2, std::span<const BBox> regions,
                              double lambda, const Crs& crs, const StatsConfig& cfg = {});
// One result per lambda; each region is triangulated once for all of them.
std::vector<RegionStats> region_statistics(const PlanarNetwork& n1, const PlanarNetwork& n2,
                                           std::span<const BBox> regions, std::span<const double> lambdas,
                                           const Crs& crs, const StatsConfig& cfg = {});

struct ReportRow {
    double epsilon = 0.0;
    double lambda = 0.0;
    StatsSummary summary;
};

struct Report {
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    std::vector<GlobalValue> globals;  // one per lambda
    std::vector<RegionSample> samples;
};

Report global_vs_local_report(const PlanarNetwork& n1, const PlanarNetwork& n2, std::span<const double> epsilons,
                              std::span<const double> lambdas, std::size_t count, std::uint64_t seed,
                              const Crs& crs, const SamplingConfig& sampling = {}, const StatsConfig& stats = {});

std::string samples_to_csv(std::span<const RegionSample> samples, std::uint64_t seed);
// One row per (epsilon, lambda) plus one global row per lambda.
std::string report_to_csv(const Report& report);
std::string report_to_json(const Report& report);

}  // namespace flatnorm
