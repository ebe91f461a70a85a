// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "flatnorm/comparison.hpp"
#include "flatnorm/dual_flow.hpp"
#include "flatnorm/errors.hpp"
#include "flatnorm/flatnorm_lp.hpp"
#include "flatnorm/instances.hpp"
#include "flatnorm/perturbation.hpp"

using namespace flatnorm;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

Outcome unit_square_law() {
    Outcome o;
    auto [a, b] = unit_square_pair();
    PairSetup setup = prepare_pair(a, b);
    for (double lambda : {1.0, 2.0, 4.0, 8.0}) {
        double expected = std::min(lambda, 4.0);
        double lp = flat_norm_distance(a, b, lambda, Crs::euclidean()).objective;
        double ex = solve_exhaustive({setup.complex, setup.weights, setup.t, lambda}).objective;
        o.require(close(lp, expected, 1e-9), "lp at lambda " + std::to_string(lambda));
        o.require(close(ex, expected, 1e-9), "oracle at lambda " + std::to_string(lambda));
        o.detail << "F(" << lambda << ")=" << lp << " ";
    }
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    int violations = 0, mismatches = 0, max_tris = 0, needs_two = 0;
    for (int i = 0; i < 100; ++i) {
        Rng rng(derive_seed(2001, i));
        Instance inst = random_oracle_instance(rng);
        max_tris = std::max(max_tris, static_cast<int>(inst.complex.num_triangles()));
        FlatNormProblem p{inst.complex, inst.weights, inst.t, inst.lambda};
        try {
            double lp = solve_lp(p).objective;
            // open chains can need |s| = 2, so the enumeration box is widened
            double ex = solve_exhaustive(p, 2).objective;
            if (!close(lp, ex, 1e-9)) ++mismatches;
            if (!close(solve_exhaustive(p, 1).objective, ex, 1e-9)) ++needs_two;
        } catch (const IntegralityViolation&) {
            ++violations;
        }
    }
    o.require(max_tris <= 12, "instance larger than 12 triangles");
    o.require(mismatches == 0, std::to_string(mismatches) + " objective mismatches");
    o.require(violations == 0, std::to_string(violations) + " integrality violations");
    o.detail << "100 instances, max " << max_tris << " triangles, mismatches=" << mismatches
             << " integrality_violations=" << violations
             << " optimum_outside_unit_box=" << needs_two;
    return o;
}

Outcome cross_backend() {
    Outcome o;
    int unequal = 0, uncertified = 0, weak = 0, fallback = 0;
    for (int i = 0; i < 100; ++i) {
        Rng rng(derive_seed(3001, i));
        Instance inst = random_cycle_instance(rng, i % 2 == 1);
        FlatNormProblem p{inst.complex, inst.weights, inst.t, inst.lambda};
        auto flow = solve_flat_norm_flow(p, 0.0, false);
        if (!flow.certificate.certified) ++uncertified;
        if (flow.certificate.free_voids) ++fallback;
        WeightVectors qw = quantized_weights(inst.weights, inst.lambda, flow.dual.quantum);
        auto lp = solve_lp({inst.complex, qw, inst.t, 1.0});
        long long lp_quanta = std::llround(lp.objective);
        if (std::fabs(lp.objective - static_cast<double>(lp_quanta)) > 1e-6 || lp_quanta != flow.certificate.dual_quanta)
            ++unequal;
        // weak duality against the LP optimum and against the trivial primal s = 0
        long long trivial = 0;
        for (std::size_t e = 0; e < inst.t.size(); ++e)
            trivial += std::llround(qw.w[e]) * std::llabs(inst.t[e]);
        if (flow.certificate.dual_quanta > lp_quanta || flow.certificate.dual_quanta > trivial ||
            flow.certificate.dual_quanta > flow.certificate.primal_quanta)
            ++weak;
    }
    o.require(unequal == 0, std::to_string(unequal) + " objective differences");
    o.require(uncertified == 0, std::to_string(uncertified) + " uncertified");
    o.require(weak == 0, std::to_string(weak) + " weak-duality violations");
    o.detail << "100 cycles (50 disk, 50 multi-void), unequal=" << unequal << " uncertified=" << uncertified
             << " weak_duality_violations=" << weak << " free_void_resolves=" << fallback;
    return o;
}

Outcome lambda_monotonicity() {
    Outcome o;
    int pairs = 0;
    for (int i = 0; i < 20; ++i) {
        Rng rng(derive_seed(4001, i));
        auto [a, b] = random_network_pair(rng, static_cast<int>(rng.uniform_int(3, 6)));
        PairSetup setup = prepare_pair(a, b);
        // above max perimeter/area no triangle is worth filling
        double collapse = 0.0;
        for (std::size_t j = 0; j < setup.complex.num_triangles(); ++j) {
            double perim = 0.0;
            for (int e : setup.complex.triangles()[j].edges) perim += setup.weights.w[e];
            collapse = std::max(collapse, perim / setup.weights.v[j]);
        }
        std::vector<double> lambdas;
        for (int k = 0; k < 7; ++k) lambdas.push_back(std::pow(10.0, -2.0 + 4.0 * k / 6.0));
        lambdas.push_back(2.0 * collapse);
        std::sort(lambdas.begin(), lambdas.end());
        auto curve = lambda_sweep(setup, lambdas);
        for (std::size_t k = 1; k < curve.size(); ++k) {
            const auto &prev = curve[k - 1], &cur = curve[k];
            double tol = 1e-9 * std::max(1.0, prev.objective);
            o.require(cur.objective >= prev.objective - tol, "objective decreased");
            o.require(cur.area_component <= prev.area_component + 1e-9 * std::max(1.0, prev.area_component),
                      "area component increased");
            o.require(cur.length_component >= prev.length_component - tol, "length component decreased");
        }
        double total = setup.length1 + setup.length2;
        const auto& top = curve.back();
        o.require(close(top.objective, total, 1e-9), "objective at collapse differs from |T1|+|T2|");
        o.require(std::fabs(top.objective / total - 1.0) <= 1e-9, "normalized value at collapse differs from 1");
        ++pairs;
    }
    o.detail << pairs << " pairs x 8 lambdas";
    return o;
}

Outcome angle_demo() {
    Outcome o;
    double prev = std::numeric_limits<double>::infinity();
    for (double angle : {90.0, 60.0, 30.0, 15.0}) {
        auto [a, b] = crossing_segments(angle);
        PairSetup setup = prepare_pair(a, b);
        double lp = solve_lp({setup.complex, setup.weights, setup.t, 1.0}).objective;
        double ex = solve_exhaustive({setup.complex, setup.weights, setup.t, 1.0}).objective;
        o.require(close(lp, ex, 1e-9), "oracle disagrees at " + std::to_string(angle));
        o.require(lp < prev, "not strictly decreasing at " + std::to_string(angle));
        prev = lp;
        o.detail << angle << "deg:" << lp << " ";
    }
    return o;
}

Outcome normalized_range() {
    Outcome o;
    auto [a, b] = grid_pair(6, 1.0, 0.15, 6001);
    std::vector<double> eps{0.25, 0.5, 1.0, 1.5}, lambdas{1.0};
    auto run = [&] { return global_vs_local_report(a, b, eps, lambdas, 250, 6002, Crs::euclidean()); };
    Report first = run();
    Report second = run();
    std::size_t outside = 0;
    for (const auto& s : first.samples)
        if (!(s.f_norm >= 0.0 && s.f_norm <= 1.0)) ++outside;
    bool identical = samples_to_csv(first.samples, 6002) == samples_to_csv(second.samples, 6002) &&
                     report_to_csv(first) == report_to_csv(second) && report_to_json(first) == report_to_json(second);
    o.require(first.samples.size() == 1000, "expected 1000 evaluated regions, got " + std::to_string(first.samples.size()));
    o.require(outside == 0, std::to_string(outside) + " values outside [0,1]");
    o.require(identical, "re-run output differs");
    o.detail << first.samples.size() << " regions, outside=" << outside << ", byte-identical=" << (identical ? "yes" : "no");
    return o;
}

Outcome stability_bounds() {
    Outcome o;
    auto results = run_perturbation_trials(100, 7001, {});
    std::map<std::string, std::pair<int, int>> by_kind;  // checks, violations
    int errors = 0;
    for (const auto& t : results) {
        if (!t.error.empty()) ++errors;
        for (const auto& r : t.reports) {
            std::string kind = r.kind.substr(r.kind.find(':') + 1);
            by_kind[kind].first++;
            if (!r.satisfied) by_kind[kind].second++;
        }
    }
    o.require(errors == 0, std::to_string(errors) + " trials failed to run");
    const char* required[] = {"edge_length", "patch_area", "disjointness", "additivity", "single", "k_perturbation",
                              "complete_interior", "complete", "normalized_loose", "normalized_tight",
                              "normalized_tight_truncated", "normalized_non_shrinking"};
    for (const char* kind : required) {
        auto it = by_kind.find(kind);
        o.require(it != by_kind.end(), std::string("no checks of ") + kind);
        if (it != by_kind.end()) o.require(it->second.second == 0, std::string("violations of ") + kind);
    }
    int total = 0, bad = 0;
    for (const auto& [k, v] : by_kind) {
        total += v.first;
        bad += v.second;
    }
    o.detail << "100 trials, " << total << " checks, " << bad << " violations, " << errors << " errors";
    return o;
}

Outcome hausdorff_decoupling() {
    Outcome o;
    PWLCurrent base;
    for (int i = 0; i <= 16; ++i) base.nodes.push_back({static_cast<double>(i), 0.0});
    auto rows = hausdorff_decoupling_experiments(base, {});
    const DecouplingRow* spike = nullptr;
    for (const auto& r : rows)
        if (r.name == "spike") spike = &r;
    o.require(spike != nullptr, "no spike row");
    if (spike) {
        o.require(spike->pct_hausdorff >= 900.0 - 1e-9, "Hausdorff change below 900%");
        o.require(std::fabs(spike->pct_fnorm) <= 1.0, "normalized flat norm changed by more than 1%");
        o.detail << "dD_H=" << spike->pct_hausdorff << "% dF=" << spike->pct_fnorm << "%";
    }
    return o;
}

Outcome ohcp_sanity() {
    Outcome o;
    int nonzero = 0, mismatches = 0;
    for (int i = 0; i < 20; ++i) {
        Rng rng(derive_seed(9001, i));
        Instance inst = random_cycle_instance(rng, false);
        if (solve_ohcp(inst.complex, inst.t, inst.weights).cost_quanta != 0) ++nonzero;
    }
    for (int i = 0; i < 50; ++i) {
        Rng rng(derive_seed(9002, i));
        Instance inst = random_ohcp_instance(rng);
        auto res = solve_ohcp(inst.complex, inst.t, inst.weights);
        WeightVectors qw = quantized_weights(inst.weights, 0.0, default_quantum(inst.weights, 0.0));
        auto ex = solve_exhaustive({inst.complex, qw, inst.t, 0.0});
        if (std::llround(ex.objective) != res.cost_quanta || !res.certificate.certified) ++mismatches;
    }
    o.require(nonzero == 0, std::to_string(nonzero) + " disk cycles with nonzero cost");
    o.require(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
    o.detail << "20 disk cycles (nonzero=" << nonzero << "), 50 multi-void cycles (mismatches=" << mismatches << ")";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {1, "unit-square law", 1, unit_square_law},
        {2, "oracle equivalence", 30, oracle_equivalence},
        {3, "cross-backend duality", 60, cross_backend},
        {4, "lambda monotonicity", 60, lambda_monotonicity},
        {5, "angle demo", 5, angle_demo},
        {6, "normalized range and determinism", 300, normalized_range},
        {7, "stability bounds", 300, stability_bounds},
        {8, "Hausdorff decoupling", 10, hausdorff_decoupling},
        {9, "OHCP sanity", 30, ohcp_sanity},
    };
    bool all = true;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_s) {
            o.pass = false;
            o.detail << " over the " << c.limit_s << " s limit";
        }
        all = all && o.pass;
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
