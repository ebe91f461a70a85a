#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flatnorm/comparison.hpp"
#include "flatnorm/dual_flow.hpp"
#include "flatnorm/errors.hpp"
#include "flatnorm/flatnorm_lp.hpp"
#include "flatnorm/geojson.hpp"
#include "flatnorm/instances.hpp"
#include "flatnorm/perturbation.hpp"
#include "json.hpp"

using namespace flatnorm;

namespace {

enum class Backend { lp, flow, both };

struct RunConfig {
    std::vector<std::string> inputs;
    double lambda = 1.0;
    std::vector<double> lambdas;
    double epsilon = 0.0;
    std::vector<double> epsilons;
    std::size_t regions = 50;
    std::uint64_t seed = 1;
    std::string crs;  // empty: as declared by the input files
    double earth_radius_km = 6371.0;
    double quantum = 0.0;
    Backend backend = Backend::lp;
    std::string out;
    bool strict_intersection = false;
    std::size_t trials = 100;
    std::size_t instances = 100;
    std::string decoupling_out;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << text;
    if (!f) throw InputError("failed writing " + path);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::pair<PlanarNetwork, PlanarNetwork> load_pair(const RunConfig& cfg) {
    if (cfg.inputs.size() != 2) throw InputError("expected two input files");
    PlanarNetwork a = load_geojson(cfg.inputs[0], cfg.earth_radius_km);
    PlanarNetwork b = load_geojson(cfg.inputs[1], cfg.earth_radius_km);
    if (!cfg.crs.empty()) {
        Crs c = cfg.crs == "geographic" ? Crs::geographic(cfg.earth_radius_km) : Crs::euclidean();
        a.crs = b.crs = c;
    } else if (a.crs.mode != b.crs.mode) {
        throw InputError("inputs declare different coordinate modes");
    }
    a.crs.earth_radius_km = b.crs.earth_radius_km = cfg.earth_radius_km;
    return {a, b};
}

std::vector<double> lambda_grid(const RunConfig& cfg) {
    std::vector<double> out = cfg.lambdas.empty() ? std::vector<double>{cfg.lambda} : cfg.lambdas;
    for (double l : out)
        if (!(l >= 0) || !std::isfinite(l)) throw InputError("lambda must be finite and non-negative");
    return out;
}

int cmd_compare(const RunConfig& cfg) {
    auto [a, b] = load_pair(cfg);
    if (!(cfg.lambda >= 0)) throw InputError("lambda must be non-negative");
    PairSetup setup = prepare_pair(a, b);
    FlatNormProblem problem{setup.complex, setup.weights, setup.t, cfg.lambda};
    double total = setup.length1 + setup.length2;
    double dh = hausdorff_distance(a, b);
    nlohmann::json doc;
    doc["lambda"] = cfg.lambda;
    doc["length1"] = setup.length1;
    doc["length2"] = setup.length2;
    doc["hausdorff"] = dh;

    std::optional<FlatNormDecomposition> lp;
    if (cfg.backend != Backend::flow) {
        lp = solve_lp(problem);
        doc["lp"] = nlohmann::json::parse(decomposition_to_json(setup.complex, *lp));
    }
    std::optional<FlowDecomposition> flow;
    if (cfg.backend != Backend::lp) {
        try {
            flow = solve_flat_norm_flow(problem, cfg.quantum);
            doc["flow"] = nlohmann::json::parse(decomposition_to_json(setup.complex, flow->decomposition));
            doc["flow"]["quantum"] = flow->dual.quantum;
            doc["flow"]["certified"] = flow->certificate.certified;
        } catch (const CycleRequired& e) {
            if (cfg.backend == Backend::flow) throw InputError(std::string("flow backend: ") + e.what());
            std::cout << "note: flow backend skipped, " << e.what() << "\n";
        }
    }
    if (lp && flow) {
        // the flow optimum is exact for the quantized weights; compare there
        double q = flow->dual.quantum;
        WeightVectors qw = quantized_weights(setup.weights, cfg.lambda, q);
        auto qlp = solve_lp({setup.complex, qw, setup.t, cfg.lambda > 0 ? 1.0 : 0.0});
        long long lp_quanta = std::llround(qlp.objective);
        bool agree = lp_quanta == flow->certificate.dual_quanta;
        doc["backends_agree"] = agree;
        std::cout << "backends " << (agree ? "agree" : "DISAGREE") << ": lp=" << lp_quanta
                  << " flow=" << flow->certificate.dual_quanta << " quanta of " << fmt(q) << "\n";
        if (!agree) {
            if (!cfg.out.empty()) write_file(cfg.out, doc.dump(2) + "\n");
            throw CertificationFailure("backends disagree on the quantized optimum");
        }
    }
    const FlatNormDecomposition& d = lp ? *lp : flow->decomposition;
    double normalized = total > 0 ? d.objective / total : 0.0;
    doc["objective"] = d.objective;
    doc["normalized"] = normalized;
    if (!cfg.out.empty()) write_file(cfg.out, doc.dump(2) + "\n");
    std::cout << "objective=" << fmt(d.objective) << " normalized=" << fmt(normalized)
              << " length1=" << fmt(setup.length1) << " length2=" << fmt(setup.length2) << " hausdorff=" << fmt(dh)
              << "\n";
    return 0;
}

int cmd_sample(const RunConfig& cfg) {
    auto [a, b] = load_pair(cfg);
    std::vector<double> eps = cfg.epsilons.empty() ? std::vector<double>{cfg.epsilon} : cfg.epsilons;
    for (double e : eps)
        if (!(e > 0)) throw InputError("epsilon must be positive");
    if (cfg.regions == 0) throw InputError("--regions must be positive");
    auto lambdas = lambda_grid(cfg);
    SamplingConfig sampling;
    sampling.strict_intersection = cfg.strict_intersection;
    Report report = global_vs_local_report(a, b, eps, lambdas, cfg.regions, cfg.seed, a.crs, sampling);
    std::string prefix = cfg.out.empty() ? "samples" : cfg.out;
    write_file(prefix + ".csv", samples_to_csv(report.samples, cfg.seed));
    write_file(prefix + "_summary.csv", report_to_csv(report));
    write_file(prefix + "_summary.json", report_to_json(report));
    for (const auto& row : report.rows)
        std::cout << "epsilon=" << fmt(row.epsilon) << " lambda=" << fmt(row.lambda) << " count=" << row.summary.count
                  << " mean=" << fmt(row.summary.mean) << " std=" << fmt(row.summary.std) << "\n";
    for (const auto& g : report.globals)
        std::cout << "global lambda=" << fmt(g.lambda) << " normalized=" << fmt(g.f_norm) << " ratio=" << fmt(g.ratio)
                  << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    auto [a, b] = load_pair(cfg);
    auto lambdas = lambda_grid(cfg);
    PairSetup setup = prepare_pair(a, b);
    auto curve = lambda_sweep(setup, lambdas);
    double total = setup.length1 + setup.length2;
    std::string csv = "lambda,objective,length_component,area_component,normalized\n";
    for (const auto& p : curve) {
        csv += fmt(p.lambda) + "," + fmt(p.objective) + "," + fmt(p.length_component) + "," + fmt(p.area_component) +
               "," + fmt(total > 0 ? p.objective / total : 0.0) + "\n";
        std::cout << "lambda=" << fmt(p.lambda) << " objective=" << fmt(p.objective) << "\n";
    }
    write_file(cfg.out.empty() ? "sweep.csv" : cfg.out, csv);
    return 0;
}

int cmd_perturb(const RunConfig& cfg) {
    auto results = run_perturbation_trials(cfg.trials, cfg.seed, {});
    write_file(cfg.out.empty() ? "perturb.csv" : cfg.out, trials_to_csv(results, cfg.seed));
    std::size_t checks = 0, violations = 0, errors = 0;
    for (const auto& r : results) {
        if (!r.error.empty()) ++errors;
        for (const auto& b : r.reports) {
            ++checks;
            if (!b.satisfied) ++violations;
        }
    }
    std::cout << "trials=" << results.size() << " checks=" << checks << " violations=" << violations
              << " errors=" << errors << "\n";
    if (!cfg.decoupling_out.empty()) {
        PWLCurrent base;
        for (int i = 0; i <= 16; ++i) base.nodes.push_back({static_cast<double>(i), 0.0});
        auto rows = hausdorff_decoupling_experiments(base, {});
        write_file(cfg.decoupling_out, decoupling_to_csv(rows));
    }
    return violations == 0 && errors == 0 ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg) {
    std::size_t certified = 0, agree = 0, fallback = 0;
    const std::size_t n = cfg.instances;
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(cfg.seed, i));
        Instance inst = random_cycle_instance(rng, i % 2 == 1);
        FlatNormProblem problem{inst.complex, inst.weights, inst.t, inst.lambda};
        auto flow = solve_flat_norm_flow(problem, cfg.quantum, false);
        if (flow.certificate.certified) ++certified;
        if (flow.certificate.free_voids) ++fallback;
        WeightVectors qw = quantized_weights(inst.weights, inst.lambda, flow.dual.quantum);
        auto lp = solve_lp({inst.complex, qw, inst.t, 1.0});
        if (std::llround(lp.objective) == flow.certificate.dual_quanta) {
            ++agree;
        } else {
            failures.push_back("instance " + std::to_string(i) + ": lp=" + fmt(lp.objective) +
                               " flow=" + std::to_string(flow.certificate.dual_quanta));
        }
        for (const auto& f : flow.certificate.failures) failures.push_back("instance " + std::to_string(i) + ": " + f);
    }
    for (const auto& f : failures) std::cout << f << "\n";
    std::cout << certified << "/" << n << " certified, " << agree << "/" << n << " match the LP, " << fallback
              << " solved with free voids\n";
    return certified == n && agree == n ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiscale flat norm distance between planar networks"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::map<std::string, Backend> backends{{"lp", Backend::lp}, {"flow", Backend::flow}, {"both", Backend::both}};

    auto add_pair_inputs = [&](CLI::App* sub) {
        sub->add_option("inputs", cfg.inputs, "Two GeoJSON files of LineString features")->expected(2)->required();
        sub->add_option("--crs", cfg.crs, "Override the coordinate mode of both inputs")
            ->check(CLI::IsMember({"euclidean", "geographic"}));
        sub->add_option("--earth-radius-km", cfg.earth_radius_km, "Sphere radius for geographic inputs")
            ->capture_default_str();
    };

    auto* compare = app.add_subcommand("compare", "Flat norm distance between two networks");
    add_pair_inputs(compare);
    compare->add_option("--lambda", cfg.lambda, "Scale parameter")->capture_default_str();
    compare->add_option("--quantum", cfg.quantum, "Flow resolution (0 picks 1e-6 of the largest weight)");
    compare->add_option("--backend", cfg.backend, "lp, flow or both")
        ->transform(CLI::CheckedTransformer(backends, CLI::ignore_case));
    compare->add_option("--out", cfg.out, "Decomposition JSON path");

    auto* sample = app.add_subcommand("sample", "Regional statistics over random square regions");
    add_pair_inputs(sample);
    sample->add_option("--lambda", cfg.lambda, "Scale parameter")->capture_default_str();
    sample->add_option("--lambdas", cfg.lambdas, "Comma separated scale grid")->delimiter(',');
    sample->add_option("--epsilon", cfg.epsilon, "Region half-size");
    sample->add_option("--epsilons", cfg.epsilons, "Comma separated half-size grid")->delimiter(',');
    sample->add_option("--regions", cfg.regions, "Regions per half-size")->capture_default_str();
    sample->add_option("--seed", cfg.seed, "Root seed")->capture_default_str();
    sample->add_flag("--strict-intersection", cfg.strict_intersection,
                     "Keep only regions where the clipped networks touch each other");
    sample->add_option("--out", cfg.out, "Output prefix (writes PREFIX.csv, PREFIX_summary.csv/json)");

    auto* sweep = app.add_subcommand("sweep", "Objective and components over a scale grid");
    add_pair_inputs(sweep);
    sweep->add_option("--lambdas", cfg.lambdas, "Comma separated scale grid")->delimiter(',')->required();
    sweep->add_option("--out", cfg.out, "CSV path (default sweep.csv)");

    auto* perturb = app.add_subcommand("perturb", "Random perturbation trials against the stability bounds");
    perturb->add_option("--trials", cfg.trials, "Number of random currents")->capture_default_str();
    perturb->add_option("--seed", cfg.seed, "Root seed")->capture_default_str();
    perturb->add_option("--out", cfg.out, "Bound report CSV (default perturb.csv)");
    perturb->add_option("--decoupling-out", cfg.decoupling_out, "Also write the Hausdorff decoupling table");

    auto* verify = app.add_subcommand("verify", "Randomized cross-backend and certificate suite");
    verify->add_option("--instances", cfg.instances, "Number of random cycle instances")->capture_default_str();
    verify->add_option("--seed", cfg.seed, "Root seed")->capture_default_str();
    verify->add_option("--quantum", cfg.quantum, "Flow resolution (0 picks the default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*compare) return cmd_compare(cfg);
        if (*sample) return cmd_sample(cfg);
        if (*sweep) return cmd_sweep(cfg);
        if (*perturb) return cmd_perturb(cfg);
        if (*verify) return cmd_verify(cfg);
    } catch (const CertificationFailure& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const SamplingExhausted& e) {
        std::cerr << "sampling exhausted: " << e.what() << "\n";
        return 4;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const EmptyInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
