#pragma once

#include <utility>
#include <vector>

namespace flatnorm {

// Equality-form LP: minimize cost . x subject to A x = rhs, x >= 0.
// The initial basis must consist of signed unit columns (one per row) that
// give a feasible starting point.
struct SimplexProblem {
    int rows = 0;
    std::vector<std::vector<std::pair<int, double>>> columns;
    std::vector<double> cost;
    std::vector<double> rhs;
    std::vector<int> initial_basis;
};

enum class PricingRule {
    bland,    // smallest improving index
    dantzig,  // most negative reduced cost, Bland after a run of degenerate pivots
};

struct SimplexOptions {
    PricingRule pricing = PricingRule::dantzig;
    double tolerance = 1e-9;
    int degenerate_streak = 50;
    long max_iterations = 50'000'000;
};

struct SimplexResult {
    std::vector<double> values;
    double objective = 0.0;
    long iterations = 0;
};

// Revised simplex with an explicit dense basis inverse. Throws Unbounded.
SimplexResult solve_simplex(const SimplexProblem& lp, const SimplexOptions& opts = {});

}  // namespace flatnorm
