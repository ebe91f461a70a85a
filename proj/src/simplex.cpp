#include "flatnorm/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "flatnorm/errors.hpp"

namespace flatnorm {

namespace {

class RevisedSimplex {
public:
    RevisedSimplex(const SimplexProblem& lp, const SimplexOptions& opts)
        : lp_(lp), opts_(opts), m_(static_cast<std::size_t>(lp.rows)) {
        if (lp.initial_basis.size() != m_) throw std::invalid_argument("initial basis has wrong size");
        binv_.assign(m_ * m_, 0.0);
        basis_ = lp.initial_basis;
        in_basis_.assign(lp.columns.size(), -1);
        xb_.assign(m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            const auto& col = lp.columns[basis_[r]];
            if (col.size() != 1 || std::fabs(col[0].second) != 1.0)
                throw std::invalid_argument("initial basis must be signed unit columns");
            std::size_t row = static_cast<std::size_t>(col[0].first);
            // B e_r = sign * e_row, so B^-1 e_row = sign * e_r
            if (row != r) throw std::invalid_argument("initial basis must be diagonal");
            binv_[r * m_ + r] = col[0].second;
            xb_[r] = col[0].second * lp.rhs[r];
            if (xb_[r] < -opts.tolerance) throw std::invalid_argument("initial basis is infeasible");
            in_basis_[basis_[r]] = static_cast<int>(r);
        }
        recompute_duals();
    }

    SimplexResult run() {
        SimplexResult res;
        long streak = 0;
        long since_refresh = 0;
        std::vector<double> d(m_);
        while (true) {
            if (res.iterations >= opts_.max_iterations) throw std::runtime_error("simplex iteration limit");
            bool use_bland = opts_.pricing == PricingRule::bland || streak >= opts_.degenerate_streak;
            int q = price(use_bland);
            if (q < 0) {
                recompute_duals();
                since_refresh = 0;
                q = price(use_bland);
                if (q < 0) break;
            }
            // d = B^-1 a_q
            std::fill(d.begin(), d.end(), 0.0);
            for (auto [row, val] : lp_.columns[q])
                for (std::size_t i = 0; i < m_; ++i) d[i] += binv_[i * m_ + row] * val;
            int r = -1;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (d[i] <= opts_.tolerance) continue;
                double ratio = std::max(xb_[i], 0.0) / d[i];
                if (ratio < best - opts_.tolerance ||
                    (ratio <= best + opts_.tolerance && r >= 0 && basis_[i] < basis_[r])) {
                    best = std::min(best, ratio);
                    r = static_cast<int>(i);
                }
            }
            if (r < 0) throw Unbounded("LP objective is unbounded below");
            const std::size_t rr = static_cast<std::size_t>(r);
            double theta = std::max(xb_[rr], 0.0) / d[rr];
            streak = theta <= opts_.tolerance ? streak + 1 : 0;

            double rc = reduced_cost(q);
            double pivot = d[rr];
            double* prow = &binv_[rr * m_];
            for (std::size_t j = 0; j < m_; ++j) prow[j] /= pivot;
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == rr || d[i] == 0.0) continue;
                double f = d[i];
                double* row = &binv_[i * m_];
                for (std::size_t j = 0; j < m_; ++j)
                    if (prow[j] != 0.0) row[j] -= f * prow[j];
                xb_[i] -= theta * d[i];
            }
            xb_[rr] = theta;
            for (std::size_t j = 0; j < m_; ++j) y_[j] += rc * prow[j];
            in_basis_[basis_[rr]] = -1;
            basis_[rr] = q;
            in_basis_[q] = r;
            ++res.iterations;
            if (++since_refresh >= 200) {
                recompute_duals();
                since_refresh = 0;
            }
        }
        res.values.assign(lp_.columns.size(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) res.values[basis_[i]] = xb_[i];
        for (std::size_t j = 0; j < lp_.columns.size(); ++j) res.objective += lp_.cost[j] * res.values[j];
        return res;
    }

private:
    double reduced_cost(int j) const {
        double rc = lp_.cost[j];
        for (auto [row, val] : lp_.columns[j]) rc -= y_[row] * val;
        return rc;
    }

    int price(bool bland) const {
        int chosen = -1;
        double most = -opts_.tolerance;
        for (std::size_t j = 0; j < lp_.columns.size(); ++j) {
            if (in_basis_[j] >= 0) continue;
            double rc = reduced_cost(static_cast<int>(j));
            if (rc >= -opts_.tolerance) continue;
            if (bland) return static_cast<int>(j);
            if (rc < most) {
                most = rc;
                chosen = static_cast<int>(j);
            }
        }
        return chosen;
    }

    // y = c_B B^-1
    void recompute_duals() {
        y_.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double cb = lp_.cost[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &binv_[i * m_];
            for (std::size_t j = 0; j < m_; ++j) y_[j] += cb * row[j];
        }
    }

    const SimplexProblem& lp_;
    const SimplexOptions& opts_;
    std::size_t m_;
    std::vector<double> binv_;
    std::vector<int> basis_;
    std::vector<int> in_basis_;
    std::vector<double> xb_;
    std::vector<double> y_;
};

}  // namespace

SimplexResult solve_simplex(const SimplexProblem& lp, const SimplexOptions& opts) {
    if (lp.rows == 0) return {std::vector<double>(lp.columns.size(), 0.0), 0.0, 0};
    RevisedSimplex solver(lp, opts);
    return solver.run();
}

}  // namespace flatnorm
