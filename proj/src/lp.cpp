#include "thermo/lp.hpp"

#include "thermo/error.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace thermo::lp {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-12;

// Tableau layout: rows 0..m-1 constraints, row m objective (reduced costs,
// rhs holds -objective). Columns 0..n-1 structural, n..n+m-1 artificial,
// last column rhs.
class Tableau {
public:
    Tableau(const RealMatrix& a, const RealVector& b)
        : m_(a.rows()), n_(a.cols()), t_(RealMatrix::Zero(a.rows() + 1, a.cols() + a.rows() + 1)), basis_(a.rows()) {
        for (Eigen::Index i = 0; i < m_; ++i) {
            const double sign = b(i) < 0.0 ? -1.0 : 1.0;
            t_.row(i).head(n_) = sign * a.row(i);
            t_(i, n_ + i) = 1.0;
            t_(i, rhs()) = sign * b(i);
            basis_[static_cast<std::size_t>(i)] = n_ + i;
        }
    }

    Eigen::Index rhs() const { return n_ + m_; }

    void set_phase1_objective() {
        t_.row(m_).setZero();
        for (Eigen::Index j = n_; j < n_ + m_; ++j) t_(m_, j) = 1.0;
        for (Eigen::Index i = 0; i < m_; ++i) t_.row(m_) -= t_.row(i);
    }

    void set_phase2_objective(const RealVector& c) {
        t_.row(m_).setZero();
        t_.row(m_).head(n_) = c.transpose();
        for (Eigen::Index i = 0; i < m_; ++i) {
            const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
            const double cb = bj < n_ ? c(bj) : 0.0;
            if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
        }
    }

    // Bland's rule over the first allowed_cols columns.
    Status optimize(Eigen::Index allowed_cols, std::size_t max_iter) {
        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < allowed_cols; ++j) {
                if (t_(m_, j) < -kCostEps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return Status::optimal;
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m_; ++i) {
                const double coef = t_(i, enter);
                if (coef <= kPivotEps) continue;
                const double ratio = t_(i, rhs()) / coef;
                if (ratio < best - 1e-14 ||
                    (std::abs(ratio - best) <= 1e-14 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return Status::unbounded;
            pivot(leave, enter);
        }
        return Status::iteration_limit;
    }

    void pivot(Eigen::Index row, Eigen::Index col) {
        t_.row(row) /= t_(row, col);
        for (Eigen::Index i = 0; i <= m_; ++i) {
            if (i == row) continue;
            const double f = t_(i, col);
            if (f != 0.0) t_.row(i) -= f * t_.row(row);
        }
        t_(row, col) = 1.0;
        basis_[static_cast<std::size_t>(row)] = col;
    }

    // Pivots basic artificials out where a structural column allows it.
    void drive_out_artificials() {
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < n_) continue;
            Eigen::Index best = -1;
            double mag = 1e-9;
            for (Eigen::Index j = 0; j < n_; ++j) {
                if (std::abs(t_(i, j)) > mag) {
                    mag = std::abs(t_(i, j));
                    best = j;
                }
            }
            if (best >= 0) pivot(i, best);
        }
    }

    double artificial_sum() const {
        double s = 0.0;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] >= n_) s += std::abs(t_(i, rhs()));
        return s;
    }

    RealVector solution() const {
        RealVector x = RealVector::Zero(n_);
        for (Eigen::Index i = 0; i < m_; ++i) {
            const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
            if (bj < n_) x(bj) = std::max(0.0, t_(i, rhs()));
        }
        return x;
    }

    Eigen::Index structural() const { return n_; }

private:
    Eigen::Index m_;
    Eigen::Index n_;
    RealMatrix t_;
    std::vector<Eigen::Index> basis_;
};

}  // namespace

Result solve(const RealMatrix& a, const RealVector& b, const RealVector& c, double feasibility_tol) {
    if (a.rows() != b.size() || (c.size() != 0 && c.size() != a.cols())) {
        throw Error("dimension_mismatch", "lp::solve: inconsistent problem dimensions");
    }
    Result res;
    Tableau tab(a, b);
    const std::size_t max_iter = 200 * static_cast<std::size_t>(a.rows() + a.cols() + 1);

    tab.set_phase1_objective();
    const Status p1 = tab.optimize(tab.structural() + a.rows(), max_iter);
    if (p1 == Status::iteration_limit) {
        res.status = p1;
        return res;
    }
    res.infeasibility = tab.artificial_sum();
    res.x = tab.solution();
    if (res.infeasibility > feasibility_tol) {
        res.status = Status::infeasible;
        return res;
    }
    tab.drive_out_artificials();

    if (c.size() == 0) {
        res.status = Status::optimal;
        res.x = tab.solution();
        return res;
    }
    tab.set_phase2_objective(c);
    const Status p2 = tab.optimize(tab.structural(), max_iter);
    res.status = p2;
    res.x = tab.solution();
    res.objective = c.dot(res.x);
    return res;
}

std::optional<RealVector> find_feasible(const RealMatrix& a, const RealVector& b, double feasibility_tol) {
    const Result r = solve(a, b, RealVector(), feasibility_tol);
    if (r.status == Status::iteration_limit) {
        throw Error("degenerate_lp", "simplex iteration limit reached (degenerate problem)");
    }
    if (r.status != Status::optimal) return std::nullopt;
    return r.x;
}

}  // namespace thermo::lp
