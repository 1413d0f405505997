#include "thermo/majorization.hpp"

#include "thermo/error.hpp"
#include "thermo/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace thermo {

// ---------------------------------------------------------------------------
// StochasticMatrix

StochasticMatrix::StochasticMatrix(RealMatrix d) : d_(std::move(d)) {
    if (d_.rows() == 0 || d_.rows() != d_.cols()) throw Error("invalid_stochastic", "stochastic matrix must be square");
    for (Eigen::Index i = 0; i < d_.rows(); ++i)
        for (Eigen::Index j = 0; j < d_.cols(); ++j) {
            double& v = d_(i, j);
            if (!std::isfinite(v)) throw Error("invalid_stochastic", "non-finite entry");
            if (v < -kClampTol) {
                throw Error("invalid_stochastic", "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                      ") = " + std::to_string(v) + " is negative");
            }
            if (v < 0.0) v = 0.0;
        }
    for (Eigen::Index j = 0; j < d_.cols(); ++j) {
        const double s = d_.col(j).sum();
        if (std::abs(s - 1.0) > 1e-9) {
            throw Error("invalid_stochastic", "column " + std::to_string(j) + " sums to " + std::to_string(s));
        }
    }
}

ProbabilityVector StochasticMatrix::apply(const ProbabilityVector& p) const {
    if (p.dim() != dim()) throw Error("dimension_mismatch", "stochastic matrix and vector differ in dimension");
    return ProbabilityVector::normalized(d_ * p.values());
}

bool StochasticMatrix::is_bistochastic(double tol) const {
    return (d_.rowwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
}

bool StochasticMatrix::preserves(const ProbabilityVector& gamma, double tol) const {
    if (gamma.dim() != dim()) return false;
    return (d_ * gamma.values() - gamma.values()).cwiseAbs().maxCoeff() <= tol;
}

RealMatrix ConvexPermutationDecomposition::reconstruct() const {
    const auto n = static_cast<Eigen::Index>(dim);
    RealMatrix out = RealMatrix::Zero(n, n);
    for (const auto& t : terms)
        for (std::size_t x = 0; x < t.perm.size(); ++x)
            out(static_cast<Eigen::Index>(t.perm[x]), static_cast<Eigen::Index>(x)) += t.weight;
    return out;
}

double ConvexPermutationDecomposition::weight_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
}

// ---------------------------------------------------------------------------
// Majorization

std::optional<std::size_t> first_violated_prefix(const RealVector& x, const RealVector& y, double slack) {
    if (x.size() != y.size()) throw Error("dimension_mismatch", "majorization needs vectors of equal length");
    std::vector<double> xs(x.data(), x.data() + x.size());
    std::vector<double> ys(y.data(), y.data() + y.size());
    std::sort(xs.begin(), xs.end(), std::greater<>());
    std::sort(ys.begin(), ys.end(), std::greater<>());
    double px = 0.0, py = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        px += xs[k];
        py += ys[k];
        if (px < py - slack) return k + 1;
    }
    if (std::abs(px - py) > slack) return xs.size();
    return std::nullopt;
}

bool majorizes(const ProbabilityVector& p, const ProbabilityVector& q) {
    if (p.dim() != q.dim()) throw Error("dimension_mismatch", "majorizes: dimensions differ");
    return !first_violated_prefix(p.values(), q.values()).has_value();
}

std::optional<StochasticMatrix> thermomajorizes(const ProbabilityVector& p, const ProbabilityVector& q,
                                                const ProbabilityVector& gamma) {
    const std::size_t n = p.dim();
    if (q.dim() != n || gamma.dim() != n) throw Error("dimension_mismatch", "thermomajorizes: dimensions differ");
    for (std::size_t i = 0; i < n; ++i)
        if (!(gamma[i] > 0.0)) throw Error("invalid_gibbs", "Gibbs vector must be strictly positive");

    // Unknowns D_ij at column-major index i + n*j.
    const auto nn = static_cast<Eigen::Index>(n);
    RealMatrix a = RealMatrix::Zero(3 * nn, nn * nn);
    RealVector b(3 * nn);
    for (Eigen::Index i = 0; i < nn; ++i) {
        for (Eigen::Index j = 0; j < nn; ++j) {
            const Eigen::Index var = i + nn * j;
            a(j, var) = 1.0;                                          // column sums
            a(nn + i, var) = gamma[static_cast<std::size_t>(j)];      // D gamma = gamma
            a(2 * nn + i, var) = p[static_cast<std::size_t>(j)];      // D p = q
        }
        b(i) = 1.0;
        b(nn + i) = gamma[static_cast<std::size_t>(i)];
        b(2 * nn + i) = q[static_cast<std::size_t>(i)];
    }
    const auto x = lp::find_feasible(a, b, 1e-9);
    if (!x) return std::nullopt;

    RealMatrix d(nn, nn);
    for (Eigen::Index i = 0; i < nn; ++i)
        for (Eigen::Index j = 0; j < nn; ++j) d(i, j) = (*x)(i + nn * j);
    // Column renormalization removes LP round-off.
    for (Eigen::Index j = 0; j < nn; ++j) d.col(j) /= d.col(j).sum();
    StochasticMatrix witness(d);
    const double r_gamma = (d * gamma.values() - gamma.values()).cwiseAbs().maxCoeff();
    const double r_map = (d * p.values() - q.values()).cwiseAbs().maxCoeff();
    if (r_gamma > kWitnessTol || r_map > kWitnessTol) {
        throw Error("degenerate_lp", "thermomajorization witness residuals " + std::to_string(r_gamma) + ", " +
                                         std::to_string(r_map) + " exceed 1e-8");
    }
    return witness;
}

// ---------------------------------------------------------------------------
// Birkhoff decomposition

namespace {

// Perfect matching rows -> columns on the support, greedy start then
// augmenting paths. Returns col_of_row, or empty if none exists.
std::vector<std::size_t> support_matching(const RealMatrix& r, double zero) {
    const std::size_t n = static_cast<std::size_t>(r.rows());
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> col_of_row(n, none), row_of_col(n, none);
    auto edge = [&](std::size_t i, std::size_t j) {
        return r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > zero;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (edge(i, i) && row_of_col[i] == none) {
            col_of_row[i] = i;
            row_of_col[i] = i;
        }
    }
    std::vector<char> visited(n);
    std::function<bool(std::size_t)> augment = [&](std::size_t i) -> bool {
        for (std::size_t j = 0; j < n; ++j) {
            if (!edge(i, j) || visited[j]) continue;
            visited[j] = 1;
            if (row_of_col[j] == none || augment(row_of_col[j])) {
                col_of_row[i] = j;
                row_of_col[j] = i;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (col_of_row[i] != none) continue;
        std::fill(visited.begin(), visited.end(), 0);
        if (!augment(i)) return {};
    }
    return col_of_row;
}

}  // namespace

ConvexPermutationDecomposition birkhoff_decompose(const RealMatrix& d, bool require_bistochastic) {
    const Eigen::Index n = d.rows();
    if (n == 0 || d.cols() != n) throw Error("not_bistochastic", "Birkhoff decomposition needs a square matrix");
    if ((d.array() < -kClampTol).any()) throw Error("not_bistochastic", "matrix has negative entries");
    if (require_bistochastic) {
        const double row_dev = (d.rowwise().sum().array() - 1.0).abs().maxCoeff();
        const double col_dev = (d.colwise().sum().array() - 1.0).abs().maxCoeff();
        if (row_dev > kWitnessTol || col_dev > kWitnessTol) {
            throw Error("not_bistochastic", "row/column sums deviate by " + std::to_string(std::max(row_dev, col_dev)));
        }
    }

    RealMatrix r = d.cwiseMax(0.0);
    r = (r.array() < kBirkhoffZero).select(0.0, r);
    ConvexPermutationDecomposition out;
    out.dim = static_cast<std::size_t>(n);
    const std::size_t max_terms = static_cast<std::size_t>((n - 1) * (n - 1) + 1);

    double remaining = 1.0;
    while (remaining > kBirkhoffZero) {
        const auto match = support_matching(r, 0.0);
        if (match.empty()) {
            const double residual = r.sum() / static_cast<double>(n);
            if (residual > 1e-8) {
                throw Error("matching_failure", "no perfect matching in support; residual mass " + std::to_string(residual));
            }
            break;
        }
        double w = INFINITY;
        for (Eigen::Index i = 0; i < n; ++i) w = std::min(w, r(i, static_cast<Eigen::Index>(match[static_cast<std::size_t>(i)])));
        PermutationTerm term;
        term.weight = w;
        term.perm.assign(static_cast<std::size_t>(n), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto j = static_cast<Eigen::Index>(match[static_cast<std::size_t>(i)]);
            term.perm[static_cast<std::size_t>(j)] = static_cast<std::size_t>(i);
            r(i, j) -= w;
            if (r(i, j) < kBirkhoffZero) r(i, j) = 0.0;
        }
        out.terms.push_back(std::move(term));
        remaining -= w;
        if (out.terms.size() > max_terms) {
            throw InternalError("Birkhoff greedy exceeded (n-1)^2+1 terms");
        }
    }
    // Renormalize away the discarded sub-threshold mass.
    const double total = out.weight_sum();
    if (total <= 0.0) throw Error("matching_failure", "matrix has no mass to decompose");
    for (auto& t : out.terms) t.weight /= total;
    return out;
}

// ---------------------------------------------------------------------------
// Schur-Horn

SchurHornConstruction schur_horn_construct(const RealVector& lambda, const RealVector& mu) {
    const Eigen::Index n = lambda.size();
    if (n == 0 || mu.size() != n) throw Error("dimension_mismatch", "schur_horn_unitary: dimensions differ");
    if (const auto k = first_violated_prefix(lambda, mu)) {
        throw Error("not_majorized", "lambda does not majorize mu: prefix sum k=" + std::to_string(*k) + " fails");
    }

    auto desc_order = [](const RealVector& v) {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });
        return order;
    };
    const auto sigma = desc_order(lambda);
    const auto tau = desc_order(mu);

    RealVector y(n), x(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        y(k) = lambda(sigma[static_cast<std::size_t>(k)]);
        x(k) = mu(tau[static_cast<std::size_t>(k)]);
    }

    const double eps = 1e-15 * std::max(1.0, y.cwiseAbs().maxCoeff()) * static_cast<double>(n);
    RealMatrix v0 = RealMatrix::Identity(n, n);
    std::size_t rotations = 0;
    for (Eigen::Index step = 0; step < n; ++step) {
        Eigen::Index i = 0;
        while (i < n && !(y(i) > x(i) + eps)) ++i;
        if (i == n) break;
        Eigen::Index j = i + 1;
        while (j < n && !(y(j) < x(j) - eps)) ++j;
        if (j == n) break;  // leftover is round-off; the final check decides

        const double up = y(i) - x(i);
        const double down = x(j) - y(j);
        const double delta = std::min(up, down);
        const double s2 = delta / (y(i) - y(j));
        const double s = std::sqrt(s2);
        const double c = std::sqrt(std::max(0.0, 1.0 - s2));

        // V0 <- G V0 with G = [[c, -s], [s, c]] on rows (i, j).
        const RealVector ri = v0.row(i), rj = v0.row(j);
        v0.row(i) = c * ri - s * rj;
        v0.row(j) = s * ri + c * rj;
        if (up <= down) {
            y(j) += up;
            y(i) = x(i);
        } else {
            y(i) -= down;
            y(j) = x(j);
        }
        ++rotations;
    }

    // W = Q^T V0 P with P e_sigma(a) = e_a and Q e_tau(b) = e_b.
    RealMatrix w = RealMatrix::Zero(n, n);
    for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index a = 0; a < n; ++a)
            w(tau[static_cast<std::size_t>(b)], sigma[static_cast<std::size_t>(a)]) = v0(b, a);

    const RealVector got = w.cwiseAbs2() * lambda;
    const double err = (got - mu).cwiseAbs().maxCoeff();
    if (err > 1e-9 * std::max(1.0, lambda.cwiseAbs().maxCoeff())) {
        throw InternalError("Schur-Horn construction missed its target by " + std::to_string(err));
    }
    return {w.cast<Complex>(), rotations};
}

ComplexMatrix schur_horn_unitary(const RealVector& lambda, const RealVector& mu) {
    return schur_horn_construct(lambda, mu).unitary;
}

ComplexMatrix schur_horn_unitary(const ProbabilityVector& lambda, const ProbabilityVector& mu) {
    return schur_horn_construct(lambda.values(), mu.values()).unitary;
}

}  // namespace thermo
