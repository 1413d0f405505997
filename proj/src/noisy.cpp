#include "thermo/noisy.hpp"

#include "thermo/error.hpp"
#include "thermo/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace thermo {

DensityMatrix NoisyRealization::apply(const DensityMatrix& rho) const {
    if (rho.dim() != system_dim) throw Error("dimension_mismatch", "noisy realization: input dimension mismatch");
    return apply_channel(unitary, rho, DensityMatrix::maximally_mixed(bath_dim));
}

ProbabilityVector NoisyRealization::apply_diagonal(const ProbabilityVector& p) const {
    return ProbabilityVector::normalized(apply(DensityMatrix::diagonal(p)).diagonal_values());
}

NoisyRealization decoherence_gadget(std::size_t n) {
    if (n == 0) throw Error("dimension_mismatch", "decoherence gadget needs n >= 1");
    const auto k = static_cast<Eigen::Index>(n);
    ComplexMatrix w = ComplexMatrix::Zero(k * k, k * k);
    for (Eigen::Index a = 0; a < k; ++a) w.block(a * k, a * k, k, k) = cyclic_shift(n, static_cast<long>(a) + 1);
    return {n, n, std::move(w)};
}

NoisyRealization horn_transition_unitary(const ProbabilityVector& p, const ProbabilityVector& p_prime) {
    if (p.dim() != p_prime.dim()) throw Error("dimension_mismatch", "horn_transition_unitary: dimensions differ");
    const std::size_t n = p.dim();
    const ComplexMatrix v = schur_horn_unitary(p, p_prime);
    NoisyRealization out = decoherence_gadget(n);
    out.unitary = out.unitary * tensor(v, identity(n));

    const ComplexMatrix got = out.apply(DensityMatrix::diagonal(p)).matrix();
    const double err = max_abs(got - diagonal_matrix(p_prime.values()));
    if (err > 1e-9) throw InternalError("horn transition misses target by " + std::to_string(err));
    return out;
}

RealVector marginal_of_sorted_spectrum(const DensityMatrix& rho_ab, std::size_t dim_a, std::size_t dim_b) {
    if (rho_ab.dim() != dim_a * dim_b) throw Error("dimension_mismatch", "joint state dimension is not dimA*dimB");
    const SortedSpectrum spec = spectrum_sorted(rho_ab);
    RealVector marginal = RealVector::Zero(static_cast<Eigen::Index>(dim_a));
    for (std::size_t a = 0; a < dim_a; ++a)
        for (std::size_t b = 0; b < dim_b; ++b) marginal(static_cast<Eigen::Index>(a)) += spec.eigenvalues[a * dim_b + b];
    return marginal;
}

ComplexMatrix marginal_transition_unitary(const DensityMatrix& rho_ab, const DensityMatrix& sigma_a,
                                          std::size_t dim_a, std::size_t dim_b) {
    if (dim_a > dim_b) {
        throw Error("dimension_precondition", "marginal construction requires dimA <= dimB (got dimA=" +
                                                  std::to_string(dim_a) + ", dimB=" + std::to_string(dim_b) + ")");
    }
    if (rho_ab.dim() != dim_a * dim_b || sigma_a.dim() != dim_a) {
        throw Error("dimension_mismatch", "marginal_transition_unitary: state dimensions do not match dimA, dimB");
    }
    const SortedSpectrum rho_spec = spectrum_sorted(rho_ab);
    const SortedSpectrum sigma_spec = spectrum_sorted(sigma_a);
    RealVector marginal = RealVector::Zero(static_cast<Eigen::Index>(dim_a));
    for (std::size_t a = 0; a < dim_a; ++a)
        for (std::size_t b = 0; b < dim_b; ++b) marginal(static_cast<Eigen::Index>(a)) += rho_spec.eigenvalues[a * dim_b + b];

    if (const auto k = first_violated_prefix(marginal, sigma_spec.eigenvalues.values())) {
        throw Error("not_majorized", "Tr_B lambda(rho) does not majorize spec(sigma): prefix k=" + std::to_string(*k) + " fails");
    }
    const ComplexMatrix u_bar = schur_horn_unitary(marginal, sigma_spec.eigenvalues.values());

    // U0 = sum_ij u_ij |i><j| (x) pi^(j-i); cyclic pi has no fixed points for
    // 0 < |j-i| < dimB, which dimA <= dimB guarantees.
    const auto da = static_cast<Eigen::Index>(dim_a);
    const auto db = static_cast<Eigen::Index>(dim_b);
    ComplexMatrix u0 = ComplexMatrix::Zero(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            if (u_bar(i, j) != Complex(0.0)) u0.block(i * db, j * db, db, db) = u_bar(i, j) * cyclic_shift(dim_b, static_cast<long>(j - i));

    ComplexMatrix u = tensor(sigma_spec.vectors, identity(dim_b)) * u0 * rho_spec.vectors.adjoint();

    const ComplexMatrix reduced = partial_trace_b(u * rho_ab.matrix() * u.adjoint(), dim_a, dim_b);
    const double err = max_abs(reduced - sigma_a.matrix());
    if (err > 1e-8) throw InternalError("marginal construction misses sigma by " + std::to_string(err));
    return u;
}

RealMatrix induced_stochastic_map(const NoisyRealization& r) {
    const auto n = static_cast<Eigen::Index>(r.system_dim);
    const auto m = static_cast<Eigen::Index>(r.bath_dim);
    const RealMatrix sq = r.unitary.cwiseAbs2();
    RealMatrix d = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) d(i, k) = sq.block(i * m, k * m, m, m).sum() / static_cast<double>(m);
    return d;
}

std::optional<UnistochasticObstruction> single_overlap_certificate(const RealMatrix& d, double zero) {
    const Eigen::Index n = d.rows();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b) {
            Eigen::Index shared = -1;
            int count = 0;
            for (Eigen::Index j = 0; j < d.cols(); ++j) {
                if (d(a, j) > zero && d(b, j) > zero) {
                    shared = j;
                    ++count;
                }
            }
            if (count == 1) {
                return UnistochasticObstruction{static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                                                static_cast<std::size_t>(shared), std::sqrt(d(a, shared) * d(b, shared))};
            }
        }
    return std::nullopt;
}

NoisyWitness noisy_not_unistochastic_witness(std::size_t n) {
    if (n < 3) throw Error("dimension_precondition", "for n = 2 every bistochastic matrix is unistochastic; need n >= 3");
    const auto k = static_cast<Eigen::Index>(n);
    const double inv = 1.0 / static_cast<double>(n);
    RealMatrix d = (1.0 - inv) * RealMatrix::Identity(k, k) + inv * cyclic_shift(n, 1).real();

    // U = 1 (x) sum_{b>=1} |b><b| + pi (x) |0><0|
    Permutation joint(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) joint[a * n + b] = b == 0 ? ((a + 1) % n) * n : a * n + b;
    NoisyRealization real{n, n, permutation_matrix(joint)};

    auto cert = single_overlap_certificate(d);
    if (!cert) throw InternalError("witness support pattern lost its single-overlap rows");
    return {StochasticMatrix(d), std::move(real), *cert};
}

namespace {

std::size_t sample_output_rank(std::size_t n, std::size_t m, std::uint64_t seed, std::size_t trial) {
    Rng rng = make_rng(seed, trial);
    const ComplexMatrix u = haar_unitary(n * m, rng);
    const ComplexVector psi = random_pure_state(n, rng);
    const ComplexMatrix rho = psi * psi.adjoint();
    const ComplexMatrix joint = tensor(rho, identity(m) / static_cast<double>(m));
    const ComplexMatrix out = partial_trace_b(u * joint * u.adjoint(), n, m);
    return numerical_rank(out, kRankThreshold);
}

}  // namespace

std::size_t max_output_rank_bound_serial(std::size_t n, std::size_t m, std::size_t trials, std::uint64_t seed) {
    if (n == 0 || m == 0 || trials == 0) throw Error("invalid_argument", "max_output_rank_bound needs n, m, trials >= 1");
    std::size_t best = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t r = sample_output_rank(n, m, seed, t);
        if (r > m * m) throw InternalError("output rank " + std::to_string(r) + " exceeds m^2");
        best = std::max(best, r);
    }
    return best;
}

std::size_t max_output_rank_bound(std::size_t n, std::size_t m, std::size_t trials, std::uint64_t seed) {
    if (n == 0 || m == 0 || trials == 0) throw Error("invalid_argument", "max_output_rank_bound needs n, m, trials >= 1");
    std::size_t best = 0;
    std::atomic<bool> violated{false};
    const auto count = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic) reduction(max : best)
    for (long t = 0; t < count; ++t) {
        const std::size_t r = sample_output_rank(n, m, seed, static_cast<std::size_t>(t));
        if (r > m * m) violated = true;
        best = std::max(best, r);
    }
    if (violated) throw InternalError("output rank exceeds m^2");
    return best;
}

// ---------------------------------------------------------------------------
// Small-bath search

ComplexMatrix givens_unitary(std::size_t n, const RealVector& params) {
    const auto k = static_cast<Eigen::Index>(n);
    if (params.size() != k * k) throw Error("dimension_mismatch", "givens_unitary needs n^2 parameters");
    ComplexMatrix u = ComplexMatrix::Identity(k, k);
    Eigen::Index idx = 0;
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = a + 1; b < k; ++b) {
            const double theta = params(idx++);
            const double phi = params(idx++);
            const double c = std::cos(theta), s = std::sin(theta);
            const Complex e = std::polar(1.0, phi);
            const Eigen::RowVectorXcd ra = u.row(a), rb = u.row(b);
            u.row(a) = c * ra - std::conj(e) * s * rb;
            u.row(b) = e * s * ra + c * rb;
        }
    for (Eigen::Index a = 0; a < k; ++a) u.row(a) *= std::polar(1.0, params(idx++));
    return u;
}

SmallBathSearch search_small_bath_transition(const ProbabilityVector& p, const ProbabilityVector& p_prime,
                                             std::size_t bath_dim, std::uint64_t seed,
                                             std::size_t max_evaluations, double target_error) {
    if (p.dim() != p_prime.dim()) throw Error("dimension_mismatch", "search: dimensions differ");
    if (!majorizes(p, p_prime)) throw Error("not_majorized", "p does not majorize p'; no noisy operation exists");
    const std::size_t n = p.dim();
    const std::size_t dim = n * bath_dim;
    const auto pc = static_cast<Eigen::Index>(dim * dim);

    const ComplexMatrix joint = tensor(diagonal_matrix(p.values()), identity(bath_dim) / static_cast<double>(bath_dim));
    const ComplexMatrix target = diagonal_matrix(p_prime.values());
    auto residual = [&](const RealVector& x) {
        const ComplexMatrix u = givens_unitary(dim, x);
        return ComplexMatrix(partial_trace_b(u * joint * u.adjoint(), n, bath_dim) - target);
    };
    auto objective = [&](const RealVector& x) { return residual(x).squaredNorm(); };

    SmallBathSearch out;
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    RealVector best_x(pc);
    double best_f = INFINITY;

    while (out.evaluations < max_evaluations) {
        RealVector x(pc);
        for (Eigen::Index i = 0; i < pc; ++i) x(i) = angle(rng);
        double f = objective(x);
        ++out.evaluations;
        double step = 0.5;
        while (step > 1e-13 && out.evaluations < max_evaluations && f > 1e-26) {
            bool improved = false;
            for (Eigen::Index i = 0; i < pc; ++i) {
                for (double dir : {+1.0, -1.0}) {
                    x(i) += dir * step;
                    const double g = objective(x);
                    ++out.evaluations;
                    if (g < f) {
                        f = g;
                        improved = true;
                        break;
                    }
                    x(i) -= dir * step;
                }
            }
            if (!improved) step *= 0.5;
            if (max_abs(residual(x)) < target_error * 1e-2) break;
        }
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        if (max_abs(residual(best_x)) < target_error) break;
    }

    out.error = max_abs(residual(best_x));
    out.found = out.error < target_error;
    out.realization = {n, bath_dim, givens_unitary(dim, best_x)};
    return out;
}

}  // namespace thermo
