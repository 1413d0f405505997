#include "thermo/random.hpp"

#include <cmath>

namespace thermo {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x7468726du};
    return Rng(seq);
}

ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto k = static_cast<Eigen::Index>(n);
    ComplexMatrix z(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < k; ++i) z(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < k; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

ProbabilityVector random_probability(std::size_t n, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    RealVector w(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = expo(rng);
    return ProbabilityVector::normalized(w);
}

ComplexVector random_pure_state(std::size_t n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
    return v / v.norm();
}

DensityMatrix random_density(std::size_t n, Rng& rng) {
    const ComplexMatrix u = haar_unitary(n, rng);
    const ProbabilityVector p = random_probability(n, rng);
    ComplexMatrix rho = u * diagonal_matrix(p.values()) * u.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return DensityMatrix(rho);
}

}  // namespace thermo
