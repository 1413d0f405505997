// helpers.hpp: shared fixtures for the test binaries.

#pragma once

#include "thermo/random.hpp"
#include "thermo/thermal.hpp"

namespace thermo::fixtures {

// Haar-random unitary on each energy block, zero elsewhere.
inline ComplexMatrix random_block_unitary(const ThermalSetup& s, Rng& rng) {
    const auto n = static_cast<Eigen::Index>(s.joint_dim());
    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (const auto& b : s.blocks) {
        const ComplexMatrix ub = haar_unitary(b.size(), rng);
        for (std::size_t r = 0; r < b.size(); ++r)
            for (std::size_t c = 0; c < b.size(); ++c)
                u(static_cast<Eigen::Index>(b[r]), static_cast<Eigen::Index>(b[c])) = ub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    return u;
}

inline bool block_diagonal_exact(const ComplexMatrix& u, const ThermalSetup& s) {
    for (Eigen::Index r = 0; r < u.rows(); ++r)
        for (Eigen::Index c = 0; c < u.cols(); ++c)
            if (s.block_of[static_cast<std::size_t>(r)] != s.block_of[static_cast<std::size_t>(c)] && u(r, c) != Complex(0.0)) return false;
    return true;
}

inline Hamiltonian fig4_system() { return Hamiltonian::from_weights({Rational(5, 20), Rational(7, 20), Rational(8, 20)}); }

}  // namespace thermo::fixtures
