// noisy.hpp: noisy operations with small auxiliary systems.
//
// A noisy operation on an n-level system is rho -> Tr_B[U (rho (x) 1/m) U^dag]
// for a unitary U on the joint space and an m-level maximally mixed bath.

#pragma once

#include "thermo/linalg.hpp"
#include "thermo/majorization.hpp"

#include <cstdint>
#include <optional>

namespace thermo {

struct NoisyRealization {
    std::size_t system_dim = 0;
    std::size_t bath_dim = 0;
    ComplexMatrix unitary;

    DensityMatrix apply(const DensityMatrix& rho) const;
    ProbabilityVector apply_diagonal(const ProbabilityVector& p) const;
};

// W = sum_k |k><k| (x) pi^(k+1) with bath dim n: kills every off-diagonal
// entry and keeps the diagonal.
NoisyRealization decoherence_gadget(std::size_t n);

// U = W (V (x) 1), V a Schur-Horn unitary taking diag(p) to diagonal p'.
NoisyRealization horn_transition_unitary(const ProbabilityVector& p, const ProbabilityVector& p_prime);

// Global unitary U with Tr_B(U rho U^dag) = sigma, for dimA <= dimB and
// Tr_B diag(lambda(rho)) majorizing spec(sigma).
ComplexMatrix marginal_transition_unitary(const DensityMatrix& rho_ab, const DensityMatrix& sigma_a,
                                          std::size_t dim_a, std::size_t dim_b);

// Sorted non-increasing spectrum of rho_ab placed on the joint diagonal and
// summed over B.
RealVector marginal_of_sorted_spectrum(const DensityMatrix& rho_ab, std::size_t dim_a, std::size_t dim_b);

// The stochastic map D_ik = (1/m) <i|Tr_B[U(|k><k| (x) 1)U^dag]|i> realized
// on diagonal inputs.
RealMatrix induced_stochastic_map(const NoisyRealization& r);

// Two rows whose supports share exactly one column: any unitary with
// |U_ij|^2 = D_ij would need those rows to have a single nonzero overlap
// term, so D is not unistochastic.
struct UnistochasticObstruction {
    std::size_t row_a = 0;
    std::size_t row_b = 0;
    std::size_t column = 0;
    double overlap_magnitude = 0.0;  // sqrt(D[row_a,col] D[row_b,col])
};
std::optional<UnistochasticObstruction> single_overlap_certificate(const RealMatrix& d, double zero = 0.0);

struct NoisyWitness {
    StochasticMatrix d;
    NoisyRealization realization;
    UnistochasticObstruction certificate;
};

// D = (1 - 1/n) 1 + (1/n) pi: bistochastic, realized with an n-level bath,
// not unistochastic. Requires n >= 3.
NoisyWitness noisy_not_unistochastic_witness(std::size_t n);

// Largest rank (eigenvalues > 1e-9) of Tr_B[U(|psi><psi| (x) 1/m)U^dag]
// over seeded random U and psi. Every sample is checked against m^2.
std::size_t max_output_rank_bound(std::size_t n, std::size_t m, std::size_t trials, std::uint64_t seed);
std::size_t max_output_rank_bound_serial(std::size_t n, std::size_t m, std::size_t trials, std::uint64_t seed);

inline constexpr double kRankThreshold = 1e-9;

// Randomized local search for a bath-m unitary taking diag(p) to diag(p').
// Success is declared when the max-norm error drops below target_error.
// A miss means "not found", never "impossible".
struct SmallBathSearch {
    bool found = false;
    double error = 0.0;
    std::size_t evaluations = 0;
    NoisyRealization realization;
};
SmallBathSearch search_small_bath_transition(const ProbabilityVector& p, const ProbabilityVector& p_prime,
                                             std::size_t bath_dim, std::uint64_t seed,
                                             std::size_t max_evaluations = 2'000'000,
                                             double target_error = 1e-6);

// Complex Givens parameterization of U(N): N(N-1) angles/phases for the
// planar factors followed by N diagonal phases.
ComplexMatrix givens_unitary(std::size_t n, const RealVector& params);

}  // namespace thermo
