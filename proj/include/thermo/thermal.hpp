// thermal.hpp: thermal operations with finite baths.
//
// The joint basis |a,b> (index a*dim(B) + b) splits into blocks of exactly
// equal total energy label. Classical operations are permutations acting
// inside every block; quantum ones are block-diagonal unitaries.

#pragma once

#include "thermo/energy.hpp"
#include "thermo/hull.hpp"
#include "thermo/majorization.hpp"
#include "thermo/noisy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace thermo {

struct ThermalSetup {
    Hamiltonian ham_a;
    Hamiltonian ham_b;
    ProbabilityVector gamma_b;
    std::vector<std::vector<std::size_t>> blocks;  // sorted members, ordered by first member
    std::vector<std::size_t> block_of;
    std::vector<std::string> warnings;

    std::size_t dim_a() const { return ham_a.dim(); }
    std::size_t dim_b() const { return ham_b.dim(); }
    std::size_t joint_dim() const { return dim_a() * dim_b(); }
    std::vector<std::size_t> block_sizes() const;
};

ThermalSetup build_setup(const Hamiltonian& ham_a, const Hamiltonian& ham_b);

// log10 of prod_i |S_i|!
double log10_classical_count(const ThermalSetup& setup);

bool is_block_respecting(const ThermalSetup& setup, const Permutation& perm);

struct EnumerationOptions {
    std::size_t cap = 1'000'000;
    bool allow_sampling = true;
    std::size_t samples = 10'000;
    std::uint64_t seed = 0;
};

struct ClassicalEnumeration {
    std::vector<Permutation> perms;  // identity first
    bool sampled = false;
};

// Exhaustive when prod |S_i|! <= cap, otherwise uniform per-block sampling
// (if allowed) with the identity always included.
ClassicalEnumeration enumerate_classical(const ThermalSetup& setup, const EnumerationOptions& opts = {});

// Tr_B[pi (p (x) gamma_B) pi^dag] for a joint permutation pi.
ProbabilityVector classical_output(const ProbabilityVector& p, const ThermalSetup& setup, const Permutation& perm);

struct ReachableSet {
    ProbabilityVector p;
    ThermalSetup setup;
    std::vector<ProbabilityVector> points;  // lexicographically sorted
    std::vector<Permutation> witnesses;     // one energy-preserving permutation per point
    Hull hull;                               // vertex indices into points
    bool sampled = false;

    std::vector<RealVector> coordinates() const;
    std::vector<std::size_t> hull_vertices() const { return hull.vertices; }
};

// Exact T_C by Minkowski summation of per-block contributions (OpenMP).
// Falls back to sampled enumeration when the point set exceeds max_points.
ReachableSet classical_reachable_set(const ProbabilityVector& p, const ThermalSetup& setup,
                                     const EnumerationOptions& opts = {}, std::size_t max_points = 5'000'000);
// One output per enumerated permutation; the reference implementation.
ReachableSet classical_reachable_set_serial(const ProbabilityVector& p, const ThermalSetup& setup,
                                            const EnumerationOptions& opts = {});

struct ConvexCombination {
    std::vector<PermutationTerm> terms;

    double weight_sum() const;
    void validate(std::size_t dim) const;
};

ProbabilityVector classical_mixture_output(const ProbabilityVector& p, const ThermalSetup& setup,
                                           const ConvexCombination& mix);

// Subset S of system indices: every member of an exact-degeneracy group
// except the first. |S| = sum_i (d_i - 1).
std::vector<std::size_t> degenerate_subset(const Hamiltonian& ham_a);

// U = sum_{i not in S} |i><i| (x) 1 + sum_j |s_j><s_j| (x) pi^j on A (x) C
// with dim C = |S| + 1 and C maximally mixed.
NoisyRealization thermal_decoherence_gadget(const Hamiltonian& ham_a, const std::vector<std::size_t>& subset);

struct Synthesis {
    ComplexMatrix unitary;                   // block-diagonal on A (x) B
    std::optional<NoisyRealization> gadget;  // present when ham_a is degenerate
    ProbabilityVector target;
    double error = 0.0;                      // max-norm distance of the final state to target

    DensityMatrix apply(const DensityMatrix& rho_a, const ThermalSetup& setup) const;
};

Synthesis synthesize_unitary(const ProbabilityVector& p, const ConvexCombination& target, const ThermalSetup& setup);

enum class Coupling { automatic, product, staircase };

// Blockwise |U|^2 -> Birkhoff -> joint mixture. Product weights multiply the
// per-block term counts; staircase keeps at most sum of them.
ConvexCombination decompose_channel_to_classical(const ComplexMatrix& u, const ThermalSetup& setup,
                                                 Coupling coupling = Coupling::automatic);

// Largest |U_xy| with x, y in different blocks.
double off_block_mass(const ComplexMatrix& u, const ThermalSetup& setup);

struct MembershipResult {
    Location location = Location::exterior;
    double margin = 0.0;
    ConvexCombination combination;  // over witness permutations when a member
};

MembershipResult hull_membership(const ProbabilityVector& p_prime, const ReachableSet& rset,
                                 double tol = kMembershipTol);

enum class BathFamily { copies, oscillator };

struct Realization {
    Hamiltonian bath;
    std::string bath_description;
    ThermalSetup setup;
    Synthesis synthesis;
    ConvexCombination combination;
};

// Grows the bath along the family until p_prime is in conv T_C, then
// synthesizes. Gives up (nullopt) once the bath dimension would exceed
// max_bath_dim.
std::optional<Realization> realize_interior(const ProbabilityVector& p, const Hamiltonian& ham_a,
                                            const ProbabilityVector& p_prime, BathFamily family,
                                            std::size_t max_bath_dim);

}  // namespace thermo
