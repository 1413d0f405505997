// energy.hpp: exact energy labels and Hamiltonians.
//
// A label (a, w) stands for the energy a*eps - ln(w)/beta, so its Boltzmann
// factor is w * exp(-beta*eps*a). Labels add as (a1 + a2, w1 * w2) and are
// compared exactly; degeneracy is never decided by floating point.

#pragma once

#include "thermo/linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace thermo {

using Rational = boost::multiprecision::cpp_rational;

Rational parse_rational(const std::string& text);  // "p/q", "p" or a finite decimal
std::string format_rational(const Rational& r);
double to_double(const Rational& r);

struct EnergyLabel {
    Rational quantum_mult{0};
    Rational weight_factor{1};

    EnergyLabel() = default;
    EnergyLabel(Rational a, Rational w);

    EnergyLabel operator+(const EnergyLabel& o) const {
        return {quantum_mult + o.quantum_mult, weight_factor * o.weight_factor};
    }
    bool operator==(const EnergyLabel& o) const = default;
    bool operator<(const EnergyLabel& o) const {
        if (quantum_mult != o.quantum_mult) return quantum_mult < o.quantum_mult;
        return weight_factor < o.weight_factor;
    }
};

class Hamiltonian {
public:
    Hamiltonian(std::vector<EnergyLabel> levels, double beta, double quantum = 1.0);

    static Hamiltonian trivial(std::size_t n, double beta = 1.0);
    static Hamiltonian qubit(double delta_e, double beta);
    // Truncated oscillator: levels 0, dE, ..., (m-1) dE.
    static Hamiltonian oscillator(std::size_t m, double delta_e, double beta);
    // Levels with a = 0 and the given Boltzmann weight factors.
    static Hamiltonian from_weights(const std::vector<Rational>& weights, double beta = 1.0);

    std::size_t dim() const noexcept { return levels_.size(); }
    const std::vector<EnergyLabel>& levels() const noexcept { return levels_; }
    const EnergyLabel& level(std::size_t i) const { return levels_.at(i); }
    double beta() const noexcept { return beta_; }
    double quantum() const noexcept { return quantum_; }

    double energy(std::size_t i) const;
    std::vector<double> energies() const;
    bool uses_quantum() const;

private:
    std::vector<EnergyLabel> levels_;
    double beta_;
    double quantum_;
};

// H_A (x) 1 + 1 (x) H_B with the joint index a*dim(B) + b.
Hamiltonian tensor_sum(const Hamiltonian& a, const Hamiltonian& b);
Hamiltonian copies(const Hamiltonian& h, std::size_t k);

// Gibbs distribution; rejected when the Boltzmann factors span more than
// exp(700) and would underflow.
ProbabilityVector gibbs_vector(const Hamiltonian& h);

// Indices grouped by exactly equal label, groups ordered by first index.
std::vector<std::vector<std::size_t>> degeneracy_groups(const Hamiltonian& h);

}  // namespace thermo
