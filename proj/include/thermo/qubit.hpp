// qubit.hpp: closed-form qubit thermodynamics with finite baths.
//
// Units: k_B = 1, so temperatures are in energy units and T = 1/beta.

#pragma once

#include "thermo/energy.hpp"
#include "thermo/majorization.hpp"

#include <vector>

namespace thermo {

struct QubitGibbs {
    double delta_e = 1.0;
    double beta = 1.0;
    ProbabilityVector gamma{1.0, 0.0};

    double ratio() const { return gamma[1] / gamma[0]; }  // exp(-beta dE)
};

QubitGibbs make_qubit_gibbs(double delta_e, double beta);

// [[1 - a, a g1/g2], [a, 1 - a g1/g2]] for 0 <= a <= g2/g1.
StochasticMatrix d_alpha(double alpha, const QubitGibbs& qg);

// Extreme thermomajorized state (1 - r p1, r p1), r = g2/g1.
ProbabilityVector p_star(const ProbabilityVector& p, const QubitGibbs& qg);

// 1 - (1 - x) / (1 - x^m), x = exp(-beta dE).
double alpha_max_oscillator(std::size_t m, double beta_delta_e);

struct BathSpectrumSummary {
    std::size_t dim = 0;
    double e_min = 0.0;
    double e_max = 0.0;
    std::size_t g_max = 0;     // degeneracy of the top level
    double gamma_max = 0.0;    // occupation of one top-level state
    double free_energy = 0.0;  // at the Hamiltonian's own beta
    bool matching_closure = false;
    bool degeneracy_monotone = false;  // g_E <= g_{E+dE} wherever both exist
    std::vector<double> energies;
};

// Closure and monotonicity are evaluated on exact labels, with the system
// gap given as the label step.
BathSpectrumSummary summarize_bath(const Hamiltonian& ham_b, const EnergyLabel& gap);

struct AlphaBound {
    double bound = 0.0;
    bool tight = false;
};

// exp(-beta dE) (1 - g_max gamma_max); tight iff closure and monotonicity.
AlphaBound alpha_bound_general(const BathSpectrumSummary& summary, const QubitGibbs& qg);

// Channel output from input (1, 0) determines the D_alpha parameter.
double extract_alpha(const ProbabilityVector& p_prime);

struct ThirdLawBounds {
    double free_energy_bound = 0.0;  // T dE / (E_max - F_B)
    double coarse_bound = 0.0;       // T dE / (E_max - E_min + T ln n)
};

// Returns +infinity for both when the bath has a single level.
ThirdLawBounds third_law_bounds(double temperature, double delta_e, const BathSpectrumSummary& summary);

// Final temperature when the excited state (0, 1) is mapped by D_alpha:
// beta' = -ln(exp(-beta dE)/alpha - 1)/dE. Rejects alpha below the
// population-inversion threshold exp(-beta dE)/2.
double temperature_from_alpha(double alpha, double beta, double delta_e);

// Optimal final temperature with an m-level oscillator bath:
// dE / ln[(e^{m b dE} - e^{b dE}) / (e^{b dE} - 1)].
double oscillator_final_temperature(std::size_t m, double beta, double delta_e);

}  // namespace thermo
