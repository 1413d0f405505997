#include "thermo/qubit.hpp"

#include "thermo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace thermo {

QubitGibbs make_qubit_gibbs(double delta_e, double beta) {
    if (!(delta_e > 0.0) || !(beta > 0.0)) throw Error("invalid_argument", "qubit needs dE > 0 and beta > 0");
    const double x = std::exp(-beta * delta_e);
    return {delta_e, beta, ProbabilityVector{1.0 / (1.0 + x), x / (1.0 + x)}};
}

StochasticMatrix d_alpha(double alpha, const QubitGibbs& qg) {
    const double r = qg.ratio();
    if (alpha < 0.0 || alpha > r * (1.0 + 1e-12)) {
        throw Error("alpha_out_of_range", "require 0 <= alpha <= gamma2/gamma1 = " + std::to_string(r) + ", got " + std::to_string(alpha));
    }
    const double s = std::min(1.0, alpha / r);
    RealMatrix d(2, 2);
    d << 1.0 - alpha, s, alpha, 1.0 - s;
    return StochasticMatrix(d);
}

ProbabilityVector p_star(const ProbabilityVector& p, const QubitGibbs& qg) {
    if (p.dim() != 2) throw Error("dimension_mismatch", "p_star needs a qubit state");
    const double r = qg.ratio();
    return ProbabilityVector{1.0 - r * p[0], r * p[0]};
}

double alpha_max_oscillator(std::size_t m, double beta_delta_e) {
    if (m < 2) throw Error("invalid_argument", "oscillator bath needs m >= 2");
    if (!(beta_delta_e > 0.0)) throw Error("invalid_argument", "beta*dE must be positive");
    // 1 - (1-x)/(1-x^m) = (x - x^m)/(1 - x^m)
    const double x = std::exp(-beta_delta_e);
    const double xm = std::exp(-static_cast<double>(m) * beta_delta_e);
    return (x - xm) / -std::expm1(-static_cast<double>(m) * beta_delta_e);
}

BathSpectrumSummary summarize_bath(const Hamiltonian& ham_b, const EnergyLabel& gap) {
    BathSpectrumSummary s;
    s.dim = ham_b.dim();
    s.energies = ham_b.energies();
    const auto [lo, hi] = std::minmax_element(s.energies.begin(), s.energies.end());
    s.e_min = *lo;
    s.e_max = *hi;
    const EnergyLabel top = ham_b.level(static_cast<std::size_t>(hi - s.energies.begin()));

    std::map<EnergyLabel, std::size_t> degeneracy;
    for (const auto& l : ham_b.levels()) ++degeneracy[l];
    s.g_max = degeneracy[top];

    double z = 0.0;
    for (double e : s.energies) z += std::exp(-ham_b.beta() * (e - s.e_min));
    s.gamma_max = std::exp(-ham_b.beta() * (s.e_max - s.e_min)) / z;
    s.free_energy = s.e_min - std::log(z) / ham_b.beta();

    s.matching_closure = true;
    s.degeneracy_monotone = true;
    for (const auto& [label, g] : degeneracy) {
        const auto up = degeneracy.find(label + gap);
        if (up == degeneracy.end()) {
            if (!(label == top)) s.matching_closure = false;
            continue;
        }
        if (g > up->second) s.degeneracy_monotone = false;
    }
    return s;
}

AlphaBound alpha_bound_general(const BathSpectrumSummary& summary, const QubitGibbs& qg) {
    return {qg.ratio() * (1.0 - static_cast<double>(summary.g_max) * summary.gamma_max),
            summary.matching_closure && summary.degeneracy_monotone};
}

double extract_alpha(const ProbabilityVector& p_prime) {
    if (p_prime.dim() != 2) throw Error("dimension_mismatch", "extract_alpha needs a qubit state");
    return p_prime[1];
}

ThirdLawBounds third_law_bounds(double temperature, double delta_e, const BathSpectrumSummary& summary) {
    if (!(temperature > 0.0) || !(delta_e > 0.0)) throw Error("invalid_argument", "third-law bounds need T > 0 and dE > 0");
    if (summary.dim <= 1) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    double z = 0.0;
    for (double e : summary.energies) z += std::exp(-(e - summary.e_min) / temperature);
    const double free_energy = summary.e_min - temperature * std::log(z);
    const double n = static_cast<double>(summary.dim);
    return {temperature * delta_e / (summary.e_max - free_energy),
            temperature * delta_e / (summary.e_max - summary.e_min + temperature * std::log(n))};
}

double temperature_from_alpha(double alpha, double beta, double delta_e) {
    const double x = std::exp(-beta * delta_e);
    if (alpha < 0.5 * x) {
        throw Error("population_inversion", "alpha " + std::to_string(alpha) + " < exp(-beta dE)/2 leaves the qubit inverted");
    }
    if (alpha > x * (1.0 + 1e-12)) throw Error("alpha_out_of_range", "alpha exceeds exp(-beta dE)");
    const double ratio = x / alpha - 1.0;
    if (ratio <= 0.0) return 0.0;
    return -delta_e / std::log(ratio);
}

double oscillator_final_temperature(std::size_t m, double beta, double delta_e) {
    if (m < 2) throw Error("invalid_argument", "oscillator bath needs m >= 2");
    if (!(beta > 0.0) || !(delta_e > 0.0)) throw Error("invalid_argument", "need beta > 0 and dE > 0");
    const double b = beta * delta_e;
    const double md = static_cast<double>(m);
    // ln(e^{mb} - e^{b}) - ln(e^{b} - 1), kept finite for large m b
    const double log_ratio = (md * b + std::log1p(-std::exp((1.0 - md) * b))) - (b + std::log1p(-std::exp(-b)));
    return delta_e / log_ratio;
}

}  // namespace thermo
