#include "thermo/energy.hpp"

#include "thermo/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace thermo {

namespace {

// Decimal only: cpp_int would read a leading zero as octal.
boost::multiprecision::cpp_int parse_integer(const std::string& s, const std::string& context) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) negative = s[i++] == '-';
    if (i == s.size()) throw Error("invalid_rational", "cannot parse rational '" + context + "'");
    boost::multiprecision::cpp_int v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw Error("invalid_rational", "cannot parse rational '" + context + "'");
        v = v * 10 + (s[i] - '0');
    }
    return negative ? boost::multiprecision::cpp_int(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw Error("invalid_rational", "empty rational");
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const auto den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw Error("invalid_rational", "zero denominator in '" + text + "'");
        return Rational(parse_integer(s.substr(0, slash), text), den);
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+") throw Error("invalid_rational", "cannot parse rational '" + text + "'");
        boost::multiprecision::cpp_int den = 1;
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        return Rational(parse_integer(digits, text), den);
    }
    return Rational(parse_integer(s, text));
}

std::string format_rational(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

EnergyLabel::EnergyLabel(Rational a, Rational w) : quantum_mult(std::move(a)), weight_factor(std::move(w)) {
    if (weight_factor <= 0) throw Error("invalid_hamiltonian", "weight factor must be positive");
}

Hamiltonian::Hamiltonian(std::vector<EnergyLabel> levels, double beta, double quantum)
    : levels_(std::move(levels)), beta_(beta), quantum_(quantum) {
    if (levels_.empty()) throw Error("invalid_hamiltonian", "Hamiltonian needs at least one level");
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw Error("invalid_hamiltonian", "beta must be positive and finite");
    if (!(quantum_ > 0.0) || !std::isfinite(quantum_)) throw Error("invalid_hamiltonian", "quantum must be positive and finite");
    for (const auto& l : levels_)
        if (l.weight_factor <= 0) throw Error("invalid_hamiltonian", "weight factor must be positive");
}

Hamiltonian Hamiltonian::trivial(std::size_t n, double beta) {
    return Hamiltonian(std::vector<EnergyLabel>(n), beta);
}

Hamiltonian Hamiltonian::qubit(double delta_e, double beta) { return oscillator(2, delta_e, beta); }

Hamiltonian Hamiltonian::oscillator(std::size_t m, double delta_e, double beta) {
    std::vector<EnergyLabel> levels;
    for (std::size_t k = 0; k < m; ++k) levels.emplace_back(Rational(k), Rational(1));
    return Hamiltonian(std::move(levels), beta, delta_e);
}

Hamiltonian Hamiltonian::from_weights(const std::vector<Rational>& weights, double beta) {
    std::vector<EnergyLabel> levels;
    for (const auto& w : weights) levels.emplace_back(Rational(0), w);
    return Hamiltonian(std::move(levels), beta);
}

double Hamiltonian::energy(std::size_t i) const {
    const EnergyLabel& l = levels_.at(i);
    return to_double(l.quantum_mult) * quantum_ - std::log(to_double(l.weight_factor)) / beta_;
}

std::vector<double> Hamiltonian::energies() const {
    std::vector<double> e(levels_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = energy(i);
    return e;
}

bool Hamiltonian::uses_quantum() const {
    return std::any_of(levels_.begin(), levels_.end(), [](const EnergyLabel& l) { return l.quantum_mult != 0; });
}

Hamiltonian tensor_sum(const Hamiltonian& a, const Hamiltonian& b) {
    if (a.beta() != b.beta()) throw Error("incompatible_hamiltonians", "system and bath must share beta");
    if (a.uses_quantum() && b.uses_quantum() && a.quantum() != b.quantum()) {
        throw Error("incompatible_hamiltonians", "both Hamiltonians use the base quantum but with different values");
    }
    const double quantum = a.uses_quantum() ? a.quantum() : b.quantum();
    std::vector<EnergyLabel> levels;
    levels.reserve(a.dim() * b.dim());
    for (const auto& la : a.levels())
        for (const auto& lb : b.levels()) levels.push_back(la + lb);
    return Hamiltonian(std::move(levels), a.beta(), quantum);
}

Hamiltonian copies(const Hamiltonian& h, std::size_t k) {
    if (k == 0) return Hamiltonian::trivial(1, h.beta());
    Hamiltonian out = h;
    for (std::size_t i = 1; i < k; ++i) out = tensor_sum(out, h);
    return out;
}

ProbabilityVector gibbs_vector(const Hamiltonian& h) {
    const std::size_t n = h.dim();
    RealVector logw(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) logw(static_cast<Eigen::Index>(i)) = -h.beta() * h.energy(i);
    const double hi = logw.maxCoeff();
    const double lo = logw.minCoeff();
    if (!std::isfinite(hi) || !std::isfinite(lo) || hi - lo > 700.0) {
        throw Error("gibbs_range", "beta*E spread " + std::to_string(hi - lo) + " exceeds 700; Gibbs weights would underflow");
    }
    return ProbabilityVector::normalized((logw.array() - hi).exp().matrix());
}

std::vector<std::vector<std::size_t>> degeneracy_groups(const Hamiltonian& h) {
    std::map<EnergyLabel, std::size_t> slot;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < h.dim(); ++i) {
        auto [it, inserted] = slot.try_emplace(h.level(i), groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(i);
    }
    return groups;
}

}  // namespace thermo
