#include "thermo/thermal.hpp"

#include "thermo/error.hpp"
#include "thermo/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>

namespace thermo {

std::vector<std::size_t> ThermalSetup::block_sizes() const {
    std::vector<std::size_t> s;
    s.reserve(blocks.size());
    for (const auto& b : blocks) s.push_back(b.size());
    return s;
}

ThermalSetup build_setup(const Hamiltonian& ham_a, const Hamiltonian& ham_b) {
    const Hamiltonian joint = tensor_sum(ham_a, ham_b);
    ThermalSetup s{ham_a, ham_b, gibbs_vector(ham_b), degeneracy_groups(joint), {}, {}};
    s.block_of.assign(joint.dim(), 0);
    for (std::size_t i = 0; i < s.blocks.size(); ++i)
        for (std::size_t x : s.blocks[i]) s.block_of[x] = i;

    // Distinct labels whose real energies nearly coincide.
    std::vector<std::pair<double, std::size_t>> e;
    for (std::size_t i = 0; i < s.blocks.size(); ++i) e.emplace_back(joint.energy(s.blocks[i].front()), i);
    std::sort(e.begin(), e.end());
    for (std::size_t i = 1; i < e.size(); ++i) {
        if (std::abs(e[i].first - e[i - 1].first) < 1e-12) {
            std::ostringstream msg;
            msg << "blocks " << e[i - 1].second << " and " << e[i].second << " have distinct labels but energies within 1e-12 ("
                << e[i].first << "); kept separate";
            s.warnings.push_back(msg.str());
        }
    }
    return s;
}

double log10_classical_count(const ThermalSetup& setup) {
    double total = 0.0;
    for (const auto& b : setup.blocks) total += std::lgamma(static_cast<double>(b.size()) + 1.0) / std::log(10.0);
    return total;
}

bool is_block_respecting(const ThermalSetup& setup, const Permutation& perm) {
    if (perm.size() != setup.joint_dim() || !is_permutation(perm)) return false;
    for (std::size_t x = 0; x < perm.size(); ++x)
        if (setup.block_of[perm[x]] != setup.block_of[x]) return false;
    return true;
}

namespace {

Permutation identity_perm(std::size_t n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// Writes local permutation sigma (positions within block) into the joint one.
void place_local(Permutation& joint, const std::vector<std::size_t>& block, const std::vector<std::size_t>& sigma) {
    for (std::size_t t = 0; t < block.size(); ++t) joint[block[t]] = block[sigma[t]];
}

}  // namespace

ClassicalEnumeration enumerate_classical(const ThermalSetup& setup, const EnumerationOptions& opts) {
    ClassicalEnumeration out;
    const std::size_t n = setup.joint_dim();
    const double log_count = log10_classical_count(setup);

    if (log_count <= std::log10(static_cast<double>(opts.cap)) + 1e-12) {
        std::vector<std::vector<std::vector<std::size_t>>> local(setup.blocks.size());
        for (std::size_t i = 0; i < setup.blocks.size(); ++i) {
            std::vector<std::size_t> sigma = identity_perm(setup.blocks[i].size());
            do local[i].push_back(sigma);
            while (std::next_permutation(sigma.begin(), sigma.end()));
        }
        std::vector<std::size_t> counter(setup.blocks.size(), 0);
        while (true) {
            Permutation joint(n);
            for (std::size_t i = 0; i < setup.blocks.size(); ++i) place_local(joint, setup.blocks[i], local[i][counter[i]]);
            out.perms.push_back(std::move(joint));
            std::size_t i = 0;
            for (; i < counter.size(); ++i) {
                if (++counter[i] < local[i].size()) break;
                counter[i] = 0;
            }
            if (i == counter.size()) break;
        }
        return out;
    }

    if (!opts.allow_sampling) {
        throw Error("enumeration_cap", "10^" + std::to_string(log_count) + " energy-preserving permutations exceed the cap of " +
                                           std::to_string(opts.cap) + " and sampling is disabled");
    }
    out.sampled = true;
    out.perms.push_back(identity_perm(n));
    Rng rng = make_rng(opts.seed);
    for (std::size_t s = 1; s < opts.samples; ++s) {
        Permutation joint(n);
        for (const auto& block : setup.blocks) {
            std::vector<std::size_t> sigma = identity_perm(block.size());
            std::shuffle(sigma.begin(), sigma.end(), rng);
            place_local(joint, block, sigma);
        }
        out.perms.push_back(std::move(joint));
    }
    return out;
}

namespace {

RealVector joint_input(const ProbabilityVector& p, const ThermalSetup& setup) {
    if (p.dim() != setup.dim_a()) throw Error("dimension_mismatch", "state dimension does not match the system Hamiltonian");
    const std::size_t m = setup.dim_b();
    RealVector v(static_cast<Eigen::Index>(setup.joint_dim()));
    for (std::size_t a = 0; a < p.dim(); ++a)
        for (std::size_t b = 0; b < m; ++b) v(static_cast<Eigen::Index>(a * m + b)) = p[a] * setup.gamma_b[b];
    return v;
}

RealVector permuted_marginal(const RealVector& v, const Permutation& perm, std::size_t n, std::size_t m) {
    RealVector out = RealVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < perm.size(); ++x) out(static_cast<Eigen::Index>(perm[x] / m)) += v(static_cast<Eigen::Index>(x));
    return out;
}

bool lex_less(const RealVector& a, const RealVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return a(i) < b(i);
    return false;
}

ReachableSet finish_reachable(const ProbabilityVector& p, const ThermalSetup& setup, std::vector<RealVector> raw,
                              std::vector<Permutation> perms, bool sampled) {
    const std::vector<std::size_t> kept = deduplicate(raw);
    std::vector<std::size_t> order = kept;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(raw[a], raw[b]); });

    ReachableSet r{p, setup, {}, {}, {}, sampled};
    r.points.reserve(order.size());
    r.witnesses.reserve(order.size());
    std::vector<RealVector> pts;
    pts.reserve(order.size());
    for (std::size_t idx : order) {
        r.points.emplace_back(raw[idx]);
        r.witnesses.push_back(std::move(perms[idx]));
        pts.push_back(raw[idx]);
    }
    r.hull = convex_hull(pts);
    return r;
}

// Distinct outputs of one block: every way of sending its sources to target
// groups of equal system label.
struct BlockContributions {
    std::vector<RealVector> values;
    std::vector<std::vector<std::size_t>> sigma;  // local permutation per value
};

BlockContributions block_contributions(const std::vector<std::size_t>& block, const RealVector& v, std::size_t n,
                                       std::size_t m, std::size_t limit) {
    const std::size_t k = block.size();
    std::map<std::size_t, std::vector<std::size_t>> groups;  // system label -> target positions
    for (std::size_t t = 0; t < k; ++t) groups[block[t] / m].push_back(t);
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> g(groups.begin(), groups.end());

    BlockContributions out;
    std::vector<char> used(k, 0);
    std::vector<std::size_t> sigma(k);
    RealVector acc = RealVector::Zero(static_cast<Eigen::Index>(n));

    // Choose sources for group gi, slot si, starting at source index `from`.
    auto recurse = [&](auto&& self, std::size_t gi, std::size_t si, std::size_t from) -> void {
        if (out.values.size() > limit) return;
        if (gi == g.size()) {
            out.values.push_back(acc);
            out.sigma.push_back(sigma);
            return;
        }
        const auto& [label, targets] = g[gi];
        if (si == targets.size()) {
            self(self, gi + 1, 0, 0);
            return;
        }
        for (std::size_t src = from; src < k; ++src) {
            if (used[src]) continue;
            used[src] = 1;
            sigma[src] = targets[si];
            acc(static_cast<Eigen::Index>(label)) += v(static_cast<Eigen::Index>(block[src]));
            self(self, gi, si + 1, src + 1);
            acc(static_cast<Eigen::Index>(label)) -= v(static_cast<Eigen::Index>(block[src]));
            used[src] = 0;
        }
    };
    recurse(recurse, 0, 0, 0);
    if (out.values.size() > limit) return out;

    const std::vector<std::size_t> kept = deduplicate(out.values, 1e-14);
    BlockContributions unique;
    for (std::size_t idx : kept) {
        unique.values.push_back(out.values[idx]);
        unique.sigma.push_back(out.sigma[idx]);
    }
    return unique;
}

}  // namespace

ProbabilityVector classical_output(const ProbabilityVector& p, const ThermalSetup& setup, const Permutation& perm) {
    if (!is_block_respecting(setup, perm)) throw Error("not_block_respecting", "permutation mixes energy blocks");
    return ProbabilityVector::normalized(permuted_marginal(joint_input(p, setup), perm, setup.dim_a(), setup.dim_b()));
}

ReachableSet classical_reachable_set_serial(const ProbabilityVector& p, const ThermalSetup& setup,
                                            const EnumerationOptions& opts) {
    const RealVector v = joint_input(p, setup);
    ClassicalEnumeration en = enumerate_classical(setup, opts);
    std::vector<RealVector> raw;
    raw.reserve(en.perms.size());
    for (const auto& perm : en.perms) raw.push_back(permuted_marginal(v, perm, setup.dim_a(), setup.dim_b()));
    return finish_reachable(p, setup, std::move(raw), std::move(en.perms), en.sampled);
}

ReachableSet classical_reachable_set(const ProbabilityVector& p, const ThermalSetup& setup,
                                     const EnumerationOptions& opts, std::size_t max_points) {
    const RealVector v = joint_input(p, setup);
    const std::size_t n = setup.dim_a();
    const std::size_t m = setup.dim_b();
    const std::size_t nblocks = setup.blocks.size();

    std::vector<BlockContributions> contrib;
    contrib.reserve(nblocks);
    for (const auto& block : setup.blocks) {
        contrib.push_back(block_contributions(block, v, n, m, max_points));
        if (contrib.back().values.size() > max_points) {
            EnumerationOptions sampled = opts;
            sampled.cap = 0;
            return classical_reachable_set_serial(p, setup, sampled);
        }
    }

    // Running Minkowski sum; choice[i * nblocks + b] is the contribution of
    // block b behind partial point i.
    std::vector<RealVector> pts{RealVector::Zero(static_cast<Eigen::Index>(n))};
    std::vector<std::uint32_t> choice;
    std::size_t done = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const auto& cb = contrib[b].values;
        const std::size_t cur = pts.size();
        const std::size_t next = cur * cb.size();
        if (next > max_points) {
            EnumerationOptions sampled = opts;
            sampled.cap = 0;
            return classical_reachable_set_serial(p, setup, sampled);
        }
        std::vector<RealVector> sums(next);
        std::vector<std::uint32_t> next_choice(next * (done + 1));
        const auto total = static_cast<long>(next);
#pragma omp parallel for schedule(static)
        for (long t = 0; t < total; ++t) {
            const auto i = static_cast<std::size_t>(t) / cb.size();
            const auto j = static_cast<std::size_t>(t) % cb.size();
            sums[static_cast<std::size_t>(t)] = pts[i] + cb[j];
            std::uint32_t* dst = &next_choice[static_cast<std::size_t>(t) * (done + 1)];
            for (std::size_t q = 0; q < done; ++q) dst[q] = choice[i * done + q];
            dst[done] = static_cast<std::uint32_t>(j);
        }
        const std::vector<std::size_t> kept = deduplicate(sums);
        pts.clear();
        choice.clear();
        pts.reserve(kept.size());
        choice.reserve(kept.size() * (done + 1));
        for (std::size_t idx : kept) {
            pts.push_back(std::move(sums[idx]));
            choice.insert(choice.end(), next_choice.begin() + static_cast<long>(idx * (done + 1)),
                          next_choice.begin() + static_cast<long>((idx + 1) * (done + 1)));
        }
        ++done;
    }

    std::vector<Permutation> perms(pts.size(), Permutation(setup.joint_dim()));
    const auto count = static_cast<long>(pts.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i) {
        for (std::size_t b = 0; b < nblocks; ++b)
            place_local(perms[static_cast<std::size_t>(i)], setup.blocks[b],
                        contrib[b].sigma[choice[static_cast<std::size_t>(i) * nblocks + b]]);
    }
    return finish_reachable(p, setup, std::move(pts), std::move(perms), false);
}

std::vector<RealVector> ReachableSet::coordinates() const {
    std::vector<RealVector> out;
    out.reserve(points.size());
    for (const auto& q : points) out.push_back(q.values());
    return out;
}

double ConvexCombination::weight_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
}

void ConvexCombination::validate(std::size_t dim) const {
    if (terms.empty()) throw Error("invalid_combination", "convex combination has no terms");
    for (const auto& t : terms) {
        if (t.weight < -kClampTol) throw Error("invalid_combination", "negative weight " + std::to_string(t.weight));
        if (t.perm.size() != dim || !is_permutation(t.perm)) {
            throw Error("invalid_combination", "term is not a permutation of the joint basis");
        }
    }
    if (std::abs(weight_sum() - 1.0) > 1e-9) {
        throw Error("invalid_combination", "weights sum to " + std::to_string(weight_sum()) + ", not 1");
    }
}

ProbabilityVector classical_mixture_output(const ProbabilityVector& p, const ThermalSetup& setup,
                                           const ConvexCombination& mix) {
    mix.validate(setup.joint_dim());
    const RealVector v = joint_input(p, setup);
    RealVector out = RealVector::Zero(static_cast<Eigen::Index>(setup.dim_a()));
    for (const auto& t : mix.terms) {
        if (!is_block_respecting(setup, t.perm)) throw Error("not_block_respecting", "permutation mixes energy blocks");
        out += std::max(0.0, t.weight) * permuted_marginal(v, t.perm, setup.dim_a(), setup.dim_b());
    }
    return ProbabilityVector::normalized(out);
}

std::vector<std::size_t> degenerate_subset(const Hamiltonian& ham_a) {
    std::vector<std::size_t> s;
    for (const auto& g : degeneracy_groups(ham_a)) s.insert(s.end(), g.begin() + 1, g.end());
    std::sort(s.begin(), s.end());
    return s;
}

NoisyRealization thermal_decoherence_gadget(const Hamiltonian& ham_a, const std::vector<std::size_t>& subset) {
    const std::size_t n = ham_a.dim();
    std::vector<std::size_t> s = subset;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Error("index_out_of_range", "subset has repeated indices");
    if (!s.empty() && s.back() >= n) {
        throw Error("index_out_of_range", "subset index " + std::to_string(s.back()) + " >= dim " + std::to_string(n));
    }
    const std::size_t dc = s.size() + 1;
    const auto c = static_cast<Eigen::Index>(dc);
    ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(n) * c, static_cast<Eigen::Index>(n) * c);
    std::vector<long> power(n, 0);
    for (std::size_t j = 0; j < s.size(); ++j) power[s[j]] = static_cast<long>(j) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        u.block(ii * c, ii * c, c, c) = cyclic_shift(dc, power[i]);
    }
    return {n, dc, std::move(u)};
}

DensityMatrix Synthesis::apply(const DensityMatrix& rho_a, const ThermalSetup& setup) const {
    DensityMatrix out = apply_channel(unitary, rho_a, DensityMatrix::diagonal(setup.gamma_b));
    if (gadget) out = gadget->apply(out);
    return out;
}

Synthesis synthesize_unitary(const ProbabilityVector& p, const ConvexCombination& target, const ThermalSetup& setup) {
    target.validate(setup.joint_dim());
    for (const auto& t : target.terms)
        if (!is_block_respecting(setup, t.perm)) throw Error("not_block_respecting", "permutation mixes energy blocks");

    const RealVector v = joint_input(p, setup);
    RealVector w = RealVector::Zero(v.size());
    for (const auto& t : target.terms)
        for (std::size_t x = 0; x < t.perm.size(); ++x)
            w(static_cast<Eigen::Index>(t.perm[x])) += std::max(0.0, t.weight) * v(static_cast<Eigen::Index>(x));
    w *= 1.0 / target.weight_sum();

    const auto n = static_cast<Eigen::Index>(setup.joint_dim());
    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (const auto& block : setup.blocks) {
        const auto k = static_cast<Eigen::Index>(block.size());
        RealVector lam(k), mu(k);
        for (Eigen::Index t = 0; t < k; ++t) {
            lam(t) = v(static_cast<Eigen::Index>(block[static_cast<std::size_t>(t)]));
            mu(t) = w(static_cast<Eigen::Index>(block[static_cast<std::size_t>(t)]));
        }
        ComplexMatrix ub;
        try {
            ub = schur_horn_unitary(lam, mu);
        } catch (const Error& e) {
            throw InternalError(std::string("per-block majorization failed: ") + e.what());
        }
        for (Eigen::Index r = 0; r < k; ++r)
            for (Eigen::Index c = 0; c < k; ++c)
                u(static_cast<Eigen::Index>(block[static_cast<std::size_t>(r)]), static_cast<Eigen::Index>(block[static_cast<std::size_t>(c)])) = ub(r, c);
    }

    Synthesis out{std::move(u), std::nullopt, classical_mixture_output(p, setup, target), 0.0};
    if (const auto s = degenerate_subset(setup.ham_a); !s.empty()) out.gadget = thermal_decoherence_gadget(setup.ham_a, s);
    const DensityMatrix final_state = out.apply(DensityMatrix::diagonal(p), setup);
    out.error = max_abs(final_state.matrix() - diagonal_matrix(out.target.values()));
    if (out.error > std::max(1e-8, tolerance())) {
        throw InternalError("synthesized unitary misses the target by " + std::to_string(out.error));
    }
    return out;
}

double off_block_mass(const ComplexMatrix& u, const ThermalSetup& setup) {
    double worst = 0.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r)
        for (Eigen::Index c = 0; c < u.cols(); ++c)
            if (setup.block_of[static_cast<std::size_t>(r)] != setup.block_of[static_cast<std::size_t>(c)])
                worst = std::max(worst, std::abs(u(r, c)));
    return worst;
}

ConvexCombination decompose_channel_to_classical(const ComplexMatrix& u, const ThermalSetup& setup, Coupling coupling) {
    const std::size_t n = setup.joint_dim();
    if (static_cast<std::size_t>(u.rows()) != n || static_cast<std::size_t>(u.cols()) != n) {
        throw Error("dimension_mismatch", "unitary dimension does not match the joint space");
    }
    require_unitary(u, "decompose_channel_to_classical");
    if (const double mass = off_block_mass(u, setup); mass > 1e-9) {
        throw Error("not_energy_preserving", "unitary couples different energy blocks: off-block entry " + std::to_string(mass));
    }

    std::vector<ConvexPermutationDecomposition> per_block;
    per_block.reserve(setup.blocks.size());
    double log_product = 0.0;
    for (const auto& block : setup.blocks) {
        const auto k = static_cast<Eigen::Index>(block.size());
        RealMatrix d(k, k);
        for (Eigen::Index r = 0; r < k; ++r)
            for (Eigen::Index c = 0; c < k; ++c)
                d(r, c) = std::norm(u(static_cast<Eigen::Index>(block[static_cast<std::size_t>(r)]), static_cast<Eigen::Index>(block[static_cast<std::size_t>(c)])));
        per_block.push_back(birkhoff_decompose(d, true));
        log_product += std::log10(static_cast<double>(per_block.back().terms.size()));
    }
    if (coupling == Coupling::automatic) coupling = log_product <= 4.0 ? Coupling::product : Coupling::staircase;

    ConvexCombination out;
    const std::size_t nb = per_block.size();
    std::vector<std::size_t> idx(nb, 0);
    auto emit = [&](double weight) {
        Permutation joint(n);
        for (std::size_t b = 0; b < nb; ++b) place_local(joint, setup.blocks[b], per_block[b].terms[idx[b]].perm);
        out.terms.push_back({weight, std::move(joint)});
    };

    if (coupling == Coupling::product) {
        while (true) {
            double w = 1.0;
            for (std::size_t b = 0; b < nb; ++b) w *= per_block[b].terms[idx[b]].weight;
            emit(w);
            std::size_t b = 0;
            for (; b < nb; ++b) {
                if (++idx[b] < per_block[b].terms.size()) break;
                idx[b] = 0;
            }
            if (b == nb) break;
        }
    } else {
        // Comonotone coupling: walk [0,1] through every block's cumulative
        // weights at once.
        std::vector<double> end(nb);
        for (std::size_t b = 0; b < nb; ++b) end[b] = per_block[b].terms.size() == 1 ? 1.0 : per_block[b].terms[0].weight;
        double t = 0.0;
        while (true) {
            double next = 1.0;
            for (std::size_t b = 0; b < nb; ++b) next = std::min(next, end[b]);
            if (next - t > 0.0) emit(next - t);
            t = next;
            if (t >= 1.0) break;
            for (std::size_t b = 0; b < nb; ++b) {
                if (end[b] <= t && idx[b] + 1 < per_block[b].terms.size()) {
                    ++idx[b];
                    end[b] = idx[b] + 1 == per_block[b].terms.size() ? 1.0 : end[b] + per_block[b].terms[idx[b]].weight;
                }
            }
        }
    }
    return out;
}

MembershipResult hull_membership(const ProbabilityVector& p_prime, const ReachableSet& rset, double tol) {
    if (p_prime.dim() != rset.p.dim()) throw Error("dimension_mismatch", "target dimension does not match the reachable set");
    const HullLocation loc = locate(p_prime.values(), rset.coordinates(), rset.hull, tol);
    MembershipResult out{loc.location, loc.margin, {}};
    if (loc.location == Location::exterior) return out;
    for (std::size_t j = 0; j < loc.weights.size(); ++j)
        if (loc.weights[j] > 0.0) out.combination.terms.push_back({loc.weights[j], rset.witnesses[rset.hull.vertices[j]]});
    return out;
}

std::optional<Realization> realize_interior(const ProbabilityVector& p, const Hamiltonian& ham_a,
                                            const ProbabilityVector& p_prime, BathFamily family,
                                            std::size_t max_bath_dim) {
    if (p.dim() != ham_a.dim() || p_prime.dim() != ham_a.dim()) {
        throw Error("dimension_mismatch", "states must match the system Hamiltonian");
    }
    if (!thermomajorizes(p, p_prime, gibbs_vector(ham_a))) {
        throw Error("not_thermomajorized", "target is not thermomajorized by p; no thermal operation reaches it");
    }
    for (std::size_t step = 0;; ++step) {
        std::optional<Hamiltonian> bath;
        std::string desc;
        if (step == 0) {
            bath = Hamiltonian::trivial(1, ham_a.beta());
            desc = "trivial";
        } else if (family == BathFamily::copies) {
            const double dim = std::pow(static_cast<double>(ham_a.dim()), static_cast<double>(step));
            if (dim > static_cast<double>(max_bath_dim)) return std::nullopt;
            bath = copies(ham_a, step);
            desc = "copies:" + std::to_string(step);
        } else {
            const std::size_t mlev = step + 1;
            if (mlev > max_bath_dim) return std::nullopt;
            bath = Hamiltonian::oscillator(mlev, ham_a.quantum(), ham_a.beta());
            desc = "oscillator:" + std::to_string(mlev);
        }
        if (bath->dim() > max_bath_dim) return std::nullopt;

        ThermalSetup setup = build_setup(ham_a, *bath);
        const ReachableSet rset = classical_reachable_set(p, setup);
        const MembershipResult mem = hull_membership(p_prime, rset);
        if (mem.location == Location::exterior) continue;
        Synthesis syn = synthesize_unitary(p, mem.combination, setup);
        return Realization{*bath, desc, std::move(setup), std::move(syn), mem.combination};
    }
}

}  // namespace thermo
