#include "helpers.hpp"
#include "thermo/error.hpp"
#include "thermo/qubit.hpp"
#include "thermo/random.hpp"
#include "thermo/thermal.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace thermo;

using fixtures::block_diagonal_exact;
using fixtures::random_block_unitary;

namespace {

Hamiltonian qutrit_weights() { return fixtures::fig4_system(); }

}  // namespace

// ---------------------------------------------------------------------------
// energy

TEST(Rational, Parsing) {
    EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
    EXPECT_EQ(parse_rational("05/20"), Rational(1, 4));
    EXPECT_EQ(parse_rational("-3"), Rational(-3));
    EXPECT_EQ(format_rational(Rational(7, 20)), "7/20");
    EXPECT_THROW(parse_rational("1/0"), Error);
    EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Energy, LabelsAddExactly) {
    const EnergyLabel a(Rational(1), Rational(1, 2)), b(Rational(2), Rational(3));
    EXPECT_EQ(a + b, EnergyLabel(Rational(3), Rational(3, 2)));
    EXPECT_THROW(EnergyLabel(Rational(0), Rational(0)), Error);
}

TEST(Energy, GibbsVectors) {
    const ProbabilityVector u = gibbs_vector(Hamiltonian::trivial(4));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(u[i], 0.25, 1e-15);
    const ProbabilityVector q = gibbs_vector(Hamiltonian::qubit(1.0, std::log(2.0)));
    EXPECT_NEAR(q[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(q[1], 1.0 / 3.0, 1e-15);
    const ProbabilityVector o = gibbs_vector(Hamiltonian::oscillator(3, 1.0, std::log(2.0)));
    EXPECT_NEAR(o[0], 4.0 / 7.0, 1e-15);
    EXPECT_NEAR(o[1], 2.0 / 7.0, 1e-15);
    EXPECT_NEAR(o[2], 1.0 / 7.0, 1e-15);
    const ProbabilityVector w = gibbs_vector(qutrit_weights());
    EXPECT_NEAR(w[0], 0.25, 1e-15);
    EXPECT_NEAR(w[2], 0.40, 1e-15);
    try {
        gibbs_vector(Hamiltonian::oscillator(2, 1000.0, 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "gibbs_range");
    }
}

// ---------------------------------------------------------------------------
// setup / enumeration

TEST(Setup, BlockStructures) {
    const ThermalSetup qo = build_setup(Hamiltonian::qubit(1.0, 1.0), Hamiltonian::oscillator(3, 1.0, 1.0));
    EXPECT_EQ(qo.block_sizes(), (std::vector<std::size_t>{1, 2, 2, 1}));

    const ThermalSetup triv = build_setup(Hamiltonian::trivial(2), Hamiltonian::trivial(3));
    EXPECT_EQ(triv.block_sizes(), (std::vector<std::size_t>{6}));

    const Hamiltonian ha = qutrit_weights();
    const ThermalSetup f4 = build_setup(ha, copies(ha, 2));
    EXPECT_EQ(f4.joint_dim(), 27u);
    std::vector<std::size_t> sizes = f4.block_sizes();
    std::sort(sizes.begin(), sizes.end());
    EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 1, 1, 3, 3, 3, 3, 3, 3, 6}));
    EXPECT_TRUE(f4.warnings.empty());
}

TEST(Setup, WarnsOnNumericalCoincidence) {
    // ln 2 as a quantum multiple and as a weight factor: equal reals, distinct labels
    const Hamiltonian ha({EnergyLabel(Rational(0), Rational(1)), EnergyLabel(Rational(1), Rational(1))}, 1.0, std::log(2.0));
    const Hamiltonian hb({EnergyLabel(Rational(0), Rational(1)), EnergyLabel(Rational(0), Rational(1, 2))}, 1.0);
    const ThermalSetup s = build_setup(ha, hb);
    EXPECT_EQ(s.blocks.size(), 4u);
    EXPECT_FALSE(s.warnings.empty());
}

TEST(Enumeration, Counts) {
    for (std::size_t m = 2; m <= 6; ++m) {
        const ThermalSetup s = build_setup(Hamiltonian::qubit(1.0, 1.0), Hamiltonian::oscillator(m, 1.0, 1.0));
        const ClassicalEnumeration e = enumerate_classical(s);
        EXPECT_EQ(e.perms.size(), std::size_t{1} << (m - 1));
        EXPECT_FALSE(e.sampled);
        for (const auto& p : e.perms) EXPECT_TRUE(is_block_respecting(s, p));
    }
    const ClassicalEnumeration t = enumerate_classical(build_setup(Hamiltonian::trivial(3), Hamiltonian::trivial(1)));
    EXPECT_EQ(t.perms.size(), 6u);
    EXPECT_EQ(t.perms.front(), (Permutation{0, 1, 2}));
}

TEST(Enumeration, CapAndSampling) {
    const Hamiltonian ha = qutrit_weights();
    const ThermalSetup f4 = build_setup(ha, copies(ha, 2));
    EXPECT_NEAR(log10_classical_count(f4), std::log10(33592320.0), 1e-9);
    EXPECT_THROW(enumerate_classical(f4, {1'000'000, false, 100, 0}), Error);
    const ClassicalEnumeration e = enumerate_classical(f4, {1'000'000, true, 500, 3});
    EXPECT_TRUE(e.sampled);
    EXPECT_EQ(e.perms.size(), 500u);
    for (const auto& p : e.perms) EXPECT_TRUE(is_block_respecting(f4, p));
    EXPECT_EQ(enumerate_classical(f4, {1'000'000, true, 500, 3}).perms, e.perms);
}

// ---------------------------------------------------------------------------
// reachable sets

TEST(Reachable, NoDegeneracyGivesSinglePoint) {
    const ThermalSetup s = build_setup(qutrit_weights(), Hamiltonian::trivial(1));
    const ProbabilityVector p{0.5, 0.3, 0.2};
    const ReachableSet r = classical_reachable_set(p, s);
    ASSERT_EQ(r.points.size(), 1u);
    EXPECT_LT(max_abs_diff(r.points[0], p), 1e-15);
    EXPECT_EQ(hull_membership(p, r).location, Location::interior);
}

TEST(Reachable, FactoredMatchesSerial) {
    Rng rng = make_rng(30);
    const Hamiltonian ha = qutrit_weights();
    const std::vector<std::pair<Hamiltonian, Hamiltonian>> cases{
        {ha, ha},
        {ha, Hamiltonian::trivial(2)},
        {Hamiltonian::trivial(3), Hamiltonian::trivial(2)},
        {Hamiltonian::qubit(1.0, 0.7), Hamiltonian::oscillator(5, 1.0, 0.7)},
        {Hamiltonian::oscillator(3, 1.0, 0.5), Hamiltonian::oscillator(3, 1.0, 0.5)},
    };
    for (const auto& [a, b] : cases) {
        const ThermalSetup s = build_setup(a, b);
        const ProbabilityVector p = random_probability(a.dim(), rng);
        const ReachableSet fast = classical_reachable_set(p, s);
        const ReachableSet ref = classical_reachable_set_serial(p, s);
        ASSERT_EQ(fast.points.size(), ref.points.size());
        for (std::size_t i = 0; i < fast.points.size(); ++i) EXPECT_LT(max_abs_diff(fast.points[i], ref.points[i]), 1e-12);
        EXPECT_EQ(fast.hull.vertices, ref.hull.vertices);
        for (std::size_t i = 0; i < fast.points.size(); ++i)
            EXPECT_LT(max_abs_diff(classical_output(p, s, fast.witnesses[i]), fast.points[i]), 1e-12);
    }
}

TEST(Reachable, QubitOscillatorCeiling) {
    const double bde = std::log(2.0);
    for (std::size_t m = 2; m <= 7; ++m) {
        const ThermalSetup s = build_setup(Hamiltonian::qubit(1.0, bde), Hamiltonian::oscillator(m, 1.0, bde));
        const ReachableSet r = classical_reachable_set(ProbabilityVector{1, 0}, s);
        double best = 0.0;
        for (const auto& q : r.points) best = std::max(best, extract_alpha(q));
        EXPECT_NEAR(best, alpha_max_oscillator(m, bde), 1e-12);
    }
}

TEST(Membership, Examples) {
    const double bde = std::log(2.0);
    const Hamiltonian ha = Hamiltonian::qubit(1.0, bde);
    const QubitGibbs qg = make_qubit_gibbs(1.0, bde);
    const ProbabilityVector p{0.9, 0.1};
    for (std::size_t m = 2; m <= 8; ++m) {
        const ReachableSet r = classical_reachable_set(p, build_setup(ha, Hamiltonian::oscillator(m, 1.0, bde)));
        EXPECT_NE(hull_membership(p, r).location, Location::exterior);
        EXPECT_NE(hull_membership(gibbs_vector(ha), r).location, Location::exterior);
        EXPECT_EQ(hull_membership(p_star(p, qg), r).location, Location::exterior);
    }
}

// ---------------------------------------------------------------------------
// hull geometry

TEST(Hull, PolygonAndMembership) {
    std::vector<RealVector> pts;
    auto add = [&](double a, double b) { pts.push_back(RealVector(Eigen::Vector3d(a, b, 1 - a - b))); };
    add(0.2, 0.2);
    add(0.6, 0.2);
    add(0.2, 0.6);
    add(0.3, 0.3);  // interior
    add(0.4, 0.2);  // on an edge
    const Hull h = convex_hull(pts);
    EXPECT_EQ(h.frame.dim(), 2u);
    std::vector<std::size_t> v = h.vertices;
    std::sort(v.begin(), v.end());
    EXPECT_EQ(v, (std::vector<std::size_t>{0, 1, 2}));

    EXPECT_EQ(locate(pts[3], pts, h).location, Location::interior);
    EXPECT_EQ(locate(pts[4], pts, h).location, Location::boundary);
    EXPECT_EQ(locate(RealVector(Eigen::Vector3d(0.1, 0.1, 0.8)), pts, h).location, Location::exterior);
    const HullLocation in = locate(pts[3], pts, h);
    RealVector back = RealVector::Zero(3);
    for (std::size_t j = 0; j < in.weights.size(); ++j) back += in.weights[j] * pts[h.vertices[j]];
    EXPECT_LT((back - pts[3]).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Hull, SegmentPointAndTetrahedron) {
    std::vector<RealVector> seg{RealVector(Eigen::Vector2d(0.2, 0.8)), RealVector(Eigen::Vector2d(0.5, 0.5)),
                                RealVector(Eigen::Vector2d(0.9, 0.1))};
    const Hull hs = convex_hull(seg);
    EXPECT_EQ(hs.frame.dim(), 1u);
    EXPECT_EQ(locate(seg[1], seg, hs).location, Location::interior);
    EXPECT_EQ(locate(seg[0], seg, hs).location, Location::boundary);
    EXPECT_EQ(locate(RealVector(Eigen::Vector2d(0.95, 0.05)), seg, hs).location, Location::exterior);

    std::vector<RealVector> one{RealVector(Eigen::Vector2d(0.3, 0.7))};
    const Hull h0 = convex_hull(one);
    EXPECT_EQ(locate(one[0], one, h0).location, Location::interior);
    EXPECT_EQ(locate(RealVector(Eigen::Vector2d(0.31, 0.69)), one, h0).location, Location::exterior);

    std::vector<RealVector> tet;
    for (int i = 0; i < 4; ++i) {
        RealVector x = RealVector::Constant(4, 0.1);
        x(i) = 0.7;
        tet.push_back(x);
    }
    tet.push_back(RealVector::Constant(4, 0.25));
    const Hull ht = convex_hull(tet);
    EXPECT_EQ(ht.frame.dim(), 3u);
    EXPECT_EQ(ht.vertices, (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_EQ(locate(tet[4], tet, ht).location, Location::interior);
    EXPECT_EQ(locate(0.5 * (tet[0] + tet[1]), tet, ht).location, Location::boundary);
    RealVector out = RealVector::Constant(4, 0.05);
    out(0) = 0.85;
    EXPECT_EQ(locate(out, tet, ht).location, Location::exterior);
}

TEST(Hull, Deduplicate) {
    std::vector<RealVector> pts{RealVector(Eigen::Vector2d(0.1, 0.9)), RealVector(Eigen::Vector2d(0.1 + 5e-11, 0.9 - 5e-11)),
                                RealVector(Eigen::Vector2d(0.1 + 1e-9, 0.9 - 1e-9))};
    EXPECT_EQ(deduplicate(pts), (std::vector<std::size_t>{0, 2}));
}

// ---------------------------------------------------------------------------
// synthesis / decomposition

TEST(Synthesis, SinglePermutation) {
    const Hamiltonian ha = Hamiltonian::qubit(1.0, 0.8);
    const ThermalSetup s = build_setup(ha, Hamiltonian::oscillator(4, 1.0, 0.8));
    const ProbabilityVector p{0.8, 0.2};
    const ClassicalEnumeration e = enumerate_classical(s);
    for (const auto& perm : e.perms) {
        const Synthesis syn = synthesize_unitary(p, ConvexCombination{{{1.0, perm}}}, s);
        EXPECT_TRUE(block_diagonal_exact(syn.unitary, s));
        EXPECT_FALSE(syn.gadget.has_value());
        EXPECT_LT(max_abs_diff(syn.target, classical_output(p, s, perm)), 1e-15);
        EXPECT_LT(syn.error, 1e-12);
    }
    const Synthesis id = synthesize_unitary(p, ConvexCombination{{{1.0, e.perms.front()}}}, s);
    EXPECT_LT(max_abs(id.unitary - identity(8)), 1e-15);
}

TEST(Synthesis, HalfwayMixture) {
    const double bde = std::log(2.0);
    const std::size_t m = 5;
    const ThermalSetup s = build_setup(Hamiltonian::qubit(1.0, bde), Hamiltonian::oscillator(m, 1.0, bde));
    const ProbabilityVector p{1, 0};
    const ReachableSet r = classical_reachable_set(p, s);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < r.points.size(); ++i)
        if (r.points[i][1] > r.points[arg][1]) arg = i;
    const Permutation id = enumerate_classical(s).perms.front();
    const Synthesis syn = synthesize_unitary(p, ConvexCombination{{{0.5, id}, {0.5, r.witnesses[arg]}}}, s);
    EXPECT_NEAR(syn.target[1], 0.5 * alpha_max_oscillator(m, bde), 1e-12);
    const DensityMatrix out = syn.apply(DensityMatrix::diagonal(p), s);
    EXPECT_NEAR(out.matrix()(1, 1).real(), 0.5 * alpha_max_oscillator(m, bde), 1e-9);
}

TEST(Synthesis, RejectsBlockViolations) {
    const ThermalSetup s = build_setup(Hamiltonian::qubit(1.0, 1.0), Hamiltonian::oscillator(2, 1.0, 1.0));
    try {
        synthesize_unitary(ProbabilityVector{0.5, 0.5}, ConvexCombination{{{1.0, Permutation{3, 1, 2, 0}}}}, s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "not_block_respecting");
    }
    EXPECT_THROW(synthesize_unitary(ProbabilityVector{0.5, 0.5}, ConvexCombination{{{0.7, Permutation{0, 1, 2, 3}}}}, s), Error);
}

TEST(Synthesis, DegenerateSystemUsesGadget) {
    // system levels 0, 0, 1 with a two-level bath
    const Hamiltonian ha({EnergyLabel(Rational(0), Rational(1)), EnergyLabel(Rational(0), Rational(1)), EnergyLabel(Rational(1), Rational(1))}, 0.9);
    const Hamiltonian hb = Hamiltonian::oscillator(2, 1.0, 0.9);
    const ThermalSetup s = build_setup(ha, hb);
    const ProbabilityVector p{0.5, 0.1, 0.4};
    const ReachableSet r = classical_reachable_set(p, s);
    Rng rng = make_rng(31);
    for (int t = 0; t < 20; ++t) {
        const ProbabilityVector w = random_probability(r.points.size(), rng);
        ConvexCombination mix;
        for (std::size_t i = 0; i < r.points.size(); ++i) mix.terms.push_back({w[i], r.witnesses[i]});
        const Synthesis syn = synthesize_unitary(p, mix, s);
        ASSERT_TRUE(syn.gadget.has_value());
        EXPECT_EQ(syn.gadget->bath_dim, 2u);
        EXPECT_LT(syn.error, 1e-9);
    }
}

TEST(Decompose, PermutationAndRotations) {
    const double bde = 0.6;
    const ThermalSetup s = build_setup(Hamiltonian::qubit(1.0, bde), Hamiltonian::oscillator(4, 1.0, bde));
    const ClassicalEnumeration e = enumerate_classical(s);
    const ConvexCombination one = decompose_channel_to_classical(permutation_matrix(e.perms[3]), s);
    ASSERT_EQ(one.terms.size(), 1u);
    EXPECT_EQ(one.terms[0].perm, e.perms[3]);

    // Independent 2x2 rotations in the three size-2 blocks.
    const std::vector<double> theta{0.3, 0.9, 1.2};
    ComplexMatrix u = identity(8);
    std::size_t k = 0;
    for (const auto& b : s.blocks) {
        if (b.size() != 2) continue;
        const double c = std::cos(theta[k]), sn = std::sin(theta[k]);
        const auto i = static_cast<Eigen::Index>(b[0]), j = static_cast<Eigen::Index>(b[1]);
        u(i, i) = c;
        u(i, j) = -sn;
        u(j, i) = sn;
        u(j, j) = c;
        ++k;
    }
    const ConvexCombination mix = decompose_channel_to_classical(u, s, Coupling::product);
    EXPECT_EQ(mix.terms.size(), 8u);
    double expected_min = 1.0;
    for (double t : theta) expected_min *= std::min(std::cos(t) * std::cos(t), std::sin(t) * std::sin(t));
    double smallest = 1.0;
    for (const auto& t : mix.terms) smallest = std::min(smallest, t.weight);
    EXPECT_NEAR(smallest, expected_min, 1e-12);

    const ProbabilityVector p{0.7, 0.3};
    const DensityMatrix out = apply_channel(u, DensityMatrix::diagonal(p), DensityMatrix::diagonal(s.gamma_b));
    EXPECT_LT((classical_mixture_output(p, s, mix).values() - out.diagonal_values()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Decompose, RejectsOffBlockMass) {
    const ThermalSetup s = build_setup(Hamiltonian::qubit(1.0, 1.0), Hamiltonian::oscillator(2, 1.0, 1.0));
    try {
        decompose_channel_to_classical(permutation_matrix(Permutation{3, 1, 2, 0}), s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "not_energy_preserving");
    }
}

TEST(Decompose, RoundTripAndCouplings) {
    Rng rng = make_rng(32);
    const Hamiltonian ha = qutrit_weights();
    const ThermalSetup s = build_setup(ha, ha);
    const ProbabilityVector p{0.6, 0.3, 0.1};
    const ReachableSet r = classical_reachable_set(p, s);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix u = random_block_unitary(s, rng);
        const RealVector channel = apply_channel(u, DensityMatrix::diagonal(p), DensityMatrix::diagonal(s.gamma_b)).diagonal_values();
        for (Coupling c : {Coupling::product, Coupling::staircase}) {
            const ConvexCombination mix = decompose_channel_to_classical(u, s, c);
            EXPECT_NEAR(mix.weight_sum(), 1.0, 1e-9);
            const ProbabilityVector cls = classical_mixture_output(p, s, mix);
            EXPECT_LT((cls.values() - channel).cwiseAbs().maxCoeff(), 1e-9);
            const Synthesis syn = synthesize_unitary(p, mix, s);
            EXPECT_LT((syn.apply(DensityMatrix::diagonal(p), s).diagonal_values() - channel).cwiseAbs().maxCoeff(), 1e-9);
        }
        EXPECT_NE(hull_membership(ProbabilityVector::normalized(channel), r).location, Location::exterior);
    }
}

// ---------------------------------------------------------------------------
// thermal decoherence gadget

TEST(ThermalGadget, Patterns) {
    const Hamiltonian nondeg = qutrit_weights();
    EXPECT_TRUE(degenerate_subset(nondeg).empty());
    const NoisyRealization id = thermal_decoherence_gadget(nondeg, {});
    EXPECT_EQ(id.bath_dim, 1u);
    EXPECT_LT(max_abs(id.unitary - identity(3)), 1e-15);

    Rng rng = make_rng(33);
    const DensityMatrix rho = random_density(4, rng);
    const NoisyRealization g = thermal_decoherence_gadget(Hamiltonian::trivial(4), {1, 3});
    EXPECT_EQ(g.bath_dim, 3u);
    const ComplexMatrix out = g.apply(rho).matrix();
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) {
            const bool touched = i != j && (i == 1 || i == 3 || j == 1 || j == 3);
            if (touched) EXPECT_LT(std::abs(out(i, j)), 1e-12);
            else EXPECT_LT(std::abs(out(i, j) - rho.matrix()(i, j)), 1e-12);
        }

    const std::vector<std::size_t> all = degenerate_subset(Hamiltonian::trivial(5));
    EXPECT_EQ(all, (std::vector<std::size_t>{1, 2, 3, 4}));
    const DensityMatrix r5 = random_density(5, rng);
    EXPECT_LT(max_abs(thermal_decoherence_gadget(Hamiltonian::trivial(5), all).apply(r5).matrix() -
                      decoherence_gadget(5).apply(r5).matrix()),
              1e-12);
    EXPECT_THROW(thermal_decoherence_gadget(nondeg, {3}), Error);
}

// ---------------------------------------------------------------------------
// realize_interior

TEST(Realize, Examples) {
    const double bde = std::log(2.0);
    const Hamiltonian ha = Hamiltonian::qubit(1.0, bde);
    const ProbabilityVector p{0, 1};
    const auto same = realize_interior(p, ha, p, BathFamily::oscillator, 16);
    ASSERT_TRUE(same);
    EXPECT_EQ(same->bath.dim(), 1u);
    EXPECT_LT(max_abs(same->synthesis.unitary - identity(2)), 1e-15);

    // alpha = 0.9 alpha_max^(4): the smallest oscillator with alpha_max >= alpha
    const QubitGibbs qg = make_qubit_gibbs(1.0, bde);
    const double alpha = 0.9 * alpha_max_oscillator(4, bde);
    const ProbabilityVector target = d_alpha(alpha, qg).apply(p);
    const auto r = realize_interior(p, ha, target, BathFamily::oscillator, 16);
    ASSERT_TRUE(r);
    std::size_t expect_m = 2;
    while (alpha_max_oscillator(expect_m, bde) < alpha) ++expect_m;
    EXPECT_EQ(r->bath.dim(), expect_m);
    EXPECT_LT(r->synthesis.error, 1e-9);

    EXPECT_FALSE(realize_interior(p, ha, p_star(p, qg), BathFamily::oscillator, 16));
    EXPECT_FALSE(realize_interior(p, ha, p_star(p, qg), BathFamily::copies, 16));
    try {
        realize_interior(ProbabilityVector{0.7, 0.3}, ha, ProbabilityVector{0, 1}, BathFamily::copies, 8);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "not_thermomajorized");
    }
}

TEST(Realize, CopiesOfQutrit) {
    const Hamiltonian ha = qutrit_weights();
    const ProbabilityVector p{0.65, 0.22, 0.13};
    const ReachableSet r = classical_reachable_set(p, build_setup(ha, ha));
    // a strict interior point of the one-copy hull
    RealVector c = RealVector::Zero(3);
    for (std::size_t v : r.hull.vertices) c += r.points[v].values();
    const ProbabilityVector target = ProbabilityVector::normalized(c);
    const auto found = realize_interior(p, ha, target, BathFamily::copies, 27);
    ASSERT_TRUE(found);
    EXPECT_LE(found->bath.dim(), 3u);
    EXPECT_LT(found->synthesis.error, 1e-9);
}

// ---------------------------------------------------------------------------
// noisy limit

TEST(NoisyLimit, HullIsMajorizationOrder) {
    const ThermalSetup s = build_setup(Hamiltonian::trivial(3), Hamiltonian::trivial(2));
    Rng rng = make_rng(34);
    for (int t = 0; t < 10; ++t) {
        const ProbabilityVector p = random_probability(3, rng);
        const ReachableSet r = classical_reachable_set(p, s);
        for (int k = 0; k < 50; ++k) {
            const ProbabilityVector q = random_probability(3, rng);
            EXPECT_EQ(majorizes(p, q), hull_membership(q, r).location != Location::exterior);
        }
    }
}
