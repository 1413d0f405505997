#include "oracles.hpp"

#include "thermo/error.hpp"
#include "thermo/linalg.hpp"
#include "thermo/lp.hpp"
#include "thermo/majorization.hpp"
#include "thermo/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

using namespace thermo;

namespace {

ComplexMatrix rotation(double theta) {
    ComplexMatrix r(2, 2);
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

ComplexMatrix dft(std::size_t n) {
    ComplexMatrix f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                std::polar(1.0 / std::sqrt(static_cast<double>(n)), 2.0 * M_PI * static_cast<double>(j * k) / static_cast<double>(n));
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// states

TEST(ProbabilityVector, RejectsBadInput) {
    EXPECT_THROW(ProbabilityVector({0.5, 0.6}), Error);
    EXPECT_THROW(ProbabilityVector({1.1, -0.1}), Error);
    const ProbabilityVector clamped({1.0 + 1e-13, -1e-13});
    EXPECT_EQ(clamped[1], 0.0);
}

TEST(DensityMatrix, ValidatesInvariants) {
    ComplexMatrix m(2, 2);
    m << 0.5, 0.6, 0.6, 0.5;  // eigenvalue -0.1
    EXPECT_THROW(DensityMatrix{m}, Error);
    m << 0.5, 0.2, 0.3, 0.5;  // not Hermitian
    EXPECT_THROW(DensityMatrix{m}, Error);
    EXPECT_NO_THROW(DensityMatrix::maximally_mixed(4));
}

// ---------------------------------------------------------------------------
// tensor / partial trace / channel

TEST(Tensor, IdentityAndDiagonalProducts) {
    EXPECT_LT(max_abs(tensor(identity(2), identity(2)) - identity(4)), 1e-15);
    const ComplexMatrix d = tensor(diagonal_matrix(RealVector::Unit(2, 0)), identity(2) / 2.0);
    RealVector expect(4);
    expect << 0.5, 0.5, 0, 0;
    EXPECT_LT(max_abs(d - diagonal_matrix(expect)), 1e-15);
}

TEST(Tensor, CyclicTimesIdentitySwapsBlocks) {
    const ComplexMatrix t = tensor(cyclic_shift(2, 1), identity(2));
    EXPECT_LT(max_abs(t - permutation_matrix(Permutation{2, 3, 0, 1})), 1e-15);
}

TEST(Tensor, MatchesDefinitionOnRandomMatrices) {
    Rng rng = make_rng(1);
    const ComplexMatrix a = haar_unitary(3, rng), b = haar_unitary(4, rng);
    EXPECT_LT(max_abs(tensor(a, b) - oracle::kron(a, b)), 1e-15);
}

TEST(Tensor, RejectsOversizedResult) {
    EXPECT_THROW(tensor(ComplexMatrix::Zero(1025, 1), ComplexMatrix::Zero(1025, 1)), Error);
}

TEST(PartialTrace, ProductAndBell) {
    Rng rng = make_rng(2);
    const DensityMatrix rho = random_density(3, rng), sigma = random_density(2, rng);
    EXPECT_LT(max_abs(partial_trace_b(tensor(rho.matrix(), sigma.matrix()), 3, 2) - rho.matrix()), 1e-12);
    EXPECT_LT(max_abs(partial_trace_b(identity(4) / 4.0, 2, 2) - identity(2) / 2.0), 1e-15);

    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    EXPECT_LT(max_abs(partial_trace_b(bell * bell.adjoint(), 2, 2) - identity(2) / 2.0), 1e-15);
    EXPECT_THROW(partial_trace_b(identity(5), 2, 2), Error);
}

TEST(ApplyChannel, IdentitySwapAndNonUnitary) {
    Rng rng = make_rng(3);
    const DensityMatrix rho = random_density(2, rng), sigma = random_density(2, rng);
    EXPECT_LT(max_abs(apply_channel(identity(4), rho, sigma).matrix() - rho.matrix()), 1e-12);
    const ComplexMatrix swap = permutation_matrix(Permutation{0, 2, 1, 3});
    EXPECT_LT(max_abs(apply_channel(swap, rho, sigma).matrix() - sigma.matrix()), 1e-12);
    try {
        apply_channel(2.0 * identity(4), rho, sigma);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "non_unitary");
    }
}

TEST(ApplyChannel, PreservesTraceAndPositivity) {
    Rng rng = make_rng(4);
    for (int t = 0; t < 50; ++t) {
        const DensityMatrix out = apply_channel(haar_unitary(6, rng), random_density(3, rng), random_density(2, rng));
        EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_GE(hermitian_eigenvalues_desc(out.matrix()).minCoeff(), -1e-9);
    }
}

// ---------------------------------------------------------------------------
// Hadamard square / diagonal split / spectrum

TEST(HadamardSquare, ClosedForms) {
    EXPECT_LT((hadamard_square(permutation_matrix(Permutation{2, 0, 1})) - permutation_matrix(Permutation{2, 0, 1}).real()).cwiseAbs().maxCoeff(), 0.0 + 1e-15);
    const double th = 0.37;
    RealMatrix expect(2, 2);
    const double c2 = std::cos(th) * std::cos(th), s2 = std::sin(th) * std::sin(th);
    expect << c2, s2, s2, c2;
    EXPECT_LT((hadamard_square(rotation(th)) - expect).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((hadamard_square(dft(3)).array() - 1.0 / 3.0).abs().maxCoeff(), 1e-15);
    EXPECT_THROW(hadamard_square(2.0 * identity(2)), Error);
}

TEST(HadamardSquare, DiagonalOfConjugation) {
    Rng rng = make_rng(5);
    for (std::size_t n = 1; n <= 12; ++n) {
        const ComplexMatrix u = haar_unitary(n, rng);
        const ProbabilityVector p = random_probability(n, rng);
        const RealMatrix d = hadamard_square(u);
        const RealVector diag = (u * diagonal_matrix(p.values()) * u.adjoint()).diagonal().real();
        EXPECT_LT((d * p.values() - diag).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((d.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_LT((d.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    }
}

TEST(DiagonalSplit, Decomposes) {
    const DiagonalSplit s = diagonal_split(ComplexMatrix::Ones(2, 2));
    EXPECT_EQ(s.diagonal, ComplexVector::Ones(2));
    EXPECT_EQ(s.off_diagonal(0, 0), Complex(0.0));
    EXPECT_EQ(s.off_diagonal(0, 1), Complex(1.0));

    Rng rng = make_rng(6);
    const ComplexMatrix u = haar_unitary(4, rng);
    const ProbabilityVector lam = random_probability(4, rng);
    const DiagonalSplit t = diagonal_split(u * diagonal_matrix(lam.values()) * u.adjoint());
    EXPECT_LT((t.diagonal.real() - hadamard_square(u) * lam.values()).cwiseAbs().maxCoeff(), 1e-12);
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(t.off_diagonal(i, i), Complex(0.0));
}

TEST(Spectrum, SortsAndTieBreaks) {
    const SortedSpectrum s = spectrum_sorted(DensityMatrix::diagonal(ProbabilityVector{0.2, 0.8}));
    EXPECT_DOUBLE_EQ(s.eigenvalues[0], 0.8);
    EXPECT_LT(max_abs(s.vectors - permutation_matrix(Permutation{1, 0})), 1e-15);

    const SortedSpectrum m = spectrum_sorted(DensityMatrix::maximally_mixed(3));
    EXPECT_LT(max_abs(m.vectors - identity(3)), 1e-15);

    const ComplexMatrix r = rotation(0.4);
    const DensityMatrix rho(r * diagonal_matrix(RealVector(Eigen::Vector2d(0.3, 0.7))) * r.adjoint());
    const SortedSpectrum q = spectrum_sorted(rho);
    EXPECT_NEAR(q.eigenvalues[0], 0.7, 1e-12);
    EXPECT_NEAR(q.eigenvalues[1], 0.3, 1e-12);
    EXPECT_LT(max_abs(q.vectors.adjoint() * rho.matrix() * q.vectors - diagonal_matrix(q.eigenvalues.values())), 1e-9);
}

TEST(Spectrum, DeterministicOnRandomStates) {
    Rng rng = make_rng(7);
    for (int t = 0; t < 20; ++t) {
        const DensityMatrix rho = random_density(5, rng);
        const SortedSpectrum a = spectrum_sorted(rho), b = spectrum_sorted(rho);
        EXPECT_EQ(a.vectors, b.vectors);
        EXPECT_LT(unitarity_defect(a.vectors), 1e-10);
        for (std::size_t i = 1; i < 5; ++i) EXPECT_GE(a.eigenvalues[i - 1], a.eigenvalues[i]);
    }
}

// ---------------------------------------------------------------------------
// LP

TEST(Lp, FeasibleAndInfeasible) {
    RealMatrix a(1, 2);
    a << 1, 1;
    RealVector b(1);
    b << 1;
    const auto x = lp::find_feasible(a, b, 1e-9);
    ASSERT_TRUE(x);
    EXPECT_NEAR(x->sum(), 1.0, 1e-12);
    b << -1;
    EXPECT_FALSE(lp::find_feasible(a, b, 1e-9));
}

TEST(Lp, Optimizes) {
    // min -x0 - 2 x1 s.t. x0 + x1 + s = 4, x1 + t = 3
    RealMatrix a(2, 4);
    a << 1, 1, 1, 0, 0, 1, 0, 1;
    RealVector b(2), c(4);
    b << 4, 3;
    c << -1, -2, 0, 0;
    const lp::Result r = lp::solve(a, b, c, 1e-9);
    ASSERT_EQ(r.status, lp::Status::optimal);
    EXPECT_NEAR(r.objective, -7.0, 1e-12);
}

// ---------------------------------------------------------------------------
// majorization

TEST(Majorization, Examples) {
    EXPECT_TRUE(majorizes(ProbabilityVector{1, 0}, ProbabilityVector{0.7, 0.3}));
    EXPECT_FALSE(majorizes(ProbabilityVector{0.5, 0.5}, ProbabilityVector{0.6, 0.4}));
    const ProbabilityVector p{0.2, 0.5, 0.3};
    EXPECT_TRUE(majorizes(p, p));
    EXPECT_EQ(first_violated_prefix(RealVector(Eigen::Vector2d(0.5, 0.5)), RealVector(Eigen::Vector2d(0.6, 0.4))), 1u);
    EXPECT_THROW(majorizes(ProbabilityVector{1, 0}, ProbabilityVector{1, 0, 0}), Error);
}

TEST(Majorization, AgreesWithSubsetOracle) {
    Rng rng = make_rng(8);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 4);
        const ProbabilityVector p = random_probability(n, rng), q = random_probability(n, rng);
        EXPECT_EQ(majorizes(p, q), oracle::majorizes_by_subsets(p.values(), q.values()));
    }
}

TEST(Thermomajorization, Examples) {
    const ProbabilityVector gamma{2.0 / 3.0, 1.0 / 3.0};
    const auto d = thermomajorizes(ProbabilityVector{0, 1}, ProbabilityVector{1, 0}, gamma);
    ASSERT_TRUE(d);
    // D_alpha at alpha = gamma2/gamma1 = 1/2
    EXPECT_NEAR((*d)(0, 0), 0.5, 1e-9);
    EXPECT_NEAR((*d)(1, 0), 0.5, 1e-9);
    EXPECT_NEAR((*d)(0, 1), 1.0, 1e-9);

    const ProbabilityVector g3{0.5, 0.3, 0.2};
    EXPECT_TRUE(thermomajorizes(ProbabilityVector{0.1, 0.1, 0.8}, g3, g3));
    EXPECT_FALSE(thermomajorizes(ProbabilityVector{0.5, 0.5}, ProbabilityVector{0.6, 0.4}, ProbabilityVector{0.5, 0.5}));
    EXPECT_THROW(thermomajorizes(ProbabilityVector{1, 0}, ProbabilityVector{1, 0}, ProbabilityVector{1, 0}), Error);
}

TEST(Thermomajorization, UniformGibbsMatchesMajorizationOnGrid) {
    // dims 2..4 on a 0.05 grid (dim 4 subsampled)
    auto grid = [](std::size_t n) {
        std::vector<ProbabilityVector> out;
        std::vector<int> c(n, 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
            if (i + 1 == n) {
                c[i] = left;
                RealVector v(static_cast<Eigen::Index>(n));
                for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = c[k] / 20.0;
                out.emplace_back(v);
                return;
            }
            for (int x = 0; x <= left; ++x) {
                c[i] = x;
                rec(i + 1, left - x);
            }
        };
        rec(0, 20);
        return out;
    };
    for (std::size_t n : {2u, 3u, 4u}) {
        const auto pts = grid(n);
        const std::size_t stride = n == 4 ? 37 : (n == 3 ? 5 : 1);
        const ProbabilityVector u = ProbabilityVector::uniform(n);
        for (std::size_t i = 0; i < pts.size(); i += stride)
            for (std::size_t j = 0; j < pts.size(); j += stride)
                EXPECT_EQ(majorizes(pts[i], pts[j]), thermomajorizes(pts[i], pts[j], u).has_value());
    }
}

TEST(Thermomajorization, WitnessAndLorenzOracle) {
    Rng rng = make_rng(9);
    int feasible = 0;
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
        const ProbabilityVector gamma = random_probability(n, rng);
        const ProbabilityVector p = random_probability(n, rng), q = random_probability(n, rng);
        const auto d = thermomajorizes(p, q, gamma);
        EXPECT_EQ(d.has_value(), oracle::thermomajorizes_lorenz(p.values(), q.values(), gamma.values()));
        if (d) {
            ++feasible;
            EXPECT_LT((d->matrix() * p.values() - q.values()).cwiseAbs().maxCoeff(), 1e-8);
            EXPECT_LT((d->matrix() * gamma.values() - gamma.values()).cwiseAbs().maxCoeff(), 1e-8);
            EXPECT_LT((d->matrix().colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-8);
        }
    }
    EXPECT_GT(feasible, 20);
}

TEST(Thermomajorization, TransitivityByComposition) {
    Rng rng = make_rng(10);
    int checked = 0;
    for (int t = 0; t < 300 && checked < 30; ++t) {
        const ProbabilityVector gamma = random_probability(3, rng);
        const ProbabilityVector p = random_probability(3, rng);
        const auto d1 = thermomajorizes(p, gamma, gamma);  // always feasible
        ASSERT_TRUE(d1);
        const ProbabilityVector q = random_probability(3, rng);
        const auto dq = thermomajorizes(p, q, gamma);
        if (!dq) continue;
        const ProbabilityVector r = ProbabilityVector::normalized(0.5 * q.values() + 0.5 * gamma.values());
        const auto dr = thermomajorizes(q, r, gamma);
        ASSERT_TRUE(dr);
        const RealMatrix comp = dr->matrix() * dq->matrix();
        EXPECT_LT((comp * p.values() - r.values()).cwiseAbs().maxCoeff(), 1e-8);
        EXPECT_TRUE(thermomajorizes(p, r, gamma));
        ++checked;
    }
    EXPECT_GT(checked, 5);
}

TEST(Birkhoff, Examples) {
    const auto id = birkhoff_decompose(RealMatrix::Identity(3, 3));
    ASSERT_EQ(id.terms.size(), 1u);
    EXPECT_DOUBLE_EQ(id.terms[0].weight, 1.0);
    EXPECT_EQ(id.terms[0].perm, (Permutation{0, 1, 2}));

    const auto half = birkhoff_decompose(RealMatrix::Constant(2, 2, 0.5));
    ASSERT_EQ(half.terms.size(), 2u);
    EXPECT_NEAR(half.terms[0].weight, 0.5, 1e-15);
    EXPECT_NEAR(half.terms[1].weight, 0.5, 1e-15);

    RealMatrix bad(2, 2);
    bad << 0.7, 0.2, 0.3, 0.8;
    EXPECT_THROW(birkhoff_decompose(bad), Error);
}

TEST(Birkhoff, GenerateThenDecompose) {
    Rng rng = make_rng(11);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 5);
        RealMatrix d = RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        const ProbabilityVector w = random_probability(4, rng);
        for (std::size_t k = 0; k < 4; ++k) {
            Permutation perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            d += w[k] * permutation_matrix(perm).real();
        }
        const auto dec = birkhoff_decompose(d);
        EXPECT_LE(dec.terms.size(), (n - 1) * (n - 1) + 1);
        EXPECT_NEAR(dec.weight_sum(), 1.0, 1e-9);
        EXPECT_LT((dec.reconstruct() - d).cwiseAbs().maxCoeff(), 1e-7);
        for (const auto& term : dec.terms) EXPECT_TRUE(is_permutation(term.perm));
    }
}

TEST(SchurHorn, Examples) {
    const ProbabilityVector lam{0.6, 0.3, 0.1};
    EXPECT_LT(max_abs(schur_horn_unitary(lam, lam) - identity(3)), 1e-15);

    const ComplexMatrix v = schur_horn_unitary(ProbabilityVector{1, 0}, ProbabilityVector{0.5, 0.5});
    EXPECT_LT((hadamard_square(v).array() - 0.5).abs().maxCoeff(), 1e-12);

    const SchurHornConstruction c = schur_horn_construct(lam.values(), RealVector::Constant(3, 1.0 / 3.0));
    EXPECT_LE(c.rotations, 2u);
    EXPECT_LT((hadamard_square(c.unitary) * lam.values() - RealVector::Constant(3, 1.0 / 3.0)).cwiseAbs().maxCoeff(), 1e-9);

    try {
        schur_horn_unitary(ProbabilityVector{0.5, 0.5}, ProbabilityVector{0.6, 0.4});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "not_majorized");
        EXPECT_NE(std::string(e.what()).find("k=1"), std::string::npos);
    }
}

TEST(SchurHorn, HardyLittlewoodPolyaRoundTrip) {
    Rng rng = make_rng(12);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 6);
        const ProbabilityVector p = random_probability(n, rng);
        // q = D p with a random bistochastic D, so p majorizes q
        const RealMatrix mix = hadamard_square(haar_unitary(n, rng));
        const ProbabilityVector q = ProbabilityVector::normalized(mix * p.values());
        const ComplexMatrix v = schur_horn_unitary(p, q);
        EXPECT_LT(unitarity_defect(v), 1e-10);
        const RealMatrix d = hadamard_square(v);
        EXPECT_LT((d * p.values() - q.values()).cwiseAbs().maxCoeff(), 1e-8);
        const auto dec = birkhoff_decompose(d);
        EXPECT_LT((dec.reconstruct() - d).cwiseAbs().maxCoeff(), 1e-7);
    }
}
