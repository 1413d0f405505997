// majorization.hpp: majorization and thermomajorization: decision
// procedures and the constructions that witness them.

#pragma once

#include "thermo/linalg.hpp"

#include <optional>
#include <vector>

namespace thermo {

inline constexpr double kMajorizationSlack = 1e-10;
inline constexpr double kWitnessTol = 1e-8;
inline constexpr double kBirkhoffZero = 1e-10;

// Column-stochastic matrix: D_ij >= 0, sum_i D_ij = 1. Entries in
// [-1e-12, 0) are clamped to zero; anything more negative is rejected.
class StochasticMatrix {
public:
    explicit StochasticMatrix(RealMatrix d);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(d_.rows()); }
    const RealMatrix& matrix() const noexcept { return d_; }
    double operator()(std::size_t i, std::size_t j) const {
        return d_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    ProbabilityVector apply(const ProbabilityVector& p) const;
    bool is_bistochastic(double tol = kWitnessTol) const;
    bool preserves(const ProbabilityVector& gamma, double tol = kWitnessTol) const;

private:
    RealMatrix d_;
};

struct PermutationTerm {
    double weight = 0.0;
    Permutation perm;  // perm[x] = image of basis state x
};

struct ConvexPermutationDecomposition {
    std::size_t dim = 0;
    std::vector<PermutationTerm> terms;

    RealMatrix reconstruct() const;
    double weight_sum() const;
};

// First k (1-based) whose sorted prefix sum of x falls below that of y by
// more than slack, or nullopt if x majorizes y. Vectors need equal length.
std::optional<std::size_t> first_violated_prefix(const RealVector& x, const RealVector& y,
                                                 double slack = kMajorizationSlack);

bool majorizes(const ProbabilityVector& p, const ProbabilityVector& q);

// Gibbs-preserving stochastic D with D p = q, or nullopt when none exists.
std::optional<StochasticMatrix> thermomajorizes(const ProbabilityVector& p, const ProbabilityVector& q,
                                                const ProbabilityVector& gamma);

ConvexPermutationDecomposition birkhoff_decompose(const RealMatrix& d, bool require_bistochastic = true);
inline ConvexPermutationDecomposition birkhoff_decompose(const StochasticMatrix& d, bool require_bistochastic = true) {
    return birkhoff_decompose(d.matrix(), require_bistochastic);
}

struct SchurHornConstruction {
    ComplexMatrix unitary;
    std::size_t rotations = 0;
};

// Real orthogonal V, a product of at most n-1 planar rotations between
// sorting permutations, with diag(V diag(lambda) V^T) = mu. lambda and mu
// may be any nonnegative vectors of equal sum with lambda majorizing mu.
SchurHornConstruction schur_horn_construct(const RealVector& lambda, const RealVector& mu);
ComplexMatrix schur_horn_unitary(const RealVector& lambda, const RealVector& mu);
ComplexMatrix schur_horn_unitary(const ProbabilityVector& lambda, const ProbabilityVector& mu);

}  // namespace thermo
