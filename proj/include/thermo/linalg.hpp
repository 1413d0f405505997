// linalg.hpp: dense complex matrix substrate.
//
// Basis convention for bipartite spaces: |a,b> has index a*dimB + b.
// Permutations are stored as image vectors: perm[x] = y means pi|x> = |y>.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace thermo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Permutation = std::vector<std::size_t>;

inline constexpr double kStateTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kEigenResidualTol = 1e-8;
inline constexpr double kClampTol = 1e-12;
inline constexpr std::size_t kMaxTensorEntries = std::size_t{1} << 20;

// Global matrix-identity tolerance; 1e-9 unless THERMO_HORN_TOL is set.
double tolerance();

class ProbabilityVector {
public:
    explicit ProbabilityVector(RealVector values);
    ProbabilityVector(std::initializer_list<double> values);

    static ProbabilityVector uniform(std::size_t n);
    // Normalizes a nonnegative weight vector.
    static ProbabilityVector normalized(const RealVector& weights);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.size()); }
    double operator[](std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }
    const RealVector& values() const noexcept { return values_; }
    std::vector<double> to_vector() const;

private:
    RealVector values_;
};

double max_abs_diff(const ProbabilityVector& a, const ProbabilityVector& b);

class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);
    static DensityMatrix diagonal(const ProbabilityVector& p);
    static DensityMatrix maximally_mixed(std::size_t n);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    RealVector diagonal_values() const { return m_.diagonal().real(); }

private:
    struct Trusted {};
    DensityMatrix(Trusted, ComplexMatrix m) : m_(std::move(m)) {}
    friend DensityMatrix make_output_state(ComplexMatrix m);

    ComplexMatrix m_;
};

// Hermitizes a computed channel output and checks it against tolerance().
DensityMatrix make_output_state(ComplexMatrix m);

double max_abs(const ComplexMatrix& m);
double unitarity_defect(const ComplexMatrix& u);  // max |U^dag U - I|
void require_unitary(const ComplexMatrix& u, const char* what, double tol = kUnitaryTol);

ComplexMatrix identity(std::size_t n);
ComplexMatrix diagonal_matrix(const RealVector& d);
ComplexMatrix permutation_matrix(std::span<const std::size_t> perm);
// pi^power with pi|i> = |i+1 mod dim>; negative powers allowed.
ComplexMatrix cyclic_shift(std::size_t dim, long power);
Permutation invert(std::span<const std::size_t> perm);
bool is_permutation(std::span<const std::size_t> perm);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix partial_trace_b(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b);
ComplexMatrix partial_trace_a(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b);

// Tr_B[U (rho_a (x) sigma_b) U^dag].
DensityMatrix apply_channel(const ComplexMatrix& u, const DensityMatrix& rho_a,
                            const DensityMatrix& sigma_b);

// D_ij = |U_ij|^2.  Bistochastic for unitary U, and diag(U p^ U^dag) = D p.
RealMatrix hadamard_square(const ComplexMatrix& u);

struct DiagonalSplit {
    ComplexVector diagonal;
    ComplexMatrix off_diagonal;  // exact zeros on the diagonal
};
DiagonalSplit diagonal_split(const ComplexMatrix& m);

struct SortedSpectrum {
    ProbabilityVector eigenvalues;  // non-increasing
    ComplexMatrix vectors;          // columns; V^dag rho V = diag(eigenvalues)
};
SortedSpectrum spectrum_sorted(const DensityMatrix& rho);

// Eigenvalues of a Hermitian matrix in non-increasing order.
RealVector hermitian_eigenvalues_desc(const ComplexMatrix& h);
std::size_t numerical_rank(const ComplexMatrix& h, double threshold);

}  // namespace thermo
