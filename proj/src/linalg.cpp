#include "thermo/linalg.hpp"

#include "thermo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>

namespace thermo {

namespace {

double read_tolerance_env() {
    const char* env = std::getenv("THERMO_HORN_TOL");
    if (env == nullptr) return 1e-9;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || !std::isfinite(v) || v <= 0.0) return 1e-9;
    return v;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

}  // namespace

double tolerance() {
    static const double tol = read_tolerance_env();
    return tol;
}

// ---------------------------------------------------------------------------
// ProbabilityVector

ProbabilityVector::ProbabilityVector(RealVector values) : values_(std::move(values)) {
    if (values_.size() == 0) throw Error("invalid_state", "probability vector must be non-empty");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        double& v = values_(i);
        if (!std::isfinite(v)) throw Error("invalid_state", "probability vector has non-finite entry");
        if (v < -kClampTol) {
            throw Error("invalid_state", "probability vector has negative entry " + fmt_double(v) +
                                             " at index " + std::to_string(i));
        }
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (std::abs(sum - 1.0) > kStateTol) {
        throw Error("invalid_state", "probability vector sums to " + std::to_string(sum));
    }
}

ProbabilityVector::ProbabilityVector(std::initializer_list<double> values)
    : ProbabilityVector(RealVector::Map(values.begin(), static_cast<Eigen::Index>(values.size()))) {}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
    if (n == 0) throw Error("invalid_state", "uniform distribution needs n >= 1");
    return ProbabilityVector(RealVector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

ProbabilityVector ProbabilityVector::normalized(const RealVector& weights) {
    const double total = weights.sum();
    if (!(total > 0.0) || !std::isfinite(total)) throw Error("invalid_state", "weights do not normalize");
    return ProbabilityVector(RealVector(weights / total));
}

std::vector<double> ProbabilityVector::to_vector() const {
    return {values_.data(), values_.data() + values_.size()};
}

double max_abs_diff(const ProbabilityVector& a, const ProbabilityVector& b) {
    if (a.dim() != b.dim()) throw Error("dimension_mismatch", "vectors differ in dimension");
    return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) throw Error("invalid_state", "density matrix must be square and non-empty");
    if (!m_.allFinite()) throw Error("invalid_state", "density matrix has non-finite entries");
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kStateTol) throw Error("invalid_state", "density matrix is not Hermitian (defect " + fmt_double(herm) + ")");
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > kStateTol) throw Error("invalid_state", "density matrix trace is " + std::to_string(tr));
    const RealVector ev = hermitian_eigenvalues_desc(m_);
    if (ev(ev.size() - 1) < -kStateTol) {
        throw Error("invalid_state", "density matrix has eigenvalue " + fmt_double(ev(ev.size() - 1)));
    }
}

DensityMatrix DensityMatrix::diagonal(const ProbabilityVector& p) {
    return DensityMatrix(Trusted{}, diagonal_matrix(p.values()));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n) {
    return diagonal(ProbabilityVector::uniform(n));
}

DensityMatrix make_output_state(ComplexMatrix m) {
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > tolerance()) {
        throw InternalError("channel output trace drifted to " + std::to_string(tr));
    }
    return DensityMatrix(DensityMatrix::Trusted{}, std::move(h));
}

// ---------------------------------------------------------------------------
// Basic matrices

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double unitarity_defect(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) return INFINITY;
    const ComplexMatrix g = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
    return max_abs(g);
}

void require_unitary(const ComplexMatrix& u, const char* what, double tol) {
    if (u.rows() != u.cols()) {
        throw Error("non_unitary", std::string(what) + ": matrix is not square");
    }
    const double defect = unitarity_defect(u);
    if (!(defect <= tol)) {
        throw Error("non_unitary", std::string(what) + ": |U^dag U - I|_max = " + fmt_double(defect));
    }
}

ComplexMatrix identity(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return ComplexMatrix::Identity(k, k);
}

ComplexMatrix diagonal_matrix(const RealVector& d) {
    ComplexMatrix m = ComplexMatrix::Zero(d.size(), d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
    return m;
}

bool is_permutation(std::span<const std::size_t> perm) {
    std::vector<char> seen(perm.size(), 0);
    for (std::size_t v : perm) {
        if (v >= perm.size() || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

Permutation invert(std::span<const std::size_t> perm) {
    Permutation inv(perm.size());
    for (std::size_t x = 0; x < perm.size(); ++x) inv[perm[x]] = x;
    return inv;
}

ComplexMatrix permutation_matrix(std::span<const std::size_t> perm) {
    if (!is_permutation(perm)) throw Error("invalid_permutation", "not a bijection");
    const auto n = static_cast<Eigen::Index>(perm.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t x = 0; x < perm.size(); ++x) m(static_cast<Eigen::Index>(perm[x]), static_cast<Eigen::Index>(x)) = 1.0;
    return m;
}

ComplexMatrix cyclic_shift(std::size_t dim, long power) {
    if (dim == 0) throw Error("dimension_mismatch", "cyclic shift needs dim >= 1");
    const long d = static_cast<long>(dim);
    const long s = ((power % d) + d) % d;
    Permutation perm(dim);
    for (long i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::size_t>((i + s) % d);
    return permutation_matrix(perm);
}

// ---------------------------------------------------------------------------
// Bipartite operations

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    const std::size_t cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
    if (rows == 0 || cols == 0 || rows > kMaxTensorEntries / std::max<std::size_t>(cols, 1)) {
        throw Error("dimension_overflow", "tensor product of " + std::to_string(rows) + "x" + std::to_string(cols) +
                                              " exceeds 2^20 entries");
    }
    ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix partial_trace_b(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
    const auto da = static_cast<Eigen::Index>(dim_a);
    const auto db = static_cast<Eigen::Index>(dim_b);
    if (dim_a == 0 || dim_b == 0 || m.rows() != da * db || m.cols() != da * db) {
        throw Error("dimension_mismatch", "partial_trace_b: matrix is " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()) + ", expected square of " +
                                              std::to_string(dim_a * dim_b));
    }
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index a2 = 0; a2 < da; ++a2) {
            Complex s = 0.0;
            for (Eigen::Index b = 0; b < db; ++b) s += m(a * db + b, a2 * db + b);
            out(a, a2) = s;
        }
    return out;
}

ComplexMatrix partial_trace_a(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
    const auto da = static_cast<Eigen::Index>(dim_a);
    const auto db = static_cast<Eigen::Index>(dim_b);
    if (dim_a == 0 || dim_b == 0 || m.rows() != da * db || m.cols() != da * db) {
        throw Error("dimension_mismatch", "partial_trace_a: dimension mismatch");
    }
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (Eigen::Index a = 0; a < da; ++a) out += m.block(a * db, a * db, db, db);
    return out;
}

DensityMatrix apply_channel(const ComplexMatrix& u, const DensityMatrix& rho_a, const DensityMatrix& sigma_b) {
    const auto joint = static_cast<Eigen::Index>(rho_a.dim() * sigma_b.dim());
    if (u.rows() != joint || u.cols() != joint) {
        throw Error("dimension_mismatch", "apply_channel: unitary is " + std::to_string(u.rows()) +
                                              "-dimensional, joint space is " + std::to_string(joint));
    }
    require_unitary(u, "apply_channel");
    const ComplexMatrix joint_state = tensor(rho_a.matrix(), sigma_b.matrix());
    const ComplexMatrix evolved = u * joint_state * u.adjoint();
    return make_output_state(partial_trace_b(evolved, rho_a.dim(), sigma_b.dim()));
}

RealMatrix hadamard_square(const ComplexMatrix& u) {
    require_unitary(u, "hadamard_square");
    return u.cwiseAbs2();
}

DiagonalSplit diagonal_split(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw Error("dimension_mismatch", "diagonal_split needs a square matrix");
    DiagonalSplit out{m.diagonal(), m};
    out.off_diagonal.diagonal().setZero();
    return out;
}

// ---------------------------------------------------------------------------
// Spectra

RealVector hermitian_eigenvalues_desc(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("eigensolver", "eigenvalue computation did not converge");
    return es.eigenvalues().reverse();
}

std::size_t numerical_rank(const ComplexMatrix& h, double threshold) {
    const RealVector ev = hermitian_eigenvalues_desc(h);
    return static_cast<std::size_t>((ev.array() > threshold).count());
}

namespace {

// Cluster tie-break key: larger magnitudes on earlier basis states first,
// then real and imaginary parts of the phase-fixed entries.
bool canonical_less(const ComplexVector& a, const ComplexVector& b) {
    constexpr double eps = 1e-12;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double ma = std::abs(a(k)), mb = std::abs(b(k));
        if (std::abs(ma - mb) > eps) return ma > mb;
    }
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        if (std::abs(a(k).real() - b(k).real()) > eps) return a(k).real() > b(k).real();
        if (std::abs(a(k).imag() - b(k).imag()) > eps) return a(k).imag() > b(k).imag();
    }
    return false;
}

void fix_phase(ComplexVector& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v(k));
        if (mag > 1e-12) {
            v *= std::conj(v(k)) / mag;
            v(k) = mag;
            return;
        }
    }
}

}  // namespace

SortedSpectrum spectrum_sorted(const DensityMatrix& rho) {
    const ComplexMatrix& m = rho.matrix();
    const Eigen::Index n = m.rows();

    const ComplexMatrix off = diagonal_split(m).off_diagonal;
    if ((off.array() == Complex(0.0)).all()) {
        // Exactly diagonal input: stable order, identity on ties.
        std::vector<std::size_t> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        const RealVector d = m.diagonal().real();
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            return d(static_cast<Eigen::Index>(i)) > d(static_cast<Eigen::Index>(j));
        });
        RealVector lambda(n);
        ComplexMatrix v = ComplexMatrix::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(k)]);
            lambda(k) = std::max(0.0, d(src));
            v(src, k) = 1.0;
        }
        return {ProbabilityVector(lambda), v};
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    if (es.info() != Eigen::Success) throw Error("eigensolver", "spectrum_sorted: eigensolver did not converge");

    struct Pair {
        double value;
        ComplexVector vec;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        ComplexVector vec = es.eigenvectors().col(k);
        fix_phase(vec);
        pairs.push_back({es.eigenvalues()(k), std::move(vec)});
    }
    // Already non-increasing; reorder within clusters of near-equal values.
    constexpr double cluster_tol = 1e-10;
    std::size_t start = 0;
    while (start < pairs.size()) {
        std::size_t end = start + 1;
        while (end < pairs.size() && pairs[start].value - pairs[end].value <= cluster_tol) ++end;
        std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(start), pairs.begin() + static_cast<std::ptrdiff_t>(end),
                         [](const Pair& a, const Pair& b) { return canonical_less(a.vec, b.vec); });
        start = end;
    }

    RealVector lambda(n);
    ComplexMatrix v(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        lambda(k) = std::max(0.0, pairs[static_cast<std::size_t>(k)].value);
        v.col(k) = pairs[static_cast<std::size_t>(k)].vec;
    }
    const double residual = max_abs(v.adjoint() * m * v - diagonal_matrix(lambda));
    if (residual > kEigenResidualTol) {
        throw Error("eigensolver", "spectrum_sorted: residual " + fmt_double(residual));
    }
    return {ProbabilityVector::normalized(lambda), v};
}

}  // namespace thermo
