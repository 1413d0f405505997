// lp.hpp: small dense linear programs in standard form.
//
//   minimize c^T x  subject to  A x = b,  x >= 0
//
// Two-phase tableau simplex with Bland's rule. Intended for the tiny
// problems that arise here (a few hundred columns at most).

#pragma once

#include "thermo/linalg.hpp"

#include <optional>

namespace thermo::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Result {
    Status status = Status::infeasible;
    RealVector x;
    double objective = 0.0;
    // Phase-1 optimum: L1 norm of the residual A x - b at the best point found.
    double infeasibility = 0.0;
};

Result solve(const RealMatrix& a, const RealVector& b, const RealVector& c, double feasibility_tol);

// Phase 1 only. Returns a nonnegative x with |A x - b|_1 <= tol, if one exists.
std::optional<RealVector> find_feasible(const RealMatrix& a, const RealVector& b, double feasibility_tol);

}  // namespace thermo::lp
