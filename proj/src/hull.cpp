#include "thermo/hull.hpp"

#include "thermo/error.hpp"
#include "thermo/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace thermo {

double AffineFrame::off_span_distance(const RealVector& x) const {
    const RealVector d = x - origin;
    return (d - basis * (basis.transpose() * d)).norm();
}

AffineFrame affine_frame(const std::vector<RealVector>& points, double tol) {
    if (points.empty()) throw Error("empty_point_set", "affine frame of an empty point set");
    const Eigen::Index n = points.front().size();
    AffineFrame f{points.front(), RealMatrix(n, 0)};
    while (f.basis.cols() < n) {
        double best = tol;
        RealVector best_r;
        for (const auto& x : points) {
            RealVector r = x - f.origin;
            r -= f.basis * (f.basis.transpose() * r);
            const double d = r.norm();
            if (d > best) {
                best = d;
                best_r = std::move(r);
            }
        }
        if (best_r.size() == 0) break;
        // second pass against round-off
        best_r -= f.basis * (f.basis.transpose() * best_r);
        f.basis.conservativeResize(n, f.basis.cols() + 1);
        f.basis.col(f.basis.cols() - 1) = best_r.normalized();
    }
    return f;
}

namespace {

struct CellHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

}  // namespace

std::vector<std::size_t> deduplicate(const std::vector<RealVector>& points, double tol) {
    std::vector<std::size_t> kept;
    if (points.empty()) return kept;
    const std::size_t n = static_cast<std::size_t>(points.front().size());
    const double cell = 10.0 * tol;
    std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, CellHash> grid;

    std::vector<std::int64_t> key(n), probe(n);
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        const RealVector& x = points[idx];
        for (std::size_t i = 0; i < n; ++i) key[i] = static_cast<std::int64_t>(std::floor(x(static_cast<Eigen::Index>(i)) / cell));

        bool duplicate = false;
        // Enumerate the 3^n neighbouring cells.
        std::size_t combos = 1;
        for (std::size_t i = 0; i < n; ++i) combos *= 3;
        for (std::size_t c = 0; c < combos && !duplicate; ++c) {
            std::size_t r = c;
            for (std::size_t i = 0; i < n; ++i) {
                probe[i] = key[i] + static_cast<std::int64_t>(r % 3) - 1;
                r /= 3;
            }
            const auto it = grid.find(probe);
            if (it == grid.end()) continue;
            for (std::size_t other : it->second) {
                if ((points[other] - x).cwiseAbs().maxCoeff() <= tol) {
                    duplicate = true;
                    break;
                }
            }
        }
        if (!duplicate) {
            grid[key].push_back(idx);
            kept.push_back(idx);
        }
    }
    return kept;
}

namespace {

double cross(const RealVector& o, const RealVector& a, const RealVector& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

std::vector<std::size_t> monotone_chain(const std::vector<RealVector>& c) {
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (c[a](0) != c[b](0)) return c[a](0) < c[b](0);
        if (c[a](1) != c[b](1)) return c[a](1) < c[b](1);
        return a < b;
    });
    // A turn counts only if the middle point sits more than kCoplanarTol off
    // the chord.
    auto left_turn = [&](std::size_t o, std::size_t a, std::size_t b) {
        const double chord = (c[b] - c[o]).norm();
        return cross(c[o], c[a], c[b]) > kCoplanarTol * std::max(chord, 1e-300);
    };
    std::vector<std::size_t> hull(2 * order.size());
    std::size_t k = 0;
    for (std::size_t idx : order) {
        while (k >= 2 && !left_turn(hull[k - 2], hull[k - 1], idx)) --k;
        hull[k++] = idx;
    }
    for (std::size_t i = order.size() - 1, t = k + 1; i-- > 0;) {
        const std::size_t idx = order[i];
        while (k >= t && !left_turn(hull[k - 2], hull[k - 1], idx)) --k;
        hull[k++] = idx;
    }
    hull.resize(k > 1 ? k - 1 : k);
    return hull;
}

bool in_convex_hull_lp(const RealVector& q, const std::vector<RealVector>& coords,
                       const std::vector<std::size_t>& subset, double tol) {
    if (subset.empty()) return false;
    const Eigen::Index k = q.size();
    RealMatrix a(k + 1, static_cast<Eigen::Index>(subset.size()));
    for (std::size_t j = 0; j < subset.size(); ++j) {
        a.col(static_cast<Eigen::Index>(j)).head(k) = coords[subset[j]];
        a(k, static_cast<Eigen::Index>(j)) = 1.0;
    }
    RealVector b(k + 1);
    b.head(k) = q;
    b(k) = 1.0;
    return lp::find_feasible(a, b, tol).has_value();
}

std::vector<std::size_t> lp_vertices(const std::vector<RealVector>& c) {
    const std::size_t count = c.size();
    const Eigen::Index k = c.front().size();
    std::vector<char> definite(count, 0);

    // Unique maximizers along a fixed set of directions are vertices.
    std::vector<RealVector> dirs;
    for (Eigen::Index i = 0; i < k; ++i) {
        dirs.push_back(RealVector::Unit(k, i));
        dirs.push_back(-RealVector::Unit(k, i));
    }
    for (int t = 0; t < 8 * static_cast<int>(k); ++t) {
        RealVector d(k);
        for (Eigen::Index i = 0; i < k; ++i) d(i) = std::sin(1.0 + 2.3 * t + 0.7 * static_cast<double>(i * i) + t * i);
        dirs.push_back(d.normalized());
    }
    for (const auto& d : dirs) {
        double best = -std::numeric_limits<double>::infinity(), second = best;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const double v = d.dot(c[i]);
            if (v > best) {
                second = best;
                best = v;
                arg = i;
            } else if (v > second) {
                second = v;
            }
        }
        if (best - second > 1e-9) definite[arg] = 1;
    }

    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < count; ++i)
        if (definite[i]) known.push_back(i);

    std::vector<std::size_t> vertices = known;
    for (std::size_t i = 0; i < count; ++i) {
        if (definite[i]) continue;
        if (in_convex_hull_lp(c[i], c, known, 1e-9)) continue;
        std::vector<std::size_t> others;
        others.reserve(count - 1);
        for (std::size_t j = 0; j < count; ++j)
            if (j != i) others.push_back(j);
        if (!in_convex_hull_lp(c[i], c, others, 1e-9)) vertices.push_back(i);
    }
    std::sort(vertices.begin(), vertices.end());
    return vertices;
}

}  // namespace

Hull convex_hull(const std::vector<RealVector>& points) {
    Hull h{affine_frame(points), {}};
    const std::size_t k = h.frame.dim();
    std::vector<RealVector> c;
    c.reserve(points.size());
    for (const auto& x : points) c.push_back(h.frame.coordinates(x));

    if (k == 0) {
        h.vertices = {0};
    } else if (k == 1) {
        std::size_t lo = 0, hi = 0;
        for (std::size_t i = 1; i < c.size(); ++i) {
            if (c[i](0) < c[lo](0)) lo = i;
            if (c[i](0) > c[hi](0)) hi = i;
        }
        h.vertices = {lo, hi};
    } else if (k == 2) {
        h.vertices = monotone_chain(c);
    } else {
        h.vertices = lp_vertices(c);
    }
    return h;
}

const char* to_string(Location loc) {
    switch (loc) {
        case Location::interior: return "interior";
        case Location::boundary: return "boundary";
        case Location::exterior: return "exterior";
    }
    return "exterior";
}

namespace {

Location classify(double margin, double tol) {
    if (margin > tol) return Location::interior;
    if (margin >= -tol) return Location::boundary;
    return Location::exterior;
}

std::vector<double> clamp_normalize(std::vector<double> w) {
    double s = 0.0;
    for (auto& x : w) {
        x = std::max(0.0, x);
        s += x;
    }
    for (auto& x : w) x /= s;
    return w;
}

}  // namespace

HullLocation locate(const RealVector& q, const std::vector<RealVector>& points, const Hull& hull, double tol) {
    HullLocation out;
    if (points.empty() || q.size() != points.front().size()) {
        throw Error("dimension_mismatch", "hull membership: point dimension does not match the point set");
    }
    const double off = hull.frame.off_span_distance(q);
    const std::size_t k = hull.frame.dim();
    const std::size_t nv = hull.vertices.size();
    if (off > tol) {
        out.margin = -off;
        return out;
    }
    const RealVector x = hull.frame.coordinates(q);
    std::vector<RealVector> v;
    v.reserve(nv);
    for (std::size_t idx : hull.vertices) v.push_back(hull.frame.coordinates(points[idx]));

    if (k == 0) {
        out.location = Location::interior;
        out.margin = 0.0;
        out.weights = {1.0};
        return out;
    }
    if (k == 1) {
        const double lo = v[0](0), hi = v[1](0);
        out.margin = std::min(x(0) - lo, hi - x(0));
        out.location = classify(out.margin, tol);
        if (out.location != Location::exterior) {
            const double t = std::clamp((x(0) - lo) / (hi - lo), 0.0, 1.0);
            out.weights = {1.0 - t, t};
        }
        return out;
    }
    if (k == 2) {
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nv; ++i) {
            const RealVector& a = v[i];
            const RealVector& b = v[(i + 1) % nv];
            margin = std::min(margin, cross(a, b, x) / (b - a).norm());
        }
        out.margin = margin;
        out.location = classify(margin, tol);
        if (out.location == Location::exterior) return out;
        // Fan triangulation from vertex 0: the triangle where q has the
        // largest minimum barycentric coordinate.
        double best_min = -std::numeric_limits<double>::infinity();
        std::vector<double> best(nv, 0.0);
        for (std::size_t i = 1; i + 1 < nv; ++i) {
            const RealVector &a = v[0], &b = v[i], &c = v[i + 1];
            const double area = cross(a, b, c);
            const double la = cross(b, c, x) / area;
            const double lb = cross(c, a, x) / area;
            const double lc = 1.0 - la - lb;
            const double mn = std::min({la, lb, lc});
            if (mn > best_min) {
                best_min = mn;
                std::fill(best.begin(), best.end(), 0.0);
                best[0] = la;
                best[i] = lb;
                best[i + 1] = lc;
            }
        }
        out.weights = clamp_normalize(best);
        return out;
    }

    // k >= 3: maximize t subject to q = sum (t + mu_i) v_i, sum (t + mu_i) = 1.
    const auto kk = static_cast<Eigen::Index>(k);
    const auto cols = static_cast<Eigen::Index>(nv) + 1;
    RealMatrix a = RealMatrix::Zero(kk + 1, cols);
    RealVector sum_v = RealVector::Zero(kk);
    for (std::size_t j = 0; j < nv; ++j) {
        a.col(static_cast<Eigen::Index>(j)).head(kk) = v[j];
        a(kk, static_cast<Eigen::Index>(j)) = 1.0;
        sum_v += v[j];
    }
    a.col(cols - 1).head(kk) = sum_v;
    a(kk, cols - 1) = static_cast<double>(nv);
    RealVector b(kk + 1);
    b.head(kk) = x;
    b(kk) = 1.0;
    RealVector c = RealVector::Zero(cols);
    c(cols - 1) = -1.0;
    const lp::Result r = lp::solve(a, b, c, tol);
    if (r.status == lp::Status::iteration_limit) throw Error("degenerate_lp", "hull membership LP hit the iteration limit");
    if (r.status == lp::Status::infeasible) {
        out.margin = -r.infeasibility;
        return out;
    }
    const double t = r.x(cols - 1);
    out.margin = t;
    out.location = t > tol ? Location::interior : Location::boundary;
    std::vector<double> w(nv);
    for (std::size_t j = 0; j < nv; ++j) w[j] = t + r.x(static_cast<Eigen::Index>(j));
    out.weights = clamp_normalize(w);
    return out;
}

}  // namespace thermo
