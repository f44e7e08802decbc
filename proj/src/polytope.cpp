#include "riga/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riga {

namespace {

LinearConstraint unit_row(std::size_t dim, std::size_t i, double coef, Relation rel, double b) {
    LinearConstraint c{std::vector<double>(dim, 0.0), b, rel};
    c.a[i] = coef;
    return c;
}

bool is_bound_row(const LinearConstraint& c) {
    if (c.relation != Relation::GE || c.b != 0) return false;
    int nonzero = 0;
    for (double v : c.a) {
        if (v == 1.0) ++nonzero;
        else if (v != 0.0) return false;
    }
    return nonzero == 1;
}

// Solves the square system in place; false when (numerically) singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-10) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return true;
}

// Row scaled so its largest coefficient is 1 in magnitude.
LinearConstraint normalized(const LinearConstraint& c) {
    double scale = 0;
    for (double v : c.a) scale = std::max(scale, std::abs(v));
    if (scale == 0) return c;
    LinearConstraint out = c;
    for (double& v : out.a) v /= scale;
    out.b /= scale;
    return out;
}

double binomial_capped(std::size_t n, std::size_t k, double cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    double r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
        if (r > cap) return r;
    }
    return r;
}

}  // namespace

ParameterPolytope ParameterPolytope::initial(Family family, Sense sense, std::size_t objectives) {
    if (objectives < 2) throw std::invalid_argument("polytope needs at least 2 objectives");
    const std::size_t d = parameter_dim(family, objectives);
    ParameterPolytope p(family, sense, objectives, d);
    p.base_.push_back({std::vector<double>(d, 1.0), 1.0, Relation::EQ});
    for (std::size_t i = 0; i < d; ++i) p.base_.push_back(unit_row(d, i, 1.0, Relation::GE, 0.0));
    if (family == Family::OWA) {
        Monotone order = default_owa_monotone(sense);
        for (std::size_t j = 0; j + 1 < d; ++j) {
            LinearConstraint c{std::vector<double>(d, 0.0), 0.0, Relation::LE};
            // NonDecreasing: w_j - w_{j+1} <= 0; NonIncreasing: w_{j+1} - w_j <= 0.
            double s = order == Monotone::NonDecreasing ? 1.0 : -1.0;
            c.a[j] = s;
            c.a[j + 1] = -s;
            p.base_.push_back(std::move(c));
        }
    }
    return p;
}

std::vector<LinearConstraint> ParameterPolytope::constraints() const {
    std::vector<LinearConstraint> all = base_;
    all.insert(all.end(), learned_.begin(), learned_.end());
    return all;
}

double ParameterPolytope::max_violation(const ParamPoint& w) const {
    if (w.size() != dim_) throw std::invalid_argument("max_violation: dimension mismatch");
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : base_) worst = std::max(worst, normalized(c).violation(w));
    for (const auto& c : learned_) worst = std::max(worst, normalized(c).violation(w));
    return worst;
}

bool ParameterPolytope::contains(const ParamPoint& w, double tol) const { return max_violation(w) <= tol; }

LpProblem ParameterPolytope::as_lp(const std::vector<double>& objective) const {
    LpProblem lp;
    lp.objective = objective;
    for (const auto& c : base_)
        if (!is_bound_row(c)) lp.constraints.push_back(c);
    lp.constraints.insert(lp.constraints.end(), learned_.begin(), learned_.end());
    return lp;
}

LpResult ParameterPolytope::maximize(const std::vector<double>& objective) const {
    if (objective.size() != dim_) throw std::invalid_argument("maximize: dimension mismatch");
    return lp_solve(as_lp(objective));
}

bool ParameterPolytope::feasible() const {
    return maximize(std::vector<double>(dim_, 0.0)).status == LpStatus::Optimal;
}

std::optional<ParameterPolytope> ParameterPolytope::with(const LinearConstraint& c) const {
    if (c.a.size() != dim_) throw std::invalid_argument("constraint dimension mismatch");
    ParameterPolytope next = *this;
    next.learned_.push_back(c);
    if (!next.feasible()) return std::nullopt;
    return next;
}

LinearConstraint statement_to_constraint(const PreferenceStatement& s, Family family, Sense sense) {
    if (s.preferred.size() != s.other.size())
        throw std::invalid_argument("statement vectors differ in dimension");
    if (s.preferred == s.other) throw std::invalid_argument("statement compares identical vectors");
    auto a = featurize(family, s.preferred);
    auto b = featurize(family, s.other);
    double sign = loss_sign(sense);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = sign * (a[i] - b[i]);
    return {std::move(a), 0.0, Relation::LE};
}

std::vector<ParamPoint> enumerate_vertices(const ParameterPolytope& p) {
    const std::size_t d = p.dim();
    if (d > kMaxEnumerationDim)
        throw EnumerationTooLarge("vertex enumeration limited to dimension 25; use sample_points");
    std::vector<LinearConstraint> eqs, ineqs;
    for (const auto& c : p.constraints()) {
        auto n = normalized(c);
        (c.relation == Relation::EQ ? eqs : ineqs).push_back(std::move(n));
    }
    if (eqs.size() > d) throw std::invalid_argument("more equalities than dimensions");
    const std::size_t k = d - eqs.size();
    if (binomial_capped(ineqs.size(), k, 5e6) > 5e6)
        throw EnumerationTooLarge("too many active-set combinations; use sample_points");

    auto all = p.constraints();
    std::vector<ParamPoint> found;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    std::vector<std::vector<double>> a(d);
    std::vector<double> b(d), x;
    bool more = k <= ineqs.size();
    while (more) {
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            a[i] = eqs[i].a;
            b[i] = eqs[i].b;
        }
        for (std::size_t i = 0; i < k; ++i) {
            a[eqs.size() + i] = ineqs[pick[i]].a;
            b[eqs.size() + i] = ineqs[pick[i]].b;
        }
        if (solve_square(a, b, x) && p.contains(x, 1e-7)) {
            bool dup = std::any_of(found.begin(), found.end(), [&](const ParamPoint& q) {
                for (std::size_t i = 0; i < d; ++i)
                    if (std::abs(q[i] - x[i]) > 1e-7) return false;
                return true;
            });
            if (!dup) found.push_back(x);
        }
        // Next combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == ineqs.size() - k + i - 1) --i;
        if (i == 0) {
            more = false;
        } else {
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    // Snap numerical noise so exact vertices (0, 1/2, ...) compare cleanly.
    for (auto& v : found)
        for (double& c : v)
            if (std::abs(c) < 1e-12) c = 0.0;
    std::sort(found.begin(), found.end());
    return found;
}

std::vector<ParamPoint> sample_points(const ParameterPolytope& p, std::size_t count, Rng& rng,
                                      std::size_t burn_in) {
    const std::size_t d = p.dim();
    // Start from the centroid of coordinate-extreme LP optima (relative interior).
    ParamPoint x(d, 0.0);
    std::size_t got = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (double s : {1.0, -1.0}) {
            std::vector<double> obj(d, 0.0);
            obj[i] = s;
            auto r = p.maximize(obj);
            if (r.status != LpStatus::Optimal) continue;
            for (std::size_t j = 0; j < d; ++j) x[j] += r.point[j];
            ++got;
        }
    }
    if (got == 0) throw std::logic_error("sample_points: polytope is empty");
    for (double& v : x) v /= static_cast<double>(got);

    std::vector<LinearConstraint> eqs, ineqs;
    for (const auto& c : p.constraints()) {
        auto n = normalized(c);
        if (n.relation == Relation::GE) {
            for (double& v : n.a) v = -v;
            n.b = -n.b;
            n.relation = Relation::LE;
        }
        (c.relation == Relation::EQ ? eqs : ineqs).push_back(std::move(n));
    }
    // Orthonormal basis of the equality rows; directions are projected off it.
    std::vector<std::vector<double>> basis;
    for (const auto& e : eqs) {
        auto v = e.a;
        for (const auto& q : basis) {
            double dot = 0;
            for (std::size_t i = 0; i < d; ++i) dot += v[i] * q[i];
            for (std::size_t i = 0; i < d; ++i) v[i] -= dot * q[i];
        }
        double norm = 0;
        for (double c : v) norm += c * c;
        norm = std::sqrt(norm);
        if (norm < 1e-12) continue;
        for (double& c : v) c /= norm;
        basis.push_back(std::move(v));
    }

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<ParamPoint> out;
    const std::size_t thin = 10;
    for (std::size_t step = 0; out.size() < count; ++step) {
        std::vector<double> dir(d);
        for (double& c : dir) c = gauss(rng);
        for (const auto& q : basis) {
            double dot = 0;
            for (std::size_t i = 0; i < d; ++i) dot += dir[i] * q[i];
            for (std::size_t i = 0; i < d; ++i) dir[i] -= dot * q[i];
        }
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& c : ineqs) {
            double ad = 0, ax = 0;
            for (std::size_t i = 0; i < d; ++i) {
                ad += c.a[i] * dir[i];
                ax += c.a[i] * x[i];
            }
            double slack = std::max(0.0, c.b - ax);
            if (ad > 1e-14) hi = std::min(hi, slack / ad);
            else if (ad < -1e-14) lo = std::max(lo, slack / ad);
        }
        if (std::isfinite(lo) && std::isfinite(hi) && hi > lo) {
            double t = lo + (hi - lo) * unif(rng);
            for (std::size_t i = 0; i < d; ++i) x[i] += t * dir[i];
        }
        if (step >= burn_in && (step - burn_in) % thin == 0) out.push_back(x);
    }
    return out;
}

}  // namespace riga
