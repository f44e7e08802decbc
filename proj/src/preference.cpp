#include "riga/preference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace riga {

namespace {

void require_same_size(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << expected << " vs " << got << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

std::string_view to_string(Sense s) { return s == Sense::Minimize ? "minimize" : "maximize"; }

std::string_view to_string(Family f) {
    switch (f) {
        case Family::WS: return "WS";
        case Family::OWA: return "OWA";
        case Family::Choquet2: return "Choquet2";
    }
    return "?";
}

std::string_view to_string(Monotone m) {
    switch (m) {
        case Monotone::None: return "none";
        case Monotone::NonDecreasing: return "non_decreasing";
        case Monotone::NonIncreasing: return "non_increasing";
    }
    return "?";
}

Sense parse_sense(std::string_view s) {
    if (s == "minimize" || s == "min") return Sense::Minimize;
    if (s == "maximize" || s == "max") return Sense::Maximize;
    throw std::invalid_argument("unknown orientation '" + std::string(s) + "'");
}

Family parse_family(std::string_view s) {
    if (s == "WS" || s == "ws") return Family::WS;
    if (s == "OWA" || s == "owa") return Family::OWA;
    if (s == "Choquet2" || s == "choquet2" || s == "choquet") return Family::Choquet2;
    throw std::invalid_argument("unknown family '" + std::string(s) + "'");
}

Monotone parse_monotone(std::string_view s) {
    if (s == "none") return Monotone::None;
    if (s == "non_decreasing") return Monotone::NonDecreasing;
    if (s == "non_increasing") return Monotone::NonIncreasing;
    throw std::invalid_argument("unknown monotonicity '" + std::string(s) + "'");
}

Monotone default_owa_monotone(Sense s) {
    return s == Sense::Minimize ? Monotone::NonDecreasing : Monotone::NonIncreasing;
}

CostVector::CostVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("cost vector needs at least 2 objectives");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("cost vector has a non-finite value");
    }
}

CostVector::CostVector(std::initializer_list<double> values)
    : CostVector(std::vector<double>(values)) {}

std::string format(const CostVector& y) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < y.size(); ++i) os << (i ? "," : "") << y[i];
    os << ')';
    return os.str();
}

bool dominates(const CostVector& u, const CostVector& v, Sense sense) {
    require_same_size(u.size(), v.size(), "dominates");
    bool strict = false;
    for (std::size_t j = 0; j < u.size(); ++j) {
        double better = sense == Sense::Minimize ? v[j] - u[j] : u[j] - v[j];
        if (better < 0) return false;
        if (better > 0) strict = true;
    }
    return strict;
}

void OwaWeights::validate() const {
    if (w.size() < 2) throw std::invalid_argument("weights need at least 2 components");
    double sum = 0;
    for (double x : w) {
        if (!(x >= -kTolerance && x <= 1 + kTolerance))
            throw std::invalid_argument("weight outside [0,1]");
        sum += x;
    }
    if (std::abs(sum - 1) > kTolerance) throw std::invalid_argument("weights do not sum to 1");
    for (std::size_t j = 0; j + 1 < w.size(); ++j) {
        if (monotone == Monotone::NonDecreasing && w[j] > w[j + 1] + kTolerance)
            throw std::invalid_argument("weights are not non-decreasing");
        if (monotone == Monotone::NonIncreasing && w[j] < w[j + 1] - kTolerance)
            throw std::invalid_argument("weights are not non-increasing");
    }
}

SetFunction::SetFunction(int n) : n_(n), table_(std::size_t{1} << n, 0.0) {
    if (n < 1 || n > 12) throw std::invalid_argument("set functions support 1 <= n <= 12");
}

SetFunction::SetFunction(int n, std::vector<double> table) : SetFunction(n) {
    require_same_size(table_.size(), table.size(), "set function table");
    table_ = std::move(table);
}

Capacity::Capacity(SetFunction v) : v_(std::move(v)) {
    if (std::abs(v_[0]) > kTolerance) throw CapacityError("capacity of the empty set is not 0", 0, 0);
    if (std::abs(v_[v_.full_set()] - 1) > kTolerance)
        throw CapacityError("capacity of the full set is not 1", v_.full_set(), v_.full_set());
    // Checking single-element extensions suffices for monotonicity.
    for (std::uint32_t a = 0; a <= v_.full_set(); ++a) {
        for (int j = 0; j < v_.n(); ++j) {
            std::uint32_t b = a | (1u << j);
            if (b != a && v_[a] > v_[b] + kTolerance) {
                throw CapacityError("capacity is not monotone", a, b);
            }
        }
    }
}

std::size_t pair_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    // Pairs (0,1..n-1), (1,2..n-1), ...
    return static_cast<std::size_t>(i * n - i * (i + 1) / 2 + (j - i - 1));
}

double MobiusMasses2::pair(int i, int j) const { return pairs[pair_index(n(), i, j)]; }

void MobiusMasses2::validate() const {
    int n = this->n();
    if (n < 2) throw std::invalid_argument("Möbius masses need at least 2 objectives");
    require_same_size(static_cast<std::size_t>(n * (n - 1) / 2), pairs.size(), "pair masses");
    double sum = std::accumulate(singles.begin(), singles.end(), 0.0) +
                 std::accumulate(pairs.begin(), pairs.end(), 0.0);
    if (std::abs(sum - 1) > kTolerance) throw std::invalid_argument("Möbius masses do not sum to 1");
    // Worst-case subset A collects exactly the negative interactions with j.
    for (int j = 0; j < n; ++j) {
        double worst = singles[j];
        for (int i = 0; i < n; ++i) {
            if (i != j) worst += std::min(0.0, pair(i, j));
        }
        if (worst < -kTolerance) throw std::invalid_argument("2-additive masses violate monotonicity");
    }
}

ParamPoint MobiusMasses2::coords() const {
    ParamPoint out = singles;
    out.insert(out.end(), pairs.begin(), pairs.end());
    return out;
}

MobiusMasses2 MobiusMasses2::from_coords(int n, std::span<const double> coords) {
    require_same_size(parameter_dim(Family::Choquet2, n), coords.size(), "Choquet2 coordinates");
    MobiusMasses2 m;
    m.singles.assign(coords.begin(), coords.begin() + n);
    m.pairs.assign(coords.begin() + n, coords.end());
    return m;
}

std::size_t parameter_dim(Family family, std::size_t n) {
    return family == Family::Choquet2 ? n + n * (n - 1) / 2 : n;
}

PreferenceModel::PreferenceModel(Family family, OwaWeights weights, Sense sense)
    : family_(family), params_(std::move(weights)), sense_(sense) {
    if (family == Family::Choquet2) throw std::invalid_argument("Choquet2 models take Möbius masses");
    std::get<OwaWeights>(params_).validate();
}

PreferenceModel::PreferenceModel(MobiusMasses2 masses, Sense sense)
    : family_(Family::Choquet2), params_(std::move(masses)), sense_(sense) {
    std::get<MobiusMasses2>(params_).validate();
}

PreferenceModel PreferenceModel::from_coords(Family family, Sense sense,
                                             std::span<const double> coords) {
    if (family == Family::Choquet2) {
        // Solve n + n(n-1)/2 = d for n.
        int n = 2;
        while (parameter_dim(Family::Choquet2, n) < coords.size()) ++n;
        return PreferenceModel(MobiusMasses2::from_coords(n, coords), sense);
    }
    OwaWeights w{{coords.begin(), coords.end()},
                 family == Family::OWA ? default_owa_monotone(sense) : Monotone::None};
    return PreferenceModel(family, std::move(w), sense);
}

std::size_t PreferenceModel::objectives() const {
    if (auto* m = std::get_if<MobiusMasses2>(&params_)) return m->singles.size();
    return std::get<OwaWeights>(params_).w.size();
}

ParamPoint PreferenceModel::coords() const {
    if (auto* m = std::get_if<MobiusMasses2>(&params_)) return m->coords();
    return std::get<OwaWeights>(params_).w;
}

double PreferenceModel::evaluate(const CostVector& y) const {
    switch (family_) {
        case Family::WS: return eval_ws(std::get<OwaWeights>(params_), y);
        case Family::OWA: return eval_owa(std::get<OwaWeights>(params_), y);
        case Family::Choquet2: return eval_choquet_mobius(std::get<MobiusMasses2>(params_), y);
    }
    return 0;
}

bool PreferenceModel::prefers(const CostVector& a, const CostVector& b) const {
    return loss_sign(sense_) * (evaluate(a) - evaluate(b)) <= 0;
}

std::vector<std::size_t> ascending_order(const CostVector& y) {
    std::vector<std::size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
    return idx;
}

double eval_ws(const OwaWeights& w, const CostVector& y) {
    require_same_size(w.w.size(), y.size(), "eval_ws");
    double s = 0;
    for (std::size_t j = 0; j < y.size(); ++j) s += w.w[j] * y[j];
    return s;
}

double eval_owa(const OwaWeights& w, const CostVector& y) {
    require_same_size(w.w.size(), y.size(), "eval_owa");
    auto order = ascending_order(y);
    double s = 0;
    for (std::size_t j = 0; j < y.size(); ++j) s += w.w[j] * y[order[j]];
    return s;
}

double eval_choquet_capacity(const Capacity& cap, const CostVector& y) {
    require_same_size(static_cast<std::size_t>(cap.n()), y.size(), "eval_choquet_capacity");
    auto order = ascending_order(y);
    std::uint32_t upper = cap.values().full_set();  // X_(j) = {(j),...,(n)}
    double prev = 0, s = 0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        double cur = y[order[j]];
        s += (cur - prev) * cap[upper];
        prev = cur;
        upper &= ~(1u << order[j]);
    }
    return s;
}

double eval_choquet_mobius(const MobiusMasses2& m, const CostVector& y) {
    int n = m.n();
    require_same_size(static_cast<std::size_t>(n), y.size(), "eval_choquet_mobius");
    double s = 0;
    for (int j = 0; j < n; ++j) s += m.singles[j] * y[j];
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += m.pairs[k++] * std::min(y[i], y[j]);
    return s;
}

SetFunction mobius_from_capacity(const Capacity& cap) {
    SetFunction m(cap.n());
    for (std::uint32_t a = 0; a <= m.full_set(); ++a) {
        double s = 0;
        // Enumerate B ⊆ A, including the empty set.
        for (std::uint32_t b = a;; b = (b - 1) & a) {
            int parity = std::popcount(a & ~b) & 1;
            s += parity ? -cap[b] : cap[b];
            if (b == 0) break;
        }
        m[a] = s;
    }
    return m;
}

Capacity capacity_from_mobius(const SetFunction& m) {
    SetFunction v(m.n());
    for (std::uint32_t a = 0; a <= v.full_set(); ++a) {
        double s = 0;
        for (std::uint32_t b = a;; b = (b - 1) & a) {
            s += m[b];
            if (b == 0) break;
        }
        v[a] = s;
    }
    return Capacity(std::move(v));
}

std::vector<double> featurize(Family family, const CostVector& y) {
    std::vector<double> phi;
    phi.reserve(parameter_dim(family, y.size()));
    switch (family) {
        case Family::WS:
            phi = y.values();
            break;
        case Family::OWA:
            phi = y.values();
            std::sort(phi.begin(), phi.end());
            break;
        case Family::Choquet2:
            phi = y.values();
            for (std::size_t i = 0; i < y.size(); ++i)
                for (std::size_t j = i + 1; j < y.size(); ++j) phi.push_back(std::min(y[i], y[j]));
            break;
    }
    return phi;
}

ParamPoint sample_simplex(std::size_t dim, Rng& rng, Monotone order) {
    if (dim < 2) throw std::invalid_argument("sample_simplex: dim must be >= 2");
    std::exponential_distribution<double> expo(1.0);
    ParamPoint p(dim);
    double sum = 0;
    for (auto& x : p) sum += (x = expo(rng));
    for (auto& x : p) x /= sum;
    if (order == Monotone::NonDecreasing) std::sort(p.begin(), p.end());
    if (order == Monotone::NonIncreasing) std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

}  // namespace riga
