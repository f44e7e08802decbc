// Aggregation-function families used to scalarize cost vectors: weighted
// sums, ordered weighted averages and Choquet integrals (dense capacities
// for small n, 2-additive Möbius masses for the optimization engine).
//
// Every family is linear in its parameters for a fixed cost vector, which is
// what the regret engine relies on: f_w(y) = dot(w, featurize(family, y)).

#ifndef RIGA_PREFERENCE_HPP
#define RIGA_PREFERENCE_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace riga {

using Rng = std::mt19937_64;

/// Flat parameter coordinates (weights, or Möbius masses in canonical order).
using ParamPoint = std::vector<double>;

inline constexpr double kTolerance = 1e-9;

enum class Sense { Minimize, Maximize };
enum class Family { WS, OWA, Choquet2 };
enum class Monotone { None, NonDecreasing, NonIncreasing };

std::string_view to_string(Sense s);
std::string_view to_string(Family f);
std::string_view to_string(Monotone m);
Sense parse_sense(std::string_view s);
Family parse_family(std::string_view s);
Monotone parse_monotone(std::string_view s);

/// Weight monotonicity that favours balanced solutions for a given sense.
Monotone default_owa_monotone(Sense s);

/// +1 for minimization, -1 for maximization. Multiplying a difference of
/// aggregated values by this sign turns "larger is worse" into the canonical
/// minimization convention.
inline double loss_sign(Sense s) { return s == Sense::Minimize ? 1.0 : -1.0; }

class CostVector {
public:
    CostVector() = default;
    explicit CostVector(std::vector<double> values);
    CostVector(std::initializer_list<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    friend bool operator==(const CostVector&, const CostVector&) = default;
    friend auto operator<=>(const CostVector&, const CostVector&) = default;

private:
    std::vector<double> values_;
};

std::string format(const CostVector& y);

/// u Pareto-dominates v: at least as good everywhere, strictly better once.
bool dominates(const CostVector& u, const CostVector& v, Sense sense);

struct OwaWeights {
    std::vector<double> w;
    Monotone monotone = Monotone::None;

    /// Throws std::invalid_argument unless normalized, in [0,1] and ordered.
    void validate() const;
};

/// Real-valued set function over subsets of {0..n-1}, indexed by bitmask.
class SetFunction {
public:
    SetFunction() = default;
    explicit SetFunction(int n);
    SetFunction(int n, std::vector<double> table);

    int n() const { return n_; }
    std::uint32_t full_set() const { return (1u << n_) - 1u; }
    double operator[](std::uint32_t subset) const { return table_[subset]; }
    double& operator[](std::uint32_t subset) { return table_[subset]; }
    const std::vector<double>& table() const { return table_; }

private:
    int n_ = 0;
    std::vector<double> table_;
};

/// Thrown when a set function is not a normalized monotone capacity.
class CapacityError : public std::invalid_argument {
public:
    CapacityError(const std::string& what, std::uint32_t smaller, std::uint32_t larger)
        : std::invalid_argument(what), smaller(smaller), larger(larger) {}
    std::uint32_t smaller;
    std::uint32_t larger;
};

/// Normalized monotone set function. Construction validates; n <= 12.
class Capacity {
public:
    explicit Capacity(SetFunction v);
    int n() const { return v_.n(); }
    double operator[](std::uint32_t subset) const { return v_[subset]; }
    const SetFunction& values() const { return v_; }

private:
    SetFunction v_;
};

/// Möbius masses of a 2-additive capacity: singletons in objective order,
/// then pairs {i,j} (i<j) in lexicographic order.
struct MobiusMasses2 {
    std::vector<double> singles;
    std::vector<double> pairs;

    int n() const { return static_cast<int>(singles.size()); }
    double pair(int i, int j) const;
    /// Throws unless masses sum to one and every marginal interaction set
    /// keeps the reconstructed capacity monotone.
    void validate() const;
    ParamPoint coords() const;
    static MobiusMasses2 from_coords(int n, std::span<const double> coords);
};

/// Index of pair {i,j}, i<j, in the lexicographic pair order.
std::size_t pair_index(int n, int i, int j);

std::size_t parameter_dim(Family family, std::size_t n);

class PreferenceModel {
public:
    PreferenceModel(Family family, OwaWeights weights, Sense sense);
    PreferenceModel(MobiusMasses2 masses, Sense sense);

    /// Builds a model from flat coordinates. OWA monotonicity defaults to the
    /// balanced-favouring order for `sense`.
    static PreferenceModel from_coords(Family family, Sense sense, std::span<const double> coords);

    Family family() const { return family_; }
    Sense sense() const { return sense_; }
    std::size_t objectives() const;
    const std::variant<OwaWeights, MobiusMasses2>& params() const { return params_; }
    ParamPoint coords() const;
    double evaluate(const CostVector& y) const;
    /// True when `a` is weakly preferred to `b` (ties favour `a`).
    bool prefers(const CostVector& a, const CostVector& b) const;

private:
    Family family_;
    std::variant<OwaWeights, MobiusMasses2> params_;
    Sense sense_;
};

double eval_ws(const OwaWeights& w, const CostVector& y);
double eval_owa(const OwaWeights& w, const CostVector& y);
double eval_choquet_capacity(const Capacity& cap, const CostVector& y);
double eval_choquet_mobius(const MobiusMasses2& m, const CostVector& y);

SetFunction mobius_from_capacity(const Capacity& cap);
/// Throws CapacityError with the violating (A, B) if the reconstruction is
/// not monotone, or if masses do not sum to one.
Capacity capacity_from_mobius(const SetFunction& m);

std::vector<double> featurize(Family family, const CostVector& y);

/// Uniform point on the (dim-1)-simplex via normalized exponential spacings;
/// sorted per `order` when requested (uniform on the ordered sub-simplex).
ParamPoint sample_simplex(std::size_t dim, Rng& rng, Monotone order = Monotone::None);

/// Indices that sort `y` ascending, ties broken by original index.
std::vector<std::size_t> ascending_order(const CostVector& y);

}  // namespace riga

#endif  // RIGA_PREFERENCE_HPP
