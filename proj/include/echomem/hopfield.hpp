#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "echomem/error.hpp"

namespace echomem {

using Spin = std::int8_t;

/// Neuron activation vector over {-1, 0, +1}.
///
/// Stored (retrieval) patterns are strictly +-1; transient states produced
/// by the dynamics may contain 0 ("neutral") entries when a neuron's input
/// field ties at exactly zero.
class BipolarPattern {
public:
    BipolarPattern() = default;
    explicit BipolarPattern(std::vector<Spin> values);

    /// Convenience constructor for literals and bindings.
    static BipolarPattern from_ints(const std::vector<int>& values);

    std::size_t size() const { return values_.size(); }
    Spin operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Spin>& values() const { return values_; }

    /// True when no entry is 0.
    bool strictly_bipolar() const;

    BipolarPattern negated() const;

    bool operator==(const BipolarPattern&) const = default;

private:
    std::vector<Spin> values_;
};

/// Symmetric N x N coupling matrix with zero diagonal.
class WeightMatrix {
public:
    WeightMatrix() = default;

    /// Takes row-major data; rejects asymmetric or nonzero-diagonal input.
    WeightMatrix(std::size_t n, std::vector<double> row_major);

    static WeightMatrix zero(std::size_t n);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const WeightMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Knobs for the discrete synchronous dynamics. The sign rule at a zero
/// field is fixed: the neuron goes neutral (0).
struct DynamicsConfig {
    std::size_t max_iterations = 100;
    std::vector<double> bias;  ///< per-neuron input bias; empty means all zeros

    bool operator==(const DynamicsConfig&) const = default;
};

/// Full record of one relaxation: every visited state and its energy.
struct NetworkTrace {
    std::vector<BipolarPattern> states;  ///< initial state first, final state last
    std::vector<double> energies;        ///< one per state
    bool converged = false;              ///< true iff the last two states are identical

    std::size_t iterations() const { return states.empty() ? 0 : states.size() - 1; }
};

/// How a final state relates to the stored patterns.
struct MatchOutcome {
    enum class Kind { Retrieval, Reversed, Spurious };

    Kind kind = Kind::Spurious;
    std::size_t class_index = 0;  ///< meaningful for Retrieval and Reversed
    double overlap = 0.0;         ///< max_k |final . stored_k| / N

    bool operator==(const MatchOutcome&) const = default;
};

/// Plain Hebbian outer product x x^T as an integer matrix: unit diagonal,
/// no 1/N scaling. This is a diagnostic helper; the shipped trainer is
/// hebbian_train below.
std::vector<std::vector<int>> pattern_outer_product(const BipolarPattern& x);

/// Train weights from p >= 1 strictly bipolar patterns of equal length N:
/// w_ij = (1/N) sum_k x_i^k x_j^k, then the diagonal is forced to zero.
WeightMatrix hebbian_train(std::span<const BipolarPattern> patterns);

/// E = -1/2 sum_ij w_ij x_i x_j - sum_i I_i x_i. An empty bias means zeros.
double energy(const WeightMatrix& w, const BipolarPattern& x,
              std::span<const double> bias = {});

/// One synchronous update: x'_i = sgn(sum_j w_ij x_j + I_i), with sgn(0) = 0.
/// All neurons are computed from the same input state.
BipolarPattern step(const WeightMatrix& w, const BipolarPattern& x,
                    const DynamicsConfig& cfg = {});

/// Iterate step until the state repeats or max_iterations is reached.
/// Non-convergence is reported through the trace, not as an error.
NetworkTrace run_to_convergence(const WeightMatrix& w, const BipolarPattern& x0,
                                const DynamicsConfig& cfg = {});

/// Exact-equality match of a final state against the stored patterns:
/// equality with pattern k -> Retrieval(k); equality with its negation ->
/// Reversed(k); anything else -> Spurious. The overlap field is diagnostic.
MatchOutcome match_state(const BipolarPattern& final_state,
                         std::span<const BipolarPattern> stored);

}  // namespace echomem
