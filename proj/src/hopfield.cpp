#include "echomem/hopfield.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace echomem {

namespace {

void require_same_length(std::size_t n, std::size_t got, const char* what) {
    if (n != got) {
        throw InvalidArgument(std::string(what) + ": expected length " +
                              std::to_string(n) + ", got " + std::to_string(got));
    }
}

std::span<const double> checked_bias(std::size_t n, std::span<const double> bias) {
    if (!bias.empty() && bias.size() != n) {
        throw InvalidArgument("bias vector: expected length " + std::to_string(n) +
                              ", got " + std::to_string(bias.size()));
    }
    return bias;
}

}  // namespace

BipolarPattern::BipolarPattern(std::vector<Spin> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw InvalidArgument("pattern needs at least 2 neurons, got " +
                              std::to_string(values_.size()));
    }
    for (const Spin s : values_) {
        if (s != -1 && s != 0 && s != 1) {
            throw InvalidArgument("pattern entries must be -1, 0 or +1");
        }
    }
}

BipolarPattern BipolarPattern::from_ints(const std::vector<int>& values) {
    std::vector<Spin> v;
    v.reserve(values.size());
    for (const int x : values) {
        if (x < -1 || x > 1) {
            throw InvalidArgument("pattern entries must be -1, 0 or +1");
        }
        v.push_back(static_cast<Spin>(x));
    }
    return BipolarPattern(std::move(v));
}

bool BipolarPattern::strictly_bipolar() const {
    for (const Spin s : values_) {
        if (s == 0) {
            return false;
        }
    }
    return true;
}

BipolarPattern BipolarPattern::negated() const {
    std::vector<Spin> v(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        v[i] = static_cast<Spin>(-values_[i]);
    }
    return BipolarPattern(std::move(v));
}

WeightMatrix::WeightMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n_ * n_) {
        throw InvalidArgument("weight matrix: expected " + std::to_string(n_ * n_) +
                              " entries, got " + std::to_string(data_.size()));
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (data_[i * n_ + i] != 0.0) {
            throw InvalidArgument("weight matrix: nonzero diagonal at " + std::to_string(i));
        }
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (data_[i * n_ + j] != data_[j * n_ + i]) {
                throw InvalidArgument("weight matrix: asymmetric at (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
            }
        }
    }
}

WeightMatrix WeightMatrix::zero(std::size_t n) {
    return WeightMatrix(n, std::vector<double>(n * n, 0.0));
}

std::vector<std::vector<int>> pattern_outer_product(const BipolarPattern& x) {
    const std::size_t n = x.size();
    std::vector<std::vector<int>> out(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i][j] = static_cast<int>(x[i]) * static_cast<int>(x[j]);
        }
    }
    return out;
}

WeightMatrix hebbian_train(std::span<const BipolarPattern> patterns) {
    if (patterns.empty()) {
        throw InvalidArgument("no training patterns given");
    }
    const std::size_t n = patterns.front().size();
    for (const BipolarPattern& p : patterns) {
        require_same_length(n, p.size(), "training pattern");
        if (!p.strictly_bipolar()) {
            throw InvalidArgument("training pattern contains zero entries");
        }
    }

    // Accumulate in integers so the final weights are exact multiples of 1/N
    // regardless of pattern order.
    std::vector<long long> sums(n * n, 0);
    for (const BipolarPattern& p : patterns) {
        for (std::size_t i = 0; i < n; ++i) {
            const long long xi = p[i];
            for (std::size_t j = 0; j < n; ++j) {
                sums[i * n + j] += xi * p[j];
            }
        }
    }

    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            w[i * n + j] = i == j ? 0.0
                                  : static_cast<double>(sums[i * n + j]) /
                                        static_cast<double>(n);
        }
    }
    return WeightMatrix(n, std::move(w));
}

double energy(const WeightMatrix& w, const BipolarPattern& x, std::span<const double> bias) {
    const std::size_t n = w.size();
    require_same_length(n, x.size(), "state");
    bias = checked_bias(n, bias);

    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = w.row(i);
        const double xi = x[i];
        double field = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            field += row[j] * static_cast<double>(x[j]);
        }
        quad += xi * field;
    }
    double drive = 0.0;
    for (std::size_t i = 0; i < bias.size(); ++i) {
        drive += bias[i] * static_cast<double>(x[i]);
    }
    return -0.5 * quad - drive;
}

BipolarPattern step(const WeightMatrix& w, const BipolarPattern& x, const DynamicsConfig& cfg) {
    const std::size_t n = w.size();
    require_same_length(n, x.size(), "state");
    const auto bias = checked_bias(n, cfg.bias);

    std::vector<Spin> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = w.row(i);
        double field = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            field += row[j] * static_cast<double>(x[j]);
        }
        if (!bias.empty()) {
            field += bias[i];
        }
        next[i] = field > 0.0 ? Spin{1} : (field < 0.0 ? Spin{-1} : Spin{0});
    }
    return BipolarPattern(std::move(next));
}

NetworkTrace run_to_convergence(const WeightMatrix& w, const BipolarPattern& x0,
                                const DynamicsConfig& cfg) {
    if (cfg.max_iterations < 1) {
        throw InvalidArgument("max_iterations must be >= 1");
    }
    NetworkTrace trace;
    trace.states.push_back(x0);
    trace.energies.push_back(energy(w, x0, cfg.bias));
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        BipolarPattern next = step(w, trace.states.back(), cfg);
        const bool fixed = next == trace.states.back();
        trace.energies.push_back(energy(w, next, cfg.bias));
        trace.states.push_back(std::move(next));
        if (fixed) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

MatchOutcome match_state(const BipolarPattern& final_state,
                         std::span<const BipolarPattern> stored) {
    if (stored.empty()) {
        throw InvalidArgument("no stored patterns to match against");
    }
    const std::size_t n = final_state.size();
    for (const BipolarPattern& s : stored) {
        require_same_length(n, s.size(), "stored pattern");
    }

    MatchOutcome out;
    double best = 0.0;
    for (std::size_t k = 0; k < stored.size(); ++k) {
        long long dot = 0;
        for (std::size_t i = 0; i < n; ++i) {
            dot += static_cast<long long>(final_state[i]) * stored[k][i];
        }
        best = std::max(best, std::abs(static_cast<double>(dot)) / static_cast<double>(n));
    }
    out.overlap = best;

    for (std::size_t k = 0; k < stored.size(); ++k) {
        if (final_state == stored[k]) {
            out.kind = MatchOutcome::Kind::Retrieval;
            out.class_index = k;
            return out;
        }
    }
    for (std::size_t k = 0; k < stored.size(); ++k) {
        if (final_state == stored[k].negated()) {
            out.kind = MatchOutcome::Kind::Reversed;
            out.class_index = k;
            return out;
        }
    }
    out.kind = MatchOutcome::Kind::Spurious;
    return out;
}

}  // namespace echomem
