#pragma once

// Deliberately plain reference network used as a cross-check oracle in
// tests. Keeps its own types and does everything with straightforward
// loops; it must stay independent of the library implementation.

#include <cstddef>
#include <vector>

namespace naive {

using State = std::vector<int>;                      // entries in {-1, 0, +1}
using Matrix = std::vector<std::vector<double>>;     // weights[i][j]

inline Matrix hebbian(const std::vector<State>& patterns) {
    const std::size_t n = patterns.front().size();
    Matrix w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (const State& p : patterns) {
                w[i][j] += static_cast<double>(p[i]) * static_cast<double>(p[j]);
            }
            w[i][j] /= static_cast<double>(n);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        w[i][i] = 0.0;
    }
    return w;
}

inline double energy(const Matrix& w, const State& x) {
    const std::size_t n = x.size();
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            quad += w[i][j] * static_cast<double>(x[i]) * static_cast<double>(x[j]);
        }
    }
    return -0.5 * quad;
}

inline State step(const Matrix& w, const State& x) {
    const std::size_t n = x.size();
    State next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double field = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            field += w[i][j] * static_cast<double>(x[j]);
        }
        next[i] = field > 0.0 ? 1 : (field < 0.0 ? -1 : 0);
    }
    return next;
}

struct Run {
    std::vector<State> states;
    bool converged = false;
};

inline Run run(const Matrix& w, const State& x0, std::size_t max_iterations) {
    Run r;
    r.states.push_back(x0);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        State next = step(w, r.states.back());
        const bool fixed = next == r.states.back();
        r.states.push_back(next);
        if (fixed) {
            r.converged = true;
            break;
        }
    }
    return r;
}

}  // namespace naive
