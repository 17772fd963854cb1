#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace ccfd {

/// Uniform 1D grid on [0, L] with N intervals (N+1 nodes).
struct Grid {
    int n_intervals = 0;
    double length = 0.0;
    double spacing = 0.0;
    std::vector<double> nodes;

    static Grid uniform(int n_intervals, double length) {
        if (n_intervals < 1) throw std::invalid_argument("grid needs at least one interval");
        if (!(length > 0.0)) throw std::invalid_argument("grid length must be positive");
        Grid g;
        g.n_intervals = n_intervals;
        g.length = length;
        g.spacing = length / n_intervals;
        g.nodes.resize(n_intervals + 1);
        for (int i = 0; i <= n_intervals; ++i)
            g.nodes[i] = length * static_cast<double>(i) / n_intervals;
        g.nodes.back() = length;
        return g;
    }

    /// Max deviation from uniform spacing, relative to L.
    double spacing_defect() const {
        double worst = std::abs(nodes.front()) + std::abs(nodes.back() - length);
        for (std::size_t i = 1; i < nodes.size(); ++i)
            worst = std::max(worst, std::abs(nodes[i] - nodes[i - 1] - spacing));
        return worst / length;
    }
};

} // namespace ccfd
