#pragma once

#include <cmath>
#include <span>

namespace flocksim {

// Agent states are stored as flat row-major arrays of shape (n_agents, dim);
// agent i occupies the slice [i*dim, (i+1)*dim).

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return std::sqrt(s);
}

inline std::span<const double> agent_slice(std::span<const double> flat, int agent, int dim) {
    return flat.subspan(static_cast<std::size_t>(agent) * dim, dim);
}

inline std::span<double> agent_slice(std::span<double> flat, int agent, int dim) {
    return flat.subspan(static_cast<std::size_t>(agent) * dim, dim);
}

} // namespace flocksim
