#pragma once

#include <vector>

namespace flocksim {

/// Gauss-Legendre nodes and weights on [-1, 1], exact for polynomials of
/// degree <= 2n - 1. Newton iteration on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace flocksim
