#pragma once

#include <vector>

// Gauss-Legendre rules for the iterated time integrals (thin wrapper over
// GSL's fixed-order tables).

namespace ekin {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadRule gauss_legendre(int n, double a, double b);

} // namespace ekin
