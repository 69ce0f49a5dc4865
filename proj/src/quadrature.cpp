#include "ekin/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include "ekin/errors.hpp"

namespace ekin {

QuadRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ValidationError("quadrature order must be >= 1");
    gsl_integration_glfixed_table* table =
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    if (!table) throw ValidationError("failed to build quadrature table");
    QuadRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i),
                                      &rule.nodes[static_cast<std::size_t>(i)],
                                      &rule.weights[static_cast<std::size_t>(i)], table);
    gsl_integration_glfixed_table_free(table);
    return rule;
}

} // namespace ekin
