#pragma once

#include <vector>

#include "ekin/functionals.hpp"
#include "ekin/model.hpp"

// Scaling-limit objects: the dual hierarchy in the limit (order-1 flows plus
// order-2 couplings, no epsilon weights), its iterated-integral expansion,
// the closed nonlinear kinetic equation for the one-particle density, the
// short-time series for its solution, and the chaos-factorization identity.

namespace ekin {

using LimitMarginals = GradedSequence; // kind = observable

struct OneParticleDensity {
    SymTensor f1;
    double time = 0.0;
    bool terms_grew = false; // set by f1_series when truncation stops converging
};

// Component s of the limit hierarchy:
//   sum_j L[1](j) b_s + sum_{j1 != j2} L[2](j1,j2) (b_{s-1} without slot j2).
// Models with m_max = 1 have no coupling term.
SymTensor dual_vlasov_rhs(const InteractionModel& model, const LimitMarginals& b, int s);

LimitMarginals integrate_dual_vlasov(const InteractionModel& model,
                                     const LimitMarginals& b0, double t, double dt);

// The iterated time-ordered integral expansion of the limit marginals,
// evaluated by nested Gauss-Legendre quadrature (quad_nodes per level).
// Supported for components s <= 3 (integral depth <= 2).
LimitMarginals limit_expansion(const InteractionModel& model, const LimitMarginals& b0,
                               double t, int quad_nodes);

struct ConvergenceRow {
    double epsilon;
    double err; // max over s of max-norm(eps^-s B_s(t) - b_s(t))
};

// Scaling study: initial data B^{0,eps}_s = eps^s b0_s, error between the
// rescaled finite-eps solution (expansion route) and the limit solution
// (RK4 route at step dt).
std::vector<ConvergenceRow> mean_field_convergence(const InteractionModel& model,
                                                   const std::vector<double>& epsilons,
                                                   const LimitMarginals& b0, double t,
                                                   double dt);

// Closed kinetic equation right-hand side:
//   L*[1] f1 + contraction over slot 2 of L*[2](1,2) (f1 x f1).
SymTensor vlasov_rhs(const InteractionModel& model, const SymTensor& f1);

// The general-interaction form: sum_{n=1}^{m_max-1} (1/n!) times the sum
// over ordered distinct (n+1)-tuples (j_1..j_{n+1}) of slots 1..n+1 of
// L*[n+1](j_1..j_{n+1}) applied to f1^(x(n+1)), contracted over slots
// 2..n+1. Reduces to vlasov_rhs at m_max = 2.
SymTensor vlasov_rhs_general(const InteractionModel& model, const SymTensor& f1);

// RK4 for the nonlinear equation; checks mass conservation to 1e-10 and
// entries >= -1e-10 (InvariantError otherwise).
OneParticleDensity integrate_vlasov(const InteractionModel& model, const SymTensor& f1_0,
                                    double t, double dt);

// Truncated iterated-integral series for f1(t): term n lives on n+1 slots
// with insertions sum_i L*[2](i, k) between free flows and a final
// contraction over the added slots. Stops early once a term's norm falls
// below 1e-10; flags terms_grew when the truncation stops converging.
OneParticleDensity f1_series(const InteractionModel& model, const SymTensor& f1_0,
                             double t, int n_max, int quad_nodes = 16);

struct ChaosResult {
    double lhs; // sum_s (1/s!) pair(b_s(t), f0^(xs)), b from the limit hierarchy
    double rhs; // (1/k!) pair(b_k(0), f1(t)^(xk)), f1 from the kinetic equation
};

// Chaos identity for k-ary initial observables (only component k nonzero).
ChaosResult chaos_functional(const InteractionModel& model, const LimitMarginals& b0_kary,
                             const SymTensor& f1_0, double t, int s_max,
                             double dt = 1e-3);

} // namespace ekin
