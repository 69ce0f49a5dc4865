#pragma once

#include "ekin/cumulants.hpp"
#include "ekin/functionals.hpp"
#include "ekin/model.hpp"

// The coupled evolution equations for marginal observables (dual side) and
// marginal states, the nonperturbative expansion solving the dual side, and
// the duality cross-check between the two.
//
// Dual side, component s:
//   dB_s/dt = L_s B_s
//     + sum_{n=1}^{s} (1/n!) sum_{k=n+1}^{s} (1/(k-n)!) eps^(k-1)
//       sum over ordered distinct k-tuples (j_1..j_k) in 1..s
//       sum over ordered distinct n-tuples (i_1..i_n) drawn from the j's
//       L[k](j_1..j_k) applied to B_{s-n} embedded with slots {i} removed.
// Terms with k > m_max vanish (no order-k interaction).
//
// States side, component s:
//   dF_s/dt = L*_s F_s
//     + sum_{k=1}^{s} (1/k!) sum over ordered k-tuples (i_1..i_k) in 1..s
//       sum_{n=1}^{m_max-k} (eps^(k+n-1)/n!)
//       sum over orderings (j_1..j_{k+n}) of {i_1..i_k, s+1..s+n}
//       contraction over slots s+1..s+n of L*[k+n](j_1..j_{k+n}) F_{s+n},
// with F_{s'} = 0 above the truncation.

namespace ekin {

SymTensor dual_bbgky_rhs(const InteractionModel& model, const MarginalObservables& b,
                         int s);

// B_s(t) = sum_{n=0}^{s} (1/n!) sum over ordered distinct n-tuples Z of
// cumulant(t, s, Z) applied to B^0_{s-n} embedded on the slots not in Z.
MarginalObservables solve_expansion(const InteractionModel& model,
                                    const MarginalObservables& b0, double t);

// Classical RK4 on the closed triangular system, step count round(t/dt).
MarginalObservables integrate_dual_bbgky(const InteractionModel& model,
                                         const MarginalObservables& b0, double t,
                                         double dt);

SymTensor bbgky_states_rhs(const InteractionModel& model, const MarginalStates& f,
                           int s);

MarginalStates integrate_bbgky_states(const InteractionModel& model,
                                      const MarginalStates& f0, double t, double dt);

// |(B(t),F(0)) - (B(0),F(t))| under the graded bracket, with both sides
// integrated by RK4 at the same step size.
double duality_check(const InteractionModel& model, const MarginalObservables& b0,
                     const MarginalStates& f0, double t, double dt);

} // namespace ekin
