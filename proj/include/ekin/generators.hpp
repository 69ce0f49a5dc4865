#pragma once

#include <vector>

#include "ekin/linop.hpp"
#include "ekin/model.hpp"

// Markov jump generators for n interacting entities. The generator acting on
// observables is a sum over interaction orders m and ordered tuples of
// distinct entity indices of elementary operators
//
//   (L[m](i_1..i_m) b)(x) = a[m](x_{i_1}..x_{i_m}) *
//       ( sum_v A[m](v; x_{i_1}..x_{i_m}) b(x with slot i_1 <- v) - b(x) )
//
// weighted by epsilon^(m-1). The adjoint generator acting on states is the
// transpose under the counting-measure bracket.

namespace ekin {

struct SubsetOperatorSpec {
    int m = 1;
    std::vector<int> tuple; // ordered, distinct, 1-based entries in [1, n]
};

// All ordered m-tuples of distinct 0-based indices from [0, n), in
// lexicographic order.
std::vector<std::vector<int>> ordered_tuples(int n, int m);

// The elementary order-m operator on its own m-slot space, jump slot first:
// a dense S^m x S^m matrix in the row-major joint index. No epsilon factor.
std::vector<double> interaction_matrix(const InteractionModel& model, int m);
// Its transpose (adjoint elementary operator acting on states).
std::vector<double> adjoint_interaction_matrix(const InteractionModel& model, int m);

// Apply a small operator on S^m to the given 0-based slots of a rank-n
// tensor. Workhorse of every hierarchy right-hand side.
SymTensor apply_on_slots(const std::vector<double>& small_op, int m,
                         const SymTensor& t, const std::vector<int>& slots);

// Elementary operator lifted to the n-entity space as a dense matrix.
// No epsilon factor (applied by the caller).
LinOp lambda_m(const InteractionModel& model, int n, const SubsetOperatorSpec& spec);
LinOp lambda_star_m(const InteractionModel& model, int n, const SubsetOperatorSpec& spec);

// Full generators: sum over m = 1..min(m_max, n) of epsilon^(m-1) times the
// sum over all ordered distinct m-tuples.
LinOp lambda_n(const InteractionModel& model, int n);
LinOp lambda_star_n(const InteractionModel& model, int n);

// Matrix exponential exp(t * op) by scaling and squaring with a truncated
// Taylor series (scaled norm <= 0.5, term cutoff 1e-13). For adjoint
// generators and t >= 0 the result is checked to be column-stochastic and
// nonnegative to 1e-10 (InvariantError otherwise).
LinOp semigroup(const LinOp& op, double t);

} // namespace ekin
