#pragma once

#include "ekin/generators.hpp"
#include "ekin/state_space.hpp"

// Grand-canonical mean-value functionals and the transforms between full and
// marginal descriptions of observables and states.

namespace ekin {

using FullObservables = GradedSequence; // kind = observable, components O_n
using FullStates = GradedSequence;      // kind = state, scalar D_0 (usually 1)
using MarginalObservables = GradedSequence;
using MarginalStates = GradedSequence;

// The graded bracket sum_s (1/s!) pair(B_s, F_s), including the s=0 scalar
// term. Sequences of different truncation are compared over the common part.
double graded_bracket(const GradedSequence& obs, const GradedSequence& state);

// Normalization (I, D): the graded bracket against the constant-1 sequence.
double partition_function(const FullStates& d);

// <O> = (I,D)^{-1} sum_n (1/n!) pair(O_n, D_n). Throws ValidationError when
// the normalization vanishes.
double mean_value(const FullObservables& o, const FullStates& d);

// F_s = (I,D)^{-1} sum_{n=0}^{n_max-s} (1/n!) * (D_{s+n} contracted over its
// last n slots). The s=0 component is 1 by construction.
MarginalStates marginals_from_full(const FullStates& d, int s_max);

// B_s = sum_{n=0}^{s} ((-1)^n / n!) sum over ordered distinct n-tuples
// (j_1..j_n) in 1..s of O_{s-n} embedded on the complementary slots.
MarginalObservables marginal_obs_from_obs(const FullObservables& o, int s_max);

// |<O(t)>_{D(0)} - <O(0)>_{D(t)}| with componentwise evolution
// O_n(t) = exp(t Lambda_n) O_n, D_n(t) = exp(t Lambda*_n) D_n.
double duality_full(const InteractionModel& model, const FullObservables& o0,
                    const FullStates& d0, double t);

} // namespace ekin
