#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ekin/model.hpp"
#include "ekin/state_space.hpp"

// Exact stochastic simulation (direct-method Gillespie) of the N-entity jump
// process. Events are ordered tuples (i_1..i_m) firing at rate
// eps^(m-1) * a[m](x_{i_1}..x_{i_m}); the tuple's first entity jumps to a
// state drawn from the kernel row. Rates are recomputed in full each step
// (no dependency graph), which keeps the sampler trivially correct for the
// desk-scale N <= 200 this module supports.

namespace ekin {

struct Configuration {
    std::vector<EntityState> states;
    double time = 0.0;

    int size() const { return static_cast<int>(states.size()); }
};

// Replica r of a run draws from stream `stream + r`, so trajectories are
// independent and each is replayable from (seed, stream) alone.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// mt19937_64 with hand-rolled variate transforms. The generated sequence for
// a given (seed, stream) is part of the artifact contract; <random>
// distributions are avoided because their output may differ across standard
// library implementations.
class ReplicaRng {
public:
    explicit ReplicaRng(const RngSpec& spec);

    double uniform();                // in [0, 1)
    double exponential(double rate); // mean 1/rate; rate > 0

private:
    std::mt19937_64 gen_;
};

// Advance by one event: waiting time ~ Exponential(total rate), event chosen
// proportionally to its rate, first tuple entity re-sampled from the kernel
// row. Never steps past `horizon`: if the waiting time would overshoot (or no
// event can fire), the clock moves to the horizon and the state freezes.
// Requires m_max <= 2 and 1 <= N <= 200.
void step(const InteractionModel& model, Configuration& cfg, double horizon,
          ReplicaRng& rng);

// Repeat `step` until cfg.time reaches the horizon.
void run_until(const InteractionModel& model, Configuration& cfg, double horizon,
               ReplicaRng& rng);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long replicas = 0;
};

// Monte Carlo estimate of E[b(X_t) | X_0 = cfg0] over independent replicas on
// streams spec.stream, spec.stream + 1, ... b must have arity N = cfg0.size().
// Replicas run in parallel; the reduction is over a per-replica value array in
// replica order, so the estimate is identical for any thread count.
MonteCarloEstimate estimate_observable(const InteractionModel& model,
                                       const Configuration& cfg0, const SymTensor& b,
                                       double t, long long replicas,
                                       const RngSpec& spec);

struct MarginalEstimate {
    SymTensor density;   // arity 1, normalized over states
    SymTensor std_error; // per-entry standard error over replicas
    double time = 0.0;
    long long replicas = 0;
};

// Empirical one-particle law at time t: N entities start i.i.d. from f1_0,
// evolve under the model, and the state histogram is averaged over entities
// and replicas. The caller picks the model's epsilon; the chaos experiments
// couple eps = 1/N.
MarginalEstimate empirical_marginal(const InteractionModel& model, const SymTensor& f1_0,
                                    int N, double t, long long replicas,
                                    const RngSpec& spec);

} // namespace ekin
