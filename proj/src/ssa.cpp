#include "ekin/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ekin/errors.hpp"
#include "ekin/kernels.hpp"

namespace ekin {

namespace {

constexpr int max_entities = 200;
constexpr long long max_steps = 100000000LL;

void check_simulable(const InteractionModel& model, int n) {
    if (n < 1 || n > max_entities)
        throw ValidationError("simulation supports 1 <= N <= 200");
    if (model.m_max > 2)
        throw ValidationError("simulation supports interaction order m_max <= 2");
}

int replica_threads(long long replicas) {
    int avail = 1;
#ifdef _OPENMP
    avail = omp_get_max_threads();
#endif
    const int limit = kernels::thread_limit();
    if (limit > 0) avail = std::min(avail, limit);
    return static_cast<int>(std::max<long long>(1, std::min<long long>(avail, replicas)));
}

// Sample an index from an unnormalized weight array by inverse transform;
// `total` is the precomputed sum. Falls back to the last positive weight when
// rounding pushes the target past the end.
int sample_weighted(const double* w, int count, double total, double u) {
    double target = u * total;
    int last_pos = -1;
    for (int i = 0; i < count; ++i) {
        if (w[i] <= 0.0) continue;
        last_pos = i;
        target -= w[i];
        if (target < 0.0) return i;
    }
    return last_pos;
}

} // namespace

ReplicaRng::ReplicaRng(const RngSpec& spec) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                      static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(spec.stream),
                      static_cast<std::uint32_t>(spec.stream >> 32)};
    gen_ = std::mt19937_64(seq);
}

double ReplicaRng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double ReplicaRng::exponential(double rate) {
    // (x >> 11) + 1 is uniform on {1..2^53}, so u lies in (0, 1] and the log
    // is finite.
    const double u = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    return -std::log(u) / rate;
}

void step(const InteractionModel& model, Configuration& cfg, double horizon,
          ReplicaRng& rng) {
    const int n = cfg.size();
    check_simulable(model, n);
    const int s = model.space.S();
    const bool pairs = model.m_max >= 2 && n >= 2;

    std::vector<int> flat(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        flat[static_cast<std::size_t>(i)] = model.space.flatten(cfg.states[static_cast<std::size_t>(i)]);

    // Event list in fixed order: singles by entity, then ordered pairs in
    // lexicographic (i, j) order.
    const std::size_t n_events =
        static_cast<std::size_t>(n) + (pairs ? static_cast<std::size_t>(n) * (n - 1) : 0);
    std::vector<double> rates(n_events, 0.0);
    const std::vector<double>& a1 = model.rates.at(1);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = a1[static_cast<std::size_t>(flat[static_cast<std::size_t>(i)])];
        rates[static_cast<std::size_t>(i)] = r;
        total += r;
    }
    if (pairs) {
        const std::vector<double>& a2 = model.rates.at(2);
        std::size_t e = static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const std::size_t tuple =
                    static_cast<std::size_t>(flat[static_cast<std::size_t>(i)]) *
                        static_cast<std::size_t>(s) +
                    static_cast<std::size_t>(flat[static_cast<std::size_t>(j)]);
                const double r = model.epsilon * a2[tuple];
                rates[e++] = r;
                total += r;
            }
    }

    if (total <= 0.0) {
        cfg.time = horizon;
        return;
    }
    const double wait = rng.exponential(total);
    if (cfg.time + wait >= horizon) {
        cfg.time = horizon;
        return;
    }
    cfg.time += wait;

    const int event = sample_weighted(rates.data(), static_cast<int>(n_events), total,
                                      rng.uniform());
    int mover;
    std::size_t tuple;
    int order;
    if (event < n) {
        mover = event;
        tuple = static_cast<std::size_t>(flat[static_cast<std::size_t>(event)]);
        order = 1;
    } else {
        const int k = event - n;
        const int i = k / (n - 1);
        int j = k % (n - 1);
        if (j >= i) ++j;
        mover = i;
        tuple = static_cast<std::size_t>(flat[static_cast<std::size_t>(i)]) *
                    static_cast<std::size_t>(s) +
                static_cast<std::size_t>(flat[static_cast<std::size_t>(j)]);
        order = 2;
    }
    const double* row = model.kernel_row(order, tuple);
    const int v = sample_weighted(row, s, 1.0, rng.uniform());
    cfg.states[static_cast<std::size_t>(mover)] = model.space.unflatten(v);
}

void run_until(const InteractionModel& model, Configuration& cfg, double horizon,
               ReplicaRng& rng) {
    long long steps = 0;
    while (cfg.time < horizon) {
        step(model, cfg, horizon, rng);
        if (++steps > max_steps)
            throw InvariantError("jump process exceeded the step budget");
    }
}

MonteCarloEstimate estimate_observable(const InteractionModel& model,
                                       const Configuration& cfg0, const SymTensor& b,
                                       double t, long long replicas,
                                       const RngSpec& spec) {
    const int n = cfg0.size();
    check_simulable(model, n);
    if (b.arity() != n)
        throw ValidationError("observable arity must equal the entity count");
    if (replicas < 2) throw ValidationError("need at least 2 replicas");
    const double horizon = cfg0.time + t;

    std::vector<double> values(static_cast<std::size_t>(replicas), 0.0);
    const int threads = replica_threads(replicas);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long r = 0; r < replicas; ++r) {
        ReplicaRng rng({spec.seed, spec.stream + static_cast<std::uint64_t>(r)});
        Configuration cfg = cfg0;
        run_until(model, cfg, horizon, rng);
        std::vector<int> coords(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            coords[static_cast<std::size_t>(i)] =
                model.space.flatten(cfg.states[static_cast<std::size_t>(i)]);
        values[static_cast<std::size_t>(r)] = b.at(coords);
    }

    double mean = 0.0;
    for (long long r = 0; r < replicas; ++r)
        mean += values[static_cast<std::size_t>(r)];
    mean /= static_cast<double>(replicas);
    double var = 0.0;
    for (long long r = 0; r < replicas; ++r) {
        const double d = values[static_cast<std::size_t>(r)] - mean;
        var += d * d;
    }
    var /= static_cast<double>(replicas - 1);
    return {mean, std::sqrt(var / static_cast<double>(replicas)), replicas};
}

MarginalEstimate empirical_marginal(const InteractionModel& model, const SymTensor& f1_0,
                                    int N, double t, long long replicas,
                                    const RngSpec& spec) {
    check_simulable(model, N);
    if (f1_0.arity() != 1) throw ValidationError("initial law must have rank 1");
    if (replicas < 2) throw ValidationError("need at least 2 replicas");
    const int s = model.space.S();
    double mass = 0.0;
    for (std::size_t i = 0; i < f1_0.size(); ++i) {
        if (f1_0[i] < -1e-12) throw ValidationError("initial law has negative entries");
        mass += f1_0[i];
    }
    if (std::abs(mass - 1.0) > 1e-8)
        throw ValidationError("initial law must be normalized");

    // Per-replica state counts; integer histograms make the merge exact and
    // independent of thread scheduling.
    std::vector<int> counts(static_cast<std::size_t>(replicas) * static_cast<std::size_t>(s), 0);
    const int threads = replica_threads(replicas);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long r = 0; r < replicas; ++r) {
        ReplicaRng rng({spec.seed, spec.stream + static_cast<std::uint64_t>(r)});
        Configuration cfg;
        cfg.states.resize(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i) {
            const int v = sample_weighted(f1_0.data(), s, mass, rng.uniform());
            cfg.states[static_cast<std::size_t>(i)] = model.space.unflatten(v);
        }
        run_until(model, cfg, t, rng);
        int* row = counts.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(s);
        for (int i = 0; i < N; ++i)
            ++row[model.space.flatten(cfg.states[static_cast<std::size_t>(i)])];
    }

    // Replica-ordered reduction of the per-replica occupancy fractions.
    std::vector<double> sum(static_cast<std::size_t>(s), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(s), 0.0);
    for (long long r = 0; r < replicas; ++r) {
        const int* row = counts.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(s);
        for (int v = 0; v < s; ++v) {
            const double p = static_cast<double>(row[v]) / static_cast<double>(N);
            sum[static_cast<std::size_t>(v)] += p;
            sumsq[static_cast<std::size_t>(v)] += p * p;
        }
    }
    MarginalEstimate out{SymTensor(model.space, 1), SymTensor(model.space, 1), t, replicas};
    const double m = static_cast<double>(replicas);
    for (int v = 0; v < s; ++v) {
        const double mean = sum[static_cast<std::size_t>(v)] / m;
        const double var =
            std::max(0.0, (sumsq[static_cast<std::size_t>(v)] - m * mean * mean) / (m - 1.0));
        out.density[static_cast<std::size_t>(v)] = mean;
        out.std_error[static_cast<std::size_t>(v)] = std::sqrt(var / m);
    }
    return out;
}

} // namespace ekin
