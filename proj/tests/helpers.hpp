#pragma once

#include <cstdint>
#include <vector>

#include "ekin/model.hpp"
#include "ekin/ssa.hpp"
#include "ekin/state_space.hpp"

// Seeded construction of test fixtures. Everything here is deterministic in
// the seed, so the assertions below are exact reruns, not statistical flakes.

namespace testing {

inline ekin::SymTensor random_tensor(const ekin::StateSpace& sp, int n,
                                     ekin::ReplicaRng& rng, double lo = -1.0,
                                     double hi = 1.0) {
    ekin::SymTensor t(sp, n);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = lo + (hi - lo) * rng.uniform();
    return ekin::symmetrize(t);
}

inline ekin::SymTensor random_density(const ekin::StateSpace& sp, ekin::ReplicaRng& rng) {
    ekin::SymTensor f(sp, 1);
    double mass = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = 0.2 + rng.uniform();
        mass += f[i];
    }
    for (std::size_t i = 0; i < f.size(); ++i) f[i] /= mass;
    return f;
}

inline ekin::GradedSequence random_sequence(ekin::SequenceKind kind,
                                            const ekin::StateSpace& sp, int n_max,
                                            ekin::ReplicaRng& rng, double decay = 1.0) {
    ekin::GradedSequence g(kind, sp, n_max);
    g.scalar() = kind == ekin::SequenceKind::state ? 1.0 : rng.uniform();
    double scale = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        scale *= decay;
        ekin::SymTensor t = kind == ekin::SequenceKind::state
                                ? random_tensor(sp, n, rng, 0.1, 1.0)
                                : random_tensor(sp, n, rng);
        t *= scale;
        g.component(n) = t;
    }
    return g;
}

// A generic interacting model with dense random tables: rates in [0.5, 1.5],
// kernel rows random positive and normalized. Exercises code paths that the
// structured builtins (whose kinetic nonlinearity vanishes identically) miss.
inline ekin::InteractionModel random_model(const ekin::StateSpace& sp, int m_max,
                                           double epsilon, std::uint64_t seed) {
    ekin::ReplicaRng rng({seed, 4242});
    ekin::InteractionModel model;
    model.space = sp;
    model.m_max = m_max;
    model.epsilon = epsilon;
    const int s = sp.S();
    for (int m = 1; m <= m_max; ++m) {
        const std::size_t tuples = sp.pow_dim(m);
        std::vector<double> a(tuples);
        for (double& v : a) v = 0.5 + rng.uniform();
        std::vector<double> k(tuples * static_cast<std::size_t>(s));
        for (std::size_t tup = 0; tup < tuples; ++tup) {
            double row_mass = 0.0;
            for (int v = 0; v < s; ++v) {
                const double w = 0.1 + rng.uniform();
                k[tup * s + static_cast<std::size_t>(v)] = w;
                row_mass += w;
            }
            for (int v = 0; v < s; ++v) k[tup * s + static_cast<std::size_t>(v)] /= row_mass;
        }
        model.rates[m] = std::move(a);
        model.kernels[m] = std::move(k);
    }
    return model;
}

inline double distance(const ekin::SymTensor& a, const ekin::SymTensor& b) {
    ekin::SymTensor d = a;
    ekin::SymTensor nb = b;
    nb *= -1.0;
    d += nb;
    return ekin::max_norm(d);
}

inline double distance(const ekin::GradedSequence& a, const ekin::GradedSequence& b) {
    double m = 0.0;
    for (int n = 1; n <= a.n_max() && n <= b.n_max(); ++n)
        m = std::max(m, distance(a.component(n), b.component(n)));
    return m;
}

} // namespace testing
