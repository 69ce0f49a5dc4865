#include "ekin/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

namespace ekin {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Small interaction matrices by order, built once per right-hand-side sweep.
struct TermTables {
    std::map<int, std::vector<double>> obs;   // order-m operator on S^m
    std::map<int, std::vector<double>> state; // its transpose

    explicit TermTables(const InteractionModel& model) {
        for (int m = 1; m <= model.m_max; ++m) {
            obs[m] = interaction_matrix(model, m);
            state[m] = adjoint_interaction_matrix(model, m);
        }
    }
};

// sum over orders and ordered tuples of the elementary operators, applied to
// a tensor (the generator action without materializing the big matrix).
SymTensor apply_generator(const TermTables& tables, const InteractionModel& model,
                          const SymTensor& t, bool adjoint) {
    SymTensor out(t.space(), t.arity());
    double weight = 1.0;
    for (int m = 1; m <= std::min(model.m_max, t.arity()); ++m) {
        const std::vector<double>& e = adjoint ? tables.state.at(m) : tables.obs.at(m);
        for (const std::vector<int>& slots : ordered_tuples(t.arity(), m)) {
            SymTensor part = apply_on_slots(e, m, t, slots);
            part *= weight;
            out += part;
        }
        weight *= model.epsilon;
    }
    return out;
}

// Ordered n-tuples of distinct values drawn from `pool` (all orderings of
// every n-subset).
std::vector<std::vector<int>> ordered_tuples_from(const std::vector<int>& pool, int n) {
    std::vector<std::vector<int>> out;
    for (const std::vector<int>& idx : ordered_tuples(static_cast<int>(pool.size()), n)) {
        std::vector<int> tup;
        tup.reserve(idx.size());
        for (int i : idx) tup.push_back(pool[static_cast<std::size_t>(i)]);
        out.push_back(std::move(tup));
    }
    return out;
}

SymTensor dual_rhs_impl(const TermTables& tables, const InteractionModel& model,
                        const MarginalObservables& b, int s) {
    SymTensor rhs = apply_generator(tables, model, b.component(s), false);
    for (int n = 1; n <= s; ++n) {
        for (int k = n + 1; k <= std::min(s, model.m_max); ++k) {
            const double w = std::pow(model.epsilon, k - 1) /
                             (factorial(n) * factorial(k - n));
            const std::vector<double>& e = tables.obs.at(k);
            for (const std::vector<int>& j : ordered_tuples(s, k)) {
                for (const std::vector<int>& i : ordered_tuples_from(j, n)) {
                    std::vector<int> keep;
                    keep.reserve(static_cast<std::size_t>(s - n));
                    for (int slot = 0; slot < s; ++slot)
                        if (std::find(i.begin(), i.end(), slot) == i.end())
                            keep.push_back(slot);
                    SymTensor low(b.space(), s);
                    if (s - n == 0) {
                        for (std::size_t x = 0; x < low.size(); ++x)
                            low[x] = b.scalar();
                    } else {
                        low = embed(b.component(s - n), keep, s);
                    }
                    SymTensor part = apply_on_slots(e, k, low, j);
                    part *= w;
                    rhs += part;
                }
            }
        }
    }
    return rhs;
}

SymTensor states_rhs_impl(const TermTables& tables, const InteractionModel& model,
                          const MarginalStates& f, int s) {
    SymTensor rhs = apply_generator(tables, model, f.component(s), true);
    const int s_max = f.n_max();
    for (int k = 1; k <= s; ++k) {
        for (const std::vector<int>& i : ordered_tuples(s, k)) {
            for (int n = 1; n <= model.m_max - k; ++n) {
                if (s + n > s_max) continue; // truncation: F vanishes above s_max
                const double w = std::pow(model.epsilon, k + n - 1) /
                                 (factorial(k) * factorial(n));
                const std::vector<double>& e = tables.state.at(k + n);
                std::vector<int> pool = i;
                for (int extra = 0; extra < n; ++extra) pool.push_back(s + extra);
                for (const std::vector<int>& j : ordered_tuples_from(pool, k + n)) {
                    SymTensor g = apply_on_slots(e, k + n, f.component(s + n), j);
                    SymTensor c = contract_last(g, n);
                    c *= w;
                    rhs += c;
                }
            }
        }
    }
    return rhs;
}

using RhsFn = std::function<GradedSequence(const GradedSequence&)>;

GradedSequence rk4(const GradedSequence& y0, double t, double dt, const RhsFn& rhs) {
    if (!(dt > 0.0)) throw ValidationError("step size must be positive");
    if (t == 0.0) return y0;
    const long long steps = std::max<long long>(1, std::llround(t / dt));
    if (steps > 100000000LL) throw ValidationError("step count overflow");
    const double h = t / static_cast<double>(steps);
    GradedSequence y = y0;
    for (long long step = 0; step < steps; ++step) {
        const GradedSequence k1 = rhs(y);
        GradedSequence u = y;
        axpy(u, h / 2.0, k1);
        const GradedSequence k2 = rhs(u);
        u = y;
        axpy(u, h / 2.0, k2);
        const GradedSequence k3 = rhs(u);
        u = y;
        axpy(u, h, k3);
        const GradedSequence k4 = rhs(u);
        axpy(y, h / 6.0, k1);
        axpy(y, h / 3.0, k2);
        axpy(y, h / 3.0, k3);
        axpy(y, h / 6.0, k4);
    }
    y.check_finite("hierarchy integration");
    return y;
}

} // namespace

SymTensor dual_bbgky_rhs(const InteractionModel& model, const MarginalObservables& b,
                         int s) {
    if (s < 1 || s > b.n_max())
        throw ValidationError("hierarchy component out of range");
    const TermTables tables(model);
    return dual_rhs_impl(tables, model, b, s);
}

MarginalObservables solve_expansion(const InteractionModel& model,
                                    const MarginalObservables& b0, double t) {
    MarginalObservables out = b0;
    for (int s = 1; s <= b0.n_max(); ++s) {
        SymTensor acc(b0.space(), s);
        // Cumulants and embeddings depend on the chosen tuple only through
        // its underlying set; cache per subset across the ordered tuples.
        std::map<std::vector<int>, SymTensor> by_subset;
        for (int n = 0; n <= s; ++n) {
            const double w = 1.0 / factorial(n);
            for (const std::vector<int>& tup : ordered_tuples(s, n)) {
                std::vector<int> subset = tup;
                std::sort(subset.begin(), subset.end());
                auto it = by_subset.find(subset);
                if (it == by_subset.end()) {
                    std::vector<int> z; // 1-based tuple for the cumulant
                    z.reserve(subset.size());
                    for (int slot : subset) z.push_back(slot + 1);
                    const LinOp cum = cumulant(model, t, s, z);
                    std::vector<int> keep;
                    for (int slot = 0; slot < s; ++slot)
                        if (!std::binary_search(subset.begin(), subset.end(), slot))
                            keep.push_back(slot);
                    SymTensor low(b0.space(), s);
                    if (s - n == 0) {
                        for (std::size_t x = 0; x < low.size(); ++x)
                            low[x] = b0.scalar();
                    } else {
                        low = embed(b0.component(s - n), keep, s);
                    }
                    it = by_subset.emplace(subset, cum.apply(low)).first;
                }
                SymTensor part = it->second;
                part *= w;
                acc += part;
            }
        }
        out.component(s) = acc;
    }
    out.check_finite("expansion solution");
    return out;
}

MarginalObservables integrate_dual_bbgky(const InteractionModel& model,
                                         const MarginalObservables& b0, double t,
                                         double dt) {
    const TermTables tables(model);
    return rk4(b0, t, dt, [&](const GradedSequence& y) {
        GradedSequence d(y.kind(), y.space(), y.n_max());
        for (int s = 1; s <= y.n_max(); ++s)
            d.component(s) = dual_rhs_impl(tables, model, y, s);
        return d;
    });
}

SymTensor bbgky_states_rhs(const InteractionModel& model, const MarginalStates& f,
                           int s) {
    if (s < 1 || s > f.n_max())
        throw ValidationError("hierarchy component out of range");
    const TermTables tables(model);
    return states_rhs_impl(tables, model, f, s);
}

MarginalStates integrate_bbgky_states(const InteractionModel& model,
                                      const MarginalStates& f0, double t, double dt) {
    const TermTables tables(model);
    return rk4(f0, t, dt, [&](const GradedSequence& y) {
        GradedSequence d(y.kind(), y.space(), y.n_max());
        for (int s = 1; s <= y.n_max(); ++s)
            d.component(s) = states_rhs_impl(tables, model, y, s);
        return d;
    });
}

double duality_check(const InteractionModel& model, const MarginalObservables& b0,
                     const MarginalStates& f0, double t, double dt) {
    const MarginalObservables bt = integrate_dual_bbgky(model, b0, t, dt);
    const MarginalStates ft = integrate_bbgky_states(model, f0, t, dt);
    return std::abs(graded_bracket(bt, f0) - graded_bracket(b0, ft));
}

} // namespace ekin
