#include "ekin/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ekin/hierarchy.hpp"
#include "ekin/quadrature.hpp"

namespace ekin {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Dense S x S matrix of exp(dt * L[1]) (or its adjoint).
std::vector<double> flow_matrix(const InteractionModel& model, double dt, bool adjoint) {
    LinOp gen(model.space, 1, adjoint ? "adjoint-term" : "liouville-term");
    const std::vector<double> e = adjoint ? adjoint_interaction_matrix(model, 1)
                                          : interaction_matrix(model, 1);
    std::copy(e.begin(), e.end(), gen.data());
    const LinOp semi = semigroup(gen, dt);
    return {semi.data(), semi.data() + semi.dim() * semi.dim()};
}

// Apply the single-slot flow to each slot in `slots`.
SymTensor apply_flow(const std::vector<double>& flow, const SymTensor& t,
                     const std::vector<int>& slots) {
    SymTensor out = t;
    for (int slot : slots) out = apply_on_slots(flow, 1, out, {slot});
    return out;
}

std::vector<int> all_slots(int s) {
    std::vector<int> v(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
}

SymTensor vlasov_rhs_impl(const SymTensor& f1, const std::vector<double>& e1t,
                          const std::vector<double>* e2t) {
    SymTensor rhs = apply_on_slots(e1t, 1, f1, {0});
    if (e2t) {
        const SymTensor prod = tensor_product(f1, f1);
        const SymTensor g = apply_on_slots(*e2t, 2, prod, {0, 1});
        rhs += contract_last(g, 1);
    }
    return rhs;
}

// Ordered pairs (i, j), i != j, of values drawn from `pool`.
std::vector<std::vector<int>> ordered_pairs_from(const std::vector<int>& pool) {
    std::vector<std::vector<int>> out;
    for (int a : pool)
        for (int b : pool)
            if (a != b) out.push_back({a, b});
    return out;
}

} // namespace

SymTensor dual_vlasov_rhs(const InteractionModel& model, const LimitMarginals& b, int s) {
    if (s < 1 || s > b.n_max())
        throw ValidationError("limit hierarchy component out of range");
    const std::vector<double> e1 = interaction_matrix(model, 1);
    SymTensor rhs(b.space(), s);
    for (int j = 0; j < s; ++j) rhs += apply_on_slots(e1, 1, b.component(s), {j});
    if (model.m_max >= 2 && s >= 2) {
        const std::vector<double> e2 = interaction_matrix(model, 2);
        for (const std::vector<int>& jj : ordered_tuples(s, 2)) {
            std::vector<int> keep;
            keep.reserve(static_cast<std::size_t>(s - 1));
            for (int slot = 0; slot < s; ++slot)
                if (slot != jj[1]) keep.push_back(slot);
            const SymTensor low = embed(b.component(s - 1), keep, s);
            rhs += apply_on_slots(e2, 2, low, jj);
        }
    }
    return rhs;
}

LimitMarginals integrate_dual_vlasov(const InteractionModel& model,
                                     const LimitMarginals& b0, double t, double dt) {
    if (!(dt > 0.0)) throw ValidationError("step size must be positive");
    if (t == 0.0) return b0;
    const long long steps = std::max<long long>(1, std::llround(t / dt));
    if (steps > 100000000LL) throw ValidationError("step count overflow");
    const double h = t / static_cast<double>(steps);
    auto rhs_all = [&](const GradedSequence& y) {
        GradedSequence d(y.kind(), y.space(), y.n_max());
        for (int s = 1; s <= y.n_max(); ++s) d.component(s) = dual_vlasov_rhs(model, y, s);
        return d;
    };
    GradedSequence y = b0;
    for (long long step = 0; step < steps; ++step) {
        const GradedSequence k1 = rhs_all(y);
        GradedSequence u = y;
        axpy(u, h / 2.0, k1);
        const GradedSequence k2 = rhs_all(u);
        u = y;
        axpy(u, h / 2.0, k2);
        const GradedSequence k3 = rhs_all(u);
        u = y;
        axpy(u, h, k3);
        const GradedSequence k4 = rhs_all(u);
        axpy(y, h / 6.0, k1);
        axpy(y, h / 3.0, k2);
        axpy(y, h / 3.0, k3);
        axpy(y, h / 6.0, k4);
    }
    y.check_finite("limit hierarchy integration");
    return y;
}

LimitMarginals limit_expansion(const InteractionModel& model, const LimitMarginals& b0,
                               double t, int quad_nodes) {
    if (quad_nodes < 2) throw ValidationError("quadrature needs at least 2 nodes");
    if (b0.n_max() > 3)
        throw ValidationError("limit expansion supports components s <= 3");
    const bool interacting = model.m_max >= 2;
    const std::vector<double> e2 =
        interacting ? interaction_matrix(model, 2) : std::vector<double>{};
    auto flow = [&](double dt) { return flow_matrix(model, dt, false); };

    LimitMarginals out = b0;
    for (int s = 1; s <= b0.n_max(); ++s) {
        const std::vector<int> all = all_slots(s);
        // Depth 0: pure free flow.
        SymTensor acc = apply_flow(flow(t), b0.component(s), all);

        if (interacting && s >= 2) {
            // Depth 1: one coupling insertion at time t1.
            const QuadRule outer = gauss_legendre(quad_nodes, 0.0, t);
            for (int q1 = 0; q1 < quad_nodes; ++q1) {
                const double t1 = outer.nodes[static_cast<std::size_t>(q1)];
                const double w1 = outer.weights[static_cast<std::size_t>(q1)];
                const std::vector<double> flow_t1 = flow(t1);
                const std::vector<double> flow_outer = flow(t - t1);
                SymTensor inner_sum(b0.space(), s);
                const SymTensor lower =
                    apply_flow(flow_t1, b0.component(s - 1), all_slots(s - 1));
                for (const std::vector<int>& jj : ordered_tuples(s, 2)) {
                    const int i1 = jj[0], j1 = jj[1];
                    std::vector<int> keep;
                    for (int slot = 0; slot < s; ++slot)
                        if (slot != j1) keep.push_back(slot);
                    const SymTensor emb = embed(lower, keep, s);
                    inner_sum += apply_on_slots(e2, 2, emb, {i1, j1});
                }
                SymTensor term = apply_flow(flow_outer, inner_sum, all);
                term *= w1;
                acc += term;

                // Depth 2: second insertion at t2 < t1 (only for s = 3).
                if (s >= 3) {
                    const QuadRule inner = gauss_legendre(quad_nodes, 0.0, t1);
                    for (int q2 = 0; q2 < quad_nodes; ++q2) {
                        const double t2 = inner.nodes[static_cast<std::size_t>(q2)];
                        const double w2 = inner.weights[static_cast<std::size_t>(q2)];
                        const std::vector<double> flow_t2 = flow(t2);
                        const std::vector<double> flow_mid = flow(t1 - t2);
                        const SymTensor deepest =
                            apply_flow(flow_t2, b0.component(s - 2), all_slots(s - 2));
                        SymTensor sum2(b0.space(), s);
                        for (const std::vector<int>& jj : ordered_tuples(s, 2)) {
                            const int i1 = jj[0], j1 = jj[1];
                            std::vector<int> active; // slots except j1
                            for (int slot = 0; slot < s; ++slot)
                                if (slot != j1) active.push_back(slot);
                            SymTensor mid_sum(b0.space(), s);
                            for (const std::vector<int>& kk : ordered_pairs_from(active)) {
                                const int i2 = kk[0], j2 = kk[1];
                                std::vector<int> keep2;
                                for (int slot = 0; slot < s; ++slot)
                                    if (slot != j1 && slot != j2) keep2.push_back(slot);
                                const SymTensor emb2 = embed(deepest, keep2, s);
                                mid_sum += apply_on_slots(e2, 2, emb2, {i2, j2});
                            }
                            SymTensor flowed = apply_flow(flow_mid, mid_sum, active);
                            sum2 += apply_on_slots(e2, 2, flowed, {i1, j1});
                        }
                        SymTensor term2 = apply_flow(flow_outer, sum2, all);
                        term2 *= w1 * w2;
                        acc += term2;
                    }
                }
            }
        }
        out.component(s) = acc;
    }
    out.check_finite("limit expansion");
    return out;
}

std::vector<ConvergenceRow> mean_field_convergence(const InteractionModel& model,
                                                   const std::vector<double>& epsilons,
                                                   const LimitMarginals& b0, double t,
                                                   double dt) {
    const ScalingConfig scaling(epsilons); // validates the sequence
    const LimitMarginals bt = integrate_dual_vlasov(model, b0, t, dt);
    std::vector<ConvergenceRow> table;
    table.reserve(scaling.epsilons.size());
    for (double eps : scaling.epsilons) {
        const InteractionModel scaled = with_epsilon(model, eps);
        MarginalObservables big0(b0.kind(), b0.space(), b0.n_max());
        big0.scalar() = b0.scalar();
        for (int s = 1; s <= b0.n_max(); ++s) {
            big0.component(s) = b0.component(s);
            big0.component(s) *= std::pow(eps, s);
        }
        const MarginalObservables bigt = solve_expansion(scaled, big0, t);
        double err = 0.0;
        for (int s = 1; s <= b0.n_max(); ++s) {
            SymTensor diff = bigt.component(s);
            diff *= std::pow(eps, -s);
            SymTensor limit = bt.component(s);
            limit *= -1.0;
            diff += limit;
            err = std::max(err, max_norm(diff));
        }
        table.push_back({eps, err});
    }
    return table;
}

SymTensor vlasov_rhs(const InteractionModel& model, const SymTensor& f1) {
    if (f1.arity() != 1) throw ValidationError("one-particle density must have rank 1");
    const std::vector<double> e1t = adjoint_interaction_matrix(model, 1);
    std::vector<double> e2t;
    if (model.m_max >= 2) e2t = adjoint_interaction_matrix(model, 2);
    return vlasov_rhs_impl(f1, e1t, model.m_max >= 2 ? &e2t : nullptr);
}

SymTensor vlasov_rhs_general(const InteractionModel& model, const SymTensor& f1) {
    if (f1.arity() != 1) throw ValidationError("one-particle density must have rank 1");
    if (model.m_max > 3)
        throw ValidationError("general kinetic right-hand side supports m_max <= 3");
    const std::vector<double> e1t = adjoint_interaction_matrix(model, 1);
    SymTensor rhs = apply_on_slots(e1t, 1, f1, {0});
    for (int n = 1; n <= model.m_max - 1; ++n) {
        const std::vector<double> et = adjoint_interaction_matrix(model, n + 1);
        const SymTensor prod = tensor_power(f1, n + 1);
        const double w = 1.0 / factorial(n);
        for (const std::vector<int>& j : ordered_tuples(n + 1, n + 1)) {
            SymTensor g = apply_on_slots(et, n + 1, prod, j);
            SymTensor c = contract_last(g, n);
            c *= w;
            rhs += c;
        }
    }
    return rhs;
}

OneParticleDensity integrate_vlasov(const InteractionModel& model, const SymTensor& f1_0,
                                    double t, double dt) {
    if (!(dt > 0.0)) throw ValidationError("step size must be positive");
    const double mass0 = pair(SymTensor(f1_0.space(), 1,
                                        std::vector<double>(f1_0.size(), 1.0)),
                              f1_0);
    const std::vector<double> e1t = adjoint_interaction_matrix(model, 1);
    std::vector<double> e2t;
    if (model.m_max >= 2) e2t = adjoint_interaction_matrix(model, 2);
    const std::vector<double>* e2p = model.m_max >= 2 ? &e2t : nullptr;

    SymTensor f = f1_0;
    if (t != 0.0) {
        const long long steps = std::max<long long>(1, std::llround(t / dt));
        if (steps > 100000000LL) throw ValidationError("step count overflow");
        const double h = t / static_cast<double>(steps);
        for (long long step = 0; step < steps; ++step) {
            const SymTensor k1 = vlasov_rhs_impl(f, e1t, e2p);
            SymTensor u = f;
            {
                SymTensor inc = k1;
                inc *= h / 2.0;
                u += inc;
            }
            const SymTensor k2 = vlasov_rhs_impl(u, e1t, e2p);
            u = f;
            {
                SymTensor inc = k2;
                inc *= h / 2.0;
                u += inc;
            }
            const SymTensor k3 = vlasov_rhs_impl(u, e1t, e2p);
            u = f;
            {
                SymTensor inc = k3;
                inc *= h;
                u += inc;
            }
            const SymTensor k4 = vlasov_rhs_impl(u, e1t, e2p);
            SymTensor inc = k1;
            inc *= h / 6.0;
            f += inc;
            inc = k2;
            inc *= h / 3.0;
            f += inc;
            inc = k3;
            inc *= h / 3.0;
            f += inc;
            inc = k4;
            inc *= h / 6.0;
            f += inc;
        }
    }
    f.check_finite("kinetic integration");
    double mass = 0.0, minv = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        mass += f[i];
        minv = std::min(minv, f[i]);
    }
    if (std::abs(mass - mass0) > 1e-10)
        throw InvariantError("kinetic integration lost mass: drift " +
                             std::to_string(mass - mass0));
    if (minv < -1e-10)
        throw InvariantError("kinetic integration produced negative density " +
                             std::to_string(minv));
    return {f, t};
}

OneParticleDensity f1_series(const InteractionModel& model, const SymTensor& f1_0,
                             double t, int n_max, int quad_nodes) {
    if (f1_0.arity() != 1) throw ValidationError("one-particle density must have rank 1");
    if (n_max < 0 || n_max > 3) throw ValidationError("series depth supports n_max <= 3");
    if (quad_nodes < 2) throw ValidationError("quadrature needs at least 2 nodes");

    const bool interacting = model.m_max >= 2;
    const std::vector<double> e2t =
        interacting ? adjoint_interaction_matrix(model, 2) : std::vector<double>{};
    auto flow = [&](double dt) { return flow_matrix(model, dt, true); };

    // Term n = 0: free flow only.
    SymTensor total = apply_on_slots(flow(t), 1, f1_0, {0});
    double prev_norm = max_norm(total);
    const double floor_norm = 1e-10;
    bool grew = false;

    // Term n lives on n+1 slots with n nested time integrals over the
    // simplex t >= t_1 >= ... >= t_n >= 0.  Reading the chain right to
    // left: free flow of duration t_n on all slots, insertion
    // sum_i L*[2](i, n), flow of duration t_{n-1} - t_n on slots 0..n-1,
    // insertion at level n-1, ..., insertion L*[2](0, 1), outermost flow
    // of duration t - t_1 on slot 0, then contraction of slots 1..n.
    for (int n = 1; interacting && n <= n_max; ++n) {
        const SymTensor prod = tensor_power(f1_0, n + 1);

        // chain_right(m, tm) = everything strictly right of the insertion
        // at level m, applied to the product state.
        auto chain_right = [&](auto&& self, int m, double tm) -> SymTensor {
            std::vector<int> slots;
            for (int slot = 0; slot <= m; ++slot) slots.push_back(slot);
            if (m == n) return apply_flow(flow(tm), prod, slots);
            const QuadRule rule = gauss_legendre(quad_nodes, 0.0, tm);
            SymTensor acc(f1_0.space(), n + 1);
            for (int q = 0; q < quad_nodes; ++q) {
                const double tq = rule.nodes[static_cast<std::size_t>(q)];
                const double wq = rule.weights[static_cast<std::size_t>(q)];
                const SymTensor inner = self(self, m + 1, tq);
                SymTensor inserted(f1_0.space(), n + 1);
                for (int i = 0; i <= m; ++i)
                    inserted += apply_on_slots(e2t, 2, inner, {i, m + 1});
                SymTensor flowed = apply_flow(flow(tm - tq), inserted, slots);
                flowed *= wq;
                acc += flowed;
            }
            return acc;
        };

        SymTensor term(f1_0.space(), 1);
        const QuadRule outer = gauss_legendre(quad_nodes, 0.0, t);
        for (int q = 0; q < quad_nodes; ++q) {
            const double t1 = outer.nodes[static_cast<std::size_t>(q)];
            const double w1 = outer.weights[static_cast<std::size_t>(q)];
            const SymTensor inner = chain_right(chain_right, 1, t1);
            const SymTensor inserted = apply_on_slots(e2t, 2, inner, {0, 1});
            SymTensor flowed = apply_on_slots(flow(t - t1), 1, inserted, {0});
            SymTensor contrib = contract_last(flowed, n);
            contrib *= w1;
            term += contrib;
        }

        const double norm = max_norm(term);
        total += term;
        if (norm > prev_norm && norm > 1e-9) grew = true;
        prev_norm = std::max(norm, floor_norm);
        if (norm < floor_norm) break;
    }
    OneParticleDensity out{total, t, grew};
    out.f1.check_finite("series evaluation");
    return out;
}

ChaosResult chaos_functional(const InteractionModel& model, const LimitMarginals& b0_kary,
                             const SymTensor& f1_0, double t, int s_max, double dt) {
    if (s_max > b0_kary.n_max())
        throw ValidationError("chaos truncation exceeds available components");
    const LimitMarginals bt = integrate_dual_vlasov(model, b0_kary, t, dt);
    double lhs = bt.scalar(); // s = 0 term: f0^(x0) = 1
    for (int s = 1; s <= s_max; ++s)
        lhs += pair(bt.component(s), tensor_power(f1_0, s)) / factorial(s);

    // Identify the k-ary component.
    int k = 0;
    for (int s = 1; s <= b0_kary.n_max(); ++s)
        if (max_norm(b0_kary.component(s)) > 0.0) {
            if (k != 0) throw ValidationError("initial observable must be k-ary");
            k = s;
        }
    if (k == 0) throw ValidationError("initial observable is identically zero");
    const OneParticleDensity ft = integrate_vlasov(model, f1_0, t, dt);
    const double rhs =
        pair(b0_kary.component(k), tensor_power(ft.f1, k)) / factorial(k);
    return {lhs, rhs};
}

} // namespace ekin
