#include "ekin/generators.hpp"

#include <cmath>
#include <string>

#include "ekin/kernels.hpp"

namespace ekin {

std::vector<std::vector<int>> ordered_tuples(int n, int m) {
    std::vector<std::vector<int>> out;
    if (m < 0 || m > n) return out;
    std::vector<int> tuple;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(tuple.size()) == m) {
            out.push_back(tuple);
            return;
        }
        for (int i = 0; i < n; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            used[static_cast<std::size_t>(i)] = true;
            tuple.push_back(i);
            self(self);
            tuple.pop_back();
            used[static_cast<std::size_t>(i)] = false;
        }
    };
    rec(rec);
    return out;
}

std::vector<double> interaction_matrix(const InteractionModel& model, int m) {
    if (m < 1 || m > model.m_max)
        throw ValidationError("interaction order " + std::to_string(m) +
                              " outside 1..m_max");
    const int s = model.space.S();
    const std::size_t dim = model.space.pow_dim(m);
    std::size_t tail = dim / static_cast<std::size_t>(s); // S^(m-1)
    std::vector<double> e(dim * dim, 0.0);
    for (std::size_t row = 0; row < dim; ++row) {
        const double a = model.rate(m, row);
        if (a == 0.0) continue;
        const double* krow = model.kernel_row(m, row);
        const std::size_t rest = row % tail; // coordinates of slots 2..m
        for (int v = 0; v < s; ++v) {
            const std::size_t col = static_cast<std::size_t>(v) * tail + rest;
            e[row * dim + col] += a * krow[v];
        }
        e[row * dim + row] -= a;
    }
    return e;
}

std::vector<double> adjoint_interaction_matrix(const InteractionModel& model, int m) {
    std::vector<double> e = interaction_matrix(model, m);
    const std::size_t dim = model.space.pow_dim(m);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            std::swap(e[i * dim + j], e[j * dim + i]);
    return e;
}

SymTensor apply_on_slots(const std::vector<double>& small_op, int m,
                         const SymTensor& t, const std::vector<int>& slots) {
    if (static_cast<int>(slots.size()) != m)
        throw ValidationError("slot tuple length does not match operator order");
    SymTensor out(t.space(), t.arity());
    kernels::apply_slot_op(small_op.data(), t.data(), out.data(), t.arity(),
                           t.space().S(), slots.data(), m);
    return out;
}

namespace {

std::vector<int> zero_based_slots(const SubsetOperatorSpec& spec, int n) {
    if (static_cast<int>(spec.tuple.size()) != spec.m)
        throw ValidationError("tuple length does not match operator order");
    std::vector<int> slots;
    slots.reserve(spec.tuple.size());
    for (int i : spec.tuple) {
        if (i < 1 || i > n)
            throw ValidationError("tuple entry " + std::to_string(i) +
                                  " outside 1.." + std::to_string(n));
        slots.push_back(i - 1);
    }
    for (std::size_t a = 0; a < slots.size(); ++a)
        for (std::size_t b = a + 1; b < slots.size(); ++b)
            if (slots[a] == slots[b])
                throw ValidationError("tuple entries must be distinct");
    return slots;
}

// Accumulate `weight` times the small operator `e` (on S^m), lifted to the
// 0-based slots of the n-entity space, into the dense matrix of `op`.
void accumulate_lifted(LinOp& op, const std::vector<double>& e, int m,
                       const std::vector<int>& slots, double weight) {
    const int n = op.arity();
    const int s = op.space().S();
    const std::size_t dim = op.dim();
    int edim = 1;
    for (int i = 0; i < m; ++i) edim *= s;
    std::vector<std::size_t> stride(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        std::size_t st = 1;
        for (int j = slots[static_cast<std::size_t>(i)] + 1; j < n; ++j)
            st *= static_cast<std::size_t>(s);
        stride[static_cast<std::size_t>(i)] = st;
    }
    std::vector<std::size_t> offset(static_cast<std::size_t>(edim), 0);
    for (int col = 0; col < edim; ++col) {
        int rem = col;
        std::size_t off = 0;
        for (int i = m - 1; i >= 0; --i) {
            off += static_cast<std::size_t>(rem % s) * stride[static_cast<std::size_t>(i)];
            rem /= s;
        }
        offset[static_cast<std::size_t>(col)] = off;
    }
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t base = x;
        int row = 0;
        for (int i = 0; i < m; ++i) {
            const std::size_t st = stride[static_cast<std::size_t>(i)];
            const int digit = static_cast<int>((x / st) % static_cast<std::size_t>(s));
            row = row * s + digit;
            base -= static_cast<std::size_t>(digit) * st;
        }
        const double* erow = e.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(edim);
        double* orow = op.data() + x * dim;
        for (int col = 0; col < edim; ++col) {
            const double v = erow[col];
            if (v != 0.0) orow[base + offset[static_cast<std::size_t>(col)]] += weight * v;
        }
    }
}

LinOp make_adjoint(const LinOp& a, const char* label) {
    LinOp t = transpose(a);
    t.set_label(label);
    return t;
}

} // namespace

LinOp lambda_m(const InteractionModel& model, int n, const SubsetOperatorSpec& spec) {
    const std::vector<int> slots = zero_based_slots(spec, n);
    const std::vector<double> e = interaction_matrix(model, spec.m);
    LinOp op(model.space, n, "liouville-term");
    accumulate_lifted(op, e, spec.m, slots, 1.0);
    return op;
}

LinOp lambda_star_m(const InteractionModel& model, int n, const SubsetOperatorSpec& spec) {
    return make_adjoint(lambda_m(model, n, spec), "adjoint-term");
}

LinOp lambda_n(const InteractionModel& model, int n) {
    if (n < 1) throw ValidationError("generator arity must be >= 1");
    LinOp op(model.space, n, "liouville");
    double weight = 1.0;
    for (int m = 1; m <= std::min(model.m_max, n); ++m) {
        const std::vector<double> e = interaction_matrix(model, m);
        for (const std::vector<int>& slots : ordered_tuples(n, m))
            accumulate_lifted(op, e, m, slots, weight);
        weight *= model.epsilon;
    }
    return op;
}

LinOp lambda_star_n(const InteractionModel& model, int n) {
    return make_adjoint(lambda_n(model, n), "adjoint");
}

LinOp semigroup(const LinOp& op, double t) {
    if (!std::isfinite(t)) throw ValidationError("non-finite time in semigroup");
    const std::size_t dim = op.dim();
    // Scale so the series argument has infinity norm <= 0.5.
    const double norm = inf_norm(op) * std::abs(t);
    int squarings = 0;
    while (norm / std::ldexp(1.0, squarings) > 0.5) ++squarings;
    const double scale = t / std::ldexp(1.0, squarings);

    std::vector<double> m(dim * dim);
    for (std::size_t i = 0; i < dim * dim; ++i) m[i] = op.data()[i] * scale;

    LinOp result = LinOp::identity(op.space(), op.arity());
    std::vector<double> term(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) term[i * dim + i] = 1.0;
    std::vector<double> next(dim * dim);
    for (int k = 1; k <= 80; ++k) {
        kernels::matmul(term.data(), m.data(), next.data(), dim, dim, dim);
        const double inv = 1.0 / k;
        double tmax = 0.0;
        for (std::size_t i = 0; i < dim * dim; ++i) {
            term[i] = next[i] * inv;
            result.data()[i] += term[i];
            tmax = std::max(tmax, std::abs(term[i]));
        }
        if (tmax < 1e-13) break;
        if (k == 80)
            throw InvariantError("matrix exponential series failed to converge");
    }
    for (int q = 0; q < squarings; ++q) {
        kernels::matmul(result.data(), result.data(), next.data(), dim, dim, dim);
        std::copy(next.begin(), next.end(), result.data());
    }
    result.set_label("semigroup(" + op.label() + ")");

    if (op.label().find("adjoint") != std::string::npos && t >= 0.0) {
        for (std::size_t j = 0; j < dim; ++j) {
            double colsum = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double v = result.entry(i, j);
                if (v < -1e-10)
                    throw InvariantError("state semigroup produced a negative entry");
                colsum += v;
            }
            if (std::abs(colsum - 1.0) > 1e-10)
                throw InvariantError("state semigroup column sum drifted from 1");
        }
    }
    return result;
}

} // namespace ekin
