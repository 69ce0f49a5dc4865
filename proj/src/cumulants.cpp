#include "ekin/cumulants.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace ekin {

ClusterArgument ClusterArgument::from(int s, const std::vector<int>& z) {
    std::set<int> zs;
    for (int i : z) {
        if (i < 1 || i > s)
            throw ValidationError("cumulant tuple entry " + std::to_string(i) +
                                  " outside 1.." + std::to_string(s));
        if (!zs.insert(i).second)
            throw ValidationError("cumulant tuple entries must be distinct");
    }
    ClusterArgument arg;
    std::vector<int> complement;
    for (int i = 1; i <= s; ++i)
        if (!zs.count(i)) complement.push_back(i);
    arg.elements.push_back(std::move(complement));
    for (int i : z) arg.elements.push_back({i});
    return arg;
}

const std::vector<Partition>& partitions(int k) {
    if (k < 1 || k > 6)
        throw ValidationError("partition enumeration supports 1..6 elements, got " +
                              std::to_string(k));
    static std::vector<std::vector<Partition>> cache(7);
    std::vector<Partition>& out = cache[static_cast<std::size_t>(k)];
    if (!out.empty()) return out;

    // Restricted-growth strings: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
    std::vector<int> rgs(static_cast<std::size_t>(k), 0);
    auto rec = [&](auto&& self, int i, int maxv) -> void {
        if (i == k) {
            Partition p;
            p.blocks.assign(static_cast<std::size_t>(maxv + 1), {});
            for (int e = 0; e < k; ++e)
                p.blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(e)])]
                    .push_back(e);
            out.push_back(std::move(p));
            return;
        }
        for (int v = 0; v <= maxv + 1; ++v) {
            rgs[static_cast<std::size_t>(i)] = v;
            self(self, i + 1, std::max(maxv, v));
        }
    };
    rec(rec, 1, 0);
    return out;
}

std::vector<int> declusterize(const ClusterArgument& arg, const std::vector<int>& block) {
    std::set<int> u;
    for (int e : block) {
        if (e < 0 || e >= static_cast<int>(arg.elements.size()))
            throw ValidationError("declusterize: element index out of range");
        for (int i : arg.elements[static_cast<std::size_t>(e)]) u.insert(i);
    }
    return {u.begin(), u.end()};
}

namespace {

// Lift a dense operator on the |slots|-entity space onto the given 0-based
// slots of the s-entity space (identity elsewhere).
LinOp lift(const LinOp& small, const std::vector<int>& slots, int s) {
    LinOp out(small.space(), s, small.label());
    const int ss = small.space().S();
    const int m = static_cast<int>(slots.size());
    const std::size_t dim = out.dim();
    const std::size_t edim = small.dim();
    std::vector<std::size_t> stride(slots.size());
    for (int i = 0; i < m; ++i) {
        std::size_t st = 1;
        for (int j = slots[static_cast<std::size_t>(i)] + 1; j < s; ++j)
            st *= static_cast<std::size_t>(ss);
        stride[static_cast<std::size_t>(i)] = st;
    }
    std::vector<std::size_t> offset(edim, 0);
    for (std::size_t col = 0; col < edim; ++col) {
        std::size_t rem = col;
        std::size_t off = 0;
        for (int i = m - 1; i >= 0; --i) {
            off += (rem % static_cast<std::size_t>(ss)) * stride[static_cast<std::size_t>(i)];
            rem /= static_cast<std::size_t>(ss);
        }
        offset[col] = off;
    }
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t base = x;
        std::size_t row = 0;
        for (int i = 0; i < m; ++i) {
            const std::size_t st = stride[static_cast<std::size_t>(i)];
            const std::size_t digit = (x / st) % static_cast<std::size_t>(ss);
            row = row * static_cast<std::size_t>(ss) + digit;
            base -= digit * st;
        }
        const double* erow = small.data() + row * edim;
        double* orow = out.data() + x * dim;
        for (std::size_t col = 0; col < edim; ++col)
            if (erow[col] != 0.0) orow[base + offset[col]] += erow[col];
    }
    return out;
}

} // namespace

LinOp cumulant(const InteractionModel& model, double t, int s, const std::vector<int>& z) {
    const int k = 1 + static_cast<int>(z.size());
    if (k > 6)
        throw ValidationError("cumulant order 1+n = " + std::to_string(k) + " exceeds cap 6");
    const ClusterArgument arg = ClusterArgument::from(s, z);

    // Semigroups depend only on the block arity (the full generator is
    // permutation-equivariant), lifted factors on the slot set.
    std::map<int, LinOp> semis;
    std::map<std::vector<int>, LinOp> lifted;
    auto lifted_factor = [&](const std::vector<int>& theta) -> const LinOp& {
        auto it = lifted.find(theta);
        if (it != lifted.end()) return it->second;
        const int arity = static_cast<int>(theta.size());
        auto sit = semis.find(arity);
        if (sit == semis.end())
            sit = semis.emplace(arity, semigroup(lambda_n(model, arity), t)).first;
        std::vector<int> slots;
        slots.reserve(theta.size());
        for (int i : theta) slots.push_back(i - 1);
        return lifted.emplace(theta, lift(sit->second, slots, s)).first->second;
    };

    LinOp result(model.space, s, "cumulant");
    for (const Partition& p : partitions(k)) {
        double weight = (p.blocks.size() % 2 == 1) ? 1.0 : -1.0;
        for (std::size_t b = 2; b < p.blocks.size(); ++b)
            weight *= static_cast<double>(b); // (|P|-1)!
        LinOp term;
        bool have = false;
        for (const std::vector<int>& block : p.blocks) {
            const std::vector<int> theta = declusterize(arg, block);
            if (theta.empty()) continue; // empty cluster block acts as identity
            const LinOp& factor = lifted_factor(theta);
            term = have ? multiply(factor, term) : factor;
            have = true;
        }
        if (!have) term = LinOp::identity(model.space, s);
        term *= weight;
        result += term;
    }
    result.set_label("cumulant");
    return result;
}

} // namespace ekin
