#include "ekin/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ekin {

StateSpace::StateSpace(int m, int k) : m_(m), k_(k) {
    if (m < 1 || k < 1)
        throw ValidationError("state space requires M >= 1 and K >= 1, got M=" +
                              std::to_string(m) + " K=" + std::to_string(k));
}

int StateSpace::flatten(EntityState e) const {
    if (e.j < 1 || e.j > m_ || e.u < 1 || e.u > k_)
        throw ValidationError("entity state (" + std::to_string(e.j) + "," +
                              std::to_string(e.u) + ") out of range for M=" +
                              std::to_string(m_) + " K=" + std::to_string(k_));
    return (e.j - 1) * k_ + (e.u - 1);
}

EntityState StateSpace::unflatten(int idx) const {
    if (idx < 0 || idx >= S())
        throw ValidationError("flat state index " + std::to_string(idx) + " out of range");
    return EntityState{idx / k_ + 1, idx % k_ + 1};
}

std::size_t StateSpace::pow_dim(int n) const {
    if (n < 0) throw ValidationError("negative tensor arity");
    std::size_t d = 1;
    for (int i = 0; i < n; ++i) {
        d *= static_cast<std::size_t>(S());
        if (d > max_tensor_size)
            throw ValidationError("tensor size S^n exceeds cap: S=" + std::to_string(S()) +
                                  " n=" + std::to_string(n));
    }
    return d;
}

SymTensor::SymTensor(const StateSpace& space, int n)
    : space_(space), n_(n), data_(space.pow_dim(n), 0.0) {}

SymTensor::SymTensor(const StateSpace& space, int n, std::vector<double> data)
    : space_(space), n_(n), data_(std::move(data)) {
    if (data_.size() != space_.pow_dim(n_))
        throw ValidationError("tensor data length does not match S^n");
}

std::size_t SymTensor::flat(const std::vector<int>& coords) const {
    if (static_cast<int>(coords.size()) != n_)
        throw ValidationError("coordinate tuple length does not match tensor arity");
    std::size_t idx = 0;
    const int s = space_.S();
    for (int c : coords) {
        if (c < 0 || c >= s) throw ValidationError("coordinate out of range");
        idx = idx * static_cast<std::size_t>(s) + static_cast<std::size_t>(c);
    }
    return idx;
}

void SymTensor::check_finite(const char* context) const {
    for (double v : data_)
        if (!std::isfinite(v))
            throw InvariantError(std::string("non-finite tensor entry after ") + context);
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
    if (o.n_ != n_ || !(o.space_ == space_))
        throw ValidationError("tensor shape mismatch in addition");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

SymTensor& SymTensor::operator*=(double c) {
    for (double& v : data_) v *= c;
    return *this;
}

GradedSequence::GradedSequence(SequenceKind kind, const StateSpace& space, int n_max)
    : kind_(kind), space_(space), scalar_(0.0) {
    if (n_max < 0) throw ValidationError("negative sequence truncation");
    comps_.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) comps_.emplace_back(space, n);
}

SymTensor& GradedSequence::component(int n) {
    if (n < 1 || n > n_max())
        throw ValidationError("sequence component " + std::to_string(n) + " out of range");
    return comps_[static_cast<std::size_t>(n - 1)];
}

const SymTensor& GradedSequence::component(int n) const {
    if (n < 1 || n > n_max())
        throw ValidationError("sequence component " + std::to_string(n) + " out of range");
    return comps_[static_cast<std::size_t>(n - 1)];
}

void GradedSequence::check_finite(const char* context) const {
    if (!std::isfinite(scalar_))
        throw InvariantError(std::string("non-finite sequence scalar after ") + context);
    for (const SymTensor& t : comps_) t.check_finite(context);
}

namespace {

// Walk all coordinate tuples of a rank-n tensor in flat order.
struct CoordIter {
    explicit CoordIter(int n, int s) : coords(static_cast<std::size_t>(n), 0), s_(s) {}
    std::vector<int> coords;

    bool advance() {
        for (int i = static_cast<int>(coords.size()) - 1; i >= 0; --i) {
            if (++coords[static_cast<std::size_t>(i)] < s_) return true;
            coords[static_cast<std::size_t>(i)] = 0;
        }
        return false;
    }

private:
    int s_;
};

} // namespace

SymTensor symmetrize(const SymTensor& t) {
    const int n = t.arity();
    if (n <= 1) return t;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    SymTensor out(t.space(), n);
    double count = 0.0;
    std::vector<int> permuted(static_cast<std::size_t>(n));
    do {
        count += 1.0;
        CoordIter it(n, t.space().S());
        std::size_t flat = 0;
        do {
            for (int i = 0; i < n; ++i)
                permuted[static_cast<std::size_t>(i)] =
                    it.coords[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
            out[flat++] += t.at(permuted);
        } while (it.advance());
    } while (std::next_permutation(perm.begin(), perm.end()));
    out *= 1.0 / count;
    return out;
}

SymTensor embed(const SymTensor& t, const std::vector<int>& keep, int n) {
    if (static_cast<int>(keep.size()) != t.arity())
        throw ValidationError("embed: |keep| must equal tensor arity");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= n)
            throw ValidationError("embed: keep index out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw ValidationError("embed: keep indices must be strictly increasing");
    }
    SymTensor out(t.space(), n);
    if (n == 0) {
        out[0] = t[0];
        return out;
    }
    CoordIter it(n, t.space().S());
    std::vector<int> sub(keep.size());
    std::size_t flat = 0;
    do {
        for (std::size_t i = 0; i < keep.size(); ++i)
            sub[i] = it.coords[static_cast<std::size_t>(keep[i])];
        out[flat++] = t.at(sub);
    } while (it.advance());
    return out;
}

double pair(const SymTensor& obs, const SymTensor& state) {
    if (obs.arity() != state.arity() || !(obs.space() == state.space()))
        throw ValidationError("pair: tensor shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) acc += obs[i] * state[i];
    return acc;
}

SymTensor tensor_product(const SymTensor& a, const SymTensor& b) {
    if (!(a.space() == b.space()))
        throw ValidationError("tensor_product: state space mismatch");
    SymTensor out(a.space(), a.arity() + b.arity());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[idx++] = a[i] * b[j];
    return out;
}

SymTensor tensor_power(const SymTensor& f, int n) {
    if (f.arity() != 1) throw ValidationError("tensor_power: rank-1 input required");
    SymTensor out(f.space(), 0);
    out[0] = 1.0;
    for (int i = 0; i < n; ++i) out = tensor_product(out, f);
    return out;
}

SymTensor contract_last(const SymTensor& t, int n_out) {
    if (n_out < 0 || n_out > t.arity())
        throw ValidationError("contract_last: slot count out of range");
    const int n_keep = t.arity() - n_out;
    SymTensor out(t.space(), n_keep);
    std::size_t tail = 1;
    for (int i = 0; i < n_out; ++i) tail *= static_cast<std::size_t>(t.space().S());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        const double* base = t.data() + i * tail;
        for (std::size_t j = 0; j < tail; ++j) acc += base[j];
        out[i] = acc;
    }
    return out;
}

double max_norm(const SymTensor& t) {
    double m = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t[i]));
    return m;
}

void axpy(GradedSequence& y, double a, const GradedSequence& x) {
    if (y.n_max() != x.n_max() || !(y.space() == x.space()))
        throw ValidationError("sequence shape mismatch in axpy");
    y.scalar() += a * x.scalar();
    for (int n = 1; n <= y.n_max(); ++n) {
        SymTensor& yc = y.component(n);
        const SymTensor& xc = x.component(n);
        for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += a * xc[i];
    }
}

} // namespace ekin
