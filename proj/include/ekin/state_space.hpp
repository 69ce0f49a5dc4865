#pragma once

#include <cstddef>
#include <vector>

#include "ekin/errors.hpp"

// Finite single-entity state space and the dense symmetric-tensor algebra the
// rest of the library computes in. An entity state is a pair (subpopulation,
// micro-state); rank-n tensors are real functions on the n-fold product
// space, stored dense in row-major order with slot 0 most significant.

namespace ekin {

struct EntityState {
    int j = 1; // subpopulation index, 1-based, in [1, M]
    int u = 1; // micro-state index, 1-based, in [1, K]

    friend bool operator==(const EntityState&, const EntityState&) = default;
};

class StateSpace {
public:
    StateSpace(int m, int k);

    int M() const { return m_; }
    int K() const { return k_; }
    int S() const { return m_ * k_; }

    // Bijection between (j,u) pairs and flat indices in [0, S).
    int flatten(EntityState e) const;
    EntityState unflatten(int idx) const;

    // S^n with overflow/cap checking (dense tensors are capped at 20736
    // entries; larger requests are a usage error, not a silent allocation).
    std::size_t pow_dim(int n) const;

    friend bool operator==(const StateSpace&, const StateSpace&) = default;

private:
    int m_;
    int k_;
};

inline constexpr std::size_t max_tensor_size = 20736;

class SymTensor {
public:
    SymTensor() : space_(1, 1), n_(0), data_(1, 0.0) {}
    SymTensor(const StateSpace& space, int n); // zero-filled
    SymTensor(const StateSpace& space, int n, std::vector<double> data);

    int arity() const { return n_; }
    const StateSpace& space() const { return space_; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    // Flat index of the coordinate tuple (x_1..x_n), each in [0, S).
    std::size_t flat(const std::vector<int>& coords) const;
    double at(const std::vector<int>& coords) const { return data_[flat(coords)]; }
    double& at(const std::vector<int>& coords) { return data_[flat(coords)]; }

    // Throws InvariantError on NaN/Inf entries.
    void check_finite(const char* context) const;

    SymTensor& operator+=(const SymTensor& o);
    SymTensor& operator*=(double c);

private:
    StateSpace space_;
    int n_;
    std::vector<double> data_;
};

enum class SequenceKind { observable, state };

// A scalar plus one tensor per arity 1..n_max. Represents truncated
// observable sequences and state sequences.
class GradedSequence {
public:
    GradedSequence() : kind_(SequenceKind::observable), space_(1, 1), scalar_(0.0) {}
    GradedSequence(SequenceKind kind, const StateSpace& space, int n_max);

    SequenceKind kind() const { return kind_; }
    const StateSpace& space() const { return space_; }
    int n_max() const { return static_cast<int>(comps_.size()); }

    double& scalar() { return scalar_; }
    double scalar() const { return scalar_; }

    SymTensor& component(int n);
    const SymTensor& component(int n) const;

    void check_finite(const char* context) const;

private:
    SequenceKind kind_;
    StateSpace space_;
    double scalar_;
    std::vector<SymTensor> comps_; // comps_[i] has arity i+1
};

// Average of t over all n! slot permutations. Idempotent; identity on
// already-symmetric tensors.
SymTensor symmetrize(const SymTensor& t);

// Extend a rank-(n-k) tensor to rank n: result(x_1..x_n) = t(x at `keep`),
// constant in the omitted slots. `keep` lists 0-based slot indices of the
// result, strictly increasing, |keep| = t.arity().
SymTensor embed(const SymTensor& t, const std::vector<int>& keep, int n);

// Counting-measure bracket: sum over the full product space of obs * state.
double pair(const SymTensor& obs, const SymTensor& state);

// Pointwise (tensor) product of a rank-n and rank-m tensor on the joined
// slots: result(x_1..x_{n+m}) = a(x_1..x_n) * b(x_{n+1}..x_{n+m}).
SymTensor tensor_product(const SymTensor& a, const SymTensor& b);

// n-fold tensor power of a rank-1 tensor.
SymTensor tensor_power(const SymTensor& f, int n);

// Sum the last `n_out` slots: result(x_1..x_{n-n_out}) = sum over the
// remaining coordinates of t.
SymTensor contract_last(const SymTensor& t, int n_out);

// Max-norm of the coefficient array.
double max_norm(const SymTensor& t);

// y += a * x over scalar and all components; shapes must match.
void axpy(GradedSequence& y, double a, const GradedSequence& x);

} // namespace ekin
