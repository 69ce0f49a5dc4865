#pragma once

#include <string>
#include <vector>

#include "ekin/state_space.hpp"

// Dense linear operators on the n-entity function space (dimension S^n).
// Row-major storage; apply() means matrix * column-vector, so operators act
// on tensors the way the generator definitions read.

namespace ekin {

inline constexpr std::size_t max_operator_dim = 4096;

class LinOp {
public:
    LinOp() : space_(1, 1), n_(0), dim_(1), mat_(1, 0.0) {}
    LinOp(const StateSpace& space, int n, std::string label);

    static LinOp identity(const StateSpace& space, int n);

    int arity() const { return n_; }
    const StateSpace& space() const { return space_; }
    std::size_t dim() const { return dim_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    double& entry(std::size_t row, std::size_t col) { return mat_[row * dim_ + col]; }
    double entry(std::size_t row, std::size_t col) const { return mat_[row * dim_ + col]; }
    double* data() { return mat_.data(); }
    const double* data() const { return mat_.data(); }

    SymTensor apply(const SymTensor& t) const;

    LinOp& operator+=(const LinOp& o);
    LinOp& operator*=(double c);

private:
    StateSpace space_;
    int n_;
    std::size_t dim_;
    std::vector<double> mat_;
    std::string label_;
};

LinOp multiply(const LinOp& a, const LinOp& b);
LinOp transpose(const LinOp& a);

// Max absolute entry and the infinity norm (max absolute row sum).
double max_abs(const LinOp& a);
double inf_norm(const LinOp& a);

} // namespace ekin
