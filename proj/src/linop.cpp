#include "ekin/linop.hpp"

#include <cmath>
#include <string>

#include "ekin/kernels.hpp"

namespace ekin {

LinOp::LinOp(const StateSpace& space, int n, std::string label)
    : space_(space), n_(n), dim_(space.pow_dim(n)), label_(std::move(label)) {
    if (dim_ > max_operator_dim)
        throw ValidationError("operator dimension S^n = " + std::to_string(dim_) +
                              " exceeds cap " + std::to_string(max_operator_dim));
    mat_.assign(dim_ * dim_, 0.0);
}

LinOp LinOp::identity(const StateSpace& space, int n) {
    LinOp id(space, n, "identity");
    for (std::size_t i = 0; i < id.dim_; ++i) id.entry(i, i) = 1.0;
    return id;
}

SymTensor LinOp::apply(const SymTensor& t) const {
    if (t.arity() != n_ || !(t.space() == space_))
        throw ValidationError("operator/tensor shape mismatch in apply");
    SymTensor out(space_, n_);
    kernels::matmul(mat_.data(), t.data(), out.data(), dim_, dim_, 1);
    return out;
}

LinOp& LinOp::operator+=(const LinOp& o) {
    if (o.dim_ != dim_ || o.n_ != n_ || !(o.space_ == space_))
        throw ValidationError("operator shape mismatch in addition");
    for (std::size_t i = 0; i < mat_.size(); ++i) mat_[i] += o.mat_[i];
    return *this;
}

LinOp& LinOp::operator*=(double c) {
    for (double& v : mat_) v *= c;
    return *this;
}

LinOp multiply(const LinOp& a, const LinOp& b) {
    if (a.dim() != b.dim() || !(a.space() == b.space()))
        throw ValidationError("operator shape mismatch in multiply");
    LinOp c(a.space(), a.arity(), a.label() + "*" + b.label());
    kernels::matmul(a.data(), b.data(), c.data(), a.dim(), a.dim(), a.dim());
    return c;
}

LinOp transpose(const LinOp& a) {
    LinOp t(a.space(), a.arity(), a.label() + "^T");
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) t.entry(j, i) = a.entry(i, j);
    return t;
}

double max_abs(const LinOp& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim() * a.dim(); ++i)
        m = std::max(m, std::abs(a.data()[i]));
    return m;
}

double inf_norm(const LinOp& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.dim(); ++j) row += std::abs(a.entry(i, j));
        m = std::max(m, row);
    }
    return m;
}

} // namespace ekin
