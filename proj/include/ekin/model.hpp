#pragma once

#include <map>
#include <string>
#include <vector>

#include "ekin/state_space.hpp"

// Interaction models: per-order rate tables a[m] on S^m and jump kernels
// A[m] on S x S^m (first index is the post-jump state of the first entity in
// the tuple). Tables are stored unscaled; the scaling parameter epsilon
// enters only as the weight epsilon^(m-1) during generator assembly, so one
// model serves a whole epsilon sweep.

namespace ekin {

struct InteractionModel {
    StateSpace space{1, 1};
    int m_max = 1;
    double epsilon = 1.0;
    // rates[m]: length S^m, index = row-major tuple (x_1..x_m).
    std::map<int, std::vector<double>> rates;
    // kernels[m]: length S^m * S, index = tuple_flat * S + v.
    std::map<int, std::vector<double>> kernels;
    // Upper bounds a*_m; defaulted to the table maximum when absent.
    std::map<int, double> rate_bounds;

    double rate(int m, std::size_t tuple_flat) const {
        return rates.at(m)[tuple_flat];
    }
    const double* kernel_row(int m, std::size_t tuple_flat) const {
        return kernels.at(m).data() + tuple_flat * static_cast<std::size_t>(space.S());
    }
    std::size_t tuple_count(int m) const { return space.pow_dim(m); }
};

struct ValidationReport {
    bool ok = true;
    std::string message; // names the first violating entry when !ok
};

// Pure structural check: table sizes, 0 <= a <= a*, kernel rows nonnegative
// and summing to 1 within 1e-12. Reports, never throws.
ValidationReport validate(const InteractionModel& model);

// Divide every kernel row by its sum. Rows further than 1e-6 from 1 are
// rejected (ValidationError); afterwards rows sum to 1 up to one rounding.
void renormalize_kernels(InteractionModel& model);

// Built-in example models: "uniform-drift" (order 1, jump to a uniformly
// random state), "imitation" (adds an order-2 interaction where the first
// entity of the pair copies its partner's full state), "mixed" (imitation
// with cross-subpopulation pair rate 1 and same-subpopulation rate 1/2).
InteractionModel builtin_model(const std::string& name, const StateSpace& space,
                               double epsilon);

// JSON file I/O. load_model validates, renormalizes kernel rows, and
// re-validates; it throws ValidationError with the diagnostic on bad input.
InteractionModel load_model(const std::string& path);
void save_model(const InteractionModel& model, const std::string& path);
InteractionModel model_from_json_text(const std::string& text);
std::string model_to_json_text(const InteractionModel& model);

// A copy with a different scaling parameter (tables shared by value).
InteractionModel with_epsilon(const InteractionModel& model, double epsilon);

struct ScalingConfig {
    std::vector<double> epsilons; // strictly decreasing, all positive

    explicit ScalingConfig(std::vector<double> eps);
    static int N_of_epsilon(double epsilon); // round(1/epsilon)
};

} // namespace ekin
