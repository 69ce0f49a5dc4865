#include "ekin/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace ekin {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

double graded_bracket(const GradedSequence& obs, const GradedSequence& state) {
    double acc = obs.scalar() * state.scalar();
    const int n_max = std::min(obs.n_max(), state.n_max());
    for (int s = 1; s <= n_max; ++s)
        acc += pair(obs.component(s), state.component(s)) / factorial(s);
    return acc;
}

double partition_function(const FullStates& d) {
    double acc = d.scalar();
    for (int n = 1; n <= d.n_max(); ++n) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d.component(n).size(); ++i)
            sum += d.component(n)[i];
        acc += sum / factorial(n);
    }
    return acc;
}

double mean_value(const FullObservables& o, const FullStates& d) {
    const double z = partition_function(d);
    if (std::abs(z) < 1e-300)
        throw ValidationError("vanishing normalization in mean value");
    return graded_bracket(o, d) / z;
}

MarginalStates marginals_from_full(const FullStates& d, int s_max) {
    if (s_max > d.n_max())
        throw ValidationError("marginal truncation exceeds available components");
    const double z = partition_function(d);
    if (std::abs(z) < 1e-300)
        throw ValidationError("vanishing normalization in marginals");
    MarginalStates f(SequenceKind::state, d.space(), s_max);
    f.scalar() = 1.0;
    for (int s = 1; s <= s_max; ++s) {
        SymTensor acc(d.space(), s);
        for (int n = 0; s + n <= d.n_max(); ++n) {
            SymTensor c = contract_last(d.component(s + n), n);
            c *= 1.0 / factorial(n);
            acc += c;
        }
        acc *= 1.0 / z;
        f.component(s) = acc;
    }
    return f;
}

MarginalObservables marginal_obs_from_obs(const FullObservables& o, int s_max) {
    if (s_max > o.n_max())
        throw ValidationError("marginal truncation exceeds available components");
    MarginalObservables b(SequenceKind::observable, o.space(), s_max);
    b.scalar() = o.scalar();
    for (int s = 1; s <= s_max; ++s) {
        SymTensor acc(o.space(), s);
        for (int n = 0; n <= s; ++n) {
            const double w = ((n % 2 == 0) ? 1.0 : -1.0) / factorial(n);
            for (const std::vector<int>& tup : ordered_tuples(s, n)) {
                std::vector<int> keep;
                keep.reserve(static_cast<std::size_t>(s - n));
                for (int i = 0; i < s; ++i)
                    if (std::find(tup.begin(), tup.end(), i) == tup.end())
                        keep.push_back(i);
                SymTensor part(o.space(), s);
                if (s - n == 0) {
                    for (std::size_t i = 0; i < part.size(); ++i) part[i] = o.scalar();
                } else {
                    part = embed(o.component(s - n), keep, s);
                }
                part *= w;
                acc += part;
            }
        }
        b.component(s) = acc;
    }
    return b;
}

double duality_full(const InteractionModel& model, const FullObservables& o0,
                    const FullStates& d0, double t) {
    const int n_max = std::min(o0.n_max(), d0.n_max());
    FullObservables ot = o0;
    FullStates dt = d0;
    for (int n = 1; n <= n_max; ++n) {
        const LinOp semi_obs = semigroup(lambda_n(model, n), t);
        ot.component(n) = semi_obs.apply(o0.component(n));
        const LinOp semi_state = semigroup(lambda_star_n(model, n), t);
        dt.component(n) = semi_state.apply(d0.component(n));
    }
    const double lhs = mean_value(ot, d0);
    const double rhs = mean_value(o0, dt);
    return std::abs(lhs - rhs);
}

} // namespace ekin
