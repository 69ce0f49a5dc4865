#include <doctest.h>

#include <cmath>
#include <vector>

#include "ekin/errors.hpp"
#include "ekin/functionals.hpp"
#include "helpers.hpp"

using namespace ekin;

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

GradedSequence constant_sequence(const StateSpace& sp, int n_max, double c) {
    GradedSequence g(SequenceKind::observable, sp, n_max);
    g.scalar() = c;
    for (int n = 1; n <= n_max; ++n) {
        SymTensor t(sp, n);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = c;
        g.component(n) = t;
    }
    return g;
}

} // namespace

TEST_SUITE("functionals") {

TEST_CASE("mean value of the constant-one observable is one") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({301, 0});
    const FullStates d = testing::random_sequence(SequenceKind::state, sp, 3, rng);
    const FullObservables ones = constant_sequence(sp, 3, 1.0);
    CHECK(mean_value(ones, d) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("state with only the scalar gives O_0") {
    const StateSpace sp(2, 2);
    FullStates d(SequenceKind::state, sp, 2);
    d.scalar() = 1.0;
    ReplicaRng rng({302, 0});
    const FullObservables o = testing::random_sequence(SequenceKind::observable, sp, 2, rng);
    CHECK(mean_value(o, d) == doctest::Approx(o.scalar()).epsilon(1e-14));
}

TEST_CASE("mean value matches a direct double loop") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({303, 0});
    const FullObservables o = testing::random_sequence(SequenceKind::observable, sp, 3, rng);
    const FullStates d = testing::random_sequence(SequenceKind::state, sp, 3, rng);
    double num = o.scalar() * d.scalar(), den = d.scalar();
    for (int n = 1; n <= 3; ++n) {
        double dot = 0.0, mass = 0.0;
        for (std::size_t i = 0; i < d.component(n).size(); ++i) {
            dot += o.component(n)[i] * d.component(n)[i];
            mass += d.component(n)[i];
        }
        num += dot / factorial(n);
        den += mass / factorial(n);
    }
    CHECK(mean_value(o, d) == doctest::Approx(num / den).epsilon(1e-13));
    CHECK(partition_function(d) == doctest::Approx(den).epsilon(1e-13));
}

TEST_CASE("vanishing normalization is rejected") {
    const StateSpace sp(2, 1);
    FullStates d(SequenceKind::state, sp, 1); // all zero
    FullObservables o(SequenceKind::observable, sp, 1);
    CHECK_THROWS_AS(mean_value(o, d), ValidationError);
}

TEST_CASE("marginals of a one-particle state") {
    const StateSpace sp(2, 1);
    FullStates d(SequenceKind::state, sp, 2);
    d.scalar() = 1.0;
    d.component(1)[0] = 0.3;
    d.component(1)[1] = 0.5;
    const MarginalStates f = marginals_from_full(d, 2);
    const double z = 1.0 + 0.8;
    CHECK(f.scalar() == 1.0);
    CHECK(f.component(1)[0] == doctest::Approx(0.3 / z).epsilon(1e-14));
    CHECK(f.component(1)[1] == doctest::Approx(0.5 / z).epsilon(1e-14));
    CHECK(max_norm(f.component(2)) == 0.0);
}

TEST_CASE("marginals are equivariant under state relabeling") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({304, 0});
    const FullStates d = testing::random_sequence(SequenceKind::state, sp, 3, rng);
    const std::vector<int> perm{2, 0, 3, 1};
    FullStates dp(SequenceKind::state, sp, 3);
    dp.scalar() = d.scalar();
    for (int n = 1; n <= 3; ++n) {
        SymTensor t(sp, n);
        std::vector<int> coords(static_cast<std::size_t>(n)),
            pcoords(static_cast<std::size_t>(n));
        for (std::size_t x = 0; x < t.size(); ++x) {
            std::size_t rest = x;
            for (int i = n - 1; i >= 0; --i) {
                coords[static_cast<std::size_t>(i)] = static_cast<int>(rest % 4);
                rest /= 4;
            }
            for (int i = 0; i < n; ++i)
                pcoords[static_cast<std::size_t>(i)] =
                    perm[static_cast<std::size_t>(coords[static_cast<std::size_t>(i)])];
            t.at(pcoords) = d.component(n).at(coords);
        }
        dp.component(n) = t;
    }
    const MarginalStates f = marginals_from_full(d, 2);
    const MarginalStates fp = marginals_from_full(dp, 2);
    for (int v = 0; v < 4; ++v)
        CHECK(fp.component(1)[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] ==
              doctest::Approx(f.component(1)[static_cast<std::size_t>(v)]).epsilon(1e-13));
}

TEST_CASE("marginal observables: first component and linearity") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({305, 0});
    const FullObservables o = testing::random_sequence(SequenceKind::observable, sp, 3, rng);
    const MarginalObservables b = marginal_obs_from_obs(o, 3);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(b.component(1)[i] ==
              doctest::Approx(o.component(1)[i] - o.scalar()).epsilon(1e-14));

    const FullObservables o2 = testing::random_sequence(SequenceKind::observable, sp, 3, rng);
    FullObservables sum = o;
    axpy(sum, 2.5, o2);
    const MarginalObservables b2 = marginal_obs_from_obs(o2, 3);
    const MarginalObservables bsum = marginal_obs_from_obs(sum, 3);
    for (int s = 1; s <= 3; ++s) {
        SymTensor want = b.component(s);
        SymTensor scaled = b2.component(s);
        scaled *= 2.5;
        want += scaled;
        CHECK(testing::distance(bsum.component(s), want) < 1e-12);
    }
}

TEST_CASE("additive observables have vanishing higher marginals") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({306, 0});
    SymTensor o1(sp, 1);
    for (std::size_t i = 0; i < 4; ++i) o1[i] = rng.uniform();
    FullObservables o(SequenceKind::observable, sp, 3);
    o.scalar() = 0.0;
    for (int s = 1; s <= 3; ++s) {
        SymTensor t(sp, s);
        for (int slot = 0; slot < s; ++slot) {
            std::vector<int> keep{slot};
            t += embed(o1, keep, s);
        }
        o.component(s) = t;
    }
    const MarginalObservables b = marginal_obs_from_obs(o, 3);
    CHECK(testing::distance(b.component(1), o1) < 1e-13);
    CHECK(max_norm(b.component(2)) < 1e-13);
    CHECK(max_norm(b.component(3)) < 1e-13);
}

TEST_CASE("zero observable maps to zero") {
    const StateSpace sp(2, 2);
    FullObservables o(SequenceKind::observable, sp, 2);
    const MarginalObservables b = marginal_obs_from_obs(o, 2);
    CHECK(b.scalar() == 0.0);
    CHECK(max_norm(b.component(1)) == 0.0);
    CHECK(max_norm(b.component(2)) == 0.0);
}

TEST_CASE("evolved duality vanishes") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({307, 0});
    for (const char* name : {"uniform-drift", "imitation", "mixed"}) {
        const InteractionModel model = builtin_model(name, sp, 0.8);
        const FullObservables o =
            testing::random_sequence(SequenceKind::observable, sp, 3, rng);
        const FullStates d = testing::random_sequence(SequenceKind::state, sp, 3, rng);
        CHECK(duality_full(model, o, d, 0.0) == 0.0);
        for (double t : {0.3, 0.7, 2.0}) CHECK(duality_full(model, o, d, t) < 1e-10);
    }
}

TEST_CASE("constant observables are fixed points of the dual flow") {
    const StateSpace sp(2, 2);
    const InteractionModel model = builtin_model("mixed", sp, 1.0);
    ReplicaRng rng({308, 0});
    const FullObservables o = constant_sequence(sp, 3, 0.75);
    const FullStates d = testing::random_sequence(SequenceKind::state, sp, 3, rng);
    CHECK(duality_full(model, o, d, 1.1) < 1e-12);
}

TEST_CASE("marginal transforms compose with the mean value") {
    // D decays fast enough that the dropped s > s_max bracket terms sit
    // below 1e-6; with D supported up to arity 4 the marginals are exact.
    const StateSpace sp(2, 2);
    ReplicaRng rng({309, 0});
    const FullObservables o = testing::random_sequence(SequenceKind::observable, sp, 4, rng);
    const FullStates d =
        testing::random_sequence(SequenceKind::state, sp, 4, rng, 0.002);
    const MarginalObservables b = marginal_obs_from_obs(o, 2);
    const MarginalStates f = marginals_from_full(d, 2);
    const double resid = std::abs(graded_bracket(b, f) - mean_value(o, d));
    CHECK(resid < 1e-6);
}

}
