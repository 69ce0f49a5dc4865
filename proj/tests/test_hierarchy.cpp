#include <doctest.h>

#include <cmath>
#include <vector>

#include "ekin/errors.hpp"
#include "ekin/hierarchy.hpp"
#include "helpers.hpp"

using namespace ekin;

namespace {

// Dense assembly of the dual-side right-hand side for s = 2, written straight
// from the display: coupling term k=2, n=1, weight eps * (1/1!) * (1/1!).
SymTensor dual_rhs_s2_oracle(const InteractionModel& model, const MarginalObservables& b) {
    const StateSpace& sp = b.space();
    SymTensor rhs = lambda_n(model, 2).apply(b.component(2));
    if (model.m_max >= 2) {
        const std::vector<double> e2 = interaction_matrix(model, 2);
        for (const std::vector<int>& j : ordered_tuples(2, 2)) {
            // the removed slot i ranges over the tuple; b_1 lives on the other
            for (int pick = 0; pick < 2; ++pick) {
                const std::vector<int> keep{j[static_cast<std::size_t>(1 - pick)]};
                const SymTensor emb = embed(b.component(1), keep, 2);
                SymTensor term = apply_on_slots(e2, 2, emb, j);
                term *= model.epsilon;
                rhs += term;
            }
        }
    }
    return rhs;
}

} // namespace

TEST_SUITE("hierarchy") {

TEST_CASE("component one has no coupling term") {
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.6, 401);
    ReplicaRng rng({402, 0});
    MarginalObservables b(SequenceKind::observable, sp, 2);
    b.component(1) = testing::random_tensor(sp, 1, rng);
    b.component(2) = testing::random_tensor(sp, 2, rng);
    const SymTensor rhs = dual_bbgky_rhs(model, b, 1);
    const SymTensor want = lambda_n(model, 1).apply(b.component(1));
    CHECK(testing::distance(rhs, want) < 1e-13);
}

TEST_CASE("dual right-hand side matches a dense assembly at s=2") {
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.37, 403);
    ReplicaRng rng({404, 0});
    MarginalObservables b(SequenceKind::observable, sp, 2);
    b.component(1) = testing::random_tensor(sp, 1, rng);
    b.component(2) = testing::random_tensor(sp, 2, rng);
    const SymTensor got = dual_bbgky_rhs(model, b, 2);
    const SymTensor want = dual_rhs_s2_oracle(model, b);
    CHECK(testing::distance(got, want) < 1e-12);
}

TEST_CASE("expansion solves the dual hierarchy") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({405, 0});
    for (const char* name : {"imitation", "mixed"}) {
        const InteractionModel model =
            with_epsilon(builtin_model(name, sp, 1.0), 0.3);
        const MarginalObservables b0 =
            testing::random_sequence(SequenceKind::observable, sp, 2, rng);
        const MarginalObservables direct = solve_expansion(model, b0, 0.5);
        const MarginalObservables stepped = integrate_dual_bbgky(model, b0, 0.5, 1e-3);
        CHECK(testing::distance(direct, stepped) < 1e-6);
    }
}

TEST_CASE("expansion time derivative satisfies the equations") {
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.25, 406);
    ReplicaRng rng({407, 0});
    const MarginalObservables b0 =
        testing::random_sequence(SequenceKind::observable, sp, 3, rng);
    const double t = 0.4, h = 1e-4;
    const MarginalObservables bt = solve_expansion(model, b0, t);
    const MarginalObservables plus = solve_expansion(model, b0, t + h);
    const MarginalObservables minus = solve_expansion(model, b0, t - h);
    for (int s = 1; s <= 3; ++s) {
        SymTensor fd = plus.component(s);
        SymTensor neg = minus.component(s);
        neg *= -1.0;
        fd += neg;
        fd *= 1.0 / (2.0 * h);
        const SymTensor rhs = dual_bbgky_rhs(model, bt, s);
        CHECK(testing::distance(fd, rhs) < 1e-6);
    }
}

TEST_CASE("states hierarchy conserves the first-component mass") {
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.45, 408);
    ReplicaRng rng({409, 0});
    MarginalStates f0(SequenceKind::state, sp, 3);
    f0.scalar() = 1.0;
    for (int s = 1; s <= 3; ++s)
        f0.component(s) = testing::random_tensor(sp, s, rng, 0.1, 1.0);
    const MarginalStates ft = integrate_bbgky_states(model, f0, 0.8, 1e-3);
    double mass0 = 0.0, masst = 0.0;
    for (std::size_t i = 0; i < f0.component(1).size(); ++i) {
        mass0 += f0.component(1)[i];
        masst += ft.component(1)[i];
    }
    CHECK(std::abs(masst - mass0) < 1e-12);
}

TEST_CASE("the truncated hierarchies are exact duals") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({410, 0});
    for (const char* name : {"imitation", "mixed"}) {
        const InteractionModel model = builtin_model(name, sp, 0.6);
        const MarginalObservables b0 =
            testing::random_sequence(SequenceKind::observable, sp, 3, rng);
        const MarginalStates f0 =
            testing::random_sequence(SequenceKind::state, sp, 3, rng);
        for (double t : {0.3, 0.7}) {
            CHECK(duality_check(model, b0, f0, t, 5e-3) < 1e-10);
        }
    }
}

TEST_CASE("duality also holds on dense random models") {
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.9, 411);
    ReplicaRng rng({412, 0});
    const MarginalObservables b0 =
        testing::random_sequence(SequenceKind::observable, sp, 2, rng);
    const MarginalStates f0 = testing::random_sequence(SequenceKind::state, sp, 2, rng);
    CHECK(duality_check(model, b0, f0, 0.5, 2e-3) < 1e-10);
}

TEST_CASE("integrator input validation") {
    const StateSpace sp(2, 2);
    const InteractionModel model = builtin_model("imitation", sp, 1.0);
    MarginalObservables b0(SequenceKind::observable, sp, 1);
    CHECK_THROWS_AS(integrate_dual_bbgky(model, b0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(integrate_dual_bbgky(model, b0, 1.0, -0.1), ValidationError);
}

}
