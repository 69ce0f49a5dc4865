#include <doctest.h>

#include <cmath>
#include <vector>

#include "ekin/errors.hpp"
#include "ekin/ssa.hpp"
#include "ekin/state_space.hpp"
#include "helpers.hpp"

using namespace ekin;

TEST_SUITE("state_space") {

TEST_CASE("flatten and unflatten are inverse") {
    const StateSpace sp(3, 2);
    CHECK(sp.S() == 6);
    int seen = 0;
    for (int j = 1; j <= 3; ++j)
        for (int u = 1; u <= 2; ++u) {
            const int idx = sp.flatten({j, u});
            CHECK(idx >= 0);
            CHECK(idx < 6);
            CHECK(sp.unflatten(idx) == EntityState{j, u});
            ++seen;
        }
    CHECK(seen == 6);
    CHECK(sp.flatten({2, 1}) == 2); // (j-1)*K + (u-1)
}

TEST_CASE("pow_dim enforces the tensor cap") {
    const StateSpace sp(3, 2);
    CHECK(sp.pow_dim(0) == 1);
    CHECK(sp.pow_dim(3) == 216);
    CHECK_THROWS_AS(sp.pow_dim(10), ValidationError);
}

TEST_CASE("tensor indexing is row-major with slot 0 most significant") {
    const StateSpace sp(2, 2);
    SymTensor t(sp, 2);
    t.at({3, 1}) = 7.0;
    CHECK(t[3 * 4 + 1] == 7.0);
    CHECK_THROWS_AS(t.flat({0}), ValidationError);
    CHECK_THROWS_AS(t.flat({0, 4}), ValidationError);
}

TEST_CASE("symmetrize averages over slot permutations") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({5, 0});
    SymTensor t(sp, 3);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform();
    const SymTensor s = symmetrize(t);
    // spot-check one orbit against the direct average
    const double want = (t.at({0, 1, 3}) + t.at({0, 3, 1}) + t.at({1, 0, 3}) +
                         t.at({1, 3, 0}) + t.at({3, 0, 1}) + t.at({3, 1, 0})) /
                        6.0;
    CHECK(s.at({0, 1, 3}) == doctest::Approx(want).epsilon(1e-15));
    CHECK(s.at({3, 1, 0}) == doctest::Approx(want).epsilon(1e-15));
    // idempotent up to the re-averaging roundoff
    CHECK(testing::distance(symmetrize(s), s) < 1e-15);
}

TEST_CASE("embed keeps the named slots and is constant in the rest") {
    const StateSpace sp(2, 2);
    ReplicaRng rng({6, 0});
    SymTensor t(sp, 2);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform();
    const SymTensor e = embed(t, {0, 2}, 3);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) CHECK(e.at({a, b, c}) == t.at({a, c}));
    CHECK_THROWS_AS(embed(t, {2, 0}, 3), ValidationError); // not increasing
    CHECK_THROWS_AS(embed(t, {0}, 3), ValidationError);    // wrong count
}

TEST_CASE("pair is the full-space dot product") {
    const StateSpace sp(2, 1);
    SymTensor a(sp, 2), b(sp, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        a[i] = static_cast<double>(i + 1);
        b[i] = static_cast<double>(10 - i);
    }
    CHECK(pair(a, b) == doctest::Approx(1 * 10 + 2 * 9 + 3 * 8 + 4 * 7));
}

TEST_CASE("tensor product and power") {
    const StateSpace sp(2, 1);
    SymTensor f(sp, 1);
    f[0] = 0.25;
    f[1] = 0.75;
    const SymTensor p = tensor_power(f, 3);
    CHECK(p.at({1, 0, 1}) == doctest::Approx(0.75 * 0.25 * 0.75).epsilon(1e-15));
    SymTensor g(sp, 1);
    g[0] = 2.0;
    g[1] = -1.0;
    const SymTensor fg = tensor_product(f, g);
    CHECK(fg.at({0, 1}) == doctest::Approx(0.25 * -1.0));
    CHECK(fg.at({1, 0}) == doctest::Approx(0.75 * 2.0));
}

TEST_CASE("contract_last sums trailing slots") {
    const StateSpace sp(2, 1);
    ReplicaRng rng({7, 0});
    SymTensor t(sp, 3);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform();
    const SymTensor c = contract_last(t, 2);
    for (int a = 0; a < 2; ++a) {
        double want = 0.0;
        for (int b = 0; b < 2; ++b)
            for (int d = 0; d < 2; ++d) want += t.at({a, b, d});
        CHECK(c.at({a}) == doctest::Approx(want).epsilon(1e-15));
    }
    CHECK(testing::distance(contract_last(t, 0), t) == 0.0);
}

TEST_CASE("graded sequence accessors and axpy") {
    const StateSpace sp(2, 2);
    GradedSequence g(SequenceKind::observable, sp, 2);
    CHECK(g.n_max() == 2);
    CHECK_THROWS_AS(g.component(0), ValidationError);
    CHECK_THROWS_AS(g.component(3), ValidationError);
    g.scalar() = 2.0;
    g.component(1)[0] = 1.0;
    GradedSequence h = g;
    axpy(h, 3.0, g);
    CHECK(h.scalar() == 8.0);
    CHECK(h.component(1)[0] == 4.0);
}

TEST_CASE("check_finite rejects NaN") {
    const StateSpace sp(2, 1);
    SymTensor t(sp, 1);
    t[0] = std::nan("");
    CHECK_THROWS_AS(t.check_finite("test"), InvariantError);
}

}
