#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ekin/cumulants.hpp"
#include "ekin/errors.hpp"
#include "helpers.hpp"

using namespace ekin;

namespace {

double op_distance(const LinOp& a, const LinOp& b) {
    double err = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c)
            err = std::max(err, std::abs(a.entry(r, c) - b.entry(r, c)));
    return err;
}

} // namespace

TEST_SUITE("cumulants") {

TEST_CASE("partition counts are the Bell numbers") {
    const int bell[] = {1, 2, 5, 15, 52, 203};
    for (int k = 1; k <= 6; ++k) {
        const auto& parts = partitions(k);
        CHECK(static_cast<int>(parts.size()) == bell[k - 1]);
        for (const Partition& p : parts) {
            std::vector<bool> seen(static_cast<std::size_t>(k), false);
            for (const auto& block : p.blocks) {
                CHECK_FALSE(block.empty());
                for (int e : block) {
                    CHECK_FALSE(seen[static_cast<std::size_t>(e)]);
                    seen[static_cast<std::size_t>(e)] = true;
                }
            }
            CHECK(std::count(seen.begin(), seen.end(), true) == k);
        }
    }
    CHECK_THROWS_AS(partitions(0), ValidationError);
    CHECK_THROWS_AS(partitions(7), ValidationError);
}

TEST_CASE("cluster argument construction") {
    const ClusterArgument arg = ClusterArgument::from(4, {3, 1});
    REQUIRE(arg.elements.size() == 3);
    CHECK(arg.elements[0] == std::vector<int>{2, 4});
    CHECK(arg.elements[1] == std::vector<int>{3});
    CHECK(arg.elements[2] == std::vector<int>{1});
    CHECK(declusterize(arg, {0, 2}) == std::vector<int>{1, 2, 4});
    CHECK_THROWS_AS(ClusterArgument::from(3, {1, 1}), ValidationError);
    CHECK_THROWS_AS(ClusterArgument::from(3, {4}), ValidationError);
}

TEST_CASE("first cumulant is the semigroup") {
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.5, 201);
    for (int s = 1; s <= 3; ++s) {
        const LinOp a1 = cumulant(model, 0.6, s, {});
        const LinOp semi = semigroup(lambda_n(model, s), 0.6);
        CHECK(op_distance(a1, semi) < 1e-13);
    }
}

TEST_CASE("second cumulant matches its two-term display") {
    // A_2(t, {Y\(j)}, j) = e^{tL_s} - e^{tL_{s-1}}(on Y\j) e^{tL_1}(on j)
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.5, 202);
    const double t = 0.45;
    const int s = 3;
    for (int j = 1; j <= s; ++j) {
        const LinOp got = cumulant(model, t, s, {j});
        ReplicaRng rng({203, static_cast<std::uint64_t>(j)});
        const SymTensor b = testing::random_tensor(sp, s, rng);
        const SymTensor lhs = got.apply(b);

        const LinOp full = semigroup(lambda_n(model, s), t);
        const LinOp small = semigroup(lambda_n(model, s - 1), t);
        const LinOp single = semigroup(lambda_n(model, 1), t);
        std::vector<int> keep;
        for (int i = 0; i < s; ++i)
            if (i != j - 1) keep.push_back(i);
        const std::vector<double> small_mat(small.data(),
                                            small.data() + small.dim() * small.dim());
        const std::vector<double> single_mat(single.data(), single.data() + 4 * 4);
        SymTensor prod = apply_on_slots(small_mat, s - 1, b, keep);
        prod = apply_on_slots(single_mat, 1, prod, {j - 1});
        SymTensor want = full.apply(b);
        prod *= -1.0;
        want += prod;
        CHECK(testing::distance(lhs, want) < 1e-10);
    }
}

TEST_CASE("cumulants beyond the first vanish at t=0") {
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.7, 204);
    for (int n = 1; n <= 3; ++n) {
        const int s = n + 1; // smallest space carrying n singletons + a block
        std::vector<int> z;
        for (int i = 0; i < n; ++i) z.push_back(i + 2);
        const LinOp a = cumulant(model, 0.0, s, z);
        CHECK(max_abs(a) < 1e-12);
    }
}

TEST_CASE("empty leading block makes the cumulant vanish identically") {
    const StateSpace sp(2, 2);
    const InteractionModel model = testing::random_model(sp, 2, 0.7, 205);
    for (int n = 1; n <= 3; ++n) {
        std::vector<int> z;
        for (int i = 0; i < n; ++i) z.push_back(i + 1); // Z = all of 1..s
        const LinOp a = cumulant(model, 0.8, n, z);
        CHECK(max_abs(a) < 1e-12);
    }
}

TEST_CASE("argument caps") {
    const StateSpace sp(2, 2);
    const InteractionModel model = builtin_model("imitation", sp, 1.0);
    CHECK_THROWS_AS(cumulant(model, 0.5, 7, {1, 2, 3, 4, 5, 6}), ValidationError);
}

}
