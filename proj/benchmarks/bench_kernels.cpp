// Timing comparison of the serial reference kernels against the OpenMP
// variants, plus replica-level parallelism of the stochastic sampler.
// Prints a small CSV to stdout; the parallel results are bit-identical to
// the serial ones by construction, so only time is reported.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "ekin/kernels.hpp"
#include "ekin/model.hpp"
#include "ekin/ssa.hpp"

using namespace ekin;

namespace {

double min_seconds(int repeats, const std::function<void()>& body) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        best = std::min(best, secs);
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%s,%.6f,%.6f,%.2f\n", name, serial, parallel, serial / parallel);
}

} // namespace

int main() {
    std::printf("kernel,serial_s,parallel_s,speedup\n");

    {
        const std::size_t n = 384, k = 384, m = 384;
        std::vector<double> a(n * k), b(k * m), c(n * m);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = 0.25 + 1e-6 * i;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = 0.5 - 1e-6 * i;
        kernels::set_thread_limit(1);
        const double serial = min_seconds(
            5, [&] { kernels::matmul_serial(a.data(), b.data(), c.data(), n, k, m); });
        kernels::set_thread_limit(0);
        const double parallel = min_seconds(
            5, [&] { kernels::matmul(a.data(), b.data(), c.data(), n, k, m); });
        report("matmul_384", serial, parallel);
    }

    {
        const int s = 4, n = 7, m = 2;
        const std::size_t dim = 16384; // 4^7
        std::vector<double> e(256), in(dim), out(dim);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = 0.1 + 1e-4 * i;
        for (std::size_t i = 0; i < dim; ++i) in[i] = 1.0 / (1.0 + i);
        const int slots[2] = {2, 5};
        kernels::set_thread_limit(1);
        const double serial = min_seconds(20, [&] {
            kernels::apply_slot_op_serial(e.data(), in.data(), out.data(), n, s, slots, m);
        });
        kernels::set_thread_limit(0);
        const double parallel = min_seconds(20, [&] {
            kernels::apply_slot_op(e.data(), in.data(), out.data(), n, s, slots, m);
        });
        report("slot_op_4^7", serial, parallel);
    }

    {
        const StateSpace sp(2, 2);
        const InteractionModel model = builtin_model("mixed", sp, 1.0 / 50.0);
        SymTensor f0(sp, 1);
        for (std::size_t i = 0; i < f0.size(); ++i) f0[i] = 0.25;
        const auto run = [&] { empirical_marginal(model, f0, 50, 0.5, 2000, {1, 0}); };
        kernels::set_thread_limit(1);
        const double serial = min_seconds(3, run);
        kernels::set_thread_limit(0);
        const double parallel = min_seconds(3, run);
        report("ssa_replicas_N50", serial, parallel);
    }

    return 0;
}
