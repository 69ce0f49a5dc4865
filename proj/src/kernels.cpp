#include "ekin/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

#include <omp.h>

namespace ekin::kernels {

namespace {

std::atomic<int> g_thread_limit{-1}; // -1 = not yet resolved from env

int resolve_env_limit() {
    const char* v = std::getenv("ENTITY_KINETICS_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end == v || n < 0) return 0;
    return static_cast<int>(n);
}

constexpr std::size_t grain = std::size_t{1} << 15;

} // namespace

void set_thread_limit(int n) { g_thread_limit.store(n < 0 ? 0 : n); }

int thread_limit() {
    int v = g_thread_limit.load();
    if (v == -1) {
        v = resolve_env_limit();
        g_thread_limit.store(v);
    }
    return v;
}

int threads_for(std::size_t work) {
    if (work < grain) return 1;
    int cap = thread_limit();
    int hw = omp_get_max_threads();
    int n = cap == 0 ? hw : std::min(cap, hw);
    // Keep at least one grain of work per thread.
    std::size_t chunks = work / grain;
    if (chunks < static_cast<std::size_t>(n)) n = static_cast<int>(chunks);
    return std::max(n, 1);
}

void matmul_serial(const double* a, const double* b, double* c,
                   std::size_t n, std::size_t k, std::size_t m) {
    for (std::size_t i = 0; i < n; ++i) {
        double* ci = c + i * m;
        std::fill(ci, ci + m, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = a[i * k + l];
            if (ail == 0.0) continue;
            const double* bl = b + l * m;
            for (std::size_t j = 0; j < m; ++j) ci[j] += ail * bl[j];
        }
    }
}

void matmul(const double* a, const double* b, double* c,
            std::size_t n, std::size_t k, std::size_t m) {
    const int nt = threads_for(n * k * m);
    if (nt == 1) {
        matmul_serial(a, b, c, n, k, m);
        return;
    }
    // Rows of C are independent; the l-loop order inside a row is fixed, so
    // each entry is produced by the exact same sequence of fused operations
    // as in the serial path.
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* ci = c + i * m;
        std::fill(ci, ci + m, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = a[i * k + l];
            if (ail == 0.0) continue;
            const double* bl = b + l * m;
            for (std::size_t j = 0; j < m; ++j) ci[j] += ail * bl[j];
        }
    }
}

namespace {

// Shared set-up for the slot-op kernels: strides of the chosen slots and the
// flat offset of every joint column index.
struct SlotPlan {
    std::size_t size = 1;            // S^n
    int dim = 1;                     // S^m
    std::vector<std::size_t> stride; // per tuple position
    std::vector<std::size_t> offset; // per joint column index, sum of digit*stride
};

SlotPlan make_plan(int n, int s, const int* slots, int m) {
    SlotPlan p;
    for (int i = 0; i < n; ++i) p.size *= static_cast<std::size_t>(s);
    p.stride.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        std::size_t st = 1;
        for (int j = slots[i] + 1; j < n; ++j) st *= static_cast<std::size_t>(s);
        p.stride[static_cast<std::size_t>(i)] = st;
    }
    for (int i = 0; i < m; ++i) p.dim *= s;
    p.offset.assign(static_cast<std::size_t>(p.dim), 0);
    for (int col = 0; col < p.dim; ++col) {
        int rem = col;
        std::size_t off = 0;
        for (int i = m - 1; i >= 0; --i) {
            off += static_cast<std::size_t>(rem % s) * p.stride[static_cast<std::size_t>(i)];
            rem /= s;
        }
        p.offset[static_cast<std::size_t>(col)] = off;
    }
    return p;
}

inline void slot_op_element(const double* e, const double* in, double* out,
                            std::size_t x, int s, const SlotPlan& p, int m) {
    // Decode the slot digits of x and strip them to get the base offset.
    std::size_t base = x;
    int row = 0;
    for (int i = 0; i < m; ++i) {
        const std::size_t st = p.stride[static_cast<std::size_t>(i)];
        const int digit = static_cast<int>((x / st) % static_cast<std::size_t>(s));
        row = row * s + digit;
        base -= static_cast<std::size_t>(digit) * st;
    }
    const double* erow = e + static_cast<std::size_t>(row) * static_cast<std::size_t>(p.dim);
    double acc = 0.0;
    for (int col = 0; col < p.dim; ++col)
        acc += erow[col] * in[base + p.offset[static_cast<std::size_t>(col)]];
    out[x] = acc;
}

} // namespace

void apply_slot_op_serial(const double* e, const double* in, double* out,
                          int n, int s, const int* slots, int m) {
    const SlotPlan p = make_plan(n, s, slots, m);
    for (std::size_t x = 0; x < p.size; ++x)
        slot_op_element(e, in, out, x, s, p, m);
}

void apply_slot_op(const double* e, const double* in, double* out,
                   int n, int s, const int* slots, int m) {
    const SlotPlan p = make_plan(n, s, slots, m);
    const int nt = threads_for(p.size * static_cast<std::size_t>(p.dim));
    if (nt == 1) {
        for (std::size_t x = 0; x < p.size; ++x)
            slot_op_element(e, in, out, x, s, p, m);
        return;
    }
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::ptrdiff_t xx = 0; xx < static_cast<std::ptrdiff_t>(p.size); ++xx)
        slot_op_element(e, in, out, static_cast<std::size_t>(xx), s, p, m);
}

void apply_slot_op(const std::vector<double>& e, const std::vector<double>& in,
                   std::vector<double>& out, int n, int s,
                   const std::vector<int>& slots) {
    apply_slot_op(e.data(), in.data(), out.data(), n, s, slots.data(),
                  static_cast<int>(slots.size()));
}

} // namespace ekin::kernels
