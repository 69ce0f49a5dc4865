#pragma once

#include <cstddef>
#include <vector>

// Dense compute kernels used throughout the library. Each kernel has a serial
// reference implementation and an OpenMP variant. The parallel variants split
// work only across independent output elements and keep every reduction in a
// fixed order, so results are bit-identical to the serial path for any thread
// count.

namespace ekin::kernels {

// Thread cap. 0 means "use the OpenMP default". Initialised from the
// ENTITY_KINETICS_THREADS environment variable on first use; can be
// overridden programmatically (tests, CLI).
void set_thread_limit(int n);
int thread_limit();

// Number of threads a kernel with `work` scalar operations should use.
// Small problems run serially: below the grain the fork/join overhead
// dominates any speedup.
int threads_for(std::size_t work);

// C = A * B, row-major dense, A is (n x k), B is (k x m), C is (n x m).
void matmul_serial(const double* a, const double* b, double* c,
                   std::size_t n, std::size_t k, std::size_t m);
void matmul(const double* a, const double* b, double* c,
            std::size_t n, std::size_t k, std::size_t m);

// Apply a small operator E (dense S^m x S^m, row-major over the joint index
// of the m slots in tuple order) to the slots `slots` of a dense rank-n
// tensor over S states per slot (row-major, slot 0 most significant):
//
//   out(x) = sum_y E[(x_{s_1}..x_{s_m}), (y_1..y_m)] in(x with slots s_i <- y_i)
//
// `slots` holds m distinct 0-based slot indices; their order matters, it is
// the argument order of E.
void apply_slot_op_serial(const double* e, const double* in, double* out,
                          int n, int s, const int* slots, int m);
void apply_slot_op(const double* e, const double* in, double* out,
                   int n, int s, const int* slots, int m);

// Convenience overloads on vectors (sizes checked by the caller).
void apply_slot_op(const std::vector<double>& e, const std::vector<double>& in,
                   std::vector<double>& out, int n, int s,
                   const std::vector<int>& slots);

} // namespace ekin::kernels
