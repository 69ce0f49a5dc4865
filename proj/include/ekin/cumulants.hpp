#pragma once

#include <vector>

#include "ekin/generators.hpp"

// Set-partition combinatorics and cumulants of evolution semigroups. A
// cumulant argument clusters the entity indices 1..s into one block (the
// complement of the chosen tuple Z) plus singletons for the members of Z;
// the cumulant is the alternating sum over set partitions of these cluster
// elements of products of semigroups acting on the declusterized slots.

namespace ekin {

struct ClusterArgument {
    // elements[0] is the block (complement of Z in 1..s, ascending); the
    // remaining elements are singletons of Z in tuple order. Entity indices
    // are 1-based.
    std::vector<std::vector<int>> elements;

    static ClusterArgument from(int s, const std::vector<int>& z);
};

struct Partition {
    // Disjoint nonempty element-index sets (0-based), covering 0..k-1;
    // canonical form: blocks ordered by smallest member, members ascending.
    std::vector<std::vector<int>> blocks;
};

// All set partitions of k labeled elements, 1 <= k <= 6 (Bell(6) = 203).
// Cached; the returned reference stays valid.
const std::vector<Partition>& partitions(int k);

// Union of the entity indices inside the chosen elements of the argument
// (sorted, 1-based).
std::vector<int> declusterize(const ClusterArgument& arg, const std::vector<int>& block);

// The cumulant operator of order 1+|Z| on the s-entity space at time t:
//   sum over partitions P of the cluster elements of
//   (-1)^(|P|-1) (|P|-1)! * product over blocks of exp(t * Lambda_{|theta|})
// acting on the declusterized slots theta of each block (identity on the
// rest). Z holds distinct 1-based indices in 1..s; 1+|Z| <= 6.
LinOp cumulant(const InteractionModel& model, double t, int s, const std::vector<int>& z);

} // namespace ekin
