#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uwr/common.hpp"
#include "uwr/cluster.hpp"

namespace uwr {

// Haar transform of leaf vectors over a dendrogram. Every internal node q
// holds the half-difference of its child smooths; the sign convention is
//   left child = parent + detail,  right child = parent - detail.
struct HaarDecomposition {
    Dendrogram tree;
    std::vector<double> smooth_root;  // dimension m
    Matrix details;                   // (n_leaves - 1) x m, row q is node n_leaves+q

    std::size_t dimension() const { return smooth_root.size(); }
};

enum class ThresholdPolicy {
    magnitude,       // keep the largest details anywhere in the tree
    subtree_closed,  // keep a detail only if all its ancestors are kept
};

ThresholdPolicy parse_policy(const std::string& name);
std::string to_string(ThresholdPolicy policy);

// leaf_data rows are the leaf vectors in sequence order. Smooths are
// half-sums of child smooths, details half-differences.
HaarDecomposition forward(const Dendrogram& tree, const Matrix& leaf_data);

// Reconstructs the leaf matrix by signed detail sums along root-leaf paths.
Matrix inverse(const HaarDecomposition& dec);

// Returns a copy with all but `keep` detail vectors zeroed. Magnitude is the
// absolute value for one-dimensional data, the Euclidean norm otherwise;
// equal magnitudes resolve toward later merges.
HaarDecomposition threshold(const HaarDecomposition& dec, int keep, ThresholdPolicy policy);

// One row per data dimension; columns are the root smooth then the details
// in reverse merge order (s7, d7, d6, ..., d1 for 8 leaves).
void write_decomposition_csv(std::ostream& out, const HaarDecomposition& dec,
                             const std::vector<std::string>& dim_names);

}  // namespace uwr
