#pragma once

#include <string>
#include <vector>

#include "uwr/common.hpp"

namespace uwr {

// Internal node of a dendrogram. Leaves carry ids 0..n-1 in sequence order;
// internal node ids continue from n in merge order, so children always have
// smaller ids than their parent and the root is the last node.
struct DendroNode {
    int left = -1;
    int right = -1;
    double height = 0.0;
    int span_lo = 0;  // leaf index range covered by this node
    int span_hi = 0;  // (contiguous only for sequence-constrained trees)
};

struct Dendrogram {
    std::vector<std::string> leaf_labels;
    std::vector<DendroNode> merges;  // n-1 entries, id of merges[q] is n+q

    int n_leaves() const { return static_cast<int>(leaf_labels.size()); }
    int root_id() const { return n_leaves() + static_cast<int>(merges.size()) - 1; }
    bool is_leaf(int id) const { return id < n_leaves(); }
    const DendroNode& internal(int id) const { return merges[id - n_leaves()]; }

    std::pair<int, int> span(int id) const {
        if (is_leaf(id)) return {id, id};
        const DendroNode& q = internal(id);
        return {q.span_lo, q.span_hi};
    }

    // Structural checks: binary shape, each node used exactly once,
    // children created before parents. Throws data_error on failure.
    void validate() const;
};

// Ordered contiguous segments covering all leaves.
struct Partition {
    struct Segment {
        int lo = 0;
        int hi = 0;  // inclusive
    };
    std::vector<Segment> segments;
};

// Agglomerates adjacent clusters only, merging the closest pair under the
// complete-link criterion (max pairwise Euclidean distance). Ties go to the
// leftmost pair. Points are the rows of `points`.
Dendrogram constrained_complete_link(const Matrix& points, std::vector<std::string> labels);
Dendrogram constrained_complete_link(const Matrix& points);
Dendrogram constrained_complete_link(const std::vector<std::vector<double>>& points);

// Unconstrained agglomeration on squared Euclidean distances with the
// median (Gower) update d(k, i+j) = d(k,i)/2 + d(k,j)/2 - d(i,j)/4.
// Ties go to the lexicographically smallest cluster-index pair; the child
// with the smaller cluster index becomes the left child.
Dendrogram median_linkage(const Matrix& points, std::vector<std::string> labels);
Dendrogram median_linkage(const Matrix& points);

// Entry (i,j) is the height of the lowest common ancestor of leaves i and j.
Matrix cophenetic_matrix(const Dendrogram& tree);

// Partition into k contiguous segments by undoing the k-1 highest merges
// (ties resolved toward later merges). Requires a sequence-constrained tree.
Partition cut(const Dendrogram& tree, int k);

// Branch lengths encode height differences between parent and child.
std::string to_newick(const Dendrogram& tree);

}  // namespace uwr
