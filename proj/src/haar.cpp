#include "uwr/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace uwr {

ThresholdPolicy parse_policy(const std::string& name) {
    if (name == "magnitude") return ThresholdPolicy::magnitude;
    if (name == "subtree-closed") return ThresholdPolicy::subtree_closed;
    throw validation_error("unknown thresholding policy '" + name + "'");
}

std::string to_string(ThresholdPolicy policy) {
    return policy == ThresholdPolicy::magnitude ? "magnitude" : "subtree-closed";
}

HaarDecomposition forward(const Dendrogram& tree, const Matrix& leaf_data) {
    tree.validate();
    const int n = tree.n_leaves();
    if (leaf_data.rows() != static_cast<std::size_t>(n))
        throw validation_error("forward: leaf_data row count must equal n_leaves");
    const std::size_t m = leaf_data.cols();

    // Children precede parents in id order, so one bottom-up pass suffices.
    Matrix smooth(2 * n - 1, m);
    for (int i = 0; i < n; ++i)
        for (std::size_t d = 0; d < m; ++d) smooth(i, d) = leaf_data(i, d);

    HaarDecomposition dec;
    dec.tree = tree;
    dec.details = Matrix(tree.merges.size(), m);
    for (std::size_t q = 0; q < tree.merges.size(); ++q) {
        const DendroNode& node = tree.merges[q];
        const int id = n + static_cast<int>(q);
        for (std::size_t d = 0; d < m; ++d) {
            const double a = smooth(node.left, d);
            const double b = smooth(node.right, d);
            smooth(id, d) = (a + b) / 2.0;
            dec.details(q, d) = (a - b) / 2.0;
        }
    }
    dec.smooth_root.assign(m, 0.0);
    for (std::size_t d = 0; d < m; ++d) dec.smooth_root[d] = smooth(tree.root_id(), d);
    return dec;
}

Matrix inverse(const HaarDecomposition& dec) {
    const int n = dec.tree.n_leaves();
    const std::size_t m = dec.dimension();

    Matrix value(2 * n - 1, m);
    for (std::size_t d = 0; d < m; ++d) value(dec.tree.root_id(), d) = dec.smooth_root[d];

    // Top-down: parents are visited before children when iterating merges
    // in reverse id order.
    for (std::size_t q = dec.tree.merges.size(); q-- > 0;) {
        const DendroNode& node = dec.tree.merges[q];
        const int id = n + static_cast<int>(q);
        for (std::size_t d = 0; d < m; ++d) {
            value(node.left, d) = value(id, d) + dec.details(q, d);
            value(node.right, d) = value(id, d) - dec.details(q, d);
        }
    }

    Matrix leaves(n, m);
    for (int i = 0; i < n; ++i)
        for (std::size_t d = 0; d < m; ++d) leaves(i, d) = value(i, d);
    return leaves;
}

HaarDecomposition threshold(const HaarDecomposition& dec, int keep, ThresholdPolicy policy) {
    const int n_details = static_cast<int>(dec.tree.merges.size());
    if (keep < 0 || keep > n_details)
        throw validation_error("threshold: keep must be between 0 and n_leaves-1");

    std::vector<double> magnitude(n_details);
    for (int q = 0; q < n_details; ++q) {
        double s = 0.0;
        for (double v : dec.details.row(q)) s += v * v;
        magnitude[q] = std::sqrt(s);
    }

    std::vector<bool> kept(n_details, false);
    if (policy == ThresholdPolicy::magnitude) {
        std::vector<int> order(n_details);
        std::iota(order.begin(), order.end(), 0);
        // Later merges first on equal magnitude.
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (magnitude[a] != magnitude[b]) return magnitude[a] > magnitude[b];
            return a > b;
        });
        for (int r = 0; r < keep; ++r) kept[order[r]] = true;
    } else {
        // Grow a crown from the root: a node becomes eligible once its
        // parent is kept, so the kept set is always ancestor-closed.
        const int n = dec.tree.n_leaves();
        std::vector<int> eligible = {n_details - 1};  // root
        for (int r = 0; r < keep; ++r) {
            int pick = -1;
            for (int q : eligible) {
                if (kept[q]) continue;
                if (pick == -1 || magnitude[q] > magnitude[pick] ||
                    (magnitude[q] == magnitude[pick] && q > pick))
                    pick = q;
            }
            kept[pick] = true;
            for (int child : {dec.tree.merges[pick].left, dec.tree.merges[pick].right})
                if (!dec.tree.is_leaf(child)) eligible.push_back(child - n);
        }
    }

    HaarDecomposition out = dec;
    for (int q = 0; q < n_details; ++q)
        if (!kept[q])
            for (double& v : out.details.row(q)) v = 0.0;
    return out;
}

void write_decomposition_csv(std::ostream& out, const HaarDecomposition& dec,
                             const std::vector<std::string>& dim_names) {
    const std::size_t m = dec.dimension();
    if (dim_names.size() != m)
        throw validation_error("write_decomposition_csv: dimension name count mismatch");
    const int n_details = static_cast<int>(dec.tree.merges.size());

    out << "component,s" << n_details;
    for (int q = n_details; q >= 1; --q) out << ",d" << q;
    out << '\n';
    for (std::size_t d = 0; d < m; ++d) {
        out << dim_names[d] << ',' << format_double(dec.smooth_root[d]);
        for (int q = n_details - 1; q >= 0; --q) out << ',' << format_double(dec.details(q, d));
        out << '\n';
    }
}

}  // namespace uwr
