#include "uwr/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uwr {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i + 1);
    return labels;
}

double squared_euclidean(const Matrix& points, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t j = 0; j < points.cols(); ++j) {
        const double d = points(a, j) - points(b, j);
        s += d * d;
    }
    return s;
}

// Distances between clusters, indexed by cluster id (0..2n-2).
class DistanceTable {
public:
    explicit DistanceTable(std::size_t total_ids)
        : n_(total_ids), d_(total_ids * total_ids, 0.0) {}

    double get(int a, int b) const { return d_[static_cast<std::size_t>(a) * n_ + b]; }
    void set(int a, int b, double v) {
        d_[static_cast<std::size_t>(a) * n_ + b] = v;
        d_[static_cast<std::size_t>(b) * n_ + a] = v;
    }

private:
    std::size_t n_;
    std::vector<double> d_;
};

}  // namespace

void Dendrogram::validate() const {
    const int n = n_leaves();
    if (n < 2) throw data_error("dendrogram must have at least 2 leaves");
    if (static_cast<int>(merges.size()) != n - 1)
        throw data_error("dendrogram must have exactly n-1 internal nodes");
    std::vector<int> uses(2 * n - 1, 0);
    for (std::size_t q = 0; q < merges.size(); ++q) {
        const int id = n + static_cast<int>(q);
        const DendroNode& node = merges[q];
        if (node.left < 0 || node.right < 0 || node.left >= id || node.right >= id ||
            node.left == node.right)
            throw data_error("dendrogram node " + std::to_string(id) + " has invalid children");
        ++uses[node.left];
        ++uses[node.right];
    }
    for (int id = 0; id < 2 * n - 2; ++id)
        if (uses[id] != 1)
            throw data_error("dendrogram node " + std::to_string(id) +
                             " must have exactly one parent");
    if (uses[2 * n - 2] != 0) throw data_error("dendrogram root cannot have a parent");
}

Dendrogram constrained_complete_link(const Matrix& points, std::vector<std::string> labels) {
    const std::size_t n = points.rows();
    if (n < 2) throw validation_error("constrained_complete_link: need at least 2 points");
    if (labels.size() != n)
        throw validation_error("constrained_complete_link: label count mismatch");

    Dendrogram tree;
    tree.leaf_labels = std::move(labels);

    DistanceTable dist(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist.set(static_cast<int>(i), static_cast<int>(j),
                     std::sqrt(squared_euclidean(points, i, j)));

    struct Active {
        int id;
        int lo, hi;
    };
    std::vector<Active> active(n);
    for (std::size_t i = 0; i < n; ++i)
        active[i] = {static_cast<int>(i), static_cast<int>(i), static_cast<int>(i)};

    int next_id = static_cast<int>(n);
    while (active.size() > 1) {
        // Only adjacent clusters are merge candidates; leftmost pair wins ties.
        std::size_t best = 0;
        double best_dist = dist.get(active[0].id, active[1].id);
        for (std::size_t p = 1; p + 1 < active.size(); ++p) {
            const double d = dist.get(active[p].id, active[p + 1].id);
            if (d < best_dist) {
                best = p;
                best_dist = d;
            }
        }

        const Active left = active[best];
        const Active right = active[best + 1];
        tree.merges.push_back({left.id, right.id, best_dist, left.lo, right.hi});

        const int q = next_id++;
        for (const Active& other : active) {
            if (other.id == left.id || other.id == right.id) continue;
            dist.set(other.id, q,
                     std::max(dist.get(other.id, left.id), dist.get(other.id, right.id)));
        }
        active[best] = {q, left.lo, right.hi};
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
    return tree;
}

Dendrogram constrained_complete_link(const Matrix& points) {
    return constrained_complete_link(points, default_labels(points.rows()));
}

Dendrogram constrained_complete_link(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw validation_error("constrained_complete_link: no points");
    const std::size_t dim = points.front().size();
    Matrix m(points.size(), dim);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim)
            throw validation_error("constrained_complete_link: dimension mismatch at point " +
                                   std::to_string(i));
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = points[i][j];
    }
    return constrained_complete_link(m);
}

Dendrogram median_linkage(const Matrix& points, std::vector<std::string> labels) {
    const std::size_t n = points.rows();
    if (n < 2) throw validation_error("median_linkage: need at least 2 points");
    if (labels.size() != n) throw validation_error("median_linkage: label count mismatch");

    Dendrogram tree;
    tree.leaf_labels = std::move(labels);

    DistanceTable dist(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist.set(static_cast<int>(i), static_cast<int>(j), squared_euclidean(points, i, j));

    struct Active {
        int id;
        int lo, hi;  // leaf index extent, for span bookkeeping
    };
    std::vector<Active> active(n);
    for (std::size_t i = 0; i < n; ++i)
        active[i] = {static_cast<int>(i), static_cast<int>(i), static_cast<int>(i)};

    int next_id = static_cast<int>(n);
    while (active.size() > 1) {
        // Globally closest pair; scanning ids in increasing (i, j) order makes
        // the smallest-index pair win ties.
        std::sort(active.begin(), active.end(),
                  [](const Active& a, const Active& b) { return a.id < b.id; });
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x + 1 < active.size(); ++x)
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const double d = dist.get(active[x].id, active[y].id);
                if (d < best) {
                    best = d;
                    bi = x;
                    bj = y;
                }
            }

        const Active ci = active[bi];  // smaller id: becomes the left child
        const Active cj = active[bj];
        tree.merges.push_back({ci.id, cj.id, best, std::min(ci.lo, cj.lo),
                               std::max(ci.hi, cj.hi)});

        const int q = next_id++;
        for (const Active& other : active) {
            if (other.id == ci.id || other.id == cj.id) continue;
            const double d = 0.5 * dist.get(other.id, ci.id) +
                             0.5 * dist.get(other.id, cj.id) - 0.25 * best;
            dist.set(other.id, q, d);
        }
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
        active[bi] = {q, std::min(ci.lo, cj.lo), std::max(ci.hi, cj.hi)};
    }
    return tree;
}

Dendrogram median_linkage(const Matrix& points) {
    return median_linkage(points, default_labels(points.rows()));
}

Matrix cophenetic_matrix(const Dendrogram& tree) {
    tree.validate();
    const int n = tree.n_leaves();
    Matrix coph(n, n);

    // Leaf sets grow bottom-up; each internal node fixes the distance for
    // every pair split between its two children.
    std::vector<std::vector<int>> leaves(2 * n - 1);
    for (int i = 0; i < n; ++i) leaves[i] = {i};
    for (std::size_t q = 0; q < tree.merges.size(); ++q) {
        const DendroNode& node = tree.merges[q];
        const int id = n + static_cast<int>(q);
        for (int a : leaves[node.left])
            for (int b : leaves[node.right]) {
                coph(a, b) = node.height;
                coph(b, a) = node.height;
            }
        leaves[id] = leaves[node.left];
        leaves[id].insert(leaves[id].end(), leaves[node.right].begin(),
                          leaves[node.right].end());
    }
    return coph;
}

Partition cut(const Dendrogram& tree, int k) {
    tree.validate();
    const int n = tree.n_leaves();
    if (k < 1 || k > n) throw validation_error("cut: k must be between 1 and n_leaves");

    for (const DendroNode& node : tree.merges) {
        auto check = [&](int child) {
            if (!tree.is_leaf(child) && tree.internal(child).height > node.height)
                throw validation_error("cut: tree heights are not monotone");
        };
        check(node.left);
        check(node.right);
    }

    // With monotone heights, the k-1 highest nodes (later merges first on
    // ties) are exactly the last k-1 merges.
    const int kept_merges = n - k;
    std::vector<Partition::Segment> segments;
    if (k == 1) {
        segments.push_back({0, n - 1});
    } else {
        for (int q = kept_merges; q < n - 1; ++q) {
            for (int child : {tree.merges[q].left, tree.merges[q].right}) {
                if (child >= n + kept_merges) continue;  // removed as well
                auto [lo, hi] = tree.span(child);
                segments.push_back({lo, hi});
            }
        }
    }
    std::sort(segments.begin(), segments.end(),
              [](const Partition::Segment& a, const Partition::Segment& b) {
                  return a.lo < b.lo;
              });

    int expect = 0;
    for (const auto& seg : segments) {
        if (seg.lo != expect)
            throw validation_error("cut: tree is not sequence-constrained");
        expect = seg.hi + 1;
    }
    if (expect != n) throw validation_error("cut: tree is not sequence-constrained");
    return {std::move(segments)};
}

std::string to_newick(const Dendrogram& tree) {
    tree.validate();
    std::string out;
    auto emit = [&](auto&& self, int id, double parent_height) -> void {
        if (tree.is_leaf(id)) {
            out += tree.leaf_labels[id];
            out += ':';
            out += format_double(parent_height);
            return;
        }
        const DendroNode& node = tree.internal(id);
        out += '(';
        self(self, node.left, node.height);
        out += ',';
        self(self, node.right, node.height);
        out += ')';
        if (id != tree.root_id()) {
            out += ':';
            out += format_double(parent_height - node.height);
        }
    };
    emit(emit, tree.root_id(), 0.0);
    out += ';';
    return out;
}

}  // namespace uwr
