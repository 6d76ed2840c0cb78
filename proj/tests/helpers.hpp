#pragma once

// Shared generators and reference implementations for the test suites.
// Everything here is deliberately independent of the library internals it
// checks: distances are recomputed from raw points, trees are built by
// direct scans rather than incremental updates.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "uwr/cluster.hpp"
#include "uwr/common.hpp"
#include "uwr/ingest.hpp"

namespace testutil {

inline std::string padded_label(const char* prefix, std::size_t i) {
    std::string n = std::to_string(i);
    if (n.size() < 2) n.insert(n.begin(), '0');
    return prefix + n;
}

inline uwr::ContingencyTable make_table(const std::vector<std::vector<double>>& rows) {
    uwr::ContingencyTable table;
    table.k = uwr::Matrix(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table.row_labels.push_back(padded_label("r", i + 1));
        for (std::size_t j = 0; j < rows.front().size(); ++j) {
            table.k(i, j) = rows[i][j];
            table.total += rows[i][j];
        }
    }
    for (std::size_t j = 0; j < rows.front().size(); ++j)
        table.col_labels.push_back(padded_label("c", j + 1));
    return table;
}

// Random table with all-positive integer counts (no zero rows or columns).
inline uwr::ContingencyTable random_table(std::mt19937& rng, std::size_t max_rows = 10,
                                          std::size_t max_cols = 8) {
    std::uniform_int_distribution<std::size_t> rows_dist(2, max_rows);
    std::uniform_int_distribution<std::size_t> cols_dist(2, max_cols);
    std::uniform_int_distribution<int> count(1, 9);
    const std::size_t n = rows_dist(rng);
    const std::size_t p = cols_dist(rng);
    std::vector<std::vector<double>> rows(n, std::vector<double>(p));
    for (auto& row : rows)
        for (auto& v : row) v = count(rng);
    return make_table(rows);
}

inline uwr::Matrix column_matrix(const std::vector<double>& values) {
    uwr::Matrix m(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
    return m;
}

inline uwr::ExternalSignal make_signal(const std::vector<double>& values) {
    uwr::ExternalSignal s;
    s.values = values;
    for (std::size_t i = 0; i < values.size(); ++i) s.labels.push_back(std::to_string(i + 1));
    return s;
}

// Reference constrained complete-link clustering: at every step rescan all
// adjacent cluster pairs and take the max cross-pair distance from the raw
// points, leftmost minimum first.
struct BruteMerge {
    int left_pos;  // position in the active sequence
    double height;
    std::vector<int> left_members;
    std::vector<int> right_members;
};

inline std::vector<BruteMerge> brute_constrained_complete_link(const uwr::Matrix& points) {
    const std::size_t n = points.rows();
    std::vector<std::vector<int>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {static_cast<int>(i)};

    auto point_dist = [&](int a, int b) {
        double s = 0.0;
        for (std::size_t j = 0; j < points.cols(); ++j) {
            const double d = points(a, j) - points(b, j);
            s += d * d;
        }
        return std::sqrt(s);
    };
    auto complete_link = [&](const std::vector<int>& c1, const std::vector<int>& c2) {
        double best = 0.0;
        for (int a : c1)
            for (int b : c2) best = std::max(best, point_dist(a, b));
        return best;
    };

    std::vector<BruteMerge> merges;
    while (clusters.size() > 1) {
        std::size_t best = 0;
        double best_dist = complete_link(clusters[0], clusters[1]);
        for (std::size_t p = 1; p + 1 < clusters.size(); ++p) {
            const double d = complete_link(clusters[p], clusters[p + 1]);
            if (d < best_dist) {
                best = p;
                best_dist = d;
            }
        }
        merges.push_back({static_cast<int>(best), best_dist, clusters[best], clusters[best + 1]});
        clusters[best].insert(clusters[best].end(), clusters[best + 1].begin(),
                              clusters[best + 1].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
    return merges;
}

// Random sequence-constrained tree: repeatedly merge a random adjacent pair,
// heights increasing with each merge.
inline uwr::Dendrogram random_constrained_tree(std::mt19937& rng, int n) {
    uwr::Dendrogram tree;
    for (int i = 0; i < n; ++i) tree.leaf_labels.push_back(std::to_string(i + 1));

    struct Active {
        int id, lo, hi;
    };
    std::vector<Active> active;
    for (int i = 0; i < n; ++i) active.push_back({i, i, i});
    double height = 0.0;
    int next_id = n;
    while (active.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, active.size() - 2);
        const std::size_t p = pick(rng);
        height += std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        tree.merges.push_back(
            {active[p].id, active[p + 1].id, height, active[p].lo, active[p + 1].hi});
        active[p] = {next_id++, active[p].lo, active[p + 1].hi};
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(p) + 1);
    }
    return tree;
}

// Random binary tree with no adjacency constraint (random pair each step).
inline uwr::Dendrogram random_tree(std::mt19937& rng, int n) {
    uwr::Dendrogram tree;
    for (int i = 0; i < n; ++i) tree.leaf_labels.push_back(std::to_string(i + 1));

    struct Active {
        int id, lo, hi;
    };
    std::vector<Active> active;
    for (int i = 0; i < n; ++i) active.push_back({i, i, i});
    double height = 0.0;
    int next_id = n;
    while (active.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick_a(0, active.size() - 1);
        std::size_t a = pick_a(rng);
        std::uniform_int_distribution<std::size_t> pick_b(0, active.size() - 2);
        std::size_t b = pick_b(rng);
        if (b >= a) ++b;
        if (a > b) std::swap(a, b);
        height += std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        tree.merges.push_back({active[a].id, active[b].id, height,
                               std::min(active[a].lo, active[b].lo),
                               std::max(active[a].hi, active[b].hi)});
        active[a] = {next_id++, std::min(active[a].lo, active[b].lo),
                     std::max(active[a].hi, active[b].hi)};
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(b));
    }
    return tree;
}

inline uwr::Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols,
                                 double lo = -10.0, double hi = 10.0) {
    std::uniform_real_distribution<double> value(lo, hi);
    uwr::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = value(rng);
    return m;
}

// First 8 observations of Fisher's iris data (sepal/petal length and width).
inline const std::vector<std::vector<double>>& iris8() {
    static const std::vector<std::vector<double>> data = {
        {5.1, 3.5, 1.4, 0.2}, {4.9, 3.0, 1.4, 0.2}, {4.7, 3.2, 1.3, 0.2},
        {4.6, 3.1, 1.5, 0.2}, {5.0, 3.6, 1.4, 0.2}, {5.4, 3.9, 1.7, 0.4},
        {4.6, 3.4, 1.4, 0.3}, {5.0, 3.4, 1.5, 0.2}};
    return data;
}

inline uwr::Matrix iris8_matrix() {
    const auto& data = iris8();
    uwr::Matrix m(data.size(), data.front().size());
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t j = 0; j < data.front().size(); ++j) m(i, j) = data[i][j];
    return m;
}

}  // namespace testutil
