#include "uwr/regress.hpp"

#include <cmath>

namespace uwr {

namespace {

// Fitted-value changes below this are floating-point noise, not breakpoints.
constexpr double kBreakTolerance = 1e-9;

void finish_fit(PiecewiseFit& fit, const std::vector<double>& signal) {
    const std::size_t n = fit.fitted.size();
    fit.segments.clear();
    std::size_t start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i == n || std::abs(fit.fitted[i] - fit.fitted[i - 1]) > kBreakTolerance) {
            fit.segments.push_back({start, i - 1, fit.fitted[start]});
            start = i;
        }
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = fit.fitted[i] - signal[i];
        sse += r * r;
    }
    fit.mse = sse / static_cast<double>(n);
}

}  // namespace

PiecewiseFit fold_and_regress(const Dendrogram& tree, const ExternalSignal& signal,
                              int keep, ThresholdPolicy policy) {
    const std::size_t n = signal.values.size();
    if (static_cast<int>(n) != tree.n_leaves())
        throw validation_error("fold_and_regress: signal length must equal n_leaves");
    if (signal.labels != tree.leaf_labels)
        throw validation_error("fold_and_regress: signal labels do not match tree leaves");

    Matrix data(n, 1);
    for (std::size_t i = 0; i < n; ++i) data(i, 0) = signal.values[i];

    const HaarDecomposition dec = threshold(forward(tree, data), keep, policy);
    const Matrix rec = inverse(dec);

    PiecewiseFit fit;
    fit.kept = keep;
    fit.fitted.resize(n);
    for (std::size_t i = 0; i < n; ++i) fit.fitted[i] = rec(i, 0);
    finish_fit(fit, signal.values);
    return fit;
}

PiecewiseFit baseline_fit(const Partition& partition, const ExternalSignal& signal) {
    const std::size_t n = signal.values.size();
    std::size_t covered = 0;
    for (const auto& seg : partition.segments) {
        if (seg.lo != static_cast<int>(covered) || seg.hi < seg.lo)
            throw validation_error("baseline_fit: partition does not cover the signal");
        covered = static_cast<std::size_t>(seg.hi) + 1;
    }
    if (covered != n)
        throw validation_error("baseline_fit: partition does not cover the signal");

    PiecewiseFit fit;
    fit.fitted.resize(n);
    for (const auto& seg : partition.segments) {
        double sum = 0.0;
        for (int i = seg.lo; i <= seg.hi; ++i) sum += signal.values[static_cast<std::size_t>(i)];
        const double mean = sum / static_cast<double>(seg.hi - seg.lo + 1);
        for (int i = seg.lo; i <= seg.hi; ++i) fit.fitted[static_cast<std::size_t>(i)] = mean;
    }
    finish_fit(fit, signal.values);
    return fit;
}

std::vector<SweepEntry> mse_sweep(const Dendrogram& tree, const ExternalSignal& signal,
                                  ThresholdPolicy policy) {
    std::vector<SweepEntry> entries;
    entries.reserve(static_cast<std::size_t>(tree.n_leaves()));
    for (int keep = 0; keep < tree.n_leaves(); ++keep) {
        SweepEntry entry;
        entry.keep = keep;
        entry.fit = fold_and_regress(tree, signal, keep, policy);
        entry.mse = entry.fit.mse;
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<std::size_t> extract_breakpoints(const PiecewiseFit& fit) {
    std::vector<std::size_t> breaks;
    for (std::size_t s = 0; s + 1 < fit.segments.size(); ++s)
        breaks.push_back(fit.segments[s].hi + 1);  // 1-based position of the run end
    return breaks;
}

std::string format_segment_table(const PiecewiseFit& fit) {
    std::string out;
    for (std::size_t s = 0; s < fit.segments.size(); ++s) {
        if (s > 0) out += ", ";
        out += std::to_string(fit.segments[s].lo + 1);
        out += " -- ";
        out += std::to_string(fit.segments[s].hi + 1);
    }
    return out;
}

}  // namespace uwr
