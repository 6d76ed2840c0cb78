#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uwr/common.hpp"
#include "uwr/cluster.hpp"
#include "uwr/haar.hpp"
#include "uwr/ingest.hpp"

namespace uwr {

// Piecewise-constant approximation of a signal with its goodness of fit.
// Segments are the maximal constant runs of the fitted values.
struct PiecewiseFit {
    struct Segment {
        std::size_t lo = 0;  // 0-based, inclusive
        std::size_t hi = 0;
        double value = 0.0;
    };

    std::vector<double> fitted;
    std::vector<Segment> segments;
    double mse = 0.0;              // mean over all positions
    std::optional<int> kept;       // retained detail count; absent for baselines
};

// Runs the signal through the tree's Haar codification: forward transform,
// threshold to `keep` details, inverse transform, then segment extraction
// and MSE against the input. Signal labels must match the tree leaves.
PiecewiseFit fold_and_regress(const Dendrogram& tree, const ExternalSignal& signal,
                              int keep, ThresholdPolicy policy);

// Per-segment mean fit, the MSE-minimizing constant fit for the partition.
PiecewiseFit baseline_fit(const Partition& partition, const ExternalSignal& signal);

struct SweepEntry {
    int keep = 0;
    double mse = 0.0;
    PiecewiseFit fit;
};

// Evaluates every keep value from 0 to n_leaves-1 in order.
std::vector<SweepEntry> mse_sweep(const Dendrogram& tree, const ExternalSignal& signal,
                                  ThresholdPolicy policy);

// 1-based positions i where the fitted value changes between i and i+1.
std::vector<std::size_t> extract_breakpoints(const PiecewiseFit& fit);

// Segment table like "1 -- 8, 9 -- 12, 13 -- 15".
std::string format_segment_table(const PiecewiseFit& fit);

}  // namespace uwr
