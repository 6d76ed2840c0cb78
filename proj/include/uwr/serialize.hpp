#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "uwr/cluster.hpp"
#include "uwr/correspondence.hpp"
#include "uwr/regress.hpp"

namespace uwr {

// { eigenvalues, inertia_total, rows: [{label, coords}], cols: [{label, coords}] }
nlohmann::ordered_json factors_to_json(const FactorDecomposition& dec);

// Row coordinates reloaded from a factors file, enough to drive clustering.
struct FactorTable {
    std::vector<std::string> labels;
    Matrix coords;
    std::vector<double> eigenvalues;
};

FactorTable parse_factors_json(std::istream& in);

// { n_leaves, leaves, nodes: [{id, left, right, height, span}], root }
nlohmann::ordered_json dendrogram_to_json(const Dendrogram& tree);

Dendrogram dendrogram_from_json(std::istream& in);

// Generic labeled numeric table (label column + named real columns).
struct LabeledMatrix {
    std::vector<std::string> labels;
    std::vector<std::string> col_names;
    Matrix values;
};

LabeledMatrix load_labeled_csv(std::istream& in);

void write_fit_csv(std::ostream& out, const ExternalSignal& signal, const PiecewiseFit& fit);

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& entries);

// Wide layout: label, original, then one fitted column per keep value.
void write_sweep_fits_csv(std::ostream& out, const ExternalSignal& signal,
                          const std::vector<SweepEntry>& entries);

}  // namespace uwr
