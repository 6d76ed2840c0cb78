#pragma once

#include <string>
#include <vector>

#include "uwr/common.hpp"
#include "uwr/ingest.hpp"

namespace uwr {

// Relative frequencies of a contingency table with marginals and profiles.
// All marginals are strictly positive (zero rows/columns are rejected).
struct FrequencyModel {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    Matrix f;                    // f_ij, sums to 1
    std::vector<double> f_row;   // f_i
    std::vector<double> f_col;   // f_j
    Matrix row_profiles;         // (i,j) -> f_ij / f_i
    Matrix col_profiles;         // (i,j) -> f_ij / f_j

    std::size_t n_rows() const { return f.rows(); }
    std::size_t n_cols() const { return f.cols(); }
};

// Factor coordinates of rows and columns in the shared Euclidean space.
// Row coordinates are principal: squared chi-squared distance between two
// rows equals the squared Euclidean distance between their coordinate
// vectors over all retained factors.
struct FactorDecomposition {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<double> eigenvalues;  // retained, non-increasing
    Matrix row_factors;               // n_rows x n_factors
    Matrix col_factors;               // n_cols x n_factors
    std::size_t n_factors = 0;        // retained count
    double inertia_total = 0.0;
};

struct TransitionReport {
    std::vector<double> row_deviation;  // per factor, max over rows
    std::vector<double> col_deviation;  // per factor, max over columns
    double max_deviation = 0.0;

    bool within(double tol) const { return max_deviation < tol; }
};

FrequencyModel frequency_model(const ContingencyTable& table);

// Squared chi-squared distance between row profiles i and i2,
// sum_j (1/f_j) (f_ij/f_i - f_i2j/f_i2)^2.
double chi2_sq_distance(const FrequencyModel& model, std::size_t i, std::size_t i2);

// sum_ij (f_ij - f_i f_j)^2 / (f_i f_j)
double total_inertia(const FrequencyModel& model);

// SVD of the standardized residuals (f_ij - f_i f_j) / sqrt(f_i f_j).
// Eigenvalues are squared singular values; factors below 1e-12 are dropped.
// Each factor's sign is fixed so its largest-magnitude row coordinate is
// positive.
FactorDecomposition factor_decomposition(const FrequencyModel& model);

// Checks the barycentric relations between row and column coordinates:
// F_a(i) = lambda_a^{-1/2} sum_j (f_ij/f_i) G_a(j) and the dual.
TransitionReport transition_consistency(const FactorDecomposition& dec,
                                        const FrequencyModel& model);

}  // namespace uwr
