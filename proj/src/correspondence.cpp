#include "uwr/correspondence.hpp"

#include <algorithm>
#include <cmath>

#include "uwr/svd.hpp"

namespace uwr {

namespace {
constexpr double kEigenvalueCutoff = 1e-12;
}

FrequencyModel frequency_model(const ContingencyTable& table) {
    table.validate();
    if (table.total <= 0.0) throw data_error("zero grand total");

    const std::size_t n = table.k.rows();
    const std::size_t p = table.k.cols();
    FrequencyModel model;
    model.row_labels = table.row_labels;
    model.col_labels = table.col_labels;
    model.f = Matrix(n, p);
    model.f_row.assign(n, 0.0);
    model.f_col.assign(p, 0.0);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const double fij = table.k(i, j) / table.total;
            model.f(i, j) = fij;
            model.f_row[i] += fij;
            model.f_col[j] += fij;
        }

    model.row_profiles = Matrix(n, p);
    model.col_profiles = Matrix(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            model.row_profiles(i, j) = model.f(i, j) / model.f_row[i];
            model.col_profiles(i, j) = model.f(i, j) / model.f_col[j];
        }
    return model;
}

double chi2_sq_distance(const FrequencyModel& model, std::size_t i, std::size_t i2) {
    if (i >= model.n_rows() || i2 >= model.n_rows())
        throw validation_error("chi2_sq_distance: row index out of range");
    double d = 0.0;
    for (std::size_t j = 0; j < model.n_cols(); ++j) {
        const double diff = model.row_profiles(i, j) - model.row_profiles(i2, j);
        d += diff * diff / model.f_col[j];
    }
    return d;
}

double total_inertia(const FrequencyModel& model) {
    double m2 = 0.0;
    for (std::size_t i = 0; i < model.n_rows(); ++i)
        for (std::size_t j = 0; j < model.n_cols(); ++j) {
            const double expected = model.f_row[i] * model.f_col[j];
            const double diff = model.f(i, j) - expected;
            m2 += diff * diff / expected;
        }
    return m2;
}

FactorDecomposition factor_decomposition(const FrequencyModel& model) {
    const std::size_t n = model.n_rows();
    const std::size_t p = model.n_cols();
    if (n < 2 || p < 2)
        throw validation_error("factor_decomposition: need at least a 2x2 table");

    Matrix residual(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const double expected = model.f_row[i] * model.f_col[j];
            residual(i, j) = (model.f(i, j) - expected) / std::sqrt(expected);
        }

    const SvdResult dec = svd(residual);

    // Centering makes one direction null; anything below the cutoff is noise.
    const std::size_t n_max = std::min(n, p) - 1;
    std::size_t retained = 0;
    while (retained < n_max && dec.sigma[retained] * dec.sigma[retained] >= kEigenvalueCutoff)
        ++retained;

    FactorDecomposition out;
    out.row_labels = model.row_labels;
    out.col_labels = model.col_labels;
    out.n_factors = retained;
    out.inertia_total = total_inertia(model);
    out.eigenvalues.resize(retained);
    out.row_factors = Matrix(n, retained);
    out.col_factors = Matrix(p, retained);

    for (std::size_t a = 0; a < retained; ++a) {
        const double sigma = dec.sigma[a];
        out.eigenvalues[a] = sigma * sigma;
        for (std::size_t i = 0; i < n; ++i)
            out.row_factors(i, a) = sigma * dec.u(i, a) / std::sqrt(model.f_row[i]);
        for (std::size_t j = 0; j < p; ++j)
            out.col_factors(j, a) = sigma * dec.v(j, a) / std::sqrt(model.f_col[j]);

        // Deterministic orientation: largest-magnitude row coordinate positive.
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(out.row_factors(i, a)) > std::abs(out.row_factors(arg, a))) arg = i;
        if (out.row_factors(arg, a) < 0.0) {
            for (std::size_t i = 0; i < n; ++i) out.row_factors(i, a) = -out.row_factors(i, a);
            for (std::size_t j = 0; j < p; ++j) out.col_factors(j, a) = -out.col_factors(j, a);
        }
    }
    return out;
}

TransitionReport transition_consistency(const FactorDecomposition& dec,
                                        const FrequencyModel& model) {
    const std::size_t n = model.n_rows();
    const std::size_t p = model.n_cols();
    TransitionReport report;
    report.row_deviation.assign(dec.n_factors, 0.0);
    report.col_deviation.assign(dec.n_factors, 0.0);

    for (std::size_t a = 0; a < dec.n_factors; ++a) {
        const double inv_sqrt_lambda = 1.0 / std::sqrt(dec.eigenvalues[a]);
        for (std::size_t i = 0; i < n; ++i) {
            double bary = 0.0;
            for (std::size_t j = 0; j < p; ++j)
                bary += model.row_profiles(i, j) * dec.col_factors(j, a);
            const double dev = std::abs(dec.row_factors(i, a) - inv_sqrt_lambda * bary);
            report.row_deviation[a] = std::max(report.row_deviation[a], dev);
        }
        for (std::size_t j = 0; j < p; ++j) {
            double bary = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                bary += model.col_profiles(i, j) * dec.row_factors(i, a);
            const double dev = std::abs(dec.col_factors(j, a) - inv_sqrt_lambda * bary);
            report.col_deviation[a] = std::max(report.col_deviation[a], dev);
        }
        report.max_deviation = std::max(
            {report.max_deviation, report.row_deviation[a], report.col_deviation[a]});
    }
    return report;
}

}  // namespace uwr
