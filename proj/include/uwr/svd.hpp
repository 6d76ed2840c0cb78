#pragma once

#include <vector>

#include "uwr/common.hpp"

namespace uwr {

// Thin singular value decomposition a = u * diag(sigma) * v^T with
// k = min(rows, cols) factors, sigma in non-increasing order.
// Columns of u belonging to zero singular values are left as zeros.
struct SvdResult {
    Matrix u;                   // rows x k
    std::vector<double> sigma;  // k, >= 0, descending
    Matrix v;                   // cols x k
};

// One-sided Jacobi with cyclic sweeps. Deterministic and accurate to a few
// ulps for the small dense matrices used here.
SvdResult svd(const Matrix& a);

}  // namespace uwr
