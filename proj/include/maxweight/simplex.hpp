#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace maxweight {

struct SimplexResult {
    double value = 0.0;
    std::vector<double> x;     // primal solution
    std::vector<double> dual;  // shadow price per constraint
};

/// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0,
/// so the slack basis is feasible from the start. Bland's rule throughout;
/// the desk-scale instances here are tiny and often degenerate.
inline SimplexResult simplex_max(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b, const std::vector<double>& c,
                                 double eps = 1e-12) {
    const std::size_t nrows = A.size();
    const std::size_t ncols = c.size();
    if (b.size() != nrows) throw std::invalid_argument("simplex_max: b size mismatch");
    for (const auto& row : A)
        if (row.size() != ncols) throw std::invalid_argument("simplex_max: A row size mismatch");
    for (double bi : b)
        if (bi < 0.0) throw std::invalid_argument("simplex_max: requires b >= 0");

    // Tableau: ncols structural + nrows slack + rhs; last row is the z-row.
    const std::size_t width = ncols + nrows + 1;
    std::vector<std::vector<double>> t(nrows + 1, std::vector<double>(width, 0.0));
    std::vector<std::size_t> basis(nrows);
    for (std::size_t i = 0; i < nrows; ++i) {
        for (std::size_t j = 0; j < ncols; ++j) t[i][j] = A[i][j];
        t[i][ncols + i] = 1.0;
        t[i][width - 1] = b[i];
        basis[i] = ncols + i;
    }
    for (std::size_t j = 0; j < ncols; ++j) t[nrows][j] = -c[j];

    const std::size_t max_pivots = 50 * (nrows + ncols) + 1000;
    for (std::size_t pivots = 0;; ++pivots) {
        if (pivots > max_pivots) throw std::runtime_error("simplex_max: pivot limit exceeded");
        // Entering: lowest-index column with a negative reduced cost.
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j)
            if (t[nrows][j] < -eps) {
                enter = j;
                break;
            }
        if (enter == width) break;  // optimal
        // Leaving: min ratio, ties broken by lowest basis variable index.
        std::size_t leave = nrows;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < nrows; ++i) {
            if (t[i][enter] <= eps) continue;
            const double ratio = t[i][width - 1] / t[i][enter];
            if (leave == nrows || ratio < best_ratio - eps ||
                (ratio < best_ratio + eps && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == nrows) throw std::runtime_error("simplex_max: unbounded objective");
        const double piv = t[leave][enter];
        for (std::size_t j = 0; j < width; ++j) t[leave][j] /= piv;
        for (std::size_t i = 0; i <= nrows; ++i) {
            if (i == leave) continue;
            const double factor = t[i][enter];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) t[i][j] -= factor * t[leave][j];
        }
        basis[leave] = enter;
    }

    SimplexResult res;
    res.value = t[nrows][width - 1];
    res.x.assign(ncols, 0.0);
    for (std::size_t i = 0; i < nrows; ++i)
        if (basis[i] < ncols) res.x[basis[i]] = t[i][width - 1];
    res.dual.assign(nrows, 0.0);
    for (std::size_t i = 0; i < nrows; ++i) res.dual[i] = t[nrows][ncols + i];
    return res;
}

}  // namespace maxweight
