#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "qkm/errors.hpp"

namespace qkm {

template <class F>
using Mat = std::vector<std::vector<F>>;

/// In-place reduced row echelon form; returns the pivot column per row.
/// Deterministic: first nonzero entry scanning top-down, columns left-right.
template <class F>
std::vector<int> rref(Mat<F>& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && m[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[r]);
        F inv = F(1) / m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
        for (size_t k = 0; k < rows; ++k) {
            if (k == r || m[k][c].is_zero()) continue;
            F f = m[k][c];
            for (size_t j = c; j < cols; ++j) m[k][j] = m[k][j] - f * m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

template <class F>
size_t rank(Mat<F> m) {
    return rref(m).size();
}

/// Basis of the right kernel of m (ncols = width, needed when m has no rows).
template <class F>
std::vector<std::vector<F>> kernel_basis(Mat<F> m, size_t ncols) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(ncols, false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<F>> basis;
    for (size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<F> v(ncols, F(0));
        v[free] = F(1);
        for (size_t r = 0; r < pivots.size(); ++r) {
            size_t pc = static_cast<size_t>(pivots[r]);
            v[pc] = -m[r][free];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of A x = b (free variables set to zero), or nullopt.
template <class F>
std::optional<std::vector<F>> solve(Mat<F> a, const std::vector<F>& b) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    for (size_t r = 0; r < rows; ++r) a[r].push_back(b[r]);
    auto pivots = rref(a);
    std::vector<F> x(cols, F(0));
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (static_cast<size_t>(pivots[r]) == cols) return std::nullopt;  // 0 = 1 row
        x[static_cast<size_t>(pivots[r])] = a[r][cols];
    }
    return x;
}

// ---------------------------------------------------------------------------
// Integer lattice utilities (column Hermite reduction).
// ---------------------------------------------------------------------------

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;  // row-major

/// Column echelon form by unimodular column operations: returns (H, U) with
/// M U = H; pivot rows strictly increase along the first `npiv` columns.
inline void col_hermite(const IMat& m, IMat& h, IMat& u, size_t& npiv) {
    size_t rows = m.size();
    size_t cols = rows ? m[0].size() : 0;
    h = m;
    u.assign(cols, IVec(cols, 0));
    for (size_t j = 0; j < cols; ++j) u[j][j] = 1;
    auto colswap = [&](size_t x, size_t y) {
        for (size_t r = 0; r < rows; ++r) std::swap(h[r][x], h[r][y]);
        for (size_t r = 0; r < cols; ++r) std::swap(u[r][x], u[r][y]);
    };
    auto colsub = [&](size_t dst, size_t src, long long f) {  // col_dst -= f * col_src
        for (size_t r = 0; r < rows; ++r) h[r][dst] -= f * h[r][src];
        for (size_t r = 0; r < cols; ++r) u[r][dst] -= f * u[r][src];
    };
    auto colneg = [&](size_t x) {
        for (size_t r = 0; r < rows; ++r) h[r][x] = -h[r][x];
        for (size_t r = 0; r < cols; ++r) u[r][x] = -u[r][x];
    };
    size_t cur = 0;
    for (size_t row = 0; row < rows && cur < cols; ++row) {
        for (;;) {
            size_t best = cols;
            for (size_t j = cur; j < cols; ++j)
                if (h[row][j] != 0 && (best == cols || std::llabs(h[row][j]) < std::llabs(h[row][best])))
                    best = j;
            if (best == cols) break;  // row already zero on cur..cols
            bool reduced = true;
            for (size_t j = cur; j < cols; ++j) {
                if (j == best || h[row][j] == 0) continue;
                long long f = h[row][j] / h[row][best];
                colsub(j, best, f);
                if (h[row][j] != 0) reduced = false;
            }
            if (reduced) {
                colswap(cur, best);
                if (h[row][cur] < 0) colneg(cur);
                ++cur;
                break;
            }
        }
    }
    npiv = cur;
}

/// Lattice basis of { x : M x = 0 } over the integers.
inline IMat int_kernel(const IMat& m, size_t ncols) {
    if (m.empty()) {
        IMat basis(ncols, IVec(ncols, 0));
        for (size_t j = 0; j < ncols; ++j) basis[j][j] = 1;
        return basis;
    }
    IMat h, u;
    size_t npiv = 0;
    col_hermite(m, h, u, npiv);
    size_t cols = m[0].size();
    IMat basis;
    for (size_t j = npiv; j < cols; ++j) {
        IVec v(cols);
        for (size_t r = 0; r < cols; ++r) v[r] = u[r][j];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Integer solution x of (columns of B) * x = v, if v lies in the lattice.
inline std::optional<IVec> int_solve_columns(const IMat& bcols, const IVec& v) {
    size_t rows = v.size();
    size_t cols = bcols.size();
    IMat m(rows, IVec(cols, 0));
    for (size_t j = 0; j < cols; ++j)
        for (size_t r = 0; r < rows; ++r) m[r][j] = bcols[j][r];
    IMat h, u;
    size_t npiv = 0;
    col_hermite(m, h, u, npiv);
    IVec y(cols, 0);
    IVec rem = v;
    size_t col = 0;
    for (size_t row = 0; row < rows; ++row) {
        if (col < npiv && h[row][col] != 0) {
            if (rem[row] % h[row][col] != 0) return std::nullopt;
            long long f = rem[row] / h[row][col];
            y[col] = f;
            for (size_t r = row; r < rows; ++r) rem[r] -= f * h[r][col];
            ++col;
        } else if (rem[row] != 0) {
            return std::nullopt;
        }
    }
    IVec x(cols, 0);
    for (size_t r = 0; r < cols; ++r)
        for (size_t j = 0; j < cols; ++j) x[r] += u[r][j] * y[j];
    return x;
}

} // namespace qkm
