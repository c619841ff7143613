#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ebdg {

/// Dense row-major matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("Matrix: dimensions must be positive");
    }

    static Matrix identity(int n) {
        Matrix I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
    const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

/// y = A x. Row dot products with four accumulators so the reduction
/// vectorizes without reassociation flags; deterministic.
inline void matvec(const Matrix& A, const double* x, double* y) {
    const int n = A.rows(), m = A.cols();
    for (int i = 0; i < n; ++i) {
        const double* r = A.row(i);
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        int j = 0;
        for (; j + 4 <= m; j += 4) {
            s0 += r[j] * x[j];
            s1 += r[j + 1] * x[j + 1];
            s2 += r[j + 2] * x[j + 2];
            s3 += r[j + 3] * x[j + 3];
        }
        for (; j < m; ++j) s0 += r[j] * x[j];
        y[i] = (s0 + s1) + (s2 + s3);
    }
}

inline std::vector<double> matvec(const Matrix& A, std::span<const double> x) {
    std::vector<double> y(A.rows());
    matvec(A, x.data(), y.data());
    return y;
}

struct SingularMatrixError : std::runtime_error {
    int column;
    explicit SingularMatrixError(int col)
        : std::runtime_error("lu_factor: pivot vanished in column " + std::to_string(col)), column(col) {}
};

/// Combined LU storage with partial pivoting, P A = L U.
struct LUFactors {
    Matrix lu;
    std::vector<int> pivots;

    int size() const { return lu.rows(); }
};

inline LUFactors lu_factor(Matrix A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("lu_factor: matrix must be square");
    const int n = A.rows();
    std::vector<int> piv(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(A(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        piv[k] = p;
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
        const double pivot = A(k, k);
        if (std::abs(pivot) < 1e-300) throw SingularMatrixError(k);
        const double* rk = A.row(k);
        for (int i = k + 1; i < n; ++i) {
            double* ri = A.row(i);
            const double l = ri[k] / pivot;
            ri[k] = l;
            for (int j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
        }
    }
    return LUFactors{std::move(A), std::move(piv)};
}

/// Solves P A x = P b in place of a copy of b.
inline std::vector<double> lu_solve(const LUFactors& f, std::span<const double> b) {
    const int n = f.size();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("lu_solve: dimension mismatch");
    std::vector<double> x(b.begin(), b.end());
    for (int k = 0; k < n; ++k)
        if (f.pivots[k] != k) std::swap(x[k], x[f.pivots[k]]);
    // forward substitution, unit lower triangle
    for (int i = 1; i < n; ++i) {
        const double* r = f.lu.row(i);
        double s = x[i];
        for (int j = 0; j < i; ++j) s -= r[j] * x[j];
        x[i] = s;
    }
    // back substitution
    for (int i = n - 1; i >= 0; --i) {
        const double* r = f.lu.row(i);
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= r[j] * x[j];
        x[i] = s / r[i];
    }
    return x;
}

}  // namespace ebdg
