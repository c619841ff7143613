#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ebdg/linalg.hpp"

using namespace ebdg;

namespace {

double residual_norm(const Matrix& A, std::span<const double> x, std::span<const double> b) {
    const auto Ax = matvec(A, x);
    double s = 0.0;
    for (std::size_t i = 0; i < Ax.size(); ++i) s += (Ax[i] - b[i]) * (Ax[i] - b[i]);
    return std::sqrt(s);
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("LU of identity and diagonal") {
    const auto f = lu_factor(Matrix::identity(4));
    const std::vector<double> b = {1.0, -2.0, 3.5, 0.25};
    CHECK(lu_solve(f, b) == b);

    Matrix D(3, 3);
    D(0, 0) = D(1, 1) = D(2, 2) = 2.0;
    const auto fd = lu_factor(D);
    const std::vector<double> x = lu_solve(fd, std::vector<double>{2.0, 4.0, -6.0});
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 2.0);
    CHECK(x[2] == -3.0);
}

TEST_CASE("LU pivots a permutation matrix") {
    Matrix P(2, 2);
    P(0, 1) = 1.0;
    P(1, 0) = 1.0;
    const auto f = lu_factor(P);
    const auto x = lu_solve(f, std::vector<double>{3.0, 7.0});
    CHECK(x[0] == 7.0);
    CHECK(x[1] == 3.0);
}

TEST_CASE("LU residual on a well-conditioned random system") {
    std::mt19937 rng(20240801);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int n = 50;
    Matrix A(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A(i, j) = unif(rng);
        A(i, i) += 10.0;  // keeps the condition number modest
    }
    std::vector<double> b(n);
    for (double& v : b) v = unif(rng);
    const auto f = lu_factor(A);
    const auto x = lu_solve(f, b);
    CHECK(residual_norm(A, x, b) < 1e-10 * norm2(b));
}

TEST_CASE("LU reports the singular column") {
    // column 1 is twice column 0, so elimination hits a zero pivot there
    Matrix B(2, 2);
    B(0, 0) = 1.0;
    B(0, 1) = 2.0;
    B(1, 0) = 2.0;
    B(1, 1) = 4.0;
    try {
        (void)lu_factor(B);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.column == 1);
    }
}

TEST_CASE("LU is deterministic") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int n = 20;
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = unif(rng) + (i == j ? 5.0 : 0.0);
    std::vector<double> b(n);
    for (double& v : b) v = unif(rng);
    const auto f1 = lu_factor(A);
    const auto f2 = lu_factor(A);
    CHECK(f1.pivots == f2.pivots);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(f1.lu(i, j) == f2.lu(i, j));
    CHECK(lu_solve(f1, b) == lu_solve(f2, b));
}
