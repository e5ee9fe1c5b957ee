#include <doctest.h>

#include <random>
#include <sstream>

#include "cpdd/factorization.hpp"
#include "cpdd/gmres.hpp"
#include "cpdd/matrix_market.hpp"
#include "cpdd/sparse.hpp"
#include "helpers.hpp"

using namespace cpdd;

namespace {

SparseMatrix random_well_conditioned(int n, std::mt19937_64& rng) {
    // Diagonally dominant random sparse matrix.
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_int_distribution<int> col(0, n - 1);
    std::vector<SparseMatrix::Triplet> t;
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int k = 0; k < 4; ++k) {
            int j = col(rng);
            double v = val(rng);
            if (j != i) {
                t.push_back({i, j, v});
                row_sum += std::abs(v);
            }
        }
        t.push_back({i, i, row_sum + 1.0});
    }
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace

TEST_CASE("spmv identity and zero") {
    auto eye = SparseMatrix::identity(4);
    std::vector<double> x = {1.0, -2.0, 3.0, 0.5};
    CHECK(eye.multiply_vector(x) == x);

    SparseMatrix zero(4, 4);
    auto y = zero.multiply_vector(x);
    for (double v : y) CHECK(v == 0.0);
}

TEST_CASE("spmv matches dense multiply on a 3x3 matrix") {
    // A = [[2,0,1],[0,-1,0],[4,5,6]], x = (1,2,3): Ax = (5,-2,32).
    auto a = SparseMatrix::from_triplets(3, 3,
                                         {{0, 0, 2}, {0, 2, 1}, {1, 1, -1}, {2, 0, 4}, {2, 1, 5}, {2, 2, 6}});
    std::vector<double> x = {1, 2, 3};
    auto y = a.multiply_vector(x);
    CHECK(y[0] == doctest::Approx(5.0));
    CHECK(y[1] == doctest::Approx(-2.0));
    CHECK(y[2] == doctest::Approx(32.0));
}

TEST_CASE("spmv rejects shape mismatch") {
    auto eye = SparseMatrix::identity(3);
    std::vector<double> x = {1.0, 2.0};
    CHECK_THROWS_AS((void)eye.multiply_vector(x), Error);
}

TEST_CASE("from_triplets merges duplicates and drops exact zeros") {
    auto a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, -1.0}, {1, 0, 2.0}, {1, 1, 3.0}});
    CHECK(a.nnz() == 2);  // the (0,0) pair cancels exactly
    CHECK(a.coeff(1, 0) == 2.0);
    a.check_consistent();

    auto kept = SparseMatrix::from_triplets(2, 2, {{0, 0, 0.0}, {1, 1, 1.0}}, /*drop_zeros=*/false);
    CHECK(kept.nnz() == 2);
}

TEST_CASE("sparse product against dense computation") {
    auto a = SparseMatrix::from_triplets(2, 3, {{0, 0, 1}, {0, 2, 2}, {1, 1, 3}});
    auto b = SparseMatrix::from_triplets(3, 2, {{0, 0, 1}, {1, 0, -1}, {2, 1, 4}});
    auto c = a.multiply(b);
    CHECK(c.coeff(0, 0) == 1.0);
    CHECK(c.coeff(0, 1) == 8.0);
    CHECK(c.coeff(1, 0) == -3.0);
    CHECK(c.coeff(1, 1) == 0.0);
    c.check_consistent();
}

TEST_CASE("lu: identity") {
    auto f = Factorization::compute(SparseMatrix::identity(5));
    std::vector<double> b = {1, 2, 3, 4, 5};
    auto x = f.solve(b);
    for (int i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(b[i]));
}

TEST_CASE("lu: permutation matrix requires pivoting") {
    auto a = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
    auto f = Factorization::compute(a);
    auto x = f.solve(std::vector<double>{1.0, 2.0});
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("lu: singular matrix is rejected") {
    auto a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 0, 1.0}});
    CHECK_THROWS_AS((void)Factorization::compute(a), Error);
}

TEST_CASE("lu: random 50x50 well-conditioned residual < 1e-10") {
    auto rng = testing::rng(7);
    auto a = random_well_conditioned(50, rng);
    auto f = Factorization::compute(a);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> b(50);
    for (auto& v : b) v = val(rng);
    auto x = f.solve(b);
    auto ax = a.multiply_vector(x);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 50; ++i) {
        num += (ax[i] - b[i]) * (ax[i] - b[i]);
        den += b[i] * b[i];
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("gmres: identity converges in one iteration") {
    std::vector<double> b = {3.0, -1.0, 2.0};
    LinearOperator ident = [](std::span<const double> x, std::span<double> y) {
        std::copy(x.begin(), x.end(), y.begin());
    };
    auto res = gmres(ident, b, {.rtol = 1e-12, .restart = 10, .max_iter = 50});
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
    CHECK(res.report.residual_history.size() == 2);
    for (int i = 0; i < 3; ++i) CHECK(res.x[i] == doctest::Approx(b[i]));
}

TEST_CASE("gmres: residuals nonincreasing within a cycle on an SPD diagonal") {
    const int n = 40;
    std::vector<SparseMatrix::Triplet> t;
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0 + i});
    auto a = SparseMatrix::from_triplets(n, n, std::move(t));
    std::vector<double> b(n, 1.0);
    auto res = gmres([&](std::span<const double> x, std::span<double> y) { a.multiply_vector(x, y); },
                     b, {.rtol = 1e-10, .restart = 50, .max_iter = 200});
    CHECK(res.report.converged);
    const auto& h = res.report.residual_history;
    for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] <= h[i - 1] * (1.0 + 1e-12));
}

TEST_CASE("gmres: zero right-hand side converges at iteration zero") {
    std::vector<double> b(5, 0.0);
    LinearOperator ident = [](std::span<const double> x, std::span<double> y) {
        std::copy(x.begin(), x.end(), y.begin());
    };
    auto res = gmres(ident, b, {.rtol = 1e-8, .restart = 5, .max_iter = 10});
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 0);
    CHECK(res.report.residual_history.size() == 1);
}

TEST_CASE("gmres: max_iter returns the best iterate flagged unconverged") {
    const int n = 60;
    std::vector<SparseMatrix::Triplet> t;
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0 + 1000.0 * i});
    auto a = SparseMatrix::from_triplets(n, n, std::move(t));
    std::vector<double> b(n, 1.0);
    auto res = gmres([&](std::span<const double> x, std::span<double> y) { a.multiply_vector(x, y); },
                     b, {.rtol = 1e-14, .restart = 4, .max_iter = 6});
    CHECK_FALSE(res.report.converged);
    CHECK(res.report.status == SolveStatus::max_iterations);
    CHECK(res.report.iterations == 6);
    CHECK(res.report.residual_history.size() == 7);
}

TEST_CASE("matrix market round trip") {
    auto rng = testing::rng(11);
    auto a = random_well_conditioned(20, rng);
    std::stringstream ss;
    write_matrix_market(ss, a);
    auto b = read_matrix_market(ss);
    CHECK(a == b);
}
