#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "driftlag/error.hpp"
#include "driftlag/lasso.hpp"

using namespace driftlag;
using namespace driftlag::lasso;

namespace {

struct Problem {
    Matrix x;
    std::vector<double> y;
};

Problem random_problem(std::size_t n, std::size_t p, std::uint64_t seed, double noise = 0.5) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    Problem pr{Matrix(n, p), std::vector<double>(n)};
    std::vector<double> beta(p);
    for (std::size_t j = 0; j < p; ++j) beta[j] = j % 3 == 0 ? z(gen) * 2.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = 1.5;
        for (std::size_t j = 0; j < p; ++j) {
            pr.x(i, j) = z(gen);
            v += beta[j] * pr.x(i, j);
        }
        pr.y[i] = v + noise * z(gen);
    }
    return pr;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

// Largest violation of the lasso optimality conditions.
double kkt_residual(const Matrix& x, const std::vector<double>& y, const LassoModel& m) {
    const auto pred = m.predict(x);
    const double n = static_cast<double>(y.size());
    double worst = 0.0;
    double mean_res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) mean_res += (y[i] - pred[i]) / n;
    worst = std::abs(mean_res);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double g = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) g += x(i, j) * (y[i] - pred[i]) / n;
        const double b = m.coefficients[j];
        const double v = b != 0.0 ? std::abs(g - m.lambda * (b > 0 ? 1.0 : -1.0)) : std::max(0.0, std::abs(g) - m.lambda);
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace

TEST(Standardize, UnitVarianceColumn) {
    const auto s = standardize(Matrix::from_rows({{1}, {2}, {3}}));
    double mean = 0, var = 0;
    for (double v : s.x.col(0)) mean += v / 3.0;
    for (double v : s.x.col(0)) var += (v - mean) * (v - mean) / 3.0;
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(var, 1.0, 1e-12);
}

TEST(Standardize, ConstantColumnFlagged) {
    const auto s = standardize(Matrix::from_rows({{5, 1}, {5, 2}, {5, 4}}));
    for (double v : s.x.col(0)) EXPECT_EQ(v, 0.0);
    EXPECT_TRUE(s.transform.constant[0]);
    EXPECT_FALSE(s.transform.constant[1]);
}

TEST(Standardize, Idempotent) {
    const auto pr = random_problem(20, 4, 2);
    const auto once = standardize(pr.x).x;
    const auto twice = standardize(once).x;
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(once(i, j), twice(i, j), 1e-12);
}

TEST(Standardize, ApplyUsesTrainingMoments) {
    const auto s = standardize(Matrix::from_rows({{0}, {2}}));
    const auto out = s.transform.apply(Matrix::from_rows({{4}}));
    EXPECT_DOUBLE_EQ(out(0, 0), 3.0);
}

TEST(Matrix, RaggedRows) {
    try {
        Matrix::from_rows({{1, 2}, {3}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RaggedInput);
    }
}

TEST(SoftThreshold, Values) {
    EXPECT_DOUBLE_EQ(soft_threshold(3.0, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(soft_threshold(-3.0, 1.0), -2.0);
    EXPECT_DOUBLE_EQ(soft_threshold(0.5, 1.0), 0.0);
}

TEST(LassoFit, AboveLambdaMaxIsNullModel) {
    const auto pr = random_problem(30, 13, 3);
    const double lmax = lambda_max(pr.x, pr.y);
    const double ybar = std::accumulate(pr.y.begin(), pr.y.end(), 0.0) / 30.0;
    for (double scale : {1.0, 1.5, 10.0}) {
        const auto m = lasso_fit(pr.x, pr.y, lmax * scale);
        for (double b : m.coefficients) EXPECT_EQ(b, 0.0);
        EXPECT_NEAR(m.intercept, ybar, 1e-12);
    }
    for (std::uint64_t seed = 20; seed < 60; ++seed) {
        const auto q = random_problem(30, 13, seed);
        const auto st = standardize(q.x).x;
        const auto m = lasso_fit(st, q.y, lambda_max(st, q.y));
        for (double b : m.coefficients) EXPECT_EQ(b, 0.0);
    }
    const auto below = lasso_fit(pr.x, pr.y, lmax * 0.9);
    EXPECT_TRUE(std::any_of(below.coefficients.begin(), below.coefficients.end(), [](double b) { return b != 0.0; }));
}

TEST(LassoFit, ZeroPenaltyMatchesNormalEquations) {
    const auto pr = random_problem(40, 6, 4);
    Eigen::MatrixXd a(40, 7);
    a.col(0).setOnes();
    a.rightCols(6) = to_eigen(pr.x);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(pr.y.data(), 40);
    const Eigen::VectorXd beta = (a.transpose() * a).ldlt().solve(a.transpose() * y);
    const auto m = lasso_fit(pr.x, pr.y, 0.0);
    ASSERT_TRUE(m.converged);
    EXPECT_NEAR(m.intercept, beta(0), 1e-8 * std::abs(beta(0)));
    for (std::size_t j = 0; j < 6; ++j) {
        EXPECT_NEAR(m.coefficients[j], beta(static_cast<Eigen::Index>(j + 1)),
                    1e-8 * std::max(1.0, std::abs(beta(static_cast<Eigen::Index>(j + 1)))));
    }
}

TEST(LassoFit, OrthonormalDesignClosedForm) {
    const std::size_t n = 32, p = 5;
    const auto pr = random_problem(n, p, 5);
    Eigen::MatrixXd raw = to_eigen(pr.x);
    raw.rowwise() -= raw.colwise().mean();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    const Eigen::MatrixXd q = Eigen::MatrixXd(qr.householderQ()).leftCols(p) * std::sqrt(static_cast<double>(n));
    Matrix x(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) x(i, j) = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    for (double lambda : {0.0, 0.05, 0.3, 1.0}) {
        const auto m = lasso_fit(x, pr.y, lambda);
        for (std::size_t j = 0; j < p; ++j) {
            double z = 0.0;
            for (std::size_t i = 0; i < n; ++i) z += x(i, j) * pr.y[i] / static_cast<double>(n);
            EXPECT_NEAR(m.coefficients[j], soft_threshold(z, lambda), 1e-8);
        }
    }
}

TEST(LassoFit, KktOnRandomProblems) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto pr = random_problem(30, 13, 100 + s);
        const auto st = standardize(pr.x);
        const double lambda = 0.02 + 0.01 * static_cast<double>(s % 50);
        const auto m = lasso_fit(st.x, pr.y, lambda);
        EXPECT_TRUE(m.converged);
        EXPECT_LE(kkt_residual(st.x, pr.y, m), 1e-6) << "problem " << s;
    }
}

TEST(LassoFit, ObjectiveDoesNotIncreaseWithSweeps) {
    const auto pr = random_problem(30, 13, 6);
    const auto st = standardize(pr.x);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t sweeps = 1; sweeps <= 30; ++sweeps) {
        const auto m = lasso_fit(st.x, pr.y, 0.1, {1e-300, sweeps});
        const double obj = lasso_objective(st.x, pr.y, m);
        EXPECT_LE(obj, prev + 1e-12);
        prev = obj;
    }
}

TEST(LassoFit, Preconditions) {
    const auto pr = random_problem(10, 2, 7);
    EXPECT_THROW(lasso_fit(pr.x, pr.y, -1.0), Error);
    EXPECT_THROW(lasso_fit(pr.x, std::vector<double>(3, 0.0), 0.1), Error);
    auto bad = pr.y;
    bad[0] = std::nan("");
    EXPECT_THROW(lasso_fit(pr.x, bad, 0.1), Error);
}

TEST(LassoFit, SweepLimitReportedAsNotConverged) {
    const auto pr = random_problem(30, 13, 8);
    const auto m = lasso_fit(pr.x, pr.y, 0.0, {1e-300, 3});
    EXPECT_FALSE(m.converged);
    EXPECT_EQ(m.n_iter, 3u);
}

TEST(LambdaSearch, DrawsAndDeterminism) {
    const auto pr = random_problem(22, 13, 9);
    SearchConfig cfg;
    const auto a = lambda_search(pr.x, pr.y, cfg, 42);
    EXPECT_EQ(a.draws.size(), 500u);
    EXPECT_EQ(a.scores.size(), 500u);
    for (double l : a.draws) {
        EXPECT_GE(l, 0.0);
        EXPECT_LE(l, 5.0);
    }
    const auto b = lambda_search(pr.x, pr.y, cfg, 42);
    EXPECT_EQ(a.best_lambda, b.best_lambda);
    EXPECT_EQ(a.draws, b.draws);
    EXPECT_NE(lambda_search(pr.x, pr.y, cfg, 43).draws, a.draws);
}

TEST(LambdaSearch, ParallelMatchesReference) {
    const auto pr = random_problem(22, 13, 10);
    SearchConfig cfg;
    cfg.n_draws = 120;
    for (auto metric : {CvMetric::MeanSquaredError, CvMetric::MeanAbsoluteError}) {
        cfg.metric = metric;
        const auto a = lambda_search(pr.x, pr.y, cfg, 7);
        const auto b = lambda_search_reference(pr.x, pr.y, cfg, 7);
        EXPECT_EQ(a.best_lambda, b.best_lambda);
        EXPECT_EQ(a.scores, b.scores);
    }
}

TEST(LambdaSearch, NoiselessLinearPicksSmallestDraw) {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix x(24, 3);
    std::vector<double> y(24);
    for (std::size_t i = 0; i < 24; ++i) {
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = z(gen);
        y[i] = 2.0 + 3.0 * x(i, 1);
    }
    SearchConfig cfg;
    cfg.n_draws = 50;
    const auto r = lambda_search(x, y, cfg, 3);
    EXPECT_EQ(r.best_lambda, *std::min_element(r.draws.begin(), r.draws.end()));
}

TEST(Folds, SizesAndPartition) {
    const auto folds = kfold_partition(28, 5, 1);
    std::vector<std::size_t> sizes;
    std::set<std::size_t> seen;
    for (const auto& f : folds) {
        sizes.push_back(f.size());
        for (auto r : f) EXPECT_TRUE(seen.insert(r).second);
    }
    EXPECT_EQ(sizes, (std::vector<std::size_t>{6, 6, 6, 5, 5}));
    EXPECT_EQ(seen.size(), 28u);
    EXPECT_EQ(kfold_partition(28, 5, 1), folds);
}

TEST(Metrics, NamedValues) {
    const auto m = metrics(std::vector<double>{0, 2}, std::vector<double>{1, 1});
    EXPECT_DOUBLE_EQ(m.mae, 1.0);
    EXPECT_DOUBLE_EQ(m.rmse, 1.0);
    ASSERT_TRUE(m.r2);
    // SSE = 2 and SST = 2, so 1 - SSE/SST = 0 (the mean predictor)
    EXPECT_DOUBLE_EQ(*m.r2, 0.0);
    EXPECT_DOUBLE_EQ(*metrics(std::vector<double>{0, 2}, std::vector<double>{2, 0}).r2, -3.0);

    const std::vector<double> y{1, 4, 2, 8};
    const auto perfect = metrics(y, y);
    EXPECT_DOUBLE_EQ(perfect.mae, 0.0);
    EXPECT_DOUBLE_EQ(perfect.rmse, 0.0);
    EXPECT_DOUBLE_EQ(*perfect.r2, 1.0);
    EXPECT_NEAR(*metrics(y, std::vector<double>(4, 3.75)).r2, 0.0, 1e-15);
    EXPECT_FALSE(metrics(std::vector<double>{2, 2}, std::vector<double>{1, 3}).r2);
}

TEST(Averaging, Values) {
    const std::vector<double> v{1.5, -2.0, 0.0};
    EXPECT_EQ(average_coefficients({v, v, v, v, v}), v);
    EXPECT_DOUBLE_EQ(average_coefficients({{1}, {-1}, {1}, {-1}, {0}})[0], 0.0);
    EXPECT_DOUBLE_EQ(average_coefficients({{1}, {-1}, {1}, {0}, {0}})[0], 0.2);
}

class NestedCvTest : public ::testing::Test {
  protected:
    Problem pr = random_problem(28, 13, 12, 1.0);
    NestedCvConfig cfg = [] {
        NestedCvConfig c;
        c.search.n_draws = 60;
        return c;
    }();
};

TEST_F(NestedCvTest, PartitionAndShapes) {
    const auto rep = nested_cv(pr.x, pr.y, cfg, 2020);
    ASSERT_EQ(rep.folds.size(), 5u);
    std::vector<int> hits(28, 0);
    for (std::size_t f = 0; f < 5; ++f) {
        const auto& fold = rep.folds[f];
        EXPECT_EQ(fold.train_rows.size() + fold.test_rows.size(), 28u);
        for (auto r : fold.test_rows) {
            ++hits[r];
            EXPECT_EQ(rep.fold_of_row[r], f);
            EXPECT_FALSE(std::binary_search(fold.train_rows.begin(), fold.train_rows.end(), r));
        }
        EXPECT_GE(fold.lambda, 0.0);
        EXPECT_LE(fold.lambda, 5.0);
    }
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_EQ(rep.avg_coefficients.size(), 13u);
}

TEST_F(NestedCvTest, BitIdenticalRuns) {
    const auto a = nested_cv(pr.x, pr.y, cfg, 2020);
    const auto b = nested_cv(pr.x, pr.y, cfg, 2020);
    EXPECT_EQ(a.folds, b.folds);
    EXPECT_EQ(a.predictions, b.predictions);
    EXPECT_EQ(a.avg_coefficients, b.avg_coefficients);
    EXPECT_EQ(a.metrics.mae, b.metrics.mae);
}

TEST_F(NestedCvTest, TestRowsDoNotLeakIntoFold) {
    const auto base = nested_cv(pr.x, pr.y, cfg, 2020);
    for (std::size_t f = 0; f < 5; ++f) {
        auto x = pr.x;
        auto y = pr.y;
        for (auto r : base.folds[f].test_rows) {
            y[r] += 1000.0;
            for (std::size_t j = 0; j < 13; ++j) x(r, j) *= -7.0;
        }
        const auto poked = nested_cv(x, y, cfg, 2020);
        EXPECT_EQ(poked.folds[f].transform, base.folds[f].transform);
        EXPECT_EQ(poked.folds[f].lambda, base.folds[f].lambda);
        EXPECT_EQ(poked.folds[f].coefficients, base.folds[f].coefficients);
        EXPECT_EQ(poked.folds[f].intercept, base.folds[f].intercept);
        const auto direct = standardize(pr.x.select_rows(base.folds[f].train_rows)).transform;
        EXPECT_EQ(direct, base.folds[f].transform);
    }
}

TEST_F(NestedCvTest, GlobalStandardizationVariant) {
    cfg.standardize_within_fold = false;
    const auto rep = nested_cv(pr.x, pr.y, cfg, 2020);
    const auto global = standardize(pr.x).transform;
    for (const auto& f : rep.folds) EXPECT_EQ(f.transform, global);
}
