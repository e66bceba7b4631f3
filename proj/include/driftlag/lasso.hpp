#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace driftlag::lasso {

/// Dense column-major matrix; columns are the unit of work in coordinate descent.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Throws RaggedInput when rows differ in length.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
    std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }
    std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }

    Matrix select_rows(std::span<const std::size_t> rows) const;

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

std::vector<double> select(std::span<const double> v, std::span<const std::size_t> rows);

/// Per-column affine transform learned from training rows.
struct Standardization {
    std::vector<double> mean;
    std::vector<double> sd;         // population sd
    std::vector<bool> constant;     // zero-variance columns map to 0

    Matrix apply(const Matrix& x) const;
    bool operator==(const Standardization&) const = default;
};

struct Standardized {
    Matrix x;
    Standardization transform;
};

/// Zero mean, unit (population) variance per column; constant columns become zeros and are flagged.
Standardized standardize(const Matrix& x);

double soft_threshold(double z, double gamma);

struct FitOptions {
    double tol = 1e-8;
    std::size_t max_sweeps = 10000;
};

struct LassoModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    double lambda = 0.0;
    std::size_t n_iter = 0;
    bool converged = false;

    std::vector<double> predict(const Matrix& x) const;
};

/// Minimises (1/(2n))||y - b0 - X b||^2 + lambda ||b||_1 by cyclic coordinate
/// descent with an unpenalised intercept.
LassoModel lasso_fit(const Matrix& x, std::span<const double> y, double lambda, const FitOptions& opts = {});

double lasso_objective(const Matrix& x, std::span<const double> y, const LassoModel& model);

/// Smallest penalty giving the all-zero solution on centred columns: max_j |x_j'(y - mean y)| / n.
double lambda_max(const Matrix& x, std::span<const double> y);

enum class CvMetric { MeanSquaredError, MeanAbsoluteError };

struct SearchConfig {
    std::size_t k_inner = 3;
    std::size_t n_draws = 500;
    double lambda_lo = 0.0;
    double lambda_hi = 5.0;
    CvMetric metric = CvMetric::MeanSquaredError;
    FitOptions fit;
};

struct LambdaSearchResult {
    double best_lambda = 0.0;
    double best_score = 0.0;
    std::vector<double> draws;
    std::vector<double> scores;  // mean inner-validation error per draw
};

/// Random search: `n_draws` uniform penalties, each scored by k-fold CV on the
/// given rows (standardisation refit inside every inner fold). Ties go to the
/// smaller penalty. Draws are scored in parallel with OpenMP.
LambdaSearchResult lambda_search(const Matrix& x, std::span<const double> y, const SearchConfig& cfg,
                                 std::uint64_t seed);
/// Serial reference for lambda_search.
LambdaSearchResult lambda_search_reference(const Matrix& x, std::span<const double> y, const SearchConfig& cfg,
                                           std::uint64_t seed);

/// Near-equal folds over a seeded permutation of 0..n-1; the first n % k folds get one extra row.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t k, std::uint64_t seed);

struct Metrics {
    double mae = 0.0;
    double rmse = 0.0;
    std::optional<double> r2;  // undefined when y_true has no variance
};

Metrics metrics(std::span<const double> y_true, std::span<const double> y_pred);

/// Elementwise mean of equally sized vectors.
std::vector<double> average_coefficients(const std::vector<std::vector<double>>& per_fold);

struct NestedCvConfig {
    std::size_t k_outer = 5;
    SearchConfig search;
    /// When false, standardisation is fit once on all rows (replication variant).
    bool standardize_within_fold = true;
};

struct FoldRecord {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    double lambda = 0.0;
    Standardization transform;
    std::vector<double> coefficients;
    double intercept = 0.0;
    bool converged = false;

    bool operator==(const FoldRecord&) const = default;
};

struct NestedCvReport {
    std::uint64_t seed = 0;
    std::vector<std::size_t> fold_of_row;
    std::vector<FoldRecord> folds;
    std::vector<double> predictions;  // out-of-fold, one per row
    Metrics metrics;
    std::vector<double> avg_coefficients;
    double avg_intercept = 0.0;
};

NestedCvReport nested_cv(const Matrix& x, std::span<const double> y, const NestedCvConfig& cfg, std::uint64_t seed);

}  // namespace driftlag::lasso
