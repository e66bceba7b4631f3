#include "driftlag/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "driftlag/error.hpp"
#include "driftlag/rng.hpp"

namespace driftlag::lasso {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw Error(ErrorCode::RaggedInput, "row " + std::to_string(r));
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(rows.size(), cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        for (std::size_t i = 0; i < rows.size(); ++i) out(i, c) = (*this)(rows[i], c);
    }
    return out;
}

std::vector<double> select(std::span<const double> v, std::span<const std::size_t> rows) {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = v[rows[i]];
    return out;
}

Matrix Standardization::apply(const Matrix& x) const {
    if (x.cols() != mean.size()) throw Error(ErrorCode::LengthMismatch, "standardization column count");
    Matrix out(x.rows(), x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        if (constant[c]) continue;
        for (std::size_t r = 0; r < x.rows(); ++r) out(r, c) = (x(r, c) - mean[c]) / sd[c];
    }
    return out;
}

Standardized standardize(const Matrix& x) {
    if (x.rows() < 2) throw Error(ErrorCode::TooShort, "standardization needs at least two rows");
    Standardization t;
    const double n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const auto col = x.col(c);
        const double mu = std::accumulate(col.begin(), col.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : col) ss += (v - mu) * (v - mu);
        const double sd = std::sqrt(ss / n);
        t.mean.push_back(mu);
        t.sd.push_back(sd);
        // relative test so columns equal up to rounding count as constant
        t.constant.push_back(!(sd > 1e-12 * std::max(1.0, std::fabs(mu))));
    }
    Matrix z = t.apply(x);
    return {std::move(z), std::move(t)};
}

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

std::vector<double> LassoModel::predict(const Matrix& x) const {
    if (x.cols() != coefficients.size()) throw Error(ErrorCode::LengthMismatch, "predict column count");
    std::vector<double> out(x.rows(), intercept);
    for (std::size_t c = 0; c < x.cols(); ++c) {
        if (coefficients[c] == 0.0) continue;
        const auto col = x.col(c);
        for (std::size_t r = 0; r < x.rows(); ++r) out[r] += coefficients[c] * col[r];
    }
    return out;
}

namespace {

void check_finite(const Matrix& x, std::span<const double> y) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (double v : x.col(c)) {
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "feature matrix");
        }
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "targets");
    }
}

}  // namespace

LassoModel lasso_fit(const Matrix& x, std::span<const double> y, double lambda, const FitOptions& opts) {
    if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "rows vs targets");
    if (x.rows() == 0) throw Error(ErrorCode::EmptyInput, "no rows");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::OutOfRange, "lambda must be >= 0");
    if (!(opts.tol > 0.0)) throw Error(ErrorCode::OutOfRange, "tol must be positive");
    check_finite(x, y);

    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> col_scale(p);
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (double v : x.col(j)) s += v * v;
        col_scale[j] = s * inv_n;
    }

    LassoModel m;
    m.lambda = lambda;
    m.coefficients.assign(p, 0.0);
    // same arithmetic as lambda_max so that lambda == lambda_max gives exact zeros
    m.intercept = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - m.intercept;

    for (m.n_iter = 0; m.n_iter < opts.max_sweeps;) {
        ++m.n_iter;
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (col_scale[j] == 0.0) continue;
            const auto col = x.col(j);
            const double old = m.coefficients[j];
            double rho = 0.0;
            for (std::size_t i = 0; i < n; ++i) rho += col[i] * r[i];
            rho = rho / static_cast<double>(n) + col_scale[j] * old;
            const double updated = soft_threshold(rho, lambda) / col_scale[j];
            const double change = updated - old;
            if (change != 0.0) {
                for (std::size_t i = 0; i < n; ++i) r[i] -= col[i] * change;
                m.coefficients[j] = updated;
                max_change = std::max(max_change, std::fabs(change));
            }
        }
        // intercept: exact minimiser given the coefficients
        const double shift = std::accumulate(r.begin(), r.end(), 0.0) * inv_n;
        if (shift != 0.0) {
            m.intercept += shift;
            for (auto& v : r) v -= shift;
            max_change = std::max(max_change, std::fabs(shift));
        }
        if (max_change < opts.tol) {
            m.converged = true;
            break;
        }
    }
    return m;
}

double lasso_objective(const Matrix& x, std::span<const double> y, const LassoModel& model) {
    const auto pred = model.predict(x);
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sse += (y[i] - pred[i]) * (y[i] - pred[i]);
    double l1 = 0.0;
    for (double b : model.coefficients) l1 += std::fabs(b);
    return sse / (2.0 * static_cast<double>(y.size())) + model.lambda * l1;
}

double lambda_max(const Matrix& x, std::span<const double> y) {
    if (x.rows() != y.size() || y.empty()) throw Error(ErrorCode::LengthMismatch, "rows vs targets");
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double best = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const auto col = x.col(j);
        double g = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) g += col[i] * (y[i] - ybar);
        best = std::max(best, std::fabs(g) / static_cast<double>(y.size()));
    }
    return best;
}

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k == 0 || n < k) throw Error(ErrorCode::TooShort, std::to_string(n) + " rows cannot fill " + std::to_string(k) + " folds");
    auto eng = rng::Engine(seed);
    const auto perm = rng::permutation(n, eng);
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos), perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
        std::sort(folds[f].begin(), folds[f].end());
        pos += size;
    }
    return folds;
}

namespace {

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& taken) {
    std::vector<bool> mask(n, false);
    for (auto i : taken) mask[i] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) out.push_back(i);
    }
    return out;
}

struct InnerFold {
    Matrix x_train;
    std::vector<double> y_train;
    Matrix x_val;
    std::vector<double> y_val;
};

std::vector<InnerFold> inner_folds(const Matrix& x, std::span<const double> y, const SearchConfig& cfg,
                                   std::uint64_t seed) {
    if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "rows vs targets");
    if (x.rows() < std::max<std::size_t>(3, cfg.k_inner)) {
        throw Error(ErrorCode::TooShort, "lambda search needs at least " + std::to_string(std::max<std::size_t>(3, cfg.k_inner)) + " rows");
    }
    if (cfg.n_draws == 0 || !(cfg.lambda_hi >= cfg.lambda_lo) || cfg.lambda_lo < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "bad lambda search range");
    }
    std::vector<InnerFold> out;
    for (const auto& val_rows : kfold_partition(x.rows(), cfg.k_inner, rng::substream_seed(seed, "inner-folds"))) {
        const auto train_rows = complement(x.rows(), val_rows);
        const auto st = standardize(x.select_rows(train_rows));
        out.push_back({st.x, select(y, train_rows), st.transform.apply(x.select_rows(val_rows)), select(y, val_rows)});
    }
    return out;
}

std::vector<double> draw_lambdas(const SearchConfig& cfg, std::uint64_t seed) {
    auto eng = rng::substream(seed, "lambda-draws");
    std::vector<double> draws(cfg.n_draws);
    for (auto& d : draws) d = cfg.lambda_lo + (cfg.lambda_hi - cfg.lambda_lo) * rng::uniform01(eng);
    return draws;
}

double cv_score(const std::vector<InnerFold>& folds, double lambda, const SearchConfig& cfg) {
    double total = 0.0;
    for (const auto& f : folds) {
        const auto model = lasso_fit(f.x_train, f.y_train, lambda, cfg.fit);
        const auto pred = model.predict(f.x_val);
        double err = 0.0;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            const double d = f.y_val[i] - pred[i];
            err += cfg.metric == CvMetric::MeanSquaredError ? d * d : std::fabs(d);
        }
        total += err / static_cast<double>(pred.size());
    }
    return total / static_cast<double>(folds.size());
}

void pick_best(LambdaSearchResult& res) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.draws.size(); ++i) {
        if (res.scores[i] < res.scores[best] || (res.scores[i] == res.scores[best] && res.draws[i] < res.draws[best])) {
            best = i;
        }
    }
    res.best_lambda = res.draws[best];
    res.best_score = res.scores[best];
}

}  // namespace

LambdaSearchResult lambda_search(const Matrix& x, std::span<const double> y, const SearchConfig& cfg,
                                 std::uint64_t seed) {
    const auto folds = inner_folds(x, y, cfg, seed);
    LambdaSearchResult res;
    res.draws = draw_lambdas(cfg, seed);
    res.scores.assign(res.draws.size(), 0.0);
    const auto n = static_cast<long>(res.draws.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) {
        res.scores[static_cast<std::size_t>(i)] = cv_score(folds, res.draws[static_cast<std::size_t>(i)], cfg);
    }
    pick_best(res);
    return res;
}

LambdaSearchResult lambda_search_reference(const Matrix& x, std::span<const double> y, const SearchConfig& cfg,
                                           std::uint64_t seed) {
    const auto folds = inner_folds(x, y, cfg, seed);
    LambdaSearchResult res;
    res.draws = draw_lambdas(cfg, seed);
    res.best_score = std::numeric_limits<double>::infinity();
    for (double lambda : res.draws) {
        const double score = cv_score(folds, lambda, cfg);
        res.scores.push_back(score);
        if (score < res.best_score || (score == res.best_score && lambda < res.best_lambda)) {
            res.best_score = score;
            res.best_lambda = lambda;
        }
    }
    return res;
}

Metrics metrics(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size()) throw Error(ErrorCode::LengthMismatch, "metrics inputs differ in length");
    if (y_true.size() < 2) throw Error(ErrorCode::TooShort, "metrics need at least two points");
    const double n = static_cast<double>(y_true.size());
    const double mean = std::accumulate(y_true.begin(), y_true.end(), 0.0) / n;
    double abs_sum = 0.0, sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_true[i] - y_pred[i];
        abs_sum += std::fabs(d);
        sse += d * d;
        sst += (y_true[i] - mean) * (y_true[i] - mean);
    }
    Metrics m{abs_sum / n, std::sqrt(sse / n), std::nullopt};
    if (sst > 0.0) m.r2 = 1.0 - sse / sst;
    return m;
}

std::vector<double> average_coefficients(const std::vector<std::vector<double>>& per_fold) {
    if (per_fold.empty()) throw Error(ErrorCode::EmptyInput, "no coefficient vectors");
    std::vector<double> out(per_fold.front().size(), 0.0);
    for (const auto& v : per_fold) {
        if (v.size() != out.size()) throw Error(ErrorCode::RaggedInput, "coefficient vectors differ in length");
        for (std::size_t j = 0; j < v.size(); ++j) out[j] += v[j];
    }
    for (auto& v : out) v /= static_cast<double>(per_fold.size());
    return out;
}

NestedCvReport nested_cv(const Matrix& x, std::span<const double> y, const NestedCvConfig& cfg, std::uint64_t seed) {
    if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "rows vs targets");
    if (x.rows() < cfg.k_outer || x.rows() < 5) throw Error(ErrorCode::TooShort, "nested CV needs at least 5 rows");

    NestedCvReport rep;
    rep.seed = seed;
    rep.fold_of_row.assign(x.rows(), 0);
    rep.predictions.assign(x.rows(), 0.0);

    // replication variant: one transform over every row
    std::optional<Standardized> global;
    if (!cfg.standardize_within_fold) global = standardize(x);

    const auto outer = kfold_partition(x.rows(), cfg.k_outer, rng::substream_seed(seed, "outer-folds"));
    std::vector<std::vector<double>> coefs;
    double intercept_sum = 0.0;
    for (std::size_t f = 0; f < outer.size(); ++f) {
        FoldRecord rec;
        rec.test_rows = outer[f];
        rec.train_rows = complement(x.rows(), rec.test_rows);
        for (auto r : rec.test_rows) rep.fold_of_row[r] = f;

        Matrix x_train, x_test;
        if (global) {
            rec.transform = global->transform;
            x_train = global->x.select_rows(rec.train_rows);
            x_test = global->x.select_rows(rec.test_rows);
        } else {
            auto st = standardize(x.select_rows(rec.train_rows));
            rec.transform = st.transform;
            x_train = std::move(st.x);
            x_test = rec.transform.apply(x.select_rows(rec.test_rows));
        }
        const auto y_train = select(y, rec.train_rows);

        rec.lambda = lambda_search(x.select_rows(rec.train_rows), y_train, cfg.search,
                                   rng::substream_seed(seed, "lambda-search", f))
                         .best_lambda;
        const auto model = lasso_fit(x_train, y_train, rec.lambda, cfg.search.fit);
        rec.coefficients = model.coefficients;
        rec.intercept = model.intercept;
        rec.converged = model.converged;
        const auto pred = model.predict(x_test);
        for (std::size_t i = 0; i < rec.test_rows.size(); ++i) rep.predictions[rec.test_rows[i]] = pred[i];

        coefs.push_back(rec.coefficients);
        intercept_sum += rec.intercept;
        rep.folds.push_back(std::move(rec));
    }
    rep.metrics = metrics(y, rep.predictions);
    rep.avg_coefficients = average_coefficients(coefs);
    rep.avg_intercept = intercept_sum / static_cast<double>(outer.size());
    return rep;
}

}  // namespace driftlag::lasso
