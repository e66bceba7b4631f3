#include "driftlag/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"

#include "driftlag/csv.hpp"
#include "driftlag/error.hpp"

namespace driftlag::report {

namespace fs = std::filesystem;

DetectInputs DetectInputs::load(const config::RunConfig& cfg) {
    DetectInputs in;
    AliasMap aliases;
    if (!cfg.aliases_path.empty()) aliases = load_aliases(csv::read_file(cfg.aliases_path));
    const AliasMap* alias_ptr = cfg.aliases_path.empty() ? nullptr : &aliases;

    if (cfg.cases_paths.empty()) throw Error(ErrorCode::InvalidArgument, "no case files given");
    for (const auto& p : cfg.cases_paths) in.cases.merge(parse_jhu(csv::read_file(p), Measure::Cases, alias_ptr));
    for (const auto& p : cfg.deaths_paths) {
        const auto text = csv::read_file(p);
        in.deaths.merge(parse_jhu(text, Measure::Deaths, alias_ptr));
        in.populations.merge(parse_jhu_us_population(text, alias_ptr));
    }
    if (cfg.npis_path.empty()) throw Error(ErrorCode::InvalidArgument, "no intervention file given");
    in.events = load_interventions(csv::read_file(cfg.npis_path), alias_ptr);
    if (!cfg.meta_path.empty()) in.meta = load_region_meta(csv::read_file(cfg.meta_path), alias_ptr);
    return in;
}

std::vector<RegionId> select_regions(const DetectInputs& in, const config::RunConfig& cfg) {
    std::vector<RegionId> out;
    for (const auto& name : cfg.countries) out.push_back({name, RegionKind::Country});
    if (cfg.include_us_states) {
        SeriesMap states;
        for (const auto& [id, s] : in.cases) {
            if (id.kind == RegionKind::UsState) states.emplace(id, s);
        }
        for (auto& id : regions_above(states, cfg.us_min_cumulative, cfg.us_cutoff)) out.push_back(std::move(id));
    }
    if (!cfg.regions.empty()) {
        const std::set<std::string> keep(cfg.regions.begin(), cfg.regions.end());
        std::erase_if(out, [&](const RegionId& id) { return !keep.contains(id.name); });
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.name != b.name ? a.name < b.name : a.kind < b.kind;
    });
    return out;
}

RegionReport detect_region(const RegionId& region, const DetectInputs& in, const config::RunConfig& cfg) {
    RegionReport rep;
    rep.region = region;
    rep.events = events_for(in.events, region.name);
    try {
        const auto cases = in.cases.find(region);
        if (cases == in.cases.end()) throw Error(ErrorCode::InsufficientData, "no case data for " + region.name);
        rep.daily = to_daily(cases->second);

        std::optional<std::int64_t> population;
        if (auto m = in.meta.find(region.name); m != in.meta.end()) population = m->second.population;
        else if (auto p = in.populations.find(region.name); p != in.populations.end() && p->second > 0) population = p->second;
        if (auto d = in.deaths.find(region); d != in.deaths.end() && population) {
            rep.threshold_date = death_threshold_date(d->second, *population, cfg.death_per_capita);
        }

        pipeline::PipelineConfig pc;
        pc.window_offset_days = cfg.window_offset_days;
        pc.init = cfg.init;
        pc.pht = cfg.pht;
        rep.run = pipeline::run_region(rep.daily, rep.events, pc);
        rep.drift_date = rep.run->drift.drift_date;
        if (!rep.drift_date) throw Error(ErrorCode::NoDrift, "no drift detected");
        rep.lags = lag::compute_lags(rep.drift_date, rep.events);
    } catch (const Error& e) {
        rep.exclusion = std::string(to_string(e.code()));
    } catch (const std::exception& e) {
        rep.exclusion = std::string("Failure: ") + e.what();
    }
    return rep;
}

std::vector<RegionReport> run_detect(const DetectInputs& in, const config::RunConfig& cfg) {
    const auto regions = select_regions(in, cfg);
    std::vector<RegionReport> out(regions.size());
    const auto n = static_cast<long>(regions.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = detect_region(regions[static_cast<std::size_t>(i)], in, cfg);
    }
    return out;
}

std::vector<RegionReport> run_detect_reference(const DetectInputs& in, const config::RunConfig& cfg) {
    std::vector<RegionReport> out;
    for (const auto& r : select_regions(in, cfg)) out.push_back(detect_region(r, in, cfg));
    return out;
}

std::string file_stem(const std::string& region) {
    std::string out;
    for (unsigned char c : region) out.push_back(std::isalnum(c) || c == '-' ? static_cast<char>(c) : '_');
    return out;
}

namespace {

std::string echo_header(const config::RunConfig& cfg) {
    std::string out;
    for (const auto& line : cfg.echo()) out += "# " + line + "\n";
    return out;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string opt_date(const std::optional<Date>& d) { return d ? d->iso() : std::string(); }

}  // namespace

chart::ChartInput chart_input(const RegionReport& rep, const config::RunConfig& cfg) {
    chart::ChartInput ci;
    ci.title = rep.region.name + ": daily cases, model, interventions and drift";
    ci.events = rep.events;
    ci.threshold_date = rep.threshold_date;
    ci.drift_date = rep.drift_date;
    ci.metadata = cfg.echo();
    if (rep.daily.values.empty()) return ci;

    // start two weeks before the earliest marker, like a zoom on the outbreak
    Date first = rep.daily.end_date();
    for (const auto& e : rep.events) first = std::min(first, e.date);
    if (rep.threshold_date) first = std::min(first, *rep.threshold_date);
    first = std::max(first - 14, rep.daily.start_date);
    ci.actuals = rep.daily.slice(first, rep.daily.end_date());

    if (rep.run) {
        const auto& run = *rep.run;
        const auto fitted = forecast::fit(forecast::floor_counts(run.window.series.values), run.params,
                                          run.window.series.start_date, cfg.init);
        ci.model.start_date = fitted.one_step.start_date;
        ci.model.values = fitted.one_step.values;
        ci.model.values.insert(ci.model.values.end(), run.forecast.values.begin(), run.forecast.values.end());
    }
    return ci;
}

DetectFiles render_detect_outputs(const std::vector<RegionReport>& reports, const config::RunConfig& cfg) {
    DetectFiles f;
    const auto header = echo_header(cfg);

    f.lags_csv = header + "region,kind,npi_date,drift_date,lag_days\n";
    std::vector<lag::LagRecord> all;
    for (const auto& r : reports) {
        for (const auto& l : r.lags) {
            f.lags_csv += csv::escape(l.region) + "," + std::string(to_string(l.kind)) + "," + l.npi_date.iso() + "," +
                          l.drift_date.iso() + "," + std::to_string(l.lag_days) + "\n";
            all.push_back(l);
        }
    }

    f.lag_summary_csv = header + "kind,mean_days,sd_days,n\n";
    if (!all.empty()) {
        for (const auto& s : lag::summarize_lags(all)) {
            f.lag_summary_csv += std::string(to_string(s.kind)) + "," + fixed(s.mean_days, 2) + "," +
                                 fixed(s.sd_days, 2) + "," + std::to_string(s.n) + "\n";
        }
    }

    f.mask_report_csv = header + "region,drift_date,mask_date,days_after_drift\n";
    for (const auto& r : reports) {
        if (!r.drift_date) continue;
        for (const auto& e : r.events) {
            if (e.kind != InterventionKind::MaskWearing) continue;
            f.mask_report_csv += csv::escape(r.region.name) + "," + r.drift_date->iso() + "," + e.date.iso() + "," +
                                 std::to_string(e.date - *r.drift_date) + "\n";
        }
    }

    f.regions_csv = header + "region,region_kind,train_start,train_end,alpha,beta,gamma,drift_date,threshold_date,exclusion\n";
    for (const auto& r : reports) {
        f.regions_csv += csv::escape(r.region.name) + "," + (r.region.kind == RegionKind::Country ? "country" : "us_state");
        if (r.run) {
            f.regions_csv += "," + r.run->window.series.start_date.iso() + "," + r.run->window.end_date.iso() + "," +
                             fixed(r.run->params.alpha, 1) + "," + fixed(r.run->params.beta, 1) + "," +
                             fixed(r.run->params.gamma, 1);
        } else {
            f.regions_csv += ",,,,,";
        }
        f.regions_csv += "," + opt_date(r.drift_date) + "," + opt_date(r.threshold_date) + "," +
                         csv::escape(r.exclusion.value_or("")) + "\n";

        const auto stem = file_stem(r.region.name);
        if (r.run) f.traces[stem] = header + drift::trace_csv(r.run->drift);
        if (r.drift_date) f.charts[stem] = chart::render_svg(chart_input(r, cfg));
    }
    return f;
}

void write_detect_outputs(const DetectFiles& files, const std::string& out_dir) {
    fs::create_directories(fs::path(out_dir) / "traces");
    fs::create_directories(fs::path(out_dir) / "charts");
    csv::write_file((fs::path(out_dir) / "lags.csv").string(), files.lags_csv);
    csv::write_file((fs::path(out_dir) / "lag_summary.csv").string(), files.lag_summary_csv);
    csv::write_file((fs::path(out_dir) / "mask_report.csv").string(), files.mask_report_csv);
    csv::write_file((fs::path(out_dir) / "regions.csv").string(), files.regions_csv);
    for (const auto& [stem, text] : files.traces) {
        csv::write_file((fs::path(out_dir) / "traces" / (stem + ".csv")).string(), text);
    }
    for (const auto& [stem, text] : files.charts) {
        csv::write_file((fs::path(out_dir) / "charts" / (stem + ".svg")).string(), text);
    }
}

namespace {

std::map<std::string, std::size_t> column_index(const csv::Row& header) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < header.size(); ++i) idx[std::string(csv::trim(header[i]))] = i;
    return idx;
}

std::size_t require(const std::map<std::string, std::size_t>& idx, const std::string& col) {
    auto it = idx.find(col);
    if (it == idx.end()) throw Error(ErrorCode::MissingColumn, col);
    return it->second;
}

std::optional<Date> maybe_date(std::string_view s) {
    s = csv::trim(s);
    if (s.empty()) return std::nullopt;
    return Date::parse_iso(s);
}

}  // namespace

DetectSummary parse_detect_outputs(const std::string& regions_csv, const std::string& lags_csv) {
    DetectSummary out;
    const auto regions = csv::parse(regions_csv);
    if (regions.empty()) throw Error(ErrorCode::MissingColumn, "regions.csv is empty");
    const auto ri = column_index(regions.front());
    const auto c_region = require(ri, "region");
    const auto c_drift = require(ri, "drift_date");
    const auto c_thr = require(ri, "threshold_date");
    for (std::size_t r = 1; r < regions.size(); ++r) {
        const auto& row = regions[r];
        if (row.size() != regions.front().size()) throw Error(ErrorCode::RaggedInput, "regions.csv row " + std::to_string(r));
        out.outcomes.push_back({row[c_region], maybe_date(row[c_drift]), maybe_date(row[c_thr])});
    }

    const auto lags = csv::parse(lags_csv);
    if (lags.empty()) throw Error(ErrorCode::MissingColumn, "lags.csv is empty");
    const auto li = column_index(lags.front());
    const auto l_region = require(li, "region");
    const auto l_kind = require(li, "kind");
    const auto l_date = require(li, "npi_date");
    for (std::size_t r = 1; r < lags.size(); ++r) {
        const auto& row = lags[r];
        if (row.size() != lags.front().size()) throw Error(ErrorCode::RaggedInput, "lags.csv row " + std::to_string(r));
        out.events.push_back({row[l_region], parse_intervention_kind(row[l_kind]), Date::parse_iso(row[l_date])});
    }
    return out;
}

DetectSummary read_detect_outputs(const std::string& dir) {
    return parse_detect_outputs(csv::read_file((fs::path(dir) / "regions.csv").string()),
                                csv::read_file((fs::path(dir) / "lags.csv").string()));
}

RegressResult run_regress(const DetectSummary& detect, const std::map<std::string, RegionMeta>& meta,
                          const config::RunConfig& cfg) {
    RegressResult res;
    std::vector<lag::RegionOutcome> kept;
    for (const auto& o : detect.outcomes) {
        if (o.drift_date && o.threshold_date && !meta.contains(o.region)) {
            res.missing_meta[o.region] = "no metadata row";
        } else {
            kept.push_back(o);
        }
    }
    res.dataset = lag::regression_dataset(kept, detect.events, meta);
    const auto x = lasso::Matrix::from_rows(res.dataset.features);
    res.cv = lasso::nested_cv(x, res.dataset.target, cfg.cv, cfg.seed);
    return res;
}

std::string regression_json(const RegressResult& res, const config::RunConfig& cfg) {
    using nlohmann::ordered_json;
    ordered_json j;
    ordered_json conf = ordered_json::object();
    for (const auto& line : cfg.echo()) {
        const auto eq = line.find(" = ");
        conf[line.substr(0, eq)] = line.substr(eq + 3);
    }
    j["config"] = conf;
    j["seed"] = res.cv.seed;
    j["objective"] = "(1/(2n))*||y - b0 - X b||^2 + lambda*||b||_1 on standardized features";
    j["target"] = "drift_date - death_threshold_date [days]";
    j["design_shape"] = {res.dataset.features.size(), res.dataset.feature_names.size()};
    j["feature_names"] = res.dataset.feature_names;
    j["regions"] = res.dataset.regions;

    ordered_json excluded = ordered_json::object();
    for (const auto& [k, v] : res.dataset.excluded) excluded[k] = v;
    for (const auto& [k, v] : res.missing_meta) excluded[k] = v;
    j["excluded"] = excluded;

    ordered_json folds = ordered_json::array();
    ordered_json lambdas = ordered_json::array();
    ordered_json per_fold = ordered_json::array();
    for (const auto& f : res.cv.folds) {
        folds.push_back(f.test_rows);
        lambdas.push_back(f.lambda);
        per_fold.push_back({{"lambda", f.lambda},
                            {"intercept", f.intercept},
                            {"coefficients", f.coefficients},
                            {"converged", f.converged}});
    }
    j["outer_folds"] = folds;
    j["per_fold_lambda"] = lambdas;
    j["per_fold"] = per_fold;
    j["avg_coefficients"] = res.cv.avg_coefficients;
    j["avg_intercept"] = res.cv.avg_intercept;

    ordered_json preds = ordered_json::array();
    for (std::size_t i = 0; i < res.dataset.regions.size(); ++i) {
        preds.push_back({{"region", res.dataset.regions[i]},
                         {"fold", res.cv.fold_of_row[i]},
                         {"y_true", res.dataset.target[i]},
                         {"y_pred", res.cv.predictions[i]}});
    }
    j["predictions"] = preds;
    j["metrics"] = {{"mae", res.cv.metrics.mae},
                    {"rmse", res.cv.metrics.rmse},
                    {"r2", res.cv.metrics.r2 ? ordered_json(*res.cv.metrics.r2) : ordered_json(nullptr)}};
    return j.dump(2) + "\n";
}

std::string summary_text(const std::string& dir) {
    std::ostringstream out;
    const auto regions = csv::parse(csv::read_file((fs::path(dir) / "regions.csv").string()));
    if (regions.empty()) throw Error(ErrorCode::MissingColumn, "regions.csv is empty");
    const auto idx = column_index(regions.front());
    const auto c_region = require(idx, "region");
    const auto c_drift = require(idx, "drift_date");
    const auto c_thr = require(idx, "threshold_date");
    const auto c_excl = require(idx, "exclusion");
    std::size_t detected = 0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-24s %-12s %-12s %s\n", "region", "drift", "threshold", "exclusion");
    out << buf;
    for (std::size_t r = 1; r < regions.size(); ++r) {
        const auto& row = regions[r];
        if (!row[c_drift].empty()) ++detected;
        std::snprintf(buf, sizeof buf, "%-24s %-12s %-12s %s\n", row[c_region].c_str(), row[c_drift].c_str(),
                      row[c_thr].c_str(), row[c_excl].c_str());
        out << buf;
    }
    out << "\n" << detected << " of " << regions.size() - 1 << " regions with a detected drift\n\n";

    const auto summary = csv::parse(csv::read_file((fs::path(dir) / "lag_summary.csv").string()));
    out << "lag between intervention and drift [days]\n";
    for (std::size_t r = 1; r < summary.size(); ++r) {
        const auto& row = summary[r];
        if (row.size() < 4) continue;
        std::snprintf(buf, sizeof buf, "  %-24s mean %8s  sd %8s  n %s\n", row[0].c_str(), row[1].c_str(),
                      row[2].c_str(), row[3].c_str());
        out << buf;
    }
    return out.str();
}

}  // namespace driftlag::report
