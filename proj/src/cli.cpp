#include "gridcast/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gridcast/distributions.hpp"
#include "gridcast/grid_search.hpp"
#include "gridcast/market.hpp"
#include "gridcast/pipeline.hpp"

namespace gridcast {

namespace fs = std::filesystem;

std::uint64_t stream_seed(std::uint64_t base, const std::string& stream) {
    // FNV-1a over the stream name, folded into the base seed
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : stream) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return base ^ h;
}

namespace {

const std::vector<std::string> kOfflineKinds = {
    "linear", "ridge",       "lasso", "elastic_net", "knn",
    "tree",   "random_forest", "extra_trees", "adaboost", "gradient_boosting",
    "svr",    "mlp"};
const std::vector<std::string> kOnlineKinds = {
    "online_linear", "passive_aggressive", "boxcox_linear", "online_mlp"};

void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) fail("IoError", "cannot write " + path.string());
    out << content;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail("IoError", "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string config_hash(const nlohmann::json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

// the timestamp is isolated to its own line so reruns differ in one line only
std::string manifest(const std::string& command, std::uint64_t seed,
                     const nlohmann::json& config) {
    std::ostringstream out;
    out << "command=" << command << "\n";
    out << "seed=" << seed << "\n";
    out << "config_hash=" << config_hash(config) << "\n";
    out << "code_version=0.1.0\n";
    const auto now = std::chrono::system_clock::now();
    out << "timestamp=" << std::chrono::duration_cast<std::chrono::seconds>(
                               now.time_since_epoch())
                               .count()
        << "\n";
    return out.str();
}

std::string series_csv(const DemandSeries& series) {
    std::ostringstream out;
    out << "timestamp,demand\n";
    out << std::setprecision(17);
    for (const auto& r : series.records)
        out << format_timestamp(r.time) << "," << r.demand_mwh << "\n";
    return out.str();
}

struct ResidualRows {
    std::vector<Date> dates;
    std::vector<int> hours;
    std::vector<double> actuals, predictions, residuals;
};

std::string residual_csv(const ResidualRows& rows) {
    std::ostringstream out;
    out << "date,hour,actual_mwh,predicted_mwh,residual_mwh\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < rows.residuals.size(); ++i)
        out << format_date(rows.dates[i]) << "," << rows.hours[i] << ","
            << rows.actuals[i] << "," << rows.predictions[i] << ","
            << rows.residuals[i] << "\n";
    return out.str();
}

ResidualRows parse_residual_csv(const std::string& text) {
    ResidualRows rows;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) fail("InvalidArgument", "empty residual file");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string date, field;
        std::getline(ls, date, ',');
        std::getline(ls, field, ',');
        const int hour = std::stoi(field);
        std::getline(ls, field, ',');
        const double actual = std::stod(field);
        std::getline(ls, field, ',');
        const double pred = std::stod(field);
        std::getline(ls, field, ',');
        rows.dates.push_back(parse_date(date));
        rows.hours.push_back(hour);
        rows.actuals.push_back(actual);
        rows.predictions.push_back(pred);
        rows.residuals.push_back(std::stod(field));
    }
    return rows;
}

DemandSeries load_series_from_config(const nlohmann::json& data,
                                     const std::string& series_override) {
    if (!series_override.empty()) {
        ColumnMap cols;
        auto s = ingest_demand_csv(series_override, cols);
        if (data.contains("holidays"))
            s.holidays = load_holidays(data.at("holidays").get<std::string>());
        return s;
    }
    if (data.contains("csv")) {
        ColumnMap cols;
        cols.timestamp = data.value("timestamp_column", std::string("timestamp"));
        cols.demand = data.value("demand_column", std::string("demand"));
        cols.timestamp_format = data.value("timestamp_format", std::string());
        auto s = ingest_demand_csv(data.at("csv").get<std::string>(), cols);
        if (data.contains("holidays"))
            s.holidays = load_holidays(data.at("holidays").get<std::string>());
        return s;
    }
    if (data.contains("synth")) {
        const auto& sj = data.at("synth");
        SynthParams p;
        p.start = parse_date(sj.value("start", std::string("2018-01-01")));
        p.n_days = sj.value("days", 365);
        p.base_mwh = sj.value("base_mwh", 30000.0);
        p.daily_amp_mwh = sj.value("daily_amp_mwh", 5000.0);
        p.weekly_amp_mwh = sj.value("weekly_amp_mwh", 2000.0);
        p.seasonal_amp_mwh = sj.value("seasonal_amp_mwh", 4000.0);
        p.noise_sd_mwh = sj.value("noise_sd_mwh", 500.0);
        p.drift_per_year_mwh = sj.value("drift_per_year_mwh", 0.0);
        p.seed = sj.value("seed", std::uint64_t{1});
        return synth_demand(p);
    }
    fail("InvalidArgument", "config field 'data' needs 'csv' or 'synth'");
}

Scenario load_scenario(const std::string& path) {
    if (path.empty() || path == "default") return default_scenario();
    return scenario_from_json(nlohmann::json::parse(read_text(path)));
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) seeds.push_back(std::stoull(tok));
    return seeds;
}

// ---------------------------- commands ----------------------------

int cmd_ingest(const std::string& csv, const std::string& ts_col,
               const std::string& demand_col, const std::string& holidays,
               const std::string& out_file, std::ostream& out) {
    ColumnMap cols;
    if (!ts_col.empty()) cols.timestamp = ts_col;
    if (!demand_col.empty()) cols.demand = demand_col;
    auto series = ingest_demand_csv(csv, cols);
    if (!holidays.empty()) series.holidays = load_holidays(holidays);
    series.validate();
    write_text(out_file, series_csv(series));
    out << "ingested " << series.records.size() << " hourly records ("
        << format_date(series.date_at(0)) << " to "
        << format_date(series.date_at(series.records.size() - 1)) << ") -> "
        << out_file << "\n";
    return 0;
}

int cmd_synth(const SynthParams& p, const std::string& out_file, std::ostream& out) {
    const auto series = synth_demand(p);
    write_text(out_file, series_csv(series));
    out << "synthesized " << series.records.size() << " hourly records -> " << out_file
        << "\n";
    return 0;
}

struct TrainFlags {
    std::string config_path, series, out_dir;
    std::int64_t seed = -1;  // <0: take the config's seed
    std::string boundary;
};

int cmd_train(const TrainFlags& flags, std::ostream& out) {
    const auto config = nlohmann::json::parse(read_text(flags.config_path));
    const auto& train = config.at("train");
    const std::uint64_t base_seed =
        flags.seed >= 0 ? static_cast<std::uint64_t>(flags.seed)
                        : train.value("seed", std::uint64_t{1});
    const std::uint64_t seed = stream_seed(base_seed, "train");
    const std::string out_dir = !flags.out_dir.empty()
                                    ? flags.out_dir
                                    : config.value("output", nlohmann::json::object())
                                          .value("dir", std::string("out"));

    const auto series =
        load_series_from_config(config.value("data", nlohmann::json::object()),
                                flags.series);
    const auto& feat = config.value("features", nlohmann::json::object());

    PipelineConfig base;
    if (feat.contains("lag_days")) {
        base.lag_days.clear();
        for (int d : feat.at("lag_days").get<std::vector<int>>()) base.lag_days.insert(d);
    }
    base.lag_window = feat.value("lag_window", 28);
    const std::string boundary =
        !flags.boundary.empty() ? flags.boundary : train.at("boundary").get<std::string>();
    base.boundary = parse_date(boundary);

    struct Row {
        std::string kind;
        MetricReport metrics;
    };
    std::vector<Row> table;
    const auto seasons = default_season_table();

    const auto& algos = train.at("algorithms");
    for (std::size_t i = 0; i < algos.size(); ++i) {
        const auto& a = algos[static_cast<nlohmann::json::size_type>(i)];
        PipelineConfig cfg = base;
        cfg.kind = a.at("kind").get<std::string>();
        cfg.params = a.value("params", nlohmann::json::object());
        cfg.online = a.value("online", false);
        const bool offline_kind = std::count(kOfflineKinds.begin(), kOfflineKinds.end(), cfg.kind) > 0;
        const bool online_kind = std::count(kOnlineKinds.begin(), kOnlineKinds.end(), cfg.kind) > 0;
        if (!cfg.online && online_kind) cfg.online = true;
        if (!offline_kind && !online_kind)
            fail("UnknownAlgorithm", "train.algorithms[" + std::to_string(i) +
                                         "].kind = '" + cfg.kind + "'");
        if (!cfg.online && !cfg.params.contains("seed")) cfg.params["seed"] = seed;
        // season one-hots sum to the intercept column, so plain least
        // squares needs the rank-tolerant solve on calendar features
        if (cfg.kind == "linear" && !cfg.params.contains("allow_singular"))
            cfg.params["allow_singular"] = true;

        const auto result = per_hour_orchestrate(series, seasons, cfg);

        for (const auto& art : result.hours) {
            std::ostringstream name;
            name << "hour_" << std::setw(2) << std::setfill('0') << art.hour << ".json";
            write_text(fs::path(out_dir) / "models" / cfg.kind / name.str(),
                       art.model.dump(2) + "\n");
        }
        ResidualRows rows;
        rows.dates = result.dates;
        rows.hours = result.pooled_hours;
        rows.actuals = result.actuals;
        rows.predictions = result.predictions;
        rows.residuals = result.residuals;
        write_text(fs::path(out_dir) / ("residuals_" + cfg.kind + ".csv"),
                   residual_csv(rows));
        table.push_back({cfg.kind, result.metrics});
    }

    std::stable_sort(table.begin(), table.end(),
                     [](const Row& a, const Row& b) { return a.metrics.mae < b.metrics.mae; });
    std::ostringstream t;
    t << "algorithm\tmae\trmse\tmse\tr2\tn\n";
    for (const auto& row : table) {
        t << row.kind << "\t" << row.metrics.mae << "\t" << row.metrics.rmse << "\t"
          << row.metrics.mse << "\t";
        if (row.metrics.r_squared)
            t << *row.metrics.r_squared;
        else
            t << "n/a";
        t << "\t" << row.metrics.n << "\n";
    }
    write_text(fs::path(out_dir) / "metrics.tsv", t.str());
    write_text(fs::path(out_dir) / "manifest.txt", manifest("train", base_seed, config));

    out << "trained " << table.size() << " algorithm(s); best " << table.front().kind
        << " mae " << table.front().metrics.mae << " MWh -> " << out_dir << "\n";
    return 0;
}

int cmd_evaluate(const std::string& residuals_path, double max_reserve,
                 double avg_reserve, const std::string& out_dir, std::ostream& out) {
    const auto rows = parse_residual_csv(read_text(residuals_path));
    if (rows.residuals.empty()) fail("InvalidArgument", "no residual rows");
    VectorXd actual(static_cast<Eigen::Index>(rows.actuals.size()));
    VectorXd pred(actual.size());
    for (Eigen::Index i = 0; i < actual.size(); ++i) {
        actual[i] = rows.actuals[static_cast<std::size_t>(i)];
        pred[i] = rows.predictions[static_cast<std::size_t>(i)];
    }
    const auto metrics = compute_metrics(actual, pred);
    const auto reserve = reserve_analysis(rows.residuals, max_reserve, avg_reserve);

    std::ostringstream t;
    t << "metric\tvalue\n";
    t << "mae\t" << metrics.mae << "\n";
    t << "rmse\t" << metrics.rmse << "\n";
    t << "mse\t" << metrics.mse << "\n";
    t << "r2\t";
    if (metrics.r_squared)
        t << *metrics.r_squared;
    else
        t << "n/a";
    t << "\n";
    t << "n\t" << metrics.n << "\n";
    write_text(fs::path(out_dir) / "evaluation_metrics.tsv", t.str());

    std::ostringstream r;
    r << "field\tvalue\n";
    r << "max_reserve_mwh\t" << reserve.max_reserve << "\n";
    r << "avg_reserve_mwh\t" << reserve.avg_reserve << "\n";
    r << "frac_within_max\t" << reserve.frac_within_max << "\n";
    r << "frac_within_avg\t" << reserve.frac_within_avg << "\n";
    r << "p5_mwh\t" << reserve.p5 << "\n";
    r << "p95_mwh\t" << reserve.p95 << "\n";
    write_text(fs::path(out_dir) / "reserve.tsv", r.str());

    out << "evaluated " << metrics.n << " steps: mae " << metrics.mae
        << " MWh, within max reserve " << reserve.frac_within_max << " -> " << out_dir
        << "\n";
    return 0;
}

int cmd_fit_residuals(const std::string& residuals_path, const std::string& families_csv,
                      const std::string& out_dir, std::ostream& out) {
    const auto rows = parse_residual_csv(read_text(residuals_path));
    std::vector<std::string> families = kResidualFamilies;
    if (!families_csv.empty()) {
        families.clear();
        std::istringstream in(families_csv);
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty()) families.push_back(tok);
    }

    std::ostringstream t;
    t << "family\tsse\tconverged\n";
    for (const auto& fam : families) {
        try {
            const auto d = fit_distribution(rows.residuals, fam);
            t << fam << "\t" << d.sse << "\t" << (d.converged ? "yes" : "no") << "\n";
        } catch (const Error& e) {
            t << fam << "\tfailed:" << e.code() << "\t-\n";
        }
    }
    const auto best = select_best(rows.residuals, families);
    write_text(fs::path(out_dir) / "residual_families.tsv", t.str());
    write_text(fs::path(out_dir) / "residual_distribution.json",
               best.to_json().dump(2) + "\n");
    out << "best family " << best.family << " (sse " << best.sse << ") over "
        << rows.residuals.size() << " residuals -> " << out_dir << "\n";
    return 0;
}

int cmd_simulate(const std::string& scenario_path, const std::string& dist_path,
                 double normal_sd, std::uint64_t base_seed, const std::string& out_dir,
                 std::ostream& out) {
    const auto sc = load_scenario(scenario_path);
    ResidualDistribution dist;
    bool has_dist = false;
    if (!dist_path.empty()) {
        dist = ResidualDistribution::from_json(nlohmann::json::parse(read_text(dist_path)));
        has_dist = true;
    } else if (normal_sd > 0.0) {
        dist.family = "normal";
        dist.params = {0.0, normal_sd};
        std::tie(dist.lower, dist.upper) =
            std::pair(-std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity());
        has_dist = true;
    }
    const std::uint64_t seed = stream_seed(base_seed, "simulate");
    const auto result = run_simulation(sc, has_dist ? &dist : nullptr, seed);

    write_text(fs::path(out_dir) / "yearly_mix.tsv", yearly_mix_table(result));
    write_text(fs::path(out_dir) / "investments.tsv", investments_table(result));
    write_text(fs::path(out_dir) / "prices.tsv", prices_table(result));
    write_text(fs::path(out_dir) / "carbon.tsv", carbon_table(result));
    nlohmann::json cfg = scenario_to_json(sc);
    cfg["perturbation"] = has_dist ? dist.to_json() : nlohmann::json(nullptr);
    write_text(fs::path(out_dir) / "manifest.txt", manifest("simulate", base_seed, cfg));

    out << "simulated " << result.years.size() << " years: total carbon "
        << result.total_carbon_tco2 << " tCO2, unserved " << result.total_unserved_mwh
        << " MWh -> " << out_dir << "\n";
    return 0;
}

int cmd_sensitivity(const std::string& scenario_path, std::vector<double> sigmas,
                    const std::vector<std::uint64_t>& seeds, int jobs,
                    const std::string& out_dir, std::ostream& out) {
    const auto sc = load_scenario(scenario_path);
    if (sigmas.empty()) sigmas = default_sweep_sigmas();

    std::vector<SweepRow> rows(sigmas.size());
    if (jobs <= 1) {
        const auto all = sensitivity_sweep(sc, sigmas, seeds);
        rows = all;
    } else {
        // sigma values are independent runs; results land in fixed slots so
        // the output is identical to the sequential order
        std::vector<std::thread> pool;
        std::size_t next = 0;
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&, w]() {
                for (std::size_t i = static_cast<std::size_t>(w); i < sigmas.size();
                     i += static_cast<std::size_t>(jobs))
                    rows[i] = sensitivity_sweep(sc, {sigmas[i]}, seeds)[0];
            });
        (void)next;
        for (auto& t : pool) t.join();
    }

    write_text(fs::path(out_dir) / "sweep.tsv", sweep_table(rows));
    nlohmann::json cfg = scenario_to_json(sc);
    cfg["sigmas"] = sigmas;
    cfg["seeds"] = seeds;
    write_text(fs::path(out_dir) / "manifest.txt",
               manifest("sensitivity", seeds.empty() ? 0 : seeds[0], cfg));
    out << "sensitivity sweep: " << rows.size() << " sigma rows x " << seeds.size()
        << " seeds -> " << out_dir << "\n";
    return 0;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir, std::ostream& out) {
    int written = 0;
    const fs::path in(in_dir), o(out_dir);

    // metrics.tsv -> long format: algorithm, metric, value
    if (fs::exists(in / "metrics.tsv")) {
        std::istringstream t(read_text(in / "metrics.tsv"));
        std::string header, line;
        std::getline(t, header);
        std::vector<std::string> cols;
        {
            std::istringstream hs(header);
            std::string c;
            while (std::getline(hs, c, '\t')) cols.push_back(c);
        }
        std::ostringstream longt;
        longt << "algorithm\tmetric\tvalue\n";
        while (std::getline(t, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::vector<std::string> f;
            std::string c;
            while (std::getline(ls, c, '\t')) f.push_back(c);
            for (std::size_t i = 1; i < f.size() && i < cols.size(); ++i)
                longt << f[0] << "\t" << cols[i] << "\t" << f[i] << "\n";
        }
        write_text(o / "metric_vs_algorithm.tsv", longt.str());
        ++written;
    }

    // sweep.tsv -> long format: sigma, technology, mean, sd
    if (fs::exists(in / "sweep.tsv")) {
        std::istringstream t(read_text(in / "sweep.tsv"));
        std::string header, line;
        std::getline(t, header);
        std::vector<std::string> cols;
        {
            std::istringstream hs(header);
            std::string c;
            while (std::getline(hs, c, '\t')) cols.push_back(c);
        }
        std::ostringstream longt;
        longt << "sigma_mw\ttechnology\tmean_mwh\tsd_mwh\n";
        while (std::getline(t, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::vector<std::string> f;
            std::string c;
            while (std::getline(ls, c, '\t')) f.push_back(c);
            for (std::size_t i = 1; i + 1 < f.size(); i += 2) {
                std::string tech = cols[i];
                const auto pos = tech.rfind("_mean");
                if (pos != std::string::npos) tech = tech.substr(0, pos);
                longt << f[0] << "\t" << tech << "\t" << f[i] << "\t" << f[i + 1]
                      << "\n";
            }
        }
        write_text(o / "mix_vs_sigma.tsv", longt.str());
        ++written;
    }

    if (written == 0) fail("InvalidArgument", "no reportable tables in " + in_dir);
    out << "report wrote " << written << " long-format table(s) -> " << out_dir << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"day-ahead demand forecasting and electricity market simulation"};
    app.name("gridcast");
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for sweeps")->capture_default_str();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate and normalize a demand CSV");
    std::string in_csv, ts_col, demand_col, holidays, out_file = "series.csv";
    ingest->add_option("--csv", in_csv, "input CSV path")->required();
    ingest->add_option("--timestamp-col", ts_col, "timestamp column name");
    ingest->add_option("--demand-col", demand_col, "demand column name");
    ingest->add_option("--holidays", holidays, "holiday list file");
    ingest->add_option("--out", out_file, "output series CSV");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic demand series");
    SynthParams sp;
    std::string synth_start = "2018-01-01", synth_out = "series.csv";
    synth->add_option("--days", sp.n_days, "number of days");
    synth->add_option("--start", synth_start, "first day (YYYY-MM-DD)");
    synth->add_option("--seed", sp.seed, "noise seed");
    synth->add_option("--base", sp.base_mwh, "base demand MWh");
    synth->add_option("--noise-sd", sp.noise_sd_mwh, "gaussian noise sd MWh");
    synth->add_option("--drift", sp.drift_per_year_mwh, "linear drift MWh/year");
    synth->add_option("--out", synth_out, "output series CSV");

    // train
    auto* train = app.add_subcommand("train", "train per-hour models from a config");
    TrainFlags tf;
    train->add_option("--config", tf.config_path, "run config JSON")->required();
    train->add_option("--series", tf.series, "series CSV (overrides the config)");
    train->add_option("--out", tf.out_dir, "output directory (overrides the config)");
    train->add_option("--seed", tf.seed, "seed override");
    train->add_option("--boundary", tf.boundary, "train/test boundary override");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "metric and reserve reports");
    std::string eval_res, eval_out = "out";
    double max_reserve = 6000.0, avg_reserve = 2000.0;
    evaluate->add_option("--residuals", eval_res, "residual CSV from train")->required();
    evaluate->add_option("--max-reserve", max_reserve, "MWh")->capture_default_str();
    evaluate->add_option("--avg-reserve", avg_reserve, "MWh")->capture_default_str();
    evaluate->add_option("--out", eval_out, "output directory");

    // fit-residuals
    auto* fitres = app.add_subcommand("fit-residuals", "fit residual distributions");
    std::string fit_res, fit_families, fit_out = "out";
    fitres->add_option("--residuals", fit_res, "residual CSV from train")->required();
    fitres->add_option("--families", fit_families, "comma-separated family subset");
    fitres->add_option("--out", fit_out, "output directory");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run the market simulation");
    std::string sim_scenario = "default", sim_dist, sim_out = "out";
    double normal_sd = 0.0;
    std::uint64_t sim_seed = 1;
    simulate->add_option("--scenario", sim_scenario, "scenario JSON or 'default'");
    simulate->add_option("--dist", sim_dist, "fitted residual distribution JSON");
    simulate->add_option("--normal-sd", normal_sd, "normal perturbation sd (MW)");
    simulate->add_option("--seed", sim_seed, "simulation seed");
    simulate->add_option("--out", sim_out, "output directory");

    // sensitivity
    auto* sens = app.add_subcommand("sensitivity", "perturbation sensitivity sweep");
    std::string sens_scenario = "default", sens_sigmas, sens_seeds = "1,2,3",
                sens_out = "out";
    sens->add_option("--scenario", sens_scenario, "scenario JSON or 'default'");
    sens->add_option("--sigmas", sens_sigmas, "comma list of sigma MW (default sweep)");
    sens->add_option("--seeds", sens_seeds, "comma list of seeds")->capture_default_str();
    sens->add_option("--out", sens_out, "output directory");

    // report
    auto* report = app.add_subcommand("report", "plot-ready long-format tables");
    std::string rep_in = "out", rep_out = "out/report";
    report->add_option("--in", rep_in, "directory with result tables");
    report->add_option("--out", rep_out, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (ingest->parsed())
            return cmd_ingest(in_csv, ts_col, demand_col, holidays, out_file, out);
        if (synth->parsed()) {
            sp.start = parse_date(synth_start);
            return cmd_synth(sp, synth_out, out);
        }
        if (train->parsed()) return cmd_train(tf, out);
        if (evaluate->parsed())
            return cmd_evaluate(eval_res, max_reserve, avg_reserve, eval_out, out);
        if (fitres->parsed()) return cmd_fit_residuals(fit_res, fit_families, fit_out, out);
        if (simulate->parsed())
            return cmd_simulate(sim_scenario, sim_dist, normal_sd, sim_seed, sim_out, out);
        if (sens->parsed()) {
            std::vector<double> sigmas;
            if (!sens_sigmas.empty()) {
                std::istringstream in_s(sens_sigmas);
                std::string tok;
                while (std::getline(in_s, tok, ','))
                    if (!tok.empty()) sigmas.push_back(std::stod(tok));
            }
            return cmd_sensitivity(sens_scenario, sigmas, parse_seed_list(sens_seeds),
                                   jobs, sens_out, out);
        }
        if (report->parsed()) return cmd_report(rep_in, rep_out, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand given\n";
    return 2;
}

}  // namespace gridcast
