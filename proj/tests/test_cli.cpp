#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gridcast/cli.hpp"
#include "gridcast/common.hpp"

using namespace gridcast;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out, err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "gridcast_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

std::string strip_timestamp(const std::string& manifest) {
    std::istringstream in(manifest);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("timestamp=", 0) != 0) out << line << "\n";
    return out.str();
}

std::string train_config(const fs::path& out_dir, const std::string& algorithms) {
    return std::string(R"({
  "data": {"synth": {"start": "2019-01-01", "days": 120, "seed": 4}},
  "features": {"lag_days": [1, 7], "lag_window": 2},
  "train": {"boundary": "2019-03-22", "seed": 1, "algorithms": )") +
           algorithms + R"(},
  "output": {"dir": ")" + out_dir.string() + R"("}
})";
}

int count_lines(const std::string& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("cli: synth then ingest round trip") {
    const auto dir = fresh_dir("synth");
    const auto series = (dir / "series.csv").string();
    auto r = cli({"synth", "--days", "30", "--seed", "2", "--out", series});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 1);  // one-line stdout summary
    CHECK(r.err.empty());
    CHECK(count_lines(slurp(series)) == 1 + 30 * 24);

    const auto normalized = (dir / "normalized.csv").string();
    r = cli({"ingest", "--csv", series, "--out", normalized});
    CHECK(r.code == 0);
    CHECK(slurp(normalized) == slurp(series));
}

TEST_CASE("cli: ingest failure exits nonzero with stderr diagnostics") {
    const auto r = cli({"ingest", "--csv", "/nonexistent.csv", "--out", "/tmp/x.csv"});
    CHECK(r.code != 0);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("cli: train writes 24 models and one metric row per algorithm") {
    const auto dir = fresh_dir("train");
    const auto cfg = dir / "cfg.json";
    spit(cfg, train_config(dir / "out", R"([{"kind": "linear"}])"));
    const auto r = cli({"train", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    CHECK(count_lines(r.out) == 1);

    int models = 0;
    for (const auto& e : fs::directory_iterator(dir / "out" / "models" / "linear")) {
        (void)e;
        ++models;
    }
    CHECK(models == 24);
    CHECK(count_lines(slurp(dir / "out" / "metrics.tsv")) == 2);  // header + 1 row

    // residual file row count equals the pooled residual length
    const auto residuals = slurp(dir / "out" / "residuals_linear.csv");
    const int rows = count_lines(residuals) - 1;
    CHECK(rows > 0);
    CHECK(rows % 24 == 0);
}

TEST_CASE("cli: unknown algorithm names the config field") {
    const auto dir = fresh_dir("badalgo");
    const auto cfg = dir / "cfg.json";
    spit(cfg, train_config(dir / "out", R"([{"kind": "quantum"}])"));
    const auto r = cli({"train", "--config", cfg.string()});
    CHECK(r.code != 0);
    CHECK(r.err.find("train.algorithms[0]") != std::string::npos);
    CHECK(r.err.find("quantum") != std::string::npos);
}

TEST_CASE("cli: identical config reruns are byte-identical modulo the timestamp") {
    const auto dir = fresh_dir("rerun");
    const auto cfg = dir / "cfg.json";
    spit(cfg, train_config(dir / "out", R"([{"kind": "tree", "params": {"max_depth": 3}}])"));
    REQUIRE(cli({"train", "--config", cfg.string()}).code == 0);
    const auto metrics1 = slurp(dir / "out" / "metrics.tsv");
    const auto manifest1 = slurp(dir / "out" / "manifest.txt");
    REQUIRE(cli({"train", "--config", cfg.string()}).code == 0);
    CHECK(slurp(dir / "out" / "metrics.tsv") == metrics1);
    CHECK(strip_timestamp(slurp(dir / "out" / "manifest.txt")) ==
          strip_timestamp(manifest1));
    // the timestamp is the only permitted difference and sits on one line
    CHECK(count_lines(manifest1) == 5);
}

TEST_CASE("cli: evaluate reports zero error for a perfect model") {
    const auto dir = fresh_dir("eval");
    std::ostringstream csv;
    csv << "date,hour,actual_mwh,predicted_mwh,residual_mwh\n";
    for (int i = 0; i < 100; ++i)
        csv << "2019-01-01," << i % 24 << "," << 30000 + i << "," << 30000 + i << ",0\n";
    spit(dir / "residuals.csv", csv.str());
    const auto r = cli({"evaluate", "--residuals", (dir / "residuals.csv").string(),
                        "--out", (dir / "out").string()});
    REQUIRE(r.code == 0);
    const auto metrics = slurp(dir / "out" / "evaluation_metrics.tsv");
    CHECK(metrics.find("mae\t0\n") != std::string::npos);
    const auto reserve = slurp(dir / "out" / "reserve.tsv");
    CHECK(reserve.find("frac_within_max\t1\n") != std::string::npos);
}

TEST_CASE("cli: reserve thresholds are overridable by flags") {
    const auto dir = fresh_dir("eval2");
    std::ostringstream csv;
    csv << "date,hour,actual_mwh,predicted_mwh,residual_mwh\n";
    for (int i = 0; i < 60; ++i) {
        const double resid = i < 30 ? 100.0 : 900.0;
        csv << "2019-01-02," << i % 24 << "," << 30000.0 << "," << 30000.0 - resid
            << "," << resid << "\n";
    }
    spit(dir / "residuals.csv", csv.str());
    const auto r = cli({"evaluate", "--residuals", (dir / "residuals.csv").string(),
                        "--max-reserve", "500", "--avg-reserve", "200", "--out",
                        (dir / "out").string()});
    REQUIRE(r.code == 0);
    const auto reserve = slurp(dir / "out" / "reserve.tsv");
    CHECK(reserve.find("max_reserve_mwh\t500\n") != std::string::npos);
    CHECK(reserve.find("frac_within_max\t0.5\n") != std::string::npos);
    CHECK(reserve.find("frac_within_avg\t0.5\n") != std::string::npos);
}

TEST_CASE("cli: fit-residuals writes the family table and the chosen fit") {
    const auto dir = fresh_dir("fitres");
    Rng rng(6);
    std::ostringstream csv;
    csv << "date,hour,actual_mwh,predicted_mwh,residual_mwh\n";
    for (int i = 0; i < 500; ++i) {
        const double resid = 800.0 * rng.normal();
        csv << "2019-01-03," << i % 24 << ",30000," << 30000.0 - resid << "," << resid
            << "\n";
    }
    spit(dir / "residuals.csv", csv.str());
    const auto r = cli({"fit-residuals", "--residuals", (dir / "residuals.csv").string(),
                        "--families", "normal,uniform,cauchy", "--out",
                        (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("best family normal") != std::string::npos);
    CHECK(count_lines(slurp(dir / "out" / "residual_families.tsv")) == 4);
    const auto chosen = slurp(dir / "out" / "residual_distribution.json");
    CHECK(chosen.find("\"normal\"") != std::string::npos);
}

TEST_CASE("cli: simulate with zero sd equals the unperturbed run") {
    const auto a = fresh_dir("sim_a"), b = fresh_dir("sim_b");
    REQUIRE(cli({"simulate", "--seed", "7", "--out", a.string()}).code == 0);
    REQUIRE(cli({"simulate", "--normal-sd", "0", "--seed", "7", "--out", b.string()})
                .code == 0);
    CHECK(slurp(a / "yearly_mix.tsv") == slurp(b / "yearly_mix.tsv"));
    CHECK(slurp(a / "prices.tsv") == slurp(b / "prices.tsv"));
    CHECK(slurp(a / "carbon.tsv") == slurp(b / "carbon.tsv"));
}

TEST_CASE("cli: manifest hash changes iff the config changes") {
    const auto a = fresh_dir("hash_a"), b = fresh_dir("hash_b"), c = fresh_dir("hash_c");
    REQUIRE(cli({"simulate", "--seed", "1", "--out", a.string()}).code == 0);
    REQUIRE(cli({"simulate", "--seed", "1", "--out", b.string()}).code == 0);
    REQUIRE(cli({"simulate", "--seed", "1", "--normal-sd", "3000", "--out", c.string()})
                .code == 0);
    auto hash_line = [](const std::string& m) {
        const auto pos = m.find("config_hash=");
        return m.substr(pos, m.find('\n', pos) - pos);
    };
    CHECK(hash_line(slurp(a / "manifest.txt")) == hash_line(slurp(b / "manifest.txt")));
    CHECK(hash_line(slurp(a / "manifest.txt")) != hash_line(slurp(c / "manifest.txt")));
}

TEST_CASE("cli: default sensitivity sweep emits 20 rows") {
    const auto dir = fresh_dir("sweep");
    const auto r = cli({"sensitivity", "--seeds", "1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(count_lines(slurp(dir / "sweep.tsv")) == 21);  // header + 20 sigma rows
}

TEST_CASE("cli: --jobs does not change the sweep output") {
    const auto a = fresh_dir("jobs_a"), b = fresh_dir("jobs_b");
    REQUIRE(cli({"sensitivity", "--sigmas", "1000,4000,9000", "--seeds", "1,2",
                 "--out", a.string()})
                .code == 0);
    REQUIRE(cli({"--jobs", "3", "sensitivity", "--sigmas", "1000,4000,9000", "--seeds",
                 "1,2", "--out", b.string()})
                .code == 0);
    CHECK(slurp(a / "sweep.tsv") == slurp(b / "sweep.tsv"));
}

TEST_CASE("cli: report converts tables to long format") {
    const auto dir = fresh_dir("report");
    REQUIRE(cli({"sensitivity", "--sigmas", "1000,2000", "--seeds", "1", "--out",
                 dir.string()})
                .code == 0);
    const auto r = cli({"report", "--in", dir.string(), "--out",
                        (dir / "report").string()});
    REQUIRE(r.code == 0);
    const auto longt = slurp(dir / "report" / "mix_vs_sigma.tsv");
    CHECK(count_lines(longt) == 1 + 2 * 7);  // 2 sigmas x 7 technologies
    CHECK(longt.find("recip_gas") != std::string::npos);
}
