#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "ffs/experiments.hpp"

using namespace windffs;

namespace {

SimResult synthetic(std::vector<double> df_hz) {
    SimResult r;
    r.f_nom = 50.0;
    r.onset = 0.0;
    for (std::size_t i = 0; i < df_hz.size(); ++i) {
        r.t.push_back(static_cast<double>(i));
        r.df_pu.push_back(df_hz[i] / 50.0);
    }
    return r;
}

}  // namespace

TEST_CASE("secondary drop is the drawdown after the first trough") {
    CHECK(secondary_drop_hz(synthetic({0.0, -0.2, -0.1, -0.1, -0.25, -0.2})) == Catch::Approx(0.15));
    CHECK(secondary_drop_hz(synthetic({0.0, -0.2, -0.15, -0.1})) == Catch::Approx(0.0));
}

TEST_CASE("compare table arranges a full grid") {
    const std::vector<CompareEntry> e{{"a", "x", -0.2, 0.0}, {"b", "x", -0.3, 0.01},
                                      {"a", "y", -0.18, 0.0}, {"b", "y", -0.25, 0.02}};
    const CompareTable t = compare_table(e, -0.2);
    CHECK(t.rows == std::vector<std::string>{"a", "b"});
    CHECK(t.columns == std::vector<std::string>{"x", "y"});
    std::ostringstream os;
    write_compare_csv(os, t);
    CHECK(os.str().rfind("row,x_nadir_hz,x_sfd_hz,x_rel_pct,y_nadir_hz,y_sfd_hz,y_rel_pct\r\na,-0.2,0,-0,", 0) == 0);
}

TEST_CASE("compare table rejects mismatched scenario sets") {
    CHECK_THROWS_AS(compare_table({{"a", "x", -0.2, 0.0}, {"b", "y", -0.3, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(compare_table({{"a", "x", -0.2, 0.0}, {"a", "x", -0.3, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(compare_table({}), std::invalid_argument);
}

TEST_CASE("experiment ids are unique") {
    auto ids = experiment_ids();
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    CHECK(ids.size() == 14);
}

TEST_CASE("an experiment writes its files and a summary") {
    const auto dir = std::filesystem::temp_directory_path() / "windffs_exp_test";
    std::filesystem::remove_all(dir);
    ExperimentOptions o;
    o.id = "fig4";
    o.out_dir = dir.string();
    o.samples = 50;
    const ExperimentReport r = run_experiment(o);
    CHECK(r.passed());
    CHECK(std::filesystem::exists(dir / "fig4" / "summary.json"));
    for (const auto& f : r.files) CHECK(std::filesystem::exists(f));
    std::filesystem::remove_all(dir);
}
