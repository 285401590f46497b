#include "rarecount/cli/commands.hpp"
#include "rarecount/cli/profile_config.hpp"
#include "rarecount/quant.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace rarecount;
using namespace rarecount::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    return cells;
}

// Writes a profile file into the test's temp dir and removes it afterwards.
class TempConfig {
public:
    TempConfig(const std::string& name, const std::string& body)
        : path_(std::filesystem::temp_directory_path() / ("rarecount_test_" + name + ".cfg")) {
        std::ofstream(path_) << body;
    }
    ~TempConfig() { std::filesystem::remove(path_); }
    std::string path() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

const char* kStrong =
    "# strong detector\n"
    "mu_s = 0.95\nsigma_s = 0.03\n"
    "mu_f = 50   # FPs per uL\nsigma_f = 10\n"
    "v_se = 0.02\n";

const char* kLodProfile = "mu_s = 0.85\nsigma_s = 0\nmu_f = 50\nsigma_f = 10\nv_se = 0\n";
const char* kPerfect = "mu_s = 1\nsigma_s = 0\nmu_f = 0\nsigma_f = 0\nv_se = 0\n";

}  // namespace

TEST_CASE("profile config parsing") {
    const ProfileConfig cfg = parse_profile_config(kStrong);
    CHECK(cfg.profile.mu_s == 0.95);
    CHECK(cfg.profile.sigma_f == 10.0);
    CHECK_FALSE(cfg.wbc_per_ul);

    const auto peru = parse_profile_config(std::string(kPerfect) + "wbc_per_ul = 6000\n");
    CHECK(peru.apply_to({}).wbc_per_ul == 6000.0);
    CHECK(peru.apply_to({}).thick_film_volume_ul() == doctest::Approx(500.0 / 6000.0));

    CHECK_THROWS_AS(parse_profile_config(std::string(kPerfect) + "sigma_x = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_profile_config(std::string(kPerfect) + "mu_s = 0.9\n"), ConfigError);
    CHECK_THROWS_AS(parse_profile_config("mu_s = 0.9\n"), ConfigError);
    CHECK_THROWS_AS(parse_profile_config("mu_s 0.9\n"), ConfigError);
    CHECK_THROWS_AS(parse_profile_config("mu_s = abc\nsigma_s=0\nmu_f=0\nsigma_f=0\nv_se=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_profile_config("mu_s = 1.5\nsigma_s=0\nmu_f=0\nsigma_f=0\nv_se=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_profile_config("mu_s = 0.1\nsigma_s=0.2\nmu_f=0\nsigma_f=0\nv_se=0\n"), ConfigError);
    CHECK_THROWS_AS(load_profile_config("/nonexistent/profile.cfg"), ConfigError);
}

TEST_CASE("poisson-table") {
    auto r = invoke({"poisson-table", "--parasitemia", "100", "--volumes", "0.01,0.02,0.05,0.1", "--kmax", "20"});
    REQUIRE(r.code == kExitOk);
    auto lines = split_lines(r.out);
    CHECK(lines.size() == 22);
    CHECK(lines[0] == "k,pmf_v0.01,pmf_v0.02,pmf_v0.05,pmf_v0.1");
    CHECK(split_csv(lines[1]).size() == 5);

    r = invoke({"poisson-table", "--parasitemia", "50", "--volumes", "0.0625", "--kmax", "0"});
    REQUIRE(r.code == kExitOk);
    lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "0,0.0439369");

    CHECK(invoke({"poisson-table", "--parasitemia", "50"}).code == kExitUsage);
    CHECK(invoke({"poisson-table", "--parasitemia", "50", "--volumes", "x"}).code == kExitUsage);
    CHECK(invoke({"poisson-table", "--parasitemia", "50", "--volumes", "0"}).code == kExitUsage);
}

TEST_CASE("lod") {
    const TempConfig cfg("lod", kLodProfile);
    auto r = invoke({"lod", "--config", cfg.path(), "--target-lod", "70", "--grid", "0.05:0.5:0.05"});
    REQUIRE(r.code == kExitOk);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["feasible"] == true);
    CHECK(doc["min_volume_ul"].get<double>() == 0.2);
    CHECK(doc["grid"].size() == 10);
    CHECK(doc["grid"][3]["tail_prob"].get<double>() == doctest::Approx(0.0316197));

    r = invoke({"lod", "--config", cfg.path(), "--target-lod", "50", "--grid", "0.05:0.5:0.05"});
    REQUIRE(r.code == kExitOk);
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["feasible"] == false);
    CHECK(doc["min_volume_ul"].is_null());

    const TempConfig perfect("lod_perfect", kPerfect);
    r = invoke({"lod", "--config", perfect.path(), "--target-lod", "48", "--grid", "0.0625,0.1"});
    REQUIRE(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out)["min_volume_ul"].get<double>() == 0.0625);

    const TempConfig bad("lod_bad", "mu_s = 0.85\nsigmaF = 10\n");
    CHECK(invoke({"lod", "--config", bad.path(), "--target-lod", "70", "--grid", "0.1"}).code == kExitUsage);
    CHECK(invoke({"lod", "--config", cfg.path(), "--target-lod", "70", "--grid", "0.1:0.05:0.01"}).code ==
          kExitUsage);
    CHECK(invoke({"lod", "--config", cfg.path(), "--target-lod", "70", "--grid", "0.1", "--confidence", "1.5"})
              .code == kExitUsage);
}

TEST_CASE("quant-terms") {
    const TempConfig strong("terms", kStrong);
    auto r = invoke({"quant-terms", "--config", strong.path(), "--volume", "0.4", "--p-grid", "1000"});
    REQUIRE(r.code == kExitOk);
    auto lines = split_lines(r.out);
    CHECK(lines[0] == "p,vse_term,sigma_s_term,poisson_term,cross_term,mu_f_term,sigma_f_term,total");
    CHECK(std::stod(split_csv(lines[1]).back()) == doctest::Approx(0.1156).epsilon(1e-3));

    r = invoke({"quant-terms", "--config", strong.path(), "--volume", "0.1"});
    REQUIRE(r.code == kExitOk);
    lines = split_lines(r.out);
    CHECK(lines.size() == 107);
    const auto first = split_csv(lines[1]);
    const auto last = split_csv(lines.back());
    CHECK(std::stod(first[6]) > std::stod(first[2]));  // sigma_f vs sigma_s at p=100
    CHECK(std::stod(last[6]) < std::stod(last[2]));

    const TempConfig perfect("terms_perfect", kPerfect);
    r = invoke({"quant-terms", "--config", perfect.path(), "--volume", "0.1", "--p-grid", "100:1000:100"});
    REQUIRE(r.code == kExitOk);
    for (std::size_t i = 1; i < split_lines(r.out).size(); ++i) {
        const auto cells = split_csv(split_lines(r.out)[i]);
        for (std::size_t c : {1u, 2u, 4u, 5u, 6u}) CHECK(cells[c] == "0");
        CHECK(cells[3] == cells[7]);
    }
}

TEST_CASE("property: CSV rows re-evaluate to the printed errors") {
    const TempConfig strong("roundtrip", kStrong);
    const auto r = invoke({"quant-terms", "--config", strong.path(), "--volume", "0.25"});
    REQUIRE(r.code == kExitOk);
    const auto prof = parse_profile_config(kStrong).profile;
    const auto lines = split_lines(r.out);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        const double p = std::stod(cells[0]);
        const auto b = std_error_breakdown(prof, p, VolumeSpec(0.25));
        CHECK(cells[7] == format_number(b.total));
        CHECK(cells[3] == format_number(b.poisson_term));
    }
}

TEST_CASE("quant-compare") {
    const TempConfig strong("compare", kStrong);
    auto r = invoke({"quant-compare", "--config", strong.path(), "--volumes", "0.0625,0.1,0.25,0.4,0.5",
                     "--human-vse", "0.02"});
    REQUIRE(r.code == kExitOk);
    auto lines = split_lines(r.out);
    CHECK(split_csv(lines[0]).size() == 8);
    CHECK(split_csv(lines[0])[6] == "machine_v0.4");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        CHECK(std::stod(cells[6]) <= std::stod(cells[2]) + kDefaultMatchSlack);
    }

    r = invoke({"quant-compare", "--config", strong.path(), "--p-grid", "25000"});
    REQUIRE(r.code == kExitOk);
    lines = split_lines(r.out);
    CHECK(lines[0] == "p,human_protocol,human_protocol_plus_vse");
    CHECK(lines[1] == "25000,0.316228,0.336228");

    // the diagnostic preset stops at 200 WBCs
    r = invoke({"quant-compare", "--config", strong.path(), "--p-grid", "1000", "--protocol", "diagnostic"});
    REQUIRE(r.code == kExitOk);
    CHECK(split_csv(split_lines(r.out)[1])[1] == format_number(std::sqrt(1.0 / 25.0)));
    CHECK(invoke({"quant-compare", "--config", strong.path(), "--protocol", "mars"}).code == kExitUsage);
}

TEST_CASE("simulate") {
    const TempConfig strong("sim", kStrong);
    const std::vector<std::string> args{"simulate", "--config", strong.path(), "--p", "1000", "--volume", "0.4",
                                        "--draws", "100000", "--seed", "42"};
    const auto r = invoke(args);
    REQUIRE(r.code == kExitOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["bracket"]["pass"] == true);
    CHECK(doc["bracket"]["status"] == "pass");
    CHECK(doc["tp_model"] == "expected_value");
    CHECK(invoke(args).out == r.out);

    const TempConfig perfect("sim_perfect", kPerfect);
    const auto pr = invoke({"simulate", "--config", perfect.path(), "--p", "1000", "--volume", "0.0625", "--seed",
                            "1"});
    REQUIRE(pr.code == kExitOk);
    CHECK(nlohmann::json::parse(pr.out)["empirical_std_error"].get<double>() ==
          doctest::Approx(0.1265).epsilon(0.02));

    const auto one = invoke({"simulate", "--config", strong.path(), "--p", "1000", "--volume", "0.4", "--draws",
                             "1"});
    REQUIRE(one.code == kExitOk);
    const auto od = nlohmann::json::parse(one.out);
    CHECK(od["empirical_std_error"].get<double>() == 0.0);
    CHECK(od["bracket"]["status"] == "skipped");
    CHECK(od["bracket"]["pass"].is_null());

    CHECK(invoke({"simulate", "--config", strong.path(), "--p", "1000", "--volume", "0.4", "--draws", "0"}).code ==
          kExitUsage);
    CHECK(invoke({"simulate", "--config", strong.path(), "--p", "1000", "--volume", "0.4", "--tp-model", "x"})
              .code == kExitUsage);
}

TEST_CASE("estimate") {
    const TempConfig strong("est", kStrong);
    auto r = invoke({"estimate", "--config", strong.path(), "--suspects", "100", "--volume-estimate", "0.4"});
    REQUIRE(r.code == kExitOk);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["p_hat"].get<double>() == doctest::Approx(210.526));

    r = invoke({"estimate", "--config", strong.path(), "--suspects", "5", "--volume-estimate", "0.4"});
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["p_hat"].get<double>() < 0.0);
    CHECK(doc["clamped_p_hat"].get<double>() == 0.0);
    CHECK(doc["below_expected_fp"] == true);

    const TempConfig perfect("est_perfect", kPerfect);
    r = invoke({"estimate", "--config", perfect.path(), "--suspects", "0", "--volume-estimate", "0.4"});
    CHECK(nlohmann::json::parse(r.out)["p_hat"].get<double>() == 0.0);
}

TEST_CASE("usage and help") {
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"frobnicate"}).code == kExitUsage);
    const auto help = invoke({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("poisson-table") != std::string::npos);
}
