#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "giantpcw/csv.hpp"
#include "giantpcw/experiments.hpp"
#include "giantpcw/svg.hpp"

using namespace giantpcw;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string minimal = "[circuit]\nd0 = 1 um\n";

int config_error_line(const std::string& text, const std::string& cmd = "bands") {
    try {
        parse_config(text, command_schema(cmd));
    } catch (const ConfigError& e) {
        return e.line;
    }
    return -1;
}

std::string config_error(const std::string& text, const std::string& cmd = "bands") {
    try {
        parse_config(text, command_schema(cmd));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Lines of the echoed configuration stored in a CSV header.
std::string echoed_config(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    const std::string tag = "# config| ";
    while (std::getline(in, line))
        if (line.rfind(tag, 0) == 0) out += line.substr(tag.size()) + "\n";
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GIANTPCW_CLI) + " " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const Overrides coarse{1e-3, std::nullopt};

}  // namespace

TEST_CASE("config errors carry line numbers", "[cli]") {
    CHECK(config_error_line("[circuit]\nd0 = 1 um\nCg = abc fF\n") == 3);
    CHECK(config_error_line("[circuit]\n\n# note\nbogus = 1\n") == 4);
    CHECK(config_error_line("[circuit]\nd0 = 1 um\n[nonsense]\n") == 3);
    CHECK(config_error_line("[circuit]\nd0 = 1 um\nd0 = 2 um\n") == 3);
    CHECK(config_error_line("d0 = 1 um\n") == 1);
    CHECK(config_error_line("[circuit\n") == 1);
    CHECK(config_error_line("[circuit]\nd0 1 um\n") == 2);
    CHECK_THAT(config_error("[circuit]\nbogus = 1\n"), ContainsSubstring("unknown key 'bogus'"));
    CHECK_THAT(config_error("[nonsense]\n"), ContainsSubstring("unknown section [nonsense]"));
}

TEST_CASE("units are declared and checked", "[cli]") {
    CHECK_THAT(config_error("[circuit]\nd0 = 1\n"), ContainsSubstring("needs a unit"));
    CHECK_THAT(config_error("[circuit]\nd0 = 1 fF\n"), ContainsSubstring("not valid for d0"));
    CHECK_THAT(config_error("[numerics]\nharmonics = 2.5\n" + minimal), ContainsSubstring("integer"));
    CHECK_THAT(config_error("[circuit]\nd0 = 1, 2 um\n"), ContainsSubstring("single value"));

    const auto c = parse_config("[circuit]\nd0 = 2 um\nkm = 1.5 rad/m\nCg = 1000 aF\n[atom]\n"
                                "x_plus = 0.25 lambda_m\ng_minus = 1 MHz\n",
                                command_schema("gk"));
    CHECK(c.get("circuit", "d0") == Catch::Approx(2e-6));
    CHECK(c.get("circuit", "km") == 1.5);
    CHECK(c.get("circuit", "Cg") == Catch::Approx(1e-15));
    CHECK(c.get("atom", "g_minus") == Catch::Approx(2 * std::numbers::pi * 1e6));
    UnitContext ctx;
    ctx.lambda_m = 4.0;
    CHECK(c.get("atom", "x_plus", ctx) == Catch::Approx(1.0));
    CHECK_THROWS_AS(c.get("atom", "x_plus"), ConfigError);
}

TEST_CASE("empty config names the first missing block", "[cli]") {
    CHECK_THAT(config_error(""), ContainsSubstring("missing required section [circuit]"));
    CHECK_THAT(config_error("", "pump"), ContainsSubstring("missing required section [pump]"));
    CHECK_THAT(config_error(minimal, "gk"), ContainsSubstring("[atom]"));
}

TEST_CASE("defaults are filled in and the echo round-trips", "[cli]") {
    for (const auto& cmd : command_names()) {
        const auto c = load_config(std::string(GIANTPCW_CONFIGS) + "/" + cmd + ".ini", command_schema(cmd));
        const auto again = parse_config(c.echo(), command_schema(cmd));
        INFO(cmd);
        CHECK(again.echo() == c.echo());
        CHECK(again.hash() == c.hash());
        CHECK(c.hash().size() == 16);
    }
    const auto c = parse_config(minimal, command_schema("bands"));
    CHECK_THAT(c.echo(), ContainsSubstring("harmonics = 10"));
    CHECK_THAT(c.echo(), ContainsSubstring("kind = cosine"));
    const auto other = parse_config(minimal + "CJ = 91 fF\n", command_schema("bands"));
    CHECK(other.hash() != c.hash());
}

TEST_CASE("CSV rows round-trip to full precision", "[cli]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-300, 300);
    Table t;
    t.name = "roundtrip";
    t.columns = {"a", "b", "c"};
    t.units = {"1", "m", "rad/s"};
    for (int i = 0; i < 200; ++i)
        t.add_row({std::ldexp(mant(rng), ex(rng)), mant(rng) * 1e9, std::nextafter(1.0, 2.0) * i});
    t.add_row({std::numeric_limits<double>::quiet_NaN(), -0.0, std::numeric_limits<double>::denorm_min()});
    t.warnings.push_back("sample warning");
    const auto m = read_csv_matrix(csv_text(t, nullptr, "test", "now"));
    REQUIRE(m.size() == t.rows.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double a = t.rows[i][j], b = m[i][j];
            if (std::isnan(a)) CHECK(std::isnan(b));
            else CHECK(std::memcmp(&a, &b, sizeof a) == 0);
        }
    CHECK_THROWS_AS(t.add_row({1.0}), DomainError);
    CHECK_THROWS_AS(read_csv_matrix("1,x\n"), DomainError);
}

TEST_CASE("runs are deterministic and reproducible from the echo", "[cli]") {
    const std::string dir = GIANTPCW_CONFIGS;
    for (const std::string cmd : {"bands", "gk", "poles", "pump", "coupling-scan"}) {
        INFO(cmd);
        const auto cfg = load_config(dir + "/" + cmd + ".ini", command_schema(cmd));
        const auto a = run_command(cmd, cfg, coarse);
        const auto b = run_command(cmd, cfg, coarse);
        const auto ta = csv_text(a, &cfg, cmd, "T"), tb = csv_text(b, &cfg, cmd, "T");
        CHECK(ta == tb);
        REQUIRE_FALSE(a.rows.empty());

        const auto re = parse_config(echoed_config(ta), command_schema(cmd));
        CHECK(re.hash() == cfg.hash());
        CHECK(csv_body(run_command(cmd, re, coarse)) == csv_body(a));
    }
}

TEST_CASE("chirality scan columns", "[cli]") {
    const auto cfg = parse_config(minimal + "[atom]\n[scan]\nvariable = x_plus\nfrom = -1 lambda_m\n"
                                            "to = 1 lambda_m\nsteps = 5\n",
                                  command_schema("chirality-scan"));
    const auto t = run_command("chirality-scan", cfg, coarse);
    REQUIRE(t.columns.size() >= 2);
    CHECK(t.columns[0] == "x_plus_over_lambda_m");
    CHECK(t.columns[1] == "Cb");
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows.front()[0] == Catch::Approx(-1.0));
    CHECK(t.rows.back()[0] == Catch::Approx(1.0));
    CHECK_THAT(svg_plot(t, "chirality-scan"), ContainsSubstring("<svg"));
}

TEST_CASE("command-line tool exit codes and outputs", "[cli]") {
    const fs::path out = fs::temp_directory_path() / "giantpcw_cli_test";
    fs::remove_all(out);
    fs::create_directories(out);
    const std::string dir = GIANTPCW_CONFIGS;

    CHECK(run_cli("bands --config " + dir + "/bands.ini --out " + out.string() + " --dk 1e-3 --plot") == 0);
    CHECK(fs::exists(out / "bands.csv"));
    CHECK(fs::exists(out / "bands.svg"));
    const auto text = slurp(out / "bands.csv");
    CHECK_THAT(text, ContainsSubstring("# config_hash: "));
    CHECK_THAT(text, ContainsSubstring("# columns: "));
    CHECK_FALSE(read_csv_matrix(text).empty());

    CHECK(run_cli("pump --config " + dir + "/pump.ini --out " + out.string() + " --threads 1") == 0);
    CHECK(fs::exists(out / "pump.csv"));

    const fs::path empty = out / "empty.ini", bad = out / "bad.ini";
    std::ofstream(empty.string()) << "";
    std::ofstream(bad.string()) << "[circuit]\nd0 = 1 um\nwidth = 3 um\n";
    CHECK(run_cli("bands --config " + empty.string() + " --out " + out.string()) == 1);
    CHECK(run_cli("bands --config " + bad.string() + " --out " + out.string()) == 1);
    CHECK(run_cli("bands --config " + (out / "missing.ini").string()) == 1);
    CHECK(run_cli("bands") != 0);
    fs::remove_all(out);
}
