#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <mburgers/app.hpp>

using namespace mburgers;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("mburgers_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_quiet(const std::vector<std::string>& args)
{
    std::ostringstream log;
    return run(parse_config(args), log);
}

} // namespace

TEST_CASE("defaults are filled in", "[cli]")
{
    const auto cfg = parse_config({"simulate", "--ic", "IC1", "--T", "4"});
    CHECK(cfg.command == Command::simulate);
    CHECK(cfg.real("L") == 30.0);
    CHECK(cfg.real("h") == 0.01);
    CHECK(cfg.real("tau") == 0.002);
    CHECK(cfg.real("T") == 4.0);
    CHECK(cfg.text("coupling") == "implicit");
    CHECK(cfg.output_dir == fs::path("out"));
}

TEST_CASE("flags override the config file", "[cli]")
{
    const auto dir = scratch("precedence");
    std::ofstream(dir / "run.cfg") << "# sample\nh = 0.02\ntau=0.004\nout = " << (dir / "from_file").string() << "\n";
    const auto cfg = parse_config({"--config", (dir / "run.cfg").string(), "simulate", "--h", "0.01"});
    CHECK(cfg.real("h") == 0.01);
    CHECK(cfg.real("tau") == 0.004);
    CHECK(cfg.output_dir == dir / "from_file");

    const auto flag_out = parse_config({"simulate", "--config", (dir / "run.cfg").string(), "--out", "elsewhere"});
    CHECK(flag_out.output_dir == fs::path("elsewhere"));
}

TEST_CASE("invalid input is rejected with a message", "[cli]")
{
    using Catch::Matchers::ContainsSubstring;
    CHECK_THROWS_WITH(parse_config({"simulate", "--ic", "IC3"}), ContainsSubstring("unknown preset"));
    CHECK_THROWS_WITH(parse_config({"simulate", "--h", "abc"}), ContainsSubstring("'h'"));
    CHECK_THROWS_WITH(parse_config({"simulate", "--coupling", "magic"}), ContainsSubstring("coupling"));
    CHECK_THROWS_WITH(parse_config({"frobnicate"}), ContainsSubstring("run with --help"));
    CHECK_THROWS_AS(parse_config(std::vector<std::string>{}), ConfigError);
    CHECK_THROWS_AS(parse_config({"simulate", "--seed", "-4"}), ConfigError);

    const auto dir = scratch("unknown_key");
    std::ofstream(dir / "bad.cfg") << "hh = 0.01\n";
    CHECK_THROWS_WITH(parse_config({"--config", (dir / "bad.cfg").string(), "simulate"}), ContainsSubstring("unknown key 'hh'"));
    CHECK_THROWS_WITH(parse_config({"--config", (dir / "missing.cfg").string(), "simulate"}), ContainsSubstring("cannot read"));
}

TEST_CASE("exit codes", "[cli]")
{
    const auto dir = scratch("exit");
    CHECK(run_quiet({"shock", "--out", (dir / "ok").string()}) == exit_code::ok);
    CHECK(run_quiet({"shock", "--w_plus", "1", "--w_minus", "3", "--out", (dir / "bad").string()}) == exit_code::config_error);
    CHECK(run_quiet({"simulate", "--L", "30", "--h", "0.01", "--T", "0.001", "--out", (dir / "short").string()}) ==
          exit_code::config_error);
    CHECK(run_quiet({"simulate", "--scale", "50", "--T", "0.1", "--out", (dir / "scaled").string()}) == exit_code::solver_failure);
    CHECK(fs::exists(dir / "scaled" / "positivity.csv"));
    CHECK(fs::exists(dir / "scaled" / "manifest.json"));

    const auto manifest = nlohmann::json::parse(slurp(dir / "scaled" / "manifest.json"));
    CHECK(manifest["exit_code"] == exit_code::solver_failure);
    CHECK(manifest["results"]["positivity_violations"].get<int>() > 0);
    CHECK(manifest["parameters"]["scale"] == "50");
}

TEST_CASE("artifacts and schemas", "[cli]")
{
    const auto dir = scratch("artifacts");
    REQUIRE(run_quiet({"simulate", "--T", "0.2", "--h", "0.02", "--stride", "25", "--out", dir.string()}) == 0);
    CHECK(slurp(dir / "trajectory.csv").rfind("t,x,u,w\n", 0) == 0);
    CHECK(slurp(dir / "interface.csv").rfind("t,gamma,xi,h1_energy,sup_norm\n", 0) == 0);

    const auto conv = scratch("convergence");
    REQUIRE(run_quiet({"convergence", "--case", "odd", "--levels", "3", "--out", conv.string()}) == 0);
    const auto table = io::read_csv(conv / "convergence.csv");
    CHECK(table.header == std::vector<std::string>{"level", "h", "tau", "error", "order"});
    CHECK(table.rows.size() == 3);

    const auto abel = scratch("abel");
    REQUIRE(run_quiet({"abel-check", "--bumps", "3", "--out", abel.string()}) == 0);
    CHECK(io::read_csv(abel / "abel_residuals.csv").rows.size() == 10);
}

TEST_CASE("identical runs write identical files", "[cli]")
{
    const auto a = scratch("det_a"), b = scratch("det_b");
    for (const auto& d : {a, b}) {
        REQUIRE(run_quiet({"simulate", "--ic", "IC2", "--T", "0.3", "--h", "0.02", "--out", d.string()}) == 0);
        REQUIRE(run_quiet({"abel-check", "--bumps", "4", "--seed", "11", "--out", (d / "abel").string()}) == 0);
    }
    for (const char* f : {"trajectory.csv", "interface.csv", "positivity.csv", "abel/abel_uniqueness.csv"})
        CHECK(slurp(a / f) == slurp(b / f));
}
