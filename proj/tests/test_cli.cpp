#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "berrylab/cli.hpp"

using namespace berrylab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path temp_dir() {
  fs::path dir = fs::current_path() / "cli_test_tmp";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse_args resolves the documented defaults and flags") {
  RunConfig cfg = parse_args({"holonomy", "--theta", "1.5708"});
  CHECK(cfg.command == "holonomy");
  REQUIRE(cfg.theta.size() == 1);
  CHECK(cfg.theta[0] == doctest::Approx(1.5708));
  CHECK(cfg.b == 1.0);
  CHECK(coupling_name(cfg.coupling) == "xx-minus-yy");
  CHECK(cfg.format == OutputFormat::csv);
  CHECK(cfg.level == 3);

  RunConfig berry = parse_args({"berry", "--theta", "1.5708", "--g", "0.2",
                                "--omega", "1e-3", "--points", "4000"});
  CHECK(berry.points == 4000);
  CHECK(berry.g[0] == doctest::Approx(0.2));

  RunConfig bd = parse_args(
      {"breakdown", "--theta", "1.5708", "--omega", "0.001", "--g",
       "0.1,0.01,0.001"});
  REQUIRE(bd.g.size() == 3);
  CHECK(bd.g[2] == doctest::Approx(0.001));

  RunConfig lv = parse_args({"berry", "--g", "0.2", "--level", "2"});
  CHECK(lv.level == 2);
}

TEST_CASE("parse_args rejects malformed input with a usage error") {
  CHECK_THROWS_AS(parse_args({"holonomy", "--bogus", "1"}), UsageError);
  CHECK_THROWS_AS(parse_args({"nosuchcommand"}), UsageError);
  CHECK_THROWS_AS(parse_args({"berry", "--g", "0.1,oops"}), UsageError);
  CHECK_THROWS_AS(parse_args({"berry", "--level", "7"}), UsageError);
  CHECK_THROWS_AS(parse_args({"mixed", "--subsystem", "3"}), UsageError);
  CHECK_THROWS_AS(parse_args({"evolve", "--omega", "-1"}), UsageError);
  CHECK_THROWS_AS(parse_args({"holonomy", "--theta", "9.9"}), UsageError);
  CHECK_THROWS_AS(parse_args({"holonomy", "--format", "xml"}), UsageError);
  CHECK_THROWS_AS(parse_args({}), UsageError);
  CHECK_THROWS_AS(parse_args({"connection", "--basis", "weird"}), UsageError);
}

TEST_CASE("help is reported separately") {
  CHECK_THROWS_AS(parse_args({"--help"}), HelpRequested);
}

TEST_CASE("holonomy table wiring") {
  RunConfig cfg = parse_args({"holonomy", "--theta", "1.5707963267948966",
                              "--points", "512", "--steps", "256"});
  Table t = build_table(cfg);
  REQUIRE(t.rows.size() == 1);
  REQUIRE(t.columns.size() == 7);
  CHECK(t.columns[0] == "theta");
  CHECK(t.columns[6] == "max_dev");
  CHECK(t.rows[0][1] == doctest::Approx(kPi).epsilon(1e-9));   // eigenphase_1
  CHECK(t.rows[0][3] == doctest::Approx(-2.0).epsilon(1e-9));  // trace_re
  CHECK(t.rows[0][6] <= 1e-6);
}

TEST_CASE("breakdown produces one row per g, ordered") {
  RunConfig cfg = parse_args(
      {"breakdown", "--theta", "1.5707963267948966", "--omega", "0.005",
       "--g", "0.5,0.05,0.005", "--steps", "40000"});
  Table t = build_table(cfg);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][0] == doctest::Approx(0.5));
  CHECK(t.rows[2][0] == doctest::Approx(0.005));
  CHECK(t.rows[0][1] == doctest::Approx(0.01));  // ratio
  CHECK(t.rows[2][1] == doctest::Approx(1.0));
}

TEST_CASE("outputs are byte-identical across repeated runs") {
  fs::path dir = temp_dir();
  for (const char* format : {"csv", "json"}) {
    RunConfig cfg = parse_args(
        {"mixed", "--theta", "0.9,1.3", "--g", "0,0.1", "--points", "400",
         "--subsystem", "2", "--format", format, "--jobs", "4", "--out",
         (dir / (std::string("mixed_a.") + format)).string()});
    REQUIRE(run(cfg) == 0);
    RunConfig cfg2 = cfg;
    cfg2.out = (dir / (std::string("mixed_b.") + format)).string();
    REQUIRE(run(cfg2) == 0);
    std::string a = slurp(cfg.out);
    std::string b = slurp(cfg2.out);
    // the embedded config differs only in the output path
    size_t pa = a.find("mixed_a");
    size_t pb = b.find("mixed_b");
    REQUIRE(pa != std::string::npos);
    REQUIRE(pb != std::string::npos);
    a.erase(pa, 7);
    b.erase(pb, 7);
    CHECK(a == b);
  }
}

TEST_CASE("json output round-trips the resolved config exactly") {
  fs::path dir = temp_dir();
  RunConfig cfg = parse_args(
      {"holonomy", "--theta", "0.3,1.1,2.9", "--points", "256", "--steps",
       "128", "--format", "json", "--out", (dir / "h.json").string(),
       "--jobs", "2"});
  REQUIRE(run(cfg) == 0);
  RunConfig back = parse_output_json_config(slurp(dir / "h.json"));
  CHECK(back == cfg);
}

TEST_CASE("plot data emission and unknown columns") {
  fs::path dir = temp_dir();
  RunConfig cfg = parse_args(
      {"breakdown", "--theta", "1.5707963267948966", "--omega", "0.005",
       "--g", "0.5,0.05", "--steps", "30000", "--out",
       (dir / "bd.csv").string(), "--plot", "final_fidelity:ratio"});
  Table t = build_table(cfg);
  std::vector<std::string> files = emit_plot_data(cfg, t);
  REQUIRE(files.size() == 1);
  CHECK(fs::path(files[0]).filename().string() ==
        "breakdown_final_fidelity_vs_ratio.dat");
  std::string contents = slurp(files[0]);
  CHECK(contents.find(' ') != std::string::npos);

  RunConfig bad = cfg;
  bad.plots = {"no_such_column:ratio"};
  CHECK_THROWS_AS(emit_plot_data(bad, t), UsageError);
}

TEST_CASE("format_double is 12-significant-digit and locale independent") {
  CHECK(format_double(kPi) == "3.14159265359");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-1.0) == "-1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(2.5e-7) == "2.5e-07");
}

TEST_CASE("sweep fills undefined cells with nan and defined ones with values") {
  RunConfig cfg = parse_args({"sweep", "--theta", "1.0", "--g", "0,0.1",
                              "--points", "400", "--steps", "128"});
  Table t = build_table(cfg);
  REQUIRE(t.rows.size() == 2);
  // g = 0: no smooth eigenpath, berry_gamma is nan; mixed columns filled
  CHECK(std::isnan(t.rows[0][7]));
  CHECK(!std::isnan(t.rows[0][8]));
  CHECK(!std::isnan(t.rows[1][7]));
}
