#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace dirinfo::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("dirinfo_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string loop_json(const std::string& controller, const std::string& v_variance = "1") {
  return R"({
  "plant":              {"num": [0, 1], "den": [1, -2]},
  "controller":         {"num": [)" + controller + R"(], "den": [1]},
  "channel_noise":      {"kind": "white", "variance": 1},
  "output_disturbance": {"kind": "white", "variance": )" + v_variance + R"(}
})";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("analyze") {
  TempDir dir;
  SUBCASE("stabilized loop") {
    const Result r = run({"analyze", dir.write("a.json", loop_json("-2"))});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["total_rate"].get<double>() == doctest::Approx(1.0397207708).epsilon(1e-10));
    CHECK(j["log_base"] == "nats");
    CHECK(j["stabilizing"] == true);
  }
  SUBCASE("bits and grid flags") {
    const Result r = run({"--bits", "--grid", "1024", "analyze", dir.write("a.json", loop_json("-2"))});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["total_rate"].get<double>() == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(j["grid_points"] == 1024);
    CHECK(j["units"] == "bits/sample");
  }
  SUBCASE("flags after the subcommand") {
    const Result r = run({"analyze", dir.write("a.json", loop_json("-2")), "--bits"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["log_base"] == "bits");
  }
  SUBCASE("unstabilized loop names the pole") {
    const Result r = run({"analyze", dir.write("b.json", loop_json("0"))});
    CHECK(r.code == 2);
    CHECK(r.err.find("offending poles: 2") != std::string::npos);
  }
  SUBCASE("malformed coefficient names the field") {
    const Result r = run({"analyze", dir.write("c.json", loop_json("\"k\""))});
    CHECK(r.code == 1);
    CHECK(r.err.find("controller.num[0]") != std::string::npos);
  }
  SUBCASE("missing file") {
    CHECK(run({"analyze", dir.file("nope.json")}).code == 1);
  }
  SUBCASE("output and integrands files") {
    const std::string report = dir.file("report.json");
    const std::string csv = dir.file("integrands.csv");
    const Result r = run({"--output", report, "analyze", dir.write("a.json", loop_json("-2")), "--integrands", csv});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(json::parse(slurp(report))["grid_points"] == 4096);
    CHECK(slurp(csv).rfind("omega,log_Syw,log_Fwy,disturbance_integrand\n", 0) == 0);
  }
}

TEST_CASE("verify") {
  TempDir dir;
  SUBCASE("random suite") {
    const Result r = run({"verify", "--random", "20"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["random_suite"]["passed"] == 20);
  }
  SUBCASE("empty random suite") {
    const Result r = run({"verify", "--random", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0 cases") != std::string::npos);
  }
  SUBCASE("independence across two controllers") {
    const Result r = run({"verify", dir.write("a.json", loop_json("-2")), "--controller",
                          R"({"num": [-2], "den": [1]})", "--controller", R"({"num": [-2.5], "den": [1]})"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["independence"]["disturbance_terms"].size() == 2);
    CHECK(j["independence"]["disturbance_terms"][1].get<double>() == doctest::Approx(0.34657359028));
    CHECK(j["independence"]["pass"] == true);
  }
  SUBCASE("non-stabilizing alternative") {
    const Result r = run({"verify", dir.write("a.json", loop_json("-2")), "--controller", R"({"num": [0], "den": [1]})"});
    CHECK(r.code == 2);
    CHECK(r.err.find("controller #0") != std::string::npos);
  }
  SUBCASE("nothing to verify") { CHECK(run({"verify"}).code == 1); }
}

TEST_CASE("simulate") {
  TempDir dir;
  const std::string cfg = dir.write("a.json", loop_json("-2"));
  SUBCASE("passes at the default tolerance") {
    const Result r = run({"simulate", cfg, "--seed", "1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["seed"] == 1);
  }
  SUBCASE("tiny tolerance fails with exit 3") {
    const Result r = run({"simulate", cfg, "--tolerance", "1e-12"});
    CHECK(r.code == 3);
    CHECK(json::parse(r.out)["abs_gap"].get<double>() > 0.0);
  }
  SUBCASE("diverging loop exits 2") {
    CHECK(run({"simulate", dir.write("d.json", loop_json("-0.5"))}).code == 2);
  }
  SUBCASE("identical runs are byte-identical") {
    CHECK(run({"simulate", cfg, "--seed", "5"}).out == run({"simulate", cfg, "--seed", "5"}).out);
  }
  SUBCASE("trajectory export") {
    const std::string csv = dir.file("traj.csv");
    REQUIRE(run({"simulate", cfg, "--trajectory", csv}).code == 0);
    CHECK(slurp(csv).rfind("t,w,v,z,y,u\n", 0) == 0);
  }
  SUBCASE("negative tolerance is a usage error") {
    CHECK(run({"simulate", cfg, "--tolerance", "-1"}).code == 1);
  }
}

TEST_CASE("sweep") {
  TempDir dir;
  const std::string cfg = dir.write("a.json", loop_json("-2"));
  SUBCASE("disturbance variance") {
    const Result r = run({"sweep", cfg, "--param", "sigma_v2", "--values", "0,1,3"});
    REQUIRE(r.code == 0);
    CHECK(r.out ==
          "value,total,control,disturbance\n"
          "0,0.69314718056,0.69314718056,0\n"
          "1,1.03972077084,0.69314718056,0.34657359028\n"
          "3,1.38629436112,0.69314718056,0.69314718056\n");
  }
  SUBCASE("channel variance") {
    const Result r = run({"sweep", cfg, "--param", "sigma_w2", "--values", "1, 2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\n2,") != std::string::npos);
    CHECK(r.out.find(",0.202732554054\n") != std::string::npos);  // 1/2 ln 1.5
  }
  SUBCASE("empty list") {
    const Result r = run({"sweep", cfg, "--param", "sigma_v2", "--values", ""});
    CHECK(r.code == 0);
    CHECK(r.out == "value,total,control,disturbance\n");
  }
  SUBCASE("unknown parameter") {
    CHECK(run({"sweep", cfg, "--param", "gain", "--values", "1"}).code == 1);
  }
  SUBCASE("bad value") {
    CHECK(run({"sweep", cfg, "--param", "sigma_v2", "--values", "1,x"}).code == 1);
  }
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--grid", "100", "verify", "--random", "1"}).code == 1);
}
