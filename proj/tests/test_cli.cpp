#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mds/cli.hpp"

using namespace mds;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mds");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string golden_path(int k) {
  return std::string(MDS_SOURCE_DIR) + "/data/golden/region_k" + std::to_string(k) + ".txt";
}

std::string temp_path(const std::string& name) { return std::string(MDS_BINARY_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("region subcommand", "[cli]") {
  CHECK(run({"region", "-k", "3"}).code == kExitPass);
  const Run g = run({"region", "-k", "1", "--golden", golden_path(1)});
  CHECK(g.code == kExitPass);
  CHECK(g.out.find("PASS golden") != std::string::npos);

  const std::string bad = temp_path("corrupt_golden.txt");
  std::string text = slurp(golden_path(1));
  text[text.find("7/4")] = '9';
  std::ofstream(bad, std::ios::binary) << text;
  const Run c = run({"region", "-k", "1", "--golden", bad});
  CHECK(c.code == kExitCheckFailure);
  CHECK(c.out.find("differs at line") != std::string::npos);

  CHECK(run({"region", "-k", "1", "--golden", temp_path("missing.txt")}).code == kExitCheckFailure);
  CHECK(run({"region", "-k", "7"}).code == kExitUsage);

  const std::string out = temp_path("region_k2.txt");
  CHECK(run({"region", "-k", "2", "--out", out}).code == kExitPass);
  CHECK(slurp(out) == slurp(golden_path(2)));
}

TEST_CASE("usage errors", "[cli]") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"moment", "--s", "0.6"}).code == kExitUsage);  // empty X list
  CHECK(run({"moment", "-k", "2", "--s", "0.6;0.7;0.8", "--x-list", "1e4"}).code == kExitUsage);
  CHECK(run({"check", "bogus"}).code == kExitUsage);
  CHECK(run({"check", "fe", "--tolerance", "nonsense=1"}).code == kExitUsage);
  CHECK(run({"check", "fe", "--tolerance", "fe_abs"}).code == kExitUsage);
  CHECK(run({"moment", "--s", "0.6", "--x-list", "1e4,oops"}).code == kExitUsage);
}

TEST_CASE("config round trip", "[cli]") {
  RunConfig c;
  c.subcommand = "polymoment";
  c.k = 2;
  c.S = {{0.6, 0}, {0.65, -1.25}};
  c.x_list = {1e4, 3e4, 100000};
  c.eta = 1.5;
  c.n_scale = 0.5;
  c.w_id = "wide";
  c.max_swap = 1;
  c.workers = 8;
  c.seed = 12345;
  c.tolerance["fe_abs"] = 1e-6;
  c.out = "report.csv";
  const std::string text = to_config_text(c);
  CHECK(to_config_text(parse_config_text(text)) == text);
  CHECK_THROWS_AS(parse_config_text("bogus=1\n"), DomainError);
  CHECK_THROWS_AS(parse_config_text("k\n"), DomainError);

  const std::string path = temp_path("cfg.txt");
  std::ofstream(path) << text;
  // flags win over the file
  const Run r = run({"polymoment", "--config", path, "--workers", "3", "--print-config"});
  REQUIRE(r.code == kExitPass);
  RunConfig expect = c;
  expect.workers = 3;
  CHECK(r.out == to_config_text(expect));
}

TEST_CASE("check suites", "[cli]") {
  const Run fe = run({"check", "fe"});
  CHECK(fe.code == kExitPass);
  CHECK(fe.out.find("fe_abs=1e-07") != std::string::npos);
  CHECK(run({"check", "fe", "--inject-sign-error"}).code == kExitCheckFailure);
  const Run tight = run({"check", "fe", "--tolerance", "fe_abs=1e-30"});
  CHECK(tight.code == kExitCheckFailure);
  CHECK(tight.out.find("fe_abs=1e-30") != std::string::npos);

  const Run g = run({"check", "gauss"});
  CHECK(g.code == kExitPass);
  CHECK(g.out.find("verdict=PASS") != std::string::npos);
}

TEST_CASE("dry runs print the plan", "[cli]") {
  const Run m = run({"moment", "--s", "0.6", "--x-list", "1e4,1e5", "--dry-run"});
  CHECK(m.code == kExitPass);
  CHECK(m.out.find("block_size=") != std::string::npos);
  CHECK(m.out.find("max_afe_length=") != std::string::npos);
  const Run p = run({"polymoment", "--s", "0.6", "--x-list", "1e4", "--eta", "2.5", "--dry-run"});
  CHECK(p.code == kExitPass);
  CHECK(p.err.find("outside the proven range") != std::string::npos);
  CHECK(run({"polymoment", "--s", "0.6", "--x-list", "1e4", "--eta", "1.5", "--dry-run"}).err.empty());
}

TEST_CASE("family count study through the CLI", "[cli]") {
  const Run r = run({"moment", "-k", "0", "--x-list", "1e4,3e4,1e5,3e5,1e6"});
  REQUIRE(r.code != kExitUsage);
  CHECK(r.out.rfind("X,empirical_re,empirical_im,predicted_re,predicted_im,residual_abs\n", 0) == 0);
  const auto pos = r.out.find("fitted_exponent=");
  REQUIRE(pos != std::string::npos);
  const double slope = std::stod(r.out.substr(pos + 16));
  CHECK(slope < 0.65);
}

TEST_CASE("moment CSV is identical across worker counts", "[cli]") {
  const std::string a = temp_path("w1.csv"), b = temp_path("w8.csv");
  const std::vector<std::string> base = {"moment", "--s", "0.6;0.7", "--x-list", "1e3,3e3,1e4,1e5"};
  auto with = [&](const std::string& w, const std::string& out) {
    auto v = base;
    v.insert(v.end(), {"--workers", w, "--out", out});
    return run(v);
  };
  const Run r1 = with("1", a), r8 = with("8", b);
  REQUIRE(r1.code != kExitUsage);
  REQUIRE(r1.code != kExitNumeric);
  CHECK(r1.code == r8.code);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a + ".summary.txt") == slurp(b + ".summary.txt"));
}

TEST_CASE("recipe-eval", "[cli]") {
  const Run r = run({"recipe-eval", "--s", "0.6", "--x-list", "1e5"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("\"{1}\"") != std::string::npos);
  CHECK(r.out.find("total_re=") != std::string::npos);
}
