#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = isoperim::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "isoperim_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"verify"}).code == 2);
    CHECK(run({"verify", "--claim", "LJ1", "--all"}).code == 2);
    CHECK(run({"verify", "--claim", "LJ1", "--w", "0.9"}).code == 2);
    CHECK(run({"verify", "--claim", "LJ1", "--w", "1/3"}).code == 2);
    CHECK(run({"verify", "--claim", "LJ1", "--ladder", "128,64"}).code == 2);
    CHECK(run({"eval", "nope", "--x", "1/2"}).code == 2);
    CHECK(run({"cube", "--n", "5", "--theorem", "poincare"}).code == 2);
    CHECK(run({"cube", "--n", "4", "--theorem", "nope"}).code == 2);
  }

  TEST_CASE("unknown claim prints the registry") {
    const Run r = run({"verify", "--claim", "NOPE"});
    CHECK(r.code == 2);
    CHECK(r.err.find("LJQ1") != std::string::npos);
    CHECK(r.err.find("P2") != std::string::npos);
  }

  TEST_CASE("verify single claims") {
    CHECK(run({"verify", "--claim", "LJ1"}).code == 0);
    CHECK(run({"verify", "--claim", "LJ1", "--max-depth", "2"}).code == 1);
  }

  TEST_CASE("cube subcommand") {
    CHECK(run({"cube", "--n", "4", "--theorem", "main"}).code == 0);
    CHECK(run({"cube", "--n", "3", "--theorem", "partition"}).code == 0);
    CHECK(run({"cube", "--n", "9", "--theorem", "main"}).code == 2);
    CHECK(run({"cube", "--n", "9", "--theorem", "main", "--sample", "20", "--seed", "4"}).code == 0);
    CHECK(run({"cube", "--n", "3", "--theorem", "hellinger", "--sample", "1", "--seed", "6"}).code == 0);
    const Run ball = run({"cube", "--theorem", "ball", "--n", "4", "--r", "1", "--beta", "1/2"});
    CHECK(ball.code == 0);
    CHECK(ball.out.find("4.330127018922193") != std::string::npos);
  }

  TEST_CASE("constants and eval") {
    const Run c = run({"constants"});
    CHECK(c.code == 0);
    CHECK(c.out.find("1.9452056087465050") != std::string::npos);
    const Run e = run({"eval", "J", "--x", "7/10"});
    CHECK(e.code == 0);
    CHECK(e.out.find("4.58312137002023") != std::string::npos);
    CHECK(run({"eval", "G", "--x", "1/4"}).code == 2);
  }

  TEST_CASE("precision from the environment, flag wins") {
    ::setenv("ISOPERIM_PRECISION", "200", 1);
    const Run env = run({"eval", "Phi", "--x", "1"});
    const Run flag = run({"eval", "Phi", "--x", "1", "--precision", "64"});
    ::setenv("ISOPERIM_PRECISION", "many", 1);
    const Run bad = run({"eval", "Phi", "--x", "1"});
    ::unsetenv("ISOPERIM_PRECISION");
    CHECK(env.code == 0);
    CHECK(env.out.size() > flag.out.size() + 40);
    CHECK(bad.code == 2);
  }

  TEST_CASE("certificates: write, check, tamper, truncate") {
    const fs::path dir = scratch_dir() / "certs";
    fs::remove_all(dir);
    const fs::path report = scratch_dir() / "report.json";
    CHECK(run({"verify", "--claim", "P2", "--certificate-out", dir.string(), "--report-out", report.string()}).code == 0);
    const fs::path cert = dir / "P2.cert";
    REQUIRE(fs::exists(cert));
    CHECK(slurp(report).find("\"claim.P2\"") != std::string::npos);
    CHECK(run({"check-certificate", cert.string()}).code == 0);

    const std::string text = slurp(cert);
    // Change one hex digit in the last leaf's bound.
    std::string tampered = text;
    const auto pos = tampered.rfind("\"bound_lo\"");
    REQUIRE(pos != std::string::npos);
    const auto digit = tampered.find("0x1.", pos) + 4;
    tampered[digit] = tampered[digit] == 'f' ? 'e' : 'f';
    spit(dir / "tampered.cert", tampered);
    CHECK(run({"check-certificate", (dir / "tampered.cert").string()}).code == 1);

    spit(dir / "truncated.cert", text.substr(0, text.size() / 3));
    CHECK(run({"check-certificate", (dir / "truncated.cert").string()}).code == 2);
    CHECK(run({"check-certificate", (dir / "missing.cert").string()}).code == 2);
  }
}
