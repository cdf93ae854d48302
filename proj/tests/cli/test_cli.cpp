#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run qfs_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = qfs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return (fs::path(QFS_TEST_CORPUS_DIR) / name).string(); }

// A fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("qfs-cli-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct CacheEnv {
  explicit CacheEnv(const fs::path& dir) { ::setenv("QFS_CACHE_DIR", dir.c_str(), 1); }
  ~CacheEnv() { ::unsetenv("QFS_CACHE_DIR"); }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bounds") {
    const auto r3 = qfs_run({"bounds", "--r", "3"});
    CHECK(r3.code == 0);
    CHECK(r3.out == "12 <= beta(3;Qp) <= 16\n");

    const auto table = qfs_run({"bounds", "--table", "9"});
    REQUIRE(table.code == 0);
    std::istringstream rows(table.out);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "r lower upper rule older");
    int data = 0;
    while (std::getline(rows, line))
      if (!line.empty() && line[0] != '#') ++data;
    CHECK(data == 9);

    const auto js = qfs_run({"--format", "json", "bounds", "--r", "7"});
    REQUIRE(js.code == 0);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j.at("lower") == 28);
    CHECK(j.at("upper") == 84);
    CHECK(j.at("rule") == "ind1(1)+ind2");
  }

  TEST_CASE("zeros and minimized on the F_2 triple") {
    const auto z = qfs_run({"zeros", corpus("f2-triple.qfs"), "--nonsingular"});
    CHECK(z.code == 1);
    CHECK(z.out.find("visited: 8192 (exhaustive)") != std::string::npos);
    CHECK(z.out.find("no nonsingular common zero (certified)") != std::string::npos);

    TempDir cache("min");
    CacheEnv env(cache.path);
    const auto m = qfs_run({"minimized", corpus("f2-triple.qfs")});
    CHECK(m.code == 0);
    CHECK(m.out.find("verdict: minimized") != std::string::npos);
    CHECK(m.out.find("span subspaces checked: 15") != std::string::npos);
    const auto again = qfs_run({"minimized", corpus("f2-triple.qfs")});
    CHECK(again.out == m.out);
    CHECK_FALSE(fs::is_empty(cache.path));
    const auto fresh = qfs_run({"--no-cache", "minimized", corpus("f2-triple.qfs")});
    CHECK(fresh.out == m.out);
  }

  TEST_CASE("output is byte-identical across runs") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"--format", "json", "zeros", corpus("q3-reduction.qfs")},
          std::vector<std::string>{"--seed", "9", "explore-beta", "--r", "2", "--m", "1", "--p", "3", "--trials", "5"},
          std::vector<std::string>{"--trace", "bounds", "--r", "11"}}) {
      const auto a = qfs_run(args), b = qfs_run(args);
      CHECK(a.code == b.code);
      CHECK(a.out == b.out);
    }
  }

  TEST_CASE("usage and input errors exit with 2") {
    CHECK(qfs_run({}).code == 2);
    CHECK(qfs_run({"no-such-command"}).code == 2);
    const auto missing = qfs_run({"zeros", "/nonexistent/file.qfs"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("error:") != std::string::npos);

    TempDir dir("bad");
    const auto bad = dir.path / "bad.qfs";
    std::ofstream(bad) << "field Fq 3\nvars 2\nform q = x1^2 + $x2\n";
    const auto parse = qfs_run({"zeros", bad.string()});
    CHECK(parse.code == 2);
    CHECK(parse.err.find("SyntaxError: line 3, column 17") != std::string::npos);
  }

  TEST_CASE("verify-paper replays the whole corpus") {
    TempDir cache("verify");
    CacheEnv env(cache.path);
    const auto all = qfs_run({"verify-paper"});
    CHECK(all.code == 0);
    CHECK(all.out.find("20/20 entries passed") != std::string::npos);
    const auto cached = qfs_run({"verify-paper"});
    CHECK(cached.out == all.out);

    const auto js = qfs_run({"--format", "json", "verify-paper", "--filter", "q3"});
    REQUIRE(js.code == 0);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j.at("failed") == 0);
    CHECK(j.at("entries").size() == 4);
  }

  TEST_CASE("a corrupted corpus entry fails verification") {
    TempDir tmp("mutated");
    TempDir cache("mutated-cache");
    CacheEnv env(cache.path);
    const fs::path dir = tmp.path / "corpus";
    fs::copy(QFS_TEST_CORPUS_DIR, dir, fs::copy_options::recursive);

    const fs::path target = dir / "f2-triple.qfs";
    std::ifstream in(target);
    std::stringstream text;
    text << in.rdbuf();
    in.close();
    std::string s = text.str();
    const std::string original = "form Q3 = x1^2 + x1*x2 + x2^2 + x5*x7 + x6*x8 + x7^2 + x8^2";
    const auto at = s.find(original);
    REQUIRE(at != std::string::npos);
    s.replace(at, original.size(), "form Q3 = x1^2 + x1*x2 + x2^2 + x5*x7 + x6*x8 + x7^2");
    std::ofstream(target) << s;

    const auto res = qfs_run({"verify-paper", "--corpus", dir.string()});
    CHECK(res.code == 1);
    CHECK(res.out.find("FAIL f2-triple-singular") != std::string::npos);
    CHECK(res.out.find("19/20 entries passed") != std::string::npos);
  }
}
