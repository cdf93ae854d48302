#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qfs::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kError = 2 };

struct GlobalOptions {
  std::string format = "text";
  std::uint64_t seed = 1;
  std::optional<std::uint32_t> precision;
  std::optional<std::uint64_t> limit;
  bool trace = false;
  bool no_cache = false;

  bool json() const { return format == "json"; }
};

// argv[0] is the program name.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyOutcome {
  std::string id;
  std::string group;
  std::string anchor;
  bool passed = false;
  std::string expected;
  std::string actual;
};

// Runs the corpus manifest in `dir`; entries whose id or group does not
// contain `filter` are skipped.
std::vector<VerifyOutcome> verify_corpus(const std::filesystem::path& dir, const std::string& filter,
                                         const GlobalOptions& options);

// $QFS_CORPUS_DIR, else the source-tree corpus.
std::filesystem::path default_corpus_dir();

}  // namespace qfs::cli
