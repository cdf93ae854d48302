#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "qfs/echelon.hpp"
#include "qfs/field.hpp"
#include "qfs/formlang.hpp"
#include "qfs/quadform.hpp"

namespace qfs::cli {

using Json = nlohmann::ordered_json;

// Collects a text rendering and a JSON rendering of the same report.
struct Report {
  Json json = Json::object();
  std::ostringstream text;

  void emit(std::ostream& out, const GlobalOptions& options) const;
};

// Reads a file, or standard input for "-" or an empty path.
std::string read_text(const std::string& path);
SystemDocument read_document(const std::string& path);

std::string vector_text(const FiniteField& field, std::span<const std::uint32_t> x);
Json vector_json(const FiniteField& field, std::span<const std::uint32_t> x);
std::string vector_text(std::span<const mpz_class> x);

std::string matrix_text(const QMatrix& m, std::string_view indent);
Json matrix_json(const QMatrix& m);
std::string matrix_text(const FiniteField& field, const Matrix<std::uint32_t>& m, std::string_view indent);
Json matrix_json(const FiniteField& field, const Matrix<std::uint32_t>& m);

// "basis 1 0 1" lines, one per row.
std::string basis_text(const FiniteField& field, const Subspace<FiniteField>& v);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

// Cached reports live in $QFS_CACHE_DIR or ./.qfs-cache, one JSON file per key.
std::filesystem::path cache_dir();
std::optional<Json> cache_load(std::uint64_t key);
void cache_store(std::uint64_t key, const Json& value);

}  // namespace qfs::cli

namespace qfs::cli {

// is_Fq_minimized report, served from the cache unless `no_cache`.
Json minimized_report(const FFSystem& s, bool no_cache);

}  // namespace qfs::cli
