#include "output.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>

namespace qfs::cli {

void Report::emit(std::ostream& out, const GlobalOptions& options) const {
  if (options.json()) {
    out << json.dump(2) << "\n";
  } else {
    out << text.str();
  }
}

std::string read_text(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

SystemDocument read_document(const std::string& path) { return parse_system(read_text(path)); }

std::string vector_text(const FiniteField& field, std::span<const std::uint32_t> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += field.to_string(x[i]);
  }
  return s + ")";
}

Json vector_json(const FiniteField& field, std::span<const std::uint32_t> x) {
  Json a = Json::array();
  for (auto v : x) {
    if (field.is_prime_field()) {
      a.push_back(v);
    } else {
      a.push_back(field.to_string(v));
    }
  }
  return a;
}

std::string vector_text(std::span<const mpz_class> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += x[i].get_str();
  }
  return s + ")";
}

std::string matrix_text(const QMatrix& m, std::string_view indent) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += indent;
    s += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += " ";
      s += m(i, j).get_str();
    }
    s += "]\n";
  }
  return s;
}

Json matrix_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string matrix_text(const FiniteField& field, const Matrix<std::uint32_t>& m, std::string_view indent) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += indent;
    s += vector_text(field, m.row(i));
    s += "\n";
  }
  return s;
}

Json matrix_json(const FiniteField& field, const Matrix<std::uint32_t>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(vector_json(field, m.row(i)));
  return rows;
}

std::string basis_text(const FiniteField& field, const Subspace<FiniteField>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    s += "basis";
    for (auto c : v.basis().row(i)) s += " " + field.to_string(c);
    s += "\n";
  }
  return s;
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("QFS_CACHE_DIR"); env && *env) return env;
  return ".qfs-cache";
}

namespace {

std::filesystem::path cache_file(std::uint64_t key) {
  std::ostringstream name;
  name << std::hex << std::setw(16) << std::setfill('0') << key << ".json";
  return cache_dir() / name.str();
}

}  // namespace

std::optional<Json> cache_load(std::uint64_t key) {
  std::ifstream in(cache_file(key));
  if (!in) return std::nullopt;
  try {
    return Json::parse(in);
  } catch (const Json::parse_error&) {
    return std::nullopt;  // a torn write; recompute
  }
}

void cache_store(std::uint64_t key, const Json& value) {
  std::error_code ec;
  std::filesystem::create_directories(cache_dir(), ec);
  if (ec) return;
  const auto path = cache_file(key);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << value.dump() << "\n";
  }
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace qfs::cli
