#include "medrep/embedding_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "medrep/csv.hpp"

namespace medrep {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

EmbeddingStore EmbeddingStore::parse(std::string_view text, OovPolicy policy,
                                     const std::string& source, const WarningSink& warnings) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw ParseError(source, 1, "empty word-vector file");
  const auto header = split_fields(line);
  std::size_t declared = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_size(header[0], declared) || !parse_size(header[1], dim) || dim == 0) {
    throw ParseError(source, line_no, "expected header '<vocab_count> <dim>'");
  }

  EmbeddingStore store(dim, policy);
  std::size_t rows = 0;
  while (next_line(line)) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() != dim + 1) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(dim) + " components, got " +
                           std::to_string(fields.size() - 1));
    }
    Vector v(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_double(fields[k + 1], v[k])) {
        throw ParseError(source, line_no, "component " + std::to_string(k + 1) + " is not a finite number");
      }
    }
    std::string token(fields[0]);
    if (store.table_.count(token)) {
      warn(warnings, source + ":" + std::to_string(line_no) + ": duplicate token '" + token +
                         "', keeping the last row");
    }
    store.table_.insert_or_assign(std::move(token), std::move(v));
    ++rows;
  }
  if (rows == 0) throw ParseError(source, line_no, "word-vector file has no vectors");
  if (rows != declared) {
    throw ParseError(source, 1,
                     "header declares " + std::to_string(declared) + " rows, file has " + std::to_string(rows));
  }
  return store;
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path, OovPolicy policy,
                                    const WarningSink& warnings) {
  return parse(csv::read_file(path), policy, path.string(), warnings);
}

const Vector* EmbeddingStore::lookup(const std::string& token) const {
  const auto it = table_.find(token);
  return it == table_.end() ? nullptr : &it->second;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ArgumentError("cosine: vectors differ in dimension");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw UndefinedError("cosine similarity is undefined for a zero vector");
  return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

double euclidean(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ArgumentError("euclidean: vectors differ in dimension");
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace medrep
