#pragma once

#include "causa/dsl.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace causa::testing {

inline std::filesystem::path corpus_dir() { return CAUSA_CORPUS_DIR; }
inline std::filesystem::path data_dir() { return CAUSA_TEST_DATA_DIR; }

inline std::string diagnostics_text(const ParseResult& r) {
  std::string out;
  for (const auto& d : r.diagnostics) out += format(d) + "\n";
  return out;
}

inline Model parse_model(std::string_view text) {
  auto r = parse(text);
  if (!r.ok()) throw std::runtime_error("model does not parse:\n" + diagnostics_text(r));
  return std::move(*r.model);
}

inline Model load_model(const std::filesystem::path& path) {
  auto r = parse_file(path);
  if (!r.ok()) throw std::runtime_error(path.string() + " does not parse:\n" + diagnostics_text(r));
  return std::move(*r.model);
}

inline Model corpus_model(const std::string& stem) { return load_model(corpus_dir() / (stem + ".cm")); }
inline Model data_model(const std::string& stem) { return load_model(data_dir() / (stem + ".cm")); }

}  // namespace causa::testing
