#pragma once

#include "causa/ontology.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace causa {

using Sidecar = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines; `#` starts a comment. Keys keep their inner spaces.
Sidecar parse_sidecar(std::string_view text);

struct ExpectationResult {
  std::string key;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct CorpusEntry {
  std::string name;
  bool pass = false;
  std::string error;  // load failure, missing sidecar
  std::vector<ExpectationResult> results;
};

struct CorpusReport {
  std::vector<CorpusEntry> entries;
  [[nodiscard]] std::size_t passed() const;
  [[nodiscard]] bool ok() const { return passed() == entries.size(); }
};

/// Evaluates one expectation against a model and returns what the engine
/// computes, in the textual form the sidecars use. Some keys read sibling
/// entries (a `published` key reads its `chain`; activations read the
/// `simulate` horizon).
std::string evaluate_expectation(const Model& model, const std::string& key, const std::string& expected,
                                 const Sidecar& sidecar = {});

/// Checks `<stem>.cm` against `<stem>.expect`.
CorpusEntry check_entry(const std::filesystem::path& model_path);

/// Every .cm file in `dir`, sorted by name. Throws Error("IO") when the
/// directory cannot be read.
CorpusReport run_corpus(const std::filesystem::path& dir);

std::string render_table(const CorpusReport& report);

} // namespace causa
