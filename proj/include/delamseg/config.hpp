#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "delamseg/pipeline.hpp"

namespace delamseg {

/// Ordered key=value document.
///
/// Grammar: one `key=value` per line; keys are dotted section paths
/// (e.g. `diffusion.sigma`); surrounding whitespace is trimmed; blank lines and
/// lines starting with '#' are ignored; a key may appear only once.
class KeyValues {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static KeyValues parse(std::string_view text);

  /// Inserts or replaces, keeping the original position on replace.
  void set(const std::string& key, std::string value);
  bool contains(std::string_view key) const;
  const std::string& get(std::string_view key) const;

  double get_double(std::string_view key) const;
  int get_int(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;

  const std::vector<std::pair<std::string, Entry>>& entries() const noexcept {
    return entries_;
  }

  std::string format() const;

 private:
  const Entry& entry(std::string_view key) const;

  std::vector<std::pair<std::string, Entry>> entries_;
};

/// Pipeline settings plus the file-level options the CLI needs to reproduce
/// a run.
struct RunConfig {
  PipelineConfig pipeline;
  /// Empty when no exclusion mask is used.
  std::string exclusion_mask_path;
};

/// Applies recognized keys onto `base`. Keys may carry a leading "config."
/// (as embedded in run reports); keys under "report." are ignored; anything
/// else unknown is a ParseError naming the line.
RunConfig apply_config(const KeyValues& kv, RunConfig base = {});

/// Fully resolved settings, one key per line, doubles in shortest exact form.
KeyValues to_key_values(const RunConfig& cfg, std::string_view prefix = "");

RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace delamseg
