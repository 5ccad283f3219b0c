#ifndef PROMPTAUG_CONFIG_H_
#define PROMPTAUG_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "promptaug/core.h"

namespace promptaug {

// Plain "key = value" text, one entry per line, '#' starts a comment. Keys are
// the PipelineConfig field names (n_samples, radius_ratio, t_ave, t_uc,
// t_fn_low, t_fn_high, t_fp_low, t_fp_high, t_b, epsilon, uc_formula, seed,
// backend_parallelism). Unknown keys and unparsable values throw
// InvalidArgument. Keys not present keep their value from `base`.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path,
                           PipelineConfig base = {});

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Splits config text into (key, value) pairs in file order without
// interpreting them.
ConfigEntries parse_config_entries(std::string_view text);
ConfigEntries read_config_entries(const std::filesystem::path& path);

// Assigns one field by name; shared by the file parser and CLI overrides.
void set_config_field(PipelineConfig& cfg, const std::string& key,
                      const std::string& value);

// Inverse of parse_config; values print with round-trip precision.
std::string format_config(const PipelineConfig& cfg);

}  // namespace promptaug

#endif  // PROMPTAUG_CONFIG_H_
