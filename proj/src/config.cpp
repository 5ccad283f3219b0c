#include "promptaug/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace promptaug {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("config: bad value '" + value + "' for " + key);
  }
  return out;
}

}  // namespace

void set_config_field(PipelineConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "n_samples") {
    cfg.n_samples = parse_number<int>(key, value);
  } else if (key == "radius_ratio") {
    cfg.radius_ratio = parse_number<double>(key, value);
  } else if (key == "t_ave") {
    cfg.t_ave = parse_number<double>(key, value);
  } else if (key == "t_uc") {
    cfg.t_uc = parse_number<double>(key, value);
  } else if (key == "t_fn_low") {
    cfg.t_fn_low = parse_number<double>(key, value);
  } else if (key == "t_fn_high") {
    cfg.t_fn_high = parse_number<double>(key, value);
  } else if (key == "t_fp_low") {
    cfg.t_fp_low = parse_number<double>(key, value);
  } else if (key == "t_fp_high") {
    cfg.t_fp_high = parse_number<double>(key, value);
  } else if (key == "t_b") {
    cfg.t_b = parse_number<int>(key, value);
  } else if (key == "epsilon") {
    cfg.epsilon = parse_number<double>(key, value);
  } else if (key == "uc_formula") {
    cfg.uc_formula = parse_uncertainty_formula(value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "backend_parallelism") {
    cfg.backend_parallelism = parse_number<int>(key, value);
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

ConfigEntries parse_config_entries(std::string_view text) {
  ConfigEntries entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": expected key = value");
    }
    entries.emplace_back(trim(std::string_view(stripped).substr(0, eq)),
                         trim(std::string_view(stripped).substr(eq + 1)));
  }
  return entries;
}

ConfigEntries read_config_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_entries(buffer.str());
}

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
  for (const auto& [key, value] : parse_config_entries(text)) {
    set_config_field(base, key, value);
  }
  base.validate();
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  for (const auto& [key, value] : read_config_entries(path)) {
    set_config_field(base, key, value);
  }
  base.validate();
  return base;
}

std::string format_config(const PipelineConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "n_samples = " << cfg.n_samples << '\n'
     << "radius_ratio = " << cfg.radius_ratio << '\n'
     << "t_ave = " << cfg.t_ave << '\n'
     << "t_uc = " << cfg.t_uc << '\n'
     << "t_fn_low = " << cfg.t_fn_low << '\n'
     << "t_fn_high = " << cfg.t_fn_high << '\n'
     << "t_fp_low = " << cfg.t_fp_low << '\n'
     << "t_fp_high = " << cfg.t_fp_high << '\n'
     << "t_b = " << cfg.t_b << '\n'
     << "epsilon = " << cfg.epsilon << '\n'
     << "uc_formula = " << to_string(cfg.uc_formula) << '\n'
     << "seed = " << cfg.seed << '\n'
     << "backend_parallelism = " << cfg.backend_parallelism << '\n';
  return os.str();
}

}  // namespace promptaug
