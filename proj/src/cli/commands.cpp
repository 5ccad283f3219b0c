#include "promptaug/cli.h"

#include <charconv>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "artifacts.h"
#include "promptaug/config.h"
#include "promptaug/harness.h"
#include "promptaug/image_io.h"
#include "promptaug/protocol.h"
#include "promptaug/rng.h"
#include "promptaug/ss2v.h"
#include "promptaug/volume_io.h"

namespace promptaug::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Thrown inside command bodies to leave with a specific exit status.
struct CommandExit {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CommandExit{code, message};
}

// Options shared by every command that runs the pipeline.
struct PipelineOptions {
  std::string config_path;
  std::string preset;
  std::map<std::string, std::string> overrides;  // PipelineConfig field -> text
  std::string backend = "mock";
  std::string endpoint;
  int timeout_ms = 30000;
  MockOracleConfig mock = phantom_mock_config();
};

void add_pipeline_options(CLI::App* cmd, PipelineOptions& o) {
  cmd->add_option("--config", o.config_path, "key = value pipeline config file");
  cmd->add_option("--preset", o.preset, "Starting values before --config")
      ->check(CLI::IsMember({"kidney-fine", "kidney-medium", "kidney-coarse",
                             "placenta", "phantom"}));
  const std::pair<const char*, const char*> fields[] = {
      {"--seed", "seed"},
      {"--n-samples", "n_samples"},
      {"--radius-ratio", "radius_ratio"},
      {"--t-ave", "t_ave"},
      {"--t-uc", "t_uc"},
      {"--t-fn-low", "t_fn_low"},
      {"--t-fn-high", "t_fn_high"},
      {"--t-fp-low", "t_fp_low"},
      {"--t-fp-high", "t_fp_high"},
      {"--t-b", "t_b"},
      {"--epsilon", "epsilon"},
      {"--uc-formula", "uc_formula"},
      {"--parallelism", "backend_parallelism"},
  };
  for (const auto& [flag, field] : fields) {
    const std::string key = field;
    cmd->add_option_function<std::string>(
        flag, [&o, key](const std::string& v) { o.overrides[key] = v; },
        "Overrides " + key);
  }
  cmd->add_option("--backend", o.backend, "Segmenter backend")
      ->check(CLI::IsMember({"mock", "remote"}));
  cmd->add_option("--endpoint", o.endpoint, "Remote backend URL, http://host:port");
  cmd->add_option("--timeout-ms", o.timeout_ms, "Per-request timeout (remote)");
  cmd->add_option("--mock-threshold", o.mock.intensity_threshold,
                  "Mock oracle intensity threshold");
  cmd->add_option("--mock-keep-largest", o.mock.keep_largest_component,
                  "Mock oracle keeps the largest component (true/false)");
  cmd->add_option("--mock-dilation", o.mock.dilation_radius,
                  "Mock oracle dilation radius");
}

PipelineConfig preset_config(const std::string& name) {
  if (name == "kidney-fine") return kidney_preset(true);
  if (name == "kidney-medium" || name == "kidney-coarse") return kidney_preset(false);
  if (name == "placenta") return placenta_preset();
  if (name == "phantom") return phantom_pipeline_config();
  return PipelineConfig{};
}

// preset -> config file -> flags. Without a seed anywhere, one is drawn from
// the OS entropy source; it is echoed to result.json for replay.
PipelineConfig resolve_config(const PipelineOptions& o) {
  PipelineConfig cfg = preset_config(o.preset);
  bool seeded = false;
  try {
    if (!o.config_path.empty()) {
      for (const auto& [key, value] : read_config_entries(o.config_path)) {
        set_config_field(cfg, key, value);
        seeded = seeded || key == "seed";
      }
    }
    for (const auto& [key, value] : o.overrides) {
      set_config_field(cfg, key, value);
      seeded = seeded || key == "seed";
    }
    cfg.validate();
  } catch (const InvalidArgument& e) {
    fail(kExitBadInput, e.what());
  }
  if (!seeded) {
    std::random_device rd;
    cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  return cfg;
}

std::unique_ptr<SegmenterBackend> make_backend(const PipelineOptions& o) {
  if (o.backend == "remote") {
    if (o.endpoint.empty()) fail(kExitBadInput, "--backend remote needs --endpoint");
    return std::make_unique<RemoteSegmenter>(
        o.endpoint, std::chrono::milliseconds(o.timeout_ms));
  }
  try {
    return std::make_unique<MockSegmenter>(o.mock);
  } catch (const InvalidArgument& e) {
    fail(kExitBadInput, e.what());
  }
}

BoundingBox parse_box(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int x = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      fail(kExitBadBox, "invalid --box '" + text + "'");
    }
    v.push_back(x);
  }
  if (v.size() != 4) fail(kExitBadBox, "--box needs xmin,ymin,xmax,ymax");
  return {v[0], v[1], v[2], v[3]};
}

void check_box(const BoundingBox& box, int width, int height) {
  if (!box.fits_within(width, height)) {
    fail(kExitBadBox, "box " + to_string(box) + " is not inside the " +
                          std::to_string(width) + "x" + std::to_string(height) +
                          " image");
  }
}

GrayImage2D read_image_or_fail(const std::string& path) {
  try {
    return read_png_gray(path);
  } catch (const IoError& e) {
    fail(kExitBadInput, e.what());
  }
}

std::string describe(const BackendError& e) {
  std::string where;
  if (e.slice_index() >= 0) where += " (slice " + std::to_string(e.slice_index()) + ")";
  if (e.box_index() >= 0) where += " (box " + std::to_string(e.box_index()) + ")";
  return "backend failure [" + to_string(e.kind()) + "]" + where + ": " + e.what();
}

// Box from --box, or from a ground-truth mask expanded at --level.
struct BoxOptions {
  std::string box;
  std::string truth;
  std::string level = "fine";
};

void add_box_options(CLI::App* cmd, BoxOptions& b, const char* truth_help) {
  cmd->add_option("--box", b.box, "Prompt box xmin,ymin,xmax,ymax (half-open)");
  cmd->add_option("--truth", b.truth, truth_help);
  cmd->add_option("--level", b.level, "Coarseness for --truth boxes")
      ->check(CLI::IsMember({"fine", "medium", "coarse"}));
}

BoundingBox box_from_options(const BoxOptions& b, const BinaryMask2D* truth,
                             std::uint64_t seed) {
  if (!b.box.empty()) return parse_box(b.box);
  if (truth == nullptr) fail(kExitBadInput, "need --box or --truth");
  if (truth->none()) fail(kExitBadBox, "ground truth mask is empty");
  return box_from_mask(*truth, parse_coarseness(b.level), mix_seed(seed, 0xB0B));
}

// --- seg2d ----------------------------------------------------------------

struct Seg2dArgs {
  std::string image;
  std::string out;
  BoxOptions box;
  PipelineOptions pipeline;
};

int cmd_seg2d(const Seg2dArgs& a, std::ostream& out) {
  const GrayImage2D image = read_image_or_fail(a.image);
  std::optional<BinaryMask2D> truth;
  if (a.box.box.empty() && !a.box.truth.empty()) {
    try {
      truth = read_png_mask(a.box.truth);
    } catch (const IoError& e) {
      fail(kExitBadInput, e.what());
    }
    if (!truth->same_shape(image)) fail(kExitBadInput, "--truth size differs from image");
  }
  const PipelineConfig cfg = resolve_config(a.pipeline);
  const BoundingBox box = box_from_options(a.box, truth ? &*truth : nullptr, cfg.seed);
  check_box(box, image.width(), image.height());
  auto backend = make_backend(a.pipeline);

  FnpcResult result;
  try {
    result = run_fnpc_2d(image, box, cfg, *backend);
  } catch (const BackendError& e) {
    fail(kExitBackend, describe(e));
  }
  write_fnpc_artifacts(a.out, image, result, cfg, backend->info(), json::object());
  out << "seed " << cfg.seed << ": m_ave " << result.m_ave.count() << " px, m_fn "
      << result.m_fn.count() << ", m_fp " << result.m_fp.count() << ", m_fnpc "
      << result.m_fnpc.count() << " px -> " << a.out << '\n';
  return kExitOk;
}

// --- seg3d ----------------------------------------------------------------

struct Seg3dArgs {
  std::string volume;
  std::string out;
  int start_slice = -1;
  BoxOptions box;
  PipelineOptions pipeline;
};

int cmd_seg3d(const Seg3dArgs& a, std::ostream& out) {
  GrayVolume3D volume;
  std::optional<MaskVolume3D> truth;
  try {
    volume = load_gray_volume(a.volume);
    if (a.box.box.empty() && !a.box.truth.empty()) truth = load_mask_volume(a.box.truth);
  } catch (const ManifestError& e) {
    fail(kExitManifest, e.what());
  }
  const int start = a.start_slice < 0 ? central_slice(volume) : a.start_slice;
  if (start >= volume.slice_count()) {
    fail(kExitBadInput, "--start-slice outside the volume");
  }
  if (truth && (truth->slice_count() != volume.slice_count() ||
                truth->width() != volume.width() || truth->height() != volume.height())) {
    fail(kExitManifest, "truth volume shape differs from the image volume");
  }
  const PipelineConfig cfg = resolve_config(a.pipeline);
  const BoundingBox box =
      box_from_options(a.box, truth ? &truth->slice(start) : nullptr, cfg.seed);
  check_box(box, volume.width(), volume.height());
  auto backend = make_backend(a.pipeline);

  Ss2vResult result;
  try {
    result = run_ss2v(volume, start, box, cfg, *backend);
  } catch (const BackendError& e) {
    fail(kExitBackend, describe(e));
  }

  const fs::path dir = a.out;
  fs::create_directories(dir);
  write_mask_volume(dir / "masks", result.mask_volume);
  write_fnpc_artifacts(dir / "start_slice", volume.slice(start),
                       result.per_slice_results.at(start), cfg, backend->info(),
                       json{{"slice", start}});

  json boxes;
  boxes["convention"] = kBoxConvention;
  boxes["start_slice"] = start;
  boxes["t_b"] = cfg.t_b;
  boxes["slices"] = json::array();
  for (const auto& [slice, b] : result.boxes_per_slice) {
    boxes["slices"].push_back(
        {{"slice", slice},
         {"box", box_to_json(b)},
         {"provenance",
          result.provenance(slice) == BoxProvenance::kManual ? "manual" : "synthetic"}});
  }
  write_json(dir / "boxes.json", boxes);

  auto direction = [](const DirectionReport& d) {
    return json{{"reason", to_string(d.reason)}, {"last_slice", d.last_slice}};
  };
  json r;
  r["seed"] = cfg.seed;
  r["config"] = config_to_json(cfg);
  r["backend"] = {{"name", backend->info().name},
                  {"deterministic", backend->info().deterministic}};
  r["volume"] = {{"width", volume.width()},
                 {"height", volume.height()},
                 {"slice_count", volume.slice_count()}};
  r["start_slice"] = start;
  r["termination"] = {{"up", direction(result.up)}, {"down", direction(result.down)}};
  r["segmented_slices"] = result.boxes_per_slice.size();
  write_json(dir / "result.json", r);

  out << "seed " << cfg.seed << ": segmented " << result.boxes_per_slice.size()
      << " slices from slice " << start << " (up: " << to_string(result.up.reason)
      << ", down: " << to_string(result.down.reason) << ") -> " << a.out << '\n';
  return kExitOk;
}

// --- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string dataset;
  std::string out;
  std::string level = "fine";
  PipelineOptions pipeline;
};

std::vector<Sample> load_dataset(const fs::path& manifest, const std::string& level) {
  std::ifstream in(manifest);
  if (!in) fail(kExitBadInput, "cannot open dataset " + manifest.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("samples") ||
      !j["samples"].is_array()) {
    fail(kExitBadInput, "dataset must be {\"samples\": [...]}");
  }
  const fs::path base = manifest.parent_path();
  std::vector<Sample> samples;
  int index = 0;
  for (const auto& e : j["samples"]) {
    const std::string id = e.value("id", "sample_" + std::to_string(index));
    CoarsenessLevel lvl;
    try {
      lvl = parse_coarseness(e.value("level", level));
    } catch (const InvalidArgument& err) {
      fail(kExitBadInput, id + ": " + err.what());
    }
    try {
      if (e.contains("volume")) {
        Sample3D s{id, load_gray_volume(base / e.at("volume").get<std::string>()),
                   load_mask_volume(base / e.at("truth_volume").get<std::string>()), lvl};
        samples.emplace_back(std::move(s));
      } else {
        GrayImage2D image = read_png_gray(base / e.at("image").get<std::string>());
        BinaryMask2D truth = read_png_mask(base / e.at("truth").get<std::string>());
        if (!truth.same_shape(image)) fail(kExitBadInput, id + ": truth size differs");
        samples.emplace_back(Sample2D{id, std::move(image), std::move(truth), lvl});
      }
    } catch (const ManifestError& err) {
      fail(kExitManifest, id + ": " + err.what());
    } catch (const IoError& err) {
      fail(kExitBadInput, id + ": " + err.what());
    } catch (const json::exception& err) {
      fail(kExitBadInput, id + ": " + err.what());
    }
    ++index;
  }
  return samples;
}

int cmd_eval(const EvalArgs& a, CLI::App* cmd, std::ostream& out, std::ostream& err) {
  const std::vector<Sample> samples = load_dataset(a.dataset, a.level);
  if (samples.empty()) {
    err << "dataset has no samples\n" << cmd->help();
    return kExitBadInput;
  }
  const PipelineConfig cfg = resolve_config(a.pipeline);
  auto backend = make_backend(a.pipeline);
  const EvaluationResult result = evaluate(samples, cfg, *backend);

  std::ostringstream csv;
  write_csv(csv, result);
  if (a.out.empty() || a.out == "-") {
    out << csv.str();
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) fail(kExitBadInput, "cannot write " + a.out);
    file << csv.str();
    out << "seed " << cfg.seed << ": " << samples.size() << " samples -> " << a.out
        << '\n';
    for (const auto& s : result.summary) {
      char line[160];
      std::snprintf(line, sizeof(line), "  %-8s %-7s dice %.4f  assd %.3f  hd %.3f\n",
                    s.method.c_str(), to_string(s.level).c_str(), s.mean.dice,
                    s.mean.assd, s.mean.hd);
      out << line;
    }
  }
  for (const auto& f : result.failures) {
    err << "sample " << f.sample_id << " failed: " << f.message << '\n';
  }
  return result.ok() ? kExitOk : kExitBackend;
}

// --- phantom --------------------------------------------------------------

struct PhantomArgs {
  std::string out;
  int count = 20;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> levels{"fine", "medium", "coarse"};
  bool volume = false;
  int size = 64;
};

int cmd_phantom(const PhantomArgs& a, std::ostream& out) {
  std::uint64_t seed = 0;
  if (a.seed) {
    seed = *a.seed;
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  const fs::path dir = a.out;
  fs::create_directories(dir);
  json samples = json::array();

  if (a.volume) {
    if (a.size < 16) fail(kExitBadInput, "--size must be >= 16");
    PhantomSpec spec;
    spec.width = spec.height = spec.depth = a.size;
    spec.center_x = spec.center_y = spec.center_z = a.size / 2.0;
    spec.radius_x = 0.3 * a.size;
    spec.radius_y = 0.25 * a.size;
    spec.radius_z = 0.35 * a.size;
    spec.noise_amplitude = 10;
    spec.seed = seed;
    const Phantom3D p = make_phantom_3d(spec);
    write_gray_volume(dir / "volume", p.volume);
    write_mask_volume(dir / "truth_volume", p.truth);
    for (const auto& level : a.levels) {
      samples.push_back({{"id", "ellipsoid"},
                         {"volume", "volume"},
                         {"truth_volume", "truth_volume"},
                         {"level", level}});
    }
  } else {
    if (a.count <= 0) fail(kExitBadInput, "--count must be > 0");
    fs::create_directories(dir / "images");
    fs::create_directories(dir / "truth");
    const auto specs = phantom_suite_specs(a.count, seed);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "phantom_%02zu", i);
      const Phantom2D p = make_phantom_2d(specs[i]);
      write_png_gray(dir / "images" / (std::string(name) + ".png"), p.image);
      write_png_mask(dir / "truth" / (std::string(name) + ".png"), p.truth);
    }
    for (const auto& level : a.levels) {
      for (std::size_t i = 0; i < specs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "phantom_%02zu", i);
        samples.push_back({{"id", name},
                           {"image", "images/" + std::string(name) + ".png"},
                           {"truth", "truth/" + std::string(name) + ".png"},
                           {"level", level}});
      }
    }
  }
  write_json(dir / "dataset.json", json{{"seed", seed}, {"samples", samples}});
  PipelineConfig cfg = phantom_pipeline_config();
  std::string text = format_config(cfg);
  // The evaluation seed is chosen at eval time.
  text.erase(text.find("seed = "), text.find('\n', text.find("seed = ")) -
                                      text.find("seed = ") + 1);
  std::ofstream(dir / "pipeline.cfg") << text;
  out << "seed " << seed << ": wrote " << samples.size() << " samples to "
      << (dir / "dataset.json").string() << '\n';
  return kExitOk;
}

// --- serve-mock -----------------------------------------------------------

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8765;
  MockOracleConfig mock = phantom_mock_config();
};

int cmd_serve_mock(const ServeArgs& a, std::ostream& out) {
  MockSegmenter backend(a.mock);
  ProtocolServer server(backend, "mock-oracle");
  out << "serving mock segmenter on http://" << a.host << ":" << a.port << std::endl;
  server.listen(a.host, a.port);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prompt-augmented segmentation with uncertainty-guided correction"};
  app.name("promptaug");
  app.require_subcommand(1);

  Seg2dArgs seg2d;
  auto* seg2d_cmd = app.add_subcommand("seg2d", "Segment one image from a box prompt");
  seg2d_cmd->add_option("--image", seg2d.image, "8-bit grayscale PNG")->required();
  seg2d_cmd->add_option("--out", seg2d.out, "Output directory")->required();
  add_box_options(seg2d_cmd, seg2d.box, "Ground-truth mask PNG to derive the box from");
  add_pipeline_options(seg2d_cmd, seg2d.pipeline);

  Seg3dArgs seg3d;
  auto* seg3d_cmd =
      app.add_subcommand("seg3d", "Segment a volume from one slice's box prompt");
  seg3d_cmd->add_option("--volume", seg3d.volume, "Directory with manifest.json")
      ->required();
  seg3d_cmd->add_option("--out", seg3d.out, "Output directory")->required();
  seg3d_cmd->add_option("--start-slice", seg3d.start_slice,
                        "Annotated slice (default: central)");
  add_box_options(seg3d_cmd, seg3d.box, "Ground-truth volume directory for the box");
  add_pipeline_options(seg3d_cmd, seg3d.pipeline);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score single/average/corrected masks");
  eval_cmd->add_option("--dataset", eval.dataset, "Dataset manifest JSON")->required();
  eval_cmd->add_option("--out", eval.out, "CSV path (default stdout)");
  eval_cmd->add_option("--level", eval.level, "Default level for entries without one")
      ->check(CLI::IsMember({"fine", "medium", "coarse"}));
  add_pipeline_options(eval_cmd, eval.pipeline);

  PhantomArgs phantom;
  auto* phantom_cmd = app.add_subcommand("phantom", "Write a synthetic dataset");
  phantom_cmd->add_option("--out", phantom.out, "Output directory")->required();
  phantom_cmd->add_option("--count", phantom.count, "Number of 2D phantoms");
  phantom_cmd->add_option("--seed", phantom.seed, "Generator seed");
  phantom_cmd->add_option("--levels", phantom.levels, "Coarseness levels to list")
      ->delimiter(',')
      ->check(CLI::IsMember({"fine", "medium", "coarse"}));
  phantom_cmd->add_flag("--volume", phantom.volume, "Write one ellipsoid volume instead");
  phantom_cmd->add_option("--size", phantom.size, "Volume edge length");

  ServeArgs serve;
  auto* serve_cmd =
      app.add_subcommand("serve-mock", "Serve the mock oracle over the wire protocol");
  serve_cmd->add_option("--host", serve.host, "Bind address (default 127.0.0.1)");
  serve_cmd->add_option("--port", serve.port, "Port (default 8765)");
  serve_cmd->add_option("--mock-threshold", serve.mock.intensity_threshold,
                        "Mock oracle intensity threshold");
  serve_cmd->add_option("--mock-keep-largest", serve.mock.keep_largest_component,
                        "Mock oracle keeps the largest component (true/false)");
  serve_cmd->add_option("--mock-dilation", serve.mock.dilation_radius,
                        "Mock oracle dilation radius");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests surface as CallForHelp from the subcommand.
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << (app.get_subcommands().empty() ? app.help()
                                            : app.get_subcommands().front()->help());
      return kExitOk;
    }
    err << e.what() << '\n' << app.help();
    return kExitBadInput;
  }

  try {
    if (*seg2d_cmd) return cmd_seg2d(seg2d, out);
    if (*seg3d_cmd) return cmd_seg3d(seg3d, out);
    if (*eval_cmd) return cmd_eval(eval, eval_cmd, out, err);
    if (*phantom_cmd) return cmd_phantom(phantom, out);
    if (*serve_cmd) return cmd_serve_mock(serve, out);
  } catch (const CommandExit& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const BackendError& e) {
    err << "error: " << describe(e) << '\n';
    return kExitBackend;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace promptaug::cli
