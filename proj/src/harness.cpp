#include "promptaug/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "promptaug/fnpc.h"
#include "promptaug/rng.h"
#include "promptaug/ss2v.h"

namespace promptaug {

ExpansionRange expansion_range(CoarsenessLevel level) {
  switch (level) {
    case CoarsenessLevel::kFine:
      return {0, 2};
    case CoarsenessLevel::kMedium:
      return {2, 4};
    case CoarsenessLevel::kCoarse:
      return {4, 6};
  }
  return {0, 0};
}

std::string to_string(CoarsenessLevel level) {
  switch (level) {
    case CoarsenessLevel::kFine:
      return "fine";
    case CoarsenessLevel::kMedium:
      return "medium";
    case CoarsenessLevel::kCoarse:
      return "coarse";
  }
  return "unknown";
}

CoarsenessLevel parse_coarseness(const std::string& text) {
  if (text == "fine") return CoarsenessLevel::kFine;
  if (text == "medium") return CoarsenessLevel::kMedium;
  if (text == "coarse") return CoarsenessLevel::kCoarse;
  throw InvalidArgument("unknown coarseness level '" + text + "'");
}

BoundingBox box_from_mask(const BinaryMask2D& truth, CoarsenessLevel level,
                          std::uint64_t seed) {
  const BoundingBox tight = tight_box(truth);
  const ExpansionRange range = expansion_range(level);
  Rng rng(seed);
  const int left = static_cast<int>(rng.uniform_int(range.min, range.max));
  const int top = static_cast<int>(rng.uniform_int(range.min, range.max));
  const int right = static_cast<int>(rng.uniform_int(range.min, range.max));
  const int bottom = static_cast<int>(rng.uniform_int(range.min, range.max));
  return {std::max(0, tight.xmin - left), std::max(0, tight.ymin - top),
          std::min(truth.width(), tight.xmax + right),
          std::min(truth.height(), tight.ymax + bottom)};
}

void PhantomSpec::validate() const {
  if (width <= 0 || height <= 0 || depth <= 0) {
    throw InvalidArgument("phantom dimensions must be positive");
  }
  if (radius_x <= 0 || radius_y <= 0 || (depth > 1 && radius_z <= 0)) {
    throw InvalidArgument("phantom radii must be positive");
  }
  auto fits = [](double c, double r, int n) { return c - r >= 0 && c + r <= n; };
  if (!fits(center_x, radius_x, width) || !fits(center_y, radius_y, height) ||
      (depth > 1 && !fits(center_z, radius_z, depth))) {
    throw InvalidArgument("phantom ellipse does not fit in the image");
  }
  if (fp_lobe) {
    const bool horizontal =
        fp_lobe->side == Side::kLeft || fp_lobe->side == Side::kRight;
    const double reach = (horizontal ? radius_x : radius_y) + fp_lobe->length;
    const double c = horizontal ? center_x : center_y;
    const int n = horizontal ? width : height;
    const bool negative = fp_lobe->side == Side::kLeft || fp_lobe->side == Side::kTop;
    if ((negative && c - reach < 0) || (!negative && c + reach > n)) {
      throw InvalidArgument("phantom FP lobe leaves the image");
    }
    if (fp_lobe->length <= 0 || fp_lobe->thickness <= 0) {
      throw InvalidArgument("phantom FP lobe needs positive size");
    }
  }
  if (fn_notch && (fn_notch->depth <= 0 || fn_notch->span <= 0)) {
    throw InvalidArgument("phantom FN notch needs positive size");
  }
  auto intensity_ok = [](int v) { return v >= 0 && v <= 255; };
  if (!intensity_ok(fg_intensity) || !intensity_ok(bg_intensity) ||
      !intensity_ok(noise_amplitude) ||
      (fp_lobe && !intensity_ok(fp_lobe->intensity)) ||
      (fn_notch && !intensity_ok(fn_notch->intensity))) {
    throw InvalidArgument("phantom intensities must lie in [0,255]");
  }
}

namespace {

struct Axis {
  double along;   // signed offset along the side's outward direction
  double across;  // in-plane offset perpendicular to it
  double radius;  // ellipse half-extent along the direction in this slice
};

Axis axis_for(Side side, double dx, double dy, double rx, double ry, double scale) {
  switch (side) {
    case Side::kRight:
      return {dx, dy, rx * scale};
    case Side::kLeft:
      return {-dx, dy, rx * scale};
    case Side::kBottom:
      return {dy, dx, ry * scale};
    case Side::kTop:
      return {-dy, dx, ry * scale};
  }
  return {0, 0, 0};
}

enum class Tissue { kBackground, kOrgan, kLobe, kNotch };

// Classifies pixel (x, y) of slice z.
Tissue classify(const PhantomSpec& s, int x, int y, int z) {
  const double dx = x + 0.5 - s.center_x;
  const double dy = y + 0.5 - s.center_y;
  double dz2 = 0.0;
  double dz = 0.0;
  if (s.depth > 1) {
    dz = z + 0.5 - s.center_z;
    dz2 = (dz / s.radius_z) * (dz / s.radius_z);
  }
  const double r2 = (dx / s.radius_x) * (dx / s.radius_x) +
                    (dy / s.radius_y) * (dy / s.radius_y) + dz2;
  // Cross-section scale of the ellipsoid at this slice.
  const double scale = dz2 < 1.0 ? std::sqrt(1.0 - dz2) : 0.0;

  if (r2 <= 1.0) {
    if (s.fn_notch) {
      const Axis a = axis_for(s.fn_notch->side, dx, dy, s.radius_x, s.radius_y, scale);
      if (a.along > a.radius - s.fn_notch->depth &&
          std::abs(a.across) <= 0.5 * s.fn_notch->span &&
          std::abs(dz) <= 0.5 * s.fn_notch->span) {
        return Tissue::kNotch;
      }
    }
    return Tissue::kOrgan;
  }
  if (s.fp_lobe && scale > 0.0) {
    const Axis a = axis_for(s.fp_lobe->side, dx, dy, s.radius_x, s.radius_y, scale);
    if (a.along > a.radius && a.along <= a.radius + s.fp_lobe->length &&
        std::abs(a.across) <= 0.5 * s.fp_lobe->thickness &&
        std::abs(dz) <= 0.5 * s.fp_lobe->thickness) {
      return Tissue::kLobe;
    }
  }
  return Tissue::kBackground;
}

void render_slice(const PhantomSpec& spec, int z, Rng& rng, GrayImage2D& image,
                  BinaryMask2D& truth) {
  image = GrayImage2D(spec.width, spec.height);
  truth = BinaryMask2D(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      int value = spec.bg_intensity;
      switch (classify(spec, x, y, z)) {
        case Tissue::kOrgan:
          value = spec.fg_intensity;
          truth.set(x, y, true);
          break;
        case Tissue::kNotch:
          value = spec.fn_notch->intensity;
          truth.set(x, y, true);
          break;
        case Tissue::kLobe:
          value = spec.fp_lobe->intensity;
          break;
        case Tissue::kBackground:
          break;
      }
      if (spec.noise_amplitude > 0) {
        value += static_cast<int>(
            rng.uniform_int(-spec.noise_amplitude, spec.noise_amplitude));
      }
      image.set(x, y, static_cast<std::uint8_t>(std::clamp(value, 0, 255)));
    }
  }
}

}  // namespace

Phantom2D make_phantom_2d(const PhantomSpec& spec) {
  if (spec.depth != 1) throw InvalidArgument("make_phantom_2d needs depth 1");
  spec.validate();
  Rng rng(spec.seed);
  Phantom2D out;
  render_slice(spec, 0, rng, out.image, out.truth);
  return out;
}

Phantom3D make_phantom_3d(const PhantomSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<GrayImage2D> images(static_cast<std::size_t>(spec.depth));
  std::vector<BinaryMask2D> truths(static_cast<std::size_t>(spec.depth));
  for (int z = 0; z < spec.depth; ++z) {
    render_slice(spec, z, rng, images[z], truths[z]);
  }
  return {GrayVolume3D(std::move(images)), MaskVolume3D(std::move(truths))};
}

std::vector<PhantomSpec> phantom_suite_specs(int count, std::uint64_t seed) {
  std::vector<PhantomSpec> specs;
  Rng rng(seed);
  constexpr Side kSides[] = {Side::kLeft, Side::kRight, Side::kTop, Side::kBottom};
  for (int i = 0; i < count; ++i) {
    PhantomSpec s;
    s.radius_x = static_cast<double>(rng.uniform_int(14, 22));
    s.radius_y = static_cast<double>(rng.uniform_int(12, 20));
    s.center_x = 64.0 + static_cast<double>(rng.uniform_int(-8, 8));
    s.center_y = 64.0 + static_cast<double>(rng.uniform_int(-8, 8));
    s.noise_amplitude = 10;
    const int lobe_side = static_cast<int>(rng.uniform_int(0, 3));
    FpLobe lobe;
    lobe.side = kSides[lobe_side];
    lobe.length = static_cast<int>(rng.uniform_int(10, 14));
    lobe.thickness = static_cast<int>(rng.uniform_int(12, 18));
    s.fp_lobe = lobe;
    FnNotch notch;
    notch.side = kSides[lobe_side ^ 1];  // opposite side of the lobe
    notch.depth = static_cast<int>(rng.uniform_int(2, 4));
    notch.span = static_cast<int>(rng.uniform_int(6, 10));
    s.fn_notch = notch;
    s.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
    specs.push_back(s);
  }
  return specs;
}

MockOracleConfig phantom_mock_config() {
  MockOracleConfig cfg;
  cfg.intensity_threshold = 100;
  cfg.keep_largest_component = true;
  cfg.dilation_radius = 0;
  return cfg;
}

PipelineConfig phantom_pipeline_config() {
  PipelineConfig cfg;
  cfg.n_samples = 30;
  cfg.radius_ratio = 8.0;
  cfg.t_ave = 0.5;
  cfg.t_uc = 0.1;
  cfg.t_fn_low = 150.0;
  cfg.t_fn_high = 240.0;
  cfg.t_fp_low = 150.0;
  cfg.t_fp_high = 240.0;
  cfg.t_b = 2;
  return cfg;
}

const SummaryRow* EvaluationResult::find(const std::string& method,
                                         CoarsenessLevel level) const {
  for (const auto& s : summary) {
    if (s.method == method && s.level == level) return &s;
  }
  return nullptr;
}

namespace {

void add_rows(std::vector<MetricRow>& rows, const std::string& id,
              CoarsenessLevel level, const MetricReport& single,
              const MetricReport& average, const MetricReport& fnpc) {
  rows.push_back({id, kMethodSingle, level, single});
  rows.push_back({id, kMethodAverage, level, average});
  rows.push_back({id, kMethodFnpc, level, fnpc});
}

void evaluate_2d(const Sample2D& s, std::uint64_t box_seed, const PipelineConfig& cfg,
                 const SegmenterBackend& backend, std::vector<MetricRow>& rows) {
  const BoundingBox box = box_from_mask(s.truth, s.level, box_seed);
  const FnpcResult r = run_fnpc_2d(s.image, box, cfg, backend);
  add_rows(rows, s.id, s.level, evaluate_masks(r.initial_prediction, s.truth),
           evaluate_masks(r.m_ave, s.truth), evaluate_masks(r.m_fnpc, s.truth));
}

void evaluate_3d(const Sample3D& s, std::uint64_t box_seed, const PipelineConfig& cfg,
                 const SegmenterBackend& backend, std::vector<MetricRow>& rows) {
  const int n = s.truth.slice_count();
  std::vector<BinaryMask2D> single, average, corrected;
  std::vector<int> annotated;
  for (int k = 0; k < n; ++k) {
    const BinaryMask2D& gt = s.truth.slice(k);
    if (gt.none()) {
      single.emplace_back(gt.width(), gt.height());
      average.emplace_back(gt.width(), gt.height());
      corrected.emplace_back(gt.width(), gt.height());
      continue;
    }
    annotated.push_back(k);
    const std::uint64_t slice_box_seed = mix_seed(box_seed, static_cast<std::uint64_t>(k));
    PipelineConfig slice_cfg = cfg;
    slice_cfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(k));
    FnpcResult r;
    try {
      r = run_fnpc_2d(s.volume.slice(k), box_from_mask(gt, s.level, slice_box_seed),
                      slice_cfg, backend);
    } catch (BackendError& e) {
      e.set_slice_index(k);
      throw;
    }
    single.push_back(r.initial_prediction);
    average.push_back(r.m_ave);
    corrected.push_back(r.m_fnpc);
  }
  if (annotated.empty()) throw InvalidArgument("volume sample has no ground truth");
  add_rows(rows, s.id, s.level,
           evaluate_masks(MaskVolume3D(std::move(single)), s.truth),
           evaluate_masks(MaskVolume3D(std::move(average)), s.truth),
           evaluate_masks(MaskVolume3D(std::move(corrected)), s.truth));

  // Propagation starts from the central annotated slice.
  const int start = annotated[annotated.size() / 2];
  const BoundingBox start_box =
      box_from_mask(s.truth.slice(start), s.level,
                    mix_seed(box_seed, static_cast<std::uint64_t>(start)));
  const Ss2vResult ss = run_ss2v(s.volume, start, start_box, cfg, backend);
  rows.push_back({s.id, kMethodSs2v, s.level, evaluate_masks(ss.mask_volume, s.truth)});
}

void summarize(EvaluationResult& result) {
  // Key order: method order of first appearance, then level.
  std::vector<std::string> methods;
  for (const auto& row : result.rows) {
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) {
      methods.push_back(row.method);
    }
  }
  for (const auto& method : methods) {
    for (CoarsenessLevel level : {CoarsenessLevel::kFine, CoarsenessLevel::kMedium,
                                  CoarsenessLevel::kCoarse}) {
      std::vector<const MetricReport*> reports;
      bool seen = false;
      for (const auto& row : result.rows) {
        if (row.method != method || row.level != level) continue;
        seen = true;
        if (row.report.defined) reports.push_back(&row.report);
      }
      if (!seen) continue;
      SummaryRow s;
      s.method = method;
      s.level = level;
      s.count = static_cast<int>(reports.size());
      s.mean.defined = s.stddev.defined = s.count > 0;
      auto stats = [&](double MetricReport::*field, double& mean, double& sd) {
        if (reports.empty()) {
          mean = sd = std::nan("");
          return;
        }
        double sum = 0.0;
        for (const auto* r : reports) sum += r->*field;
        mean = sum / static_cast<double>(reports.size());
        double ss = 0.0;
        for (const auto* r : reports) ss += (r->*field - mean) * (r->*field - mean);
        sd = reports.size() > 1 ? std::sqrt(ss / static_cast<double>(reports.size() - 1))
                                : 0.0;
      };
      stats(&MetricReport::dice, s.mean.dice, s.stddev.dice);
      stats(&MetricReport::assd, s.mean.assd, s.stddev.assd);
      stats(&MetricReport::hd, s.mean.hd, s.stddev.hd);
      stats(&MetricReport::hd95, s.mean.hd95, s.stddev.hd95);
      result.summary.push_back(s);
    }
  }
}

}  // namespace

EvaluationResult evaluate(const std::vector<Sample>& dataset,
                          const PipelineConfig& cfg,
                          const SegmenterBackend& backend) {
  if (dataset.empty()) throw InvalidArgument("evaluate needs a nonempty dataset");
  cfg.validate();
  EvaluationResult result;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const std::uint64_t box_seed = mix_seed(cfg.seed, 2 * i);
    PipelineConfig sample_cfg = cfg;
    sample_cfg.seed = mix_seed(cfg.seed, 2 * i + 1);
    const std::string id = std::visit([](const auto& s) { return s.id; }, dataset[i]);
    std::vector<MetricRow> rows;
    try {
      if (const auto* s2 = std::get_if<Sample2D>(&dataset[i])) {
        evaluate_2d(*s2, box_seed, sample_cfg, backend, rows);
      } else {
        evaluate_3d(std::get<Sample3D>(dataset[i]), box_seed, sample_cfg, backend, rows);
      }
    } catch (const BackendError& e) {
      result.failures.push_back({id, e.what()});
      continue;
    } catch (const EmptyMaskError&) {
      result.failures.push_back({id, "ground truth is empty"});
      continue;
    } catch (const InvalidArgument& e) {
      result.failures.push_back({id, e.what()});
      continue;
    }
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  summarize(result);
  return result;
}

namespace {

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_row(std::ostream& os, const std::string& id, const std::string& method,
               CoarsenessLevel level, const MetricReport& r, bool defined) {
  os << id << ',' << method << ',' << to_string(level) << ',' << fixed6(r.dice)
     << ',' << fixed6(r.assd) << ',' << fixed6(r.hd) << ',' << fixed6(r.hd95)
     << ',' << (defined ? 1 : 0) << '\n';
}

}  // namespace

void write_csv(std::ostream& os, const EvaluationResult& result) {
  os << kCsvHeader << '\n';
  for (const auto& row : result.rows) {
    write_row(os, row.sample_id, row.method, row.level, row.report, row.report.defined);
  }
  for (const auto& s : result.summary) {
    write_row(os, "mean", s.method, s.level, s.mean, s.count > 0);
    write_row(os, "std", s.method, s.level, s.stddev, s.count > 0);
  }
}

}  // namespace promptaug
