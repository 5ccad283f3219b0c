#include <gtest/gtest.h>

#include "promptaug/config.h"
#include "promptaug/core.h"
#include "support/oracles.h"

namespace promptaug {
namespace {

using testing::mask_from;

TEST(MaskAlgebra, AndTruthTable) {
  auto a = mask_from(2, 2, {1, 0, 1, 0});
  auto b = mask_from(2, 2, {1, 1, 0, 0});
  EXPECT_EQ(mask_and(a, b), mask_from(2, 2, {1, 0, 0, 0}));
}

TEST(MaskAlgebra, Identities) {
  BinaryMask2D ones(2, 2, true), zeros(2, 2, false);
  EXPECT_EQ(mask_and(ones, ones), ones);
  EXPECT_EQ(mask_and(ones, zeros), zeros);
  auto a = mask_from(2, 1, {1, 0});
  EXPECT_EQ(mask_or(a, BinaryMask2D(2, 1)), a);
  EXPECT_EQ(mask_diff(a, BinaryMask2D(2, 1)), a);
  EXPECT_EQ(mask_not(mask_not(a)), a);
}

TEST(MaskAlgebra, DimensionMismatchThrows) {
  BinaryMask2D a(2, 2), b(3, 2);
  EXPECT_THROW(mask_and(a, b), DimensionMismatch);
  EXPECT_THROW(mask_or(a, b), DimensionMismatch);
  EXPECT_THROW(mask_diff(a, b), DimensionMismatch);
  EXPECT_THROW(is_subset(a, b), DimensionMismatch);
}

TEST(MaskAlgebra, DeMorganOnRandomMasks) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = testing::random_mask(rng, 8, 8, 0.5);
    auto b = testing::random_mask(rng, 8, 8, 0.5);
    EXPECT_EQ(mask_not(mask_and(a, b)), mask_or(mask_not(a), mask_not(b)));
    EXPECT_EQ(mask_not(mask_or(a, b)), mask_and(mask_not(a), mask_not(b)));
    EXPECT_EQ(mask_diff(a, b), mask_and(a, mask_not(b)));
  }
}

TEST(MaskAlgebra, SubsetAndDisjoint) {
  auto a = mask_from(3, 1, {1, 0, 0});
  auto b = mask_from(3, 1, {1, 1, 0});
  auto c = mask_from(3, 1, {0, 0, 1});
  EXPECT_TRUE(is_subset(a, b));
  EXPECT_FALSE(is_subset(b, a));
  EXPECT_TRUE(is_disjoint(b, c));
  EXPECT_FALSE(is_disjoint(a, b));
}

TEST(BinaryMask, RejectsNonBinaryData) {
  EXPECT_THROW(BinaryMask2D(2, 1, std::vector<std::uint8_t>{0, 2}), InvalidArgument);
  EXPECT_THROW(BinaryMask2D(2, 2, std::vector<std::uint8_t>{0, 1}), DimensionMismatch);
}

TEST(BoundingBox, HalfOpenArithmetic) {
  BoundingBox one{5, 7, 6, 8};
  EXPECT_EQ(one.area(), 1);
  BoundingBox b{10, 10, 50, 40};
  EXPECT_EQ(b.width(), 40);
  EXPECT_EQ(b.height(), 30);
  EXPECT_EQ(b.area(), 1200);
  EXPECT_TRUE(b.contains(49, 39));
  EXPECT_FALSE(b.contains(50, 39));
  EXPECT_TRUE(b.fits_within(50, 40));
  EXPECT_FALSE(b.fits_within(49, 40));
  EXPECT_FALSE((BoundingBox{3, 3, 3, 5}).valid());
  EXPECT_THROW(require_box_in_image(b, 49, 40), InvalidArgument);
}

TEST(PipelineConfig, DefaultsValidate) {
  PipelineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_DOUBLE_EQ(cfg.epsilon, 1e-7);
  EXPECT_DOUBLE_EQ(cfg.t_ave, 0.5);
}

TEST(PipelineConfig, RejectsBadValues) {
  auto bad = [](auto mutate) {
    PipelineConfig cfg;
    mutate(cfg);
    EXPECT_THROW(cfg.validate(), InvalidArgument);
  };
  bad([](PipelineConfig& c) { c.n_samples = -1; });
  bad([](PipelineConfig& c) { c.radius_ratio = 0; });
  bad([](PipelineConfig& c) { c.t_ave = 1.0; });
  bad([](PipelineConfig& c) { c.t_uc = 1.5; });
  bad([](PipelineConfig& c) { c.t_fn_low = 20; });
  bad([](PipelineConfig& c) { c.t_fp_high = 300; });
  bad([](PipelineConfig& c) { c.epsilon = 0; });
  bad([](PipelineConfig& c) { c.backend_parallelism = 0; });
}

// Reported hyperparameters for the two ultrasound tasks.
TEST(Presets, KidneyValues) {
  for (bool fine : {true, false}) {
    auto cfg = kidney_preset(fine);
    EXPECT_EQ(cfg.n_samples, 30);
    EXPECT_DOUBLE_EQ(cfg.radius_ratio, 8.0);
    EXPECT_DOUBLE_EQ(cfg.t_uc, fine ? 0.9 : 0.1);
    EXPECT_DOUBLE_EQ(cfg.t_fn_low, 0.0);
    EXPECT_DOUBLE_EQ(cfg.t_fp_low, 0.0);
    EXPECT_DOUBLE_EQ(cfg.t_fn_high, 20.0);
    EXPECT_DOUBLE_EQ(cfg.t_fp_high, 20.0);
    EXPECT_DOUBLE_EQ(cfg.t_ave, 0.5);
    EXPECT_DOUBLE_EQ(cfg.epsilon, 1e-7);
  }
}

TEST(Presets, PlacentaValues) {
  auto cfg = placenta_preset();
  EXPECT_EQ(cfg.n_samples, 30);
  EXPECT_DOUBLE_EQ(cfg.radius_ratio, 4.0);
  EXPECT_DOUBLE_EQ(cfg.t_uc, 0.2);
  EXPECT_DOUBLE_EQ(cfg.t_fn_low, 70.0);
  EXPECT_DOUBLE_EQ(cfg.t_fp_low, 70.0);
  EXPECT_DOUBLE_EQ(cfg.t_fn_high, 200.0);
  EXPECT_DOUBLE_EQ(cfg.t_fp_high, 200.0);
  EXPECT_EQ(cfg.t_b, 2);
}

TEST(Volume, RequiresEqualSlices) {
  EXPECT_THROW(GrayVolume3D(std::vector<GrayImage2D>{}), InvalidArgument);
  std::vector<GrayImage2D> slices{GrayImage2D(4, 4), GrayImage2D(4, 5)};
  EXPECT_THROW(GrayVolume3D{slices}, DimensionMismatch);
  GrayVolume3D v(std::vector<GrayImage2D>(3, GrayImage2D(4, 5)));
  EXPECT_EQ(v.slice_count(), 3);
  EXPECT_EQ(v.width(), 4);
  EXPECT_EQ(v.height(), 5);
}

TEST(Config, ParsesKeyValueText) {
  auto cfg = parse_config(
      "# comment\n"
      "n_samples = 12\n"
      "t_uc = 0.25   # trailing\n"
      "uc_formula = entropy\n"
      "seed = 18446744073709551615\n");
  EXPECT_EQ(cfg.n_samples, 12);
  EXPECT_DOUBLE_EQ(cfg.t_uc, 0.25);
  EXPECT_EQ(cfg.uc_formula, UncertaintyFormula::kEntropy);
  EXPECT_EQ(cfg.seed, 18446744073709551615ull);
  EXPECT_EQ(cfg.radius_ratio, PipelineConfig{}.radius_ratio);
}

TEST(Config, RoundTripsThroughText) {
  PipelineConfig cfg = placenta_preset();
  cfg.seed = 123456789;
  cfg.epsilon = 3.3e-9;
  cfg.uc_formula = UncertaintyFormula::kEntropy;
  EXPECT_EQ(parse_config(format_config(cfg)), cfg);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config("n_sample = 3\n"), InvalidArgument);
  EXPECT_THROW(parse_config("t_uc = abc\n"), InvalidArgument);
  EXPECT_THROW(parse_config("t_uc = 0.5x\n"), InvalidArgument);
  EXPECT_THROW(parse_config("t_uc\n"), InvalidArgument);
  EXPECT_THROW(parse_config("t_ave = 1.0\n"), InvalidArgument);
  EXPECT_THROW(parse_config("uc_formula = log\n"), InvalidArgument);
}

TEST(Config, BaseValuesSurvive) {
  auto cfg = parse_config("t_b = 5\n", placenta_preset());
  EXPECT_EQ(cfg.t_b, 5);
  EXPECT_DOUBLE_EQ(cfg.radius_ratio, 4.0);
}

}  // namespace
}  // namespace promptaug
