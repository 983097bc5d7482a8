// SPDX-License-Identifier: Apache-2.0
// Published reference values used as test oracles.
#pragma once

#include <array>
#include <string_view>

namespace peepkit::test {

struct KernelRow {
  std::string_view model;
  double gemv2t, gemv2n, gemmk1;
};

inline constexpr std::array<KernelRow, 16> kKernelTable{{
    {"SqueezeNet-V1.0", 0.0, 0.0, 0.0},
    {"SqueezeNet-V1.1", 0.0, 0.0, 0.0},
    {"1.0-G-SqNxt-23", 34.53, 5.33, 9.13},
    {"1.0-SqNxt-23", 36.53, 5.64, 9.66},
    {"1.0-SqNxt-23v5", 27.78, 6.35, 10.85},
    {"2.0-SqNxt-23", 30.65, 4.75, 8.25},
    {"2.0-SqNxt-23v5", 21.49, 4.94, 8.35},
    {"MobileNet-V1", 59.23, 30.55, 0.63},
    {"MobileNet-V2", 60.31, 28.79, 0.80},
    {"ShuffleNet-V1", 45.37, 29.50, 4.39},
    {"ShuffleNet-V2", 43.81, 30.58, 3.39},
    {"DenseNet-121", 18.19, 3.66, 7.32},
    {"GoogLeNet", 0.18, 0.18, 0.05},
    {"Inception-V2", 5.12, 0.03, 3.69},
    {"SE-BN-Inception", 5.75, 0.03, 3.35},
    // AlexNet has no row; the non-compact screen does not need one.
    {"AlexNet", 0.0, 0.0, 0.0},
}};

struct ModelRow {
  std::string_view model;
  double mc_millions, p_millions, a_millions, a_per_p, mc_per_p, mc_per_a;
};

inline constexpr std::array<ModelRow, 7> kModelTable{{
    {"AlexNet", 723, 60.97, 2.05, 0.03, 11.86, 352.65},
    {"SqueezeNet-V1.0", 848, 1.25, 12.3, 9.84, 678.08, 68.91},
    {"SqueezeNet-V1.1", 349, 1.24, 7.2, 5.81, 281.57, 48.49},
    {"MobileNet-V1", 574, 4.23, 20.32, 4.80, 135.65, 28.24},
    {"MobileNet-V2", 300, 3.40, 35.45, 10.43, 88.24, 8.46},
    {"DenseNet-121", 3080, 7.98, 69.99, 8.77, 385.96, 44.01},
    {"GoogLeNet", 1590, 7.00, 10.06, 1.44, 227.14, 158.05},
}};

struct OverheadRow {
  int G;
  double delta_mc_pct, delta_p_pct;
};

inline constexpr std::array<OverheadRow, 5> kOverheadTable{{
    {2, 3.0, 1.2},
    {4, 8.8, 3.3},
    {8, 19.4, 7.3},
    {16, 37.6, 15.8},
    {32, 64.2, 32.9},
}};

}  // namespace peepkit::test
