// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace peepkit {

/// Shares of the three fingerprinting cuBLAS kernels, in percent of one
/// forward+backward iteration.
struct KernelMix {
  double gemv2t_pct = 0.0;
  double gemv2n_pct = 0.0;
  double gemmk1_pct = 0.0;

  double gemv_total() const { return gemv2t_pct + gemv2n_pct; }
  double total() const { return gemv2t_pct + gemv2n_pct + gemmk1_pct; }

  friend bool operator==(const KernelMix&, const KernelMix&) = default;
};

/// Throws ValidationError unless every share is in [0,100] and the sum is at most 100.
void validate(const KernelMix& mix);

}  // namespace peepkit
