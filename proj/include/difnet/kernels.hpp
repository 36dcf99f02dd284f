#pragma once

// Gain kernels used by the greedy inner loop. A candidate edge owns a run of
// occurrences (slot, weight); a slot indexes the in-weight accumulator S of
// one (cascade, target node) pair. The scalar variants are the reference;
// SIMD variants are chosen at runtime and must agree with them to within a
// few ulps per term.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace difnet::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct GainKernels {
  /// sum_i log(s[slot_i] + w_i) - log(s[slot_i])
  double (*sum_log_ratio)(const double* s, const std::uint32_t* slots, const double* weights,
                          std::size_t n);
  /// sum_i log(max(s[slot_i], w_i)) - log(s[slot_i])
  double (*sum_log_ratio_max)(const double* s, const std::uint32_t* slots, const double* weights,
                              std::size_t n);
};

bool available(Isa isa);
const GainKernels& table(Isa isa);

/// Best available ISA unless overridden by select() or DIFNET_SIMD=scalar|avx2.
Isa active_isa();
/// What active_isa() starts as: DIFNET_SIMD if set and usable, else the CPU's best.
Isa default_isa();
const GainKernels& active();
void select(Isa isa);

inline double sum_log_ratio(std::span<const double> s, std::span<const std::uint32_t> slots,
                            std::span<const double> weights) {
  return active().sum_log_ratio(s.data(), slots.data(), weights.data(), slots.size());
}

inline double sum_log_ratio_max(std::span<const double> s, std::span<const std::uint32_t> slots,
                                std::span<const double> weights) {
  return active().sum_log_ratio_max(s.data(), slots.data(), weights.data(), slots.size());
}

namespace detail {
extern const GainKernels kScalar;
#if defined(DIFNET_HAVE_AVX2)
extern const GainKernels kAvx2;
#endif
}  // namespace detail

}  // namespace difnet::kernels
