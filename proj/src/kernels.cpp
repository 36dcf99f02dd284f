#include "difnet/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace difnet::kernels {

namespace {

double scalar_sum_log_ratio(const double* s, const std::uint32_t* slots, const double* weights,
                            std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double base = s[slots[i]];
    total += std::log(base + weights[i]) - std::log(base);
  }
  return total;
}

double scalar_sum_log_ratio_max(const double* s, const std::uint32_t* slots, const double* weights,
                                std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double base = s[slots[i]];
    total += std::log(std::max(base, weights[i])) - std::log(base);
  }
  return total;
}

bool cpu_has_avx2() {
#if defined(DIFNET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("DIFNET_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return Isa::Avx2;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<const GainKernels*>& current() {
  static std::atomic<const GainKernels*> ptr{&table(initial_isa())};
  return ptr;
}

}  // namespace

namespace detail {
const GainKernels kScalar{&scalar_sum_log_ratio, &scalar_sum_log_ratio_max};
}  // namespace detail

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "?";
}

Isa default_isa() { return initial_isa(); }

bool available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return cpu_has_avx2();
  }
  return false;
}

const GainKernels& table(Isa isa) {
  if (!available(isa)) {
    throw std::runtime_error("kernel ISA not available: " + std::string(to_string(isa)));
  }
#if defined(DIFNET_HAVE_AVX2)
  if (isa == Isa::Avx2) return detail::kAvx2;
#endif
  return detail::kScalar;
}

const GainKernels& active() { return *current().load(std::memory_order_acquire); }

Isa active_isa() {
  return &active() == &detail::kScalar ? Isa::Scalar : Isa::Avx2;
}

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

}  // namespace difnet::kernels
