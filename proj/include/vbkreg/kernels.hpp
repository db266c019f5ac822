#pragma once

#include <string>
#include <string_view>

namespace vbkreg {

enum class KernelId { tricube, epanechnikov, gaussian_truncated };

// Symmetric nonnegative weight function with compact support [-T, T],
// integrating to 1.
struct Kernel {
  KernelId id;
  double support_halfwidth;  // T

  double eval(double u) const;
  double deriv(double u) const;
};

Kernel kernel_by_id(KernelId id);
Kernel kernel_by_name(std::string_view name);
std::string kernel_name(KernelId id);

// mu_{k,p} = int u^k K^p(u) du, adaptive quadrature over [-T, T].
// Cached per (kernel, k, p); safe for concurrent use.
double kernel_moment(const Kernel& kernel, int k, int p);

}  // namespace vbkreg
