#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace vbkreg::quad {

// 32-point Gauss-Legendre rule on [-1, 1]; nodes for x >= 0, mirrored below.
inline constexpr struct {
  double x, w;
} kGL32[16] = {
    {4.83076656877383104e-02, 9.65400885147278121e-02},
    {1.44471961582796488e-01, 9.56387200792748332e-02},
    {2.39287362252137065e-01, 9.38443990808045664e-02},
    {3.31868602282127667e-01, 9.11738786957638631e-02},
    {4.21351276130635333e-01, 8.76520930044039082e-02},
    {5.06899908932229359e-01, 8.33119242269468457e-02},
    {5.87715757240762304e-01, 7.81938957870703111e-02},
    {6.63044266930215231e-01, 7.23457941088484491e-02},
    {7.32182118740289711e-01, 6.58222227763617523e-02},
    {7.94483795967942386e-01, 5.86840934785357038e-02},
    {8.49367613732569970e-01, 5.09980592623762441e-02},
    {8.96321155766052202e-01, 4.28358980222264263e-02},
    {9.34906075937739667e-01, 3.42738629130216257e-02},
    {9.64762255587506390e-01, 2.53920653092624266e-02},
    {9.85611511545268382e-01, 1.62743947309059653e-02},
    {9.97263861849481570e-01, 7.01861000946929839e-03},
};

template <class F>
double gauss_legendre_32(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (const auto& n : kGL32) {
    acc += n.w * (f(mid + half * n.x) + f(mid - half * n.x));
  }
  return acc * half;
}

// Composite rule: the panel count doubles until two successive estimates
// differ by less than abs_tol.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                 int max_halvings = 16) {
  double prev = gauss_legendre_32(f, a, b);
  std::size_t panels = 1;
  for (int level = 0; level < max_halvings; ++level) {
    panels *= 2;
    const double w = (b - a) / static_cast<double>(panels);
    double cur = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
      const double lo = a + w * static_cast<double>(i);
      cur += gauss_legendre_32(f, lo, lo + w);
    }
    if (std::abs(cur - prev) < abs_tol) return cur;
    prev = cur;
  }
  throw std::runtime_error("quadrature did not converge to requested tolerance");
}

}  // namespace vbkreg::quad
