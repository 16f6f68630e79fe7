#pragma once

#include <cstddef>

namespace tsa::detail {

/// prod_j 1 / (1 + scale * (dx_j^2 + dy_j^2)^(-alpha/2)) over n interferers,
/// the interference survival probability of a Rayleigh link.
double rayleigh_survival(const double* dx, const double* dy, std::size_t n, double scale, double alpha);

}  // namespace tsa::detail
