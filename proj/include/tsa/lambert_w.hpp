#pragma once

namespace tsa {

/// Principal branch W0 of the Lambert W function: the w >= -1 solving
/// w * exp(w) = x. Throws DomainError for x < -1/e or NaN; +inf maps to +inf.
double lambert_w0(double x);

}  // namespace tsa
