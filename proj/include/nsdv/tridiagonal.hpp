#pragma once

#include <span>
#include <vector>

namespace nsdv {

/// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored. No pivoting: the systems assembled by
/// the implicit diffusion steps are strictly diagonally dominant.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

}  // namespace nsdv
