#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace polylap {

/// One real value per graph node.  Norms and inner products use the
/// empirical measure: <u, v> = (1/n) sum_i u_i v_i.
using GraphSignal = std::vector<double>;

/// Sum of a[i] * b[i] accumulated in fixed-size blocks and combined in
/// block order, so the result is bit-identical for any thread count.
double deterministic_dot(std::span<const double> a, std::span<const double> b);

double dot_mu(std::span<const double> a, std::span<const double> b);
double norm_mu(std::span<const double> u);
/// ||a - b||_{L2(mu_n)}.
double distance_mu(std::span<const double> a, std::span<const double> b);

/// Throws ValidationError when the two lengths differ.
void check_length(std::size_t got, std::size_t expected, const char* what);

}  // namespace polylap
