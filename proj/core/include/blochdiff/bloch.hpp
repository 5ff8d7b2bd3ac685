#pragma once

#include <functional>
#include <span>
#include <vector>

#include "blochdiff/grid.hpp"
#include "blochdiff/symbol_expr.hpp"

namespace blochdiff {

/// Derivative of an analytic function, for functions outside the
/// expression-tree node set (test functions, closed-form derivatives).
using DerivativeFn = std::function<Complex(Complex)>;

/// (1 - |z|^2)^alpha |f'(z)|.
double weighted_modulus(const SymbolExpr& f, DiskPoint z, double alpha);
double weighted_modulus(const DerivativeFn& fprime, DiskPoint z, double alpha);

/// sup_D (1 - |z|^2)^alpha |f'(z)| by grid search plus local refinement.
/// Seeds are extra candidate points considered before refinement.
SeminormEstimate bloch_seminorm(const SymbolExpr& f, double alpha, const SamplingGrid& grid);
SeminormEstimate bloch_seminorm(const DerivativeFn& fprime, double alpha,
                                const SamplingGrid& grid, std::span<const Complex> seeds = {});

/// |f(0)| + seminorm.
double bloch_norm(const SymbolExpr& f, double alpha, const SamplingGrid& grid);

/// ||z^n||_alpha in closed form: n r^(n-1) (1 - r^2)^alpha at
/// r^2 = (n - 1) / (n - 1 + 2 alpha).
double monomial_seminorm_exact(unsigned n, double alpha);

struct LittleBlochResult {
  bool in_little_bloch = false;
  /// Circle maxima of the weighted modulus, one per scheduled radius.
  std::vector<double> trace;
  std::vector<Complex> argmax;
};

/// Decay test for the little Bloch space: B^alpha_0 membership is declared
/// when the last circle maximum is below `tol` and the last three maxima are
/// non-increasing.
LittleBlochResult little_bloch_test(const DerivativeFn& fprime, double alpha,
                                    std::span<const double> r_schedule, double tol = 1e-3);
LittleBlochResult little_bloch_test(const SymbolExpr& f, double alpha,
                                    std::span<const double> r_schedule, double tol = 1e-3);

}  // namespace blochdiff
