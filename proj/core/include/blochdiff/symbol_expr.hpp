#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "blochdiff/disk.hpp"

namespace blochdiff {

/// Value and first derivative of an analytic function at one point.
struct Jet {
  Complex value;
  Complex deriv;
};

/// Immutable expression tree for an analytic function on the disk.
///
/// Every node knows its exact derivative, so evaluation returns a Jet in a
/// single pass (sum, product and chain rules).  Trees share structure and are
/// safe to evaluate from several threads.
class SymbolExpr {
 public:
  enum class Kind {
    kConstant,
    kIdentity,
    kMonomial,
    kSum,
    kProduct,
    kPower,
    kCompose,
    kMobius,
    kBlaschke,
  };

  /// The zero function; same as constant(0).
  SymbolExpr();

  static SymbolExpr constant(Complex c);
  static SymbolExpr identity();
  static SymbolExpr monomial(unsigned n);
  /// sum_i coeffs[i] * terms[i]; empty coeffs means all ones.
  static SymbolExpr sum(std::vector<SymbolExpr> terms,
                        std::vector<Complex> coeffs = {});
  static SymbolExpr scale(Complex c, SymbolExpr inner);
  static SymbolExpr product(std::vector<SymbolExpr> factors);
  static SymbolExpr power(SymbolExpr base, unsigned n);
  /// outer(inner(z)).
  static SymbolExpr compose(SymbolExpr outer, SymbolExpr inner);
  /// sigma_lambda(z) = (lambda - z) / (1 - conj(lambda) z).
  static SymbolExpr mobius(DiskPoint lambda);
  /// prod_k (z - a_k) / (1 - conj(a_k) z).
  static SymbolExpr blaschke(std::vector<DiskPoint> zeros);

  [[nodiscard]] Kind kind() const noexcept;
  /// Constant value, or lambda for a Möbius node.
  [[nodiscard]] Complex parameter() const noexcept;
  /// Exponent of monomial and power nodes.
  [[nodiscard]] unsigned exponent() const noexcept;
  [[nodiscard]] std::span<const SymbolExpr> children() const noexcept;
  [[nodiscard]] std::span<const Complex> coefficients() const noexcept;
  [[nodiscard]] std::span<const Complex> zeros() const noexcept;

  /// Unchecked evaluation at any complex z where the tree is finite.
  [[nodiscard]] Jet jet(Complex z) const noexcept;
  [[nodiscard]] Complex value_at(Complex z) const noexcept { return jet(z).value; }
  [[nodiscard]] Complex deriv_at(Complex z) const noexcept { return jet(z).deriv; }

  /// True when the tree is the constant zero.
  [[nodiscard]] bool is_zero_constant() const noexcept;

 private:
  struct Node;
  static std::shared_ptr<const Node> shared_zero();
  explicit SymbolExpr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

SymbolExpr operator+(const SymbolExpr& a, const SymbolExpr& b);
SymbolExpr operator-(const SymbolExpr& a, const SymbolExpr& b);
SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b);
SymbolExpr operator*(Complex c, const SymbolExpr& f);

Complex eval(const SymbolExpr& f, DiskPoint z);
Complex deriv(const SymbolExpr& f, DiskPoint z);

struct SelfMapVerdict {
  bool self_map = false;
  /// Largest |phi| seen on the sampled rings.
  double sup_estimate = 0.0;
  /// First violating point for a non-self-map, else the argmax.
  Complex witness{0.0, 0.0};
};

/// Samples |phi| on the circles |z| = 1 - margin * 2^-j, j = 0..8.  By the
/// maximum-modulus principle this approaches sup_D |phi| as margin -> 0.
/// Self-map when the estimate stays <= 1 - 1e-9.
SelfMapVerdict validate_self_map(const SymbolExpr& phi, double margin = 1e-3,
                                 int boundary_samples = 256);

}  // namespace blochdiff
