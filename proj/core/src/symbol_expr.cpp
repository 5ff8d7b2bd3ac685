#include "blochdiff/symbol_expr.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "blochdiff/errors.hpp"

namespace blochdiff {

struct SymbolExpr::Node {
  Kind kind = Kind::kConstant;
  Complex parameter{0.0, 0.0};
  unsigned exponent = 0;
  std::vector<SymbolExpr> children;
  std::vector<Complex> coefficients;
  std::vector<Complex> zeros;
};

std::shared_ptr<const SymbolExpr::Node> SymbolExpr::shared_zero() {
  static const std::shared_ptr<const Node> zero = std::make_shared<Node>();
  return zero;
}

SymbolExpr::SymbolExpr() : node_(shared_zero()) {}

SymbolExpr::SymbolExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

SymbolExpr SymbolExpr::constant(Complex c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConstant;
  n->parameter = c;
  return SymbolExpr(std::move(n));
}

SymbolExpr SymbolExpr::identity() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kIdentity;
  return SymbolExpr(std::move(n));
}

SymbolExpr SymbolExpr::monomial(unsigned exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kMonomial;
  n->exponent = exponent;
  return SymbolExpr(std::move(n));
}

SymbolExpr SymbolExpr::sum(std::vector<SymbolExpr> terms, std::vector<Complex> coeffs) {
  if (coeffs.empty()) coeffs.assign(terms.size(), Complex{1.0, 0.0});
  if (coeffs.size() != terms.size()) {
    throw std::invalid_argument("SymbolExpr::sum: coefficient count does not match terms");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSum;
  n->children = std::move(terms);
  n->coefficients = std::move(coeffs);
  return SymbolExpr(std::move(n));
}

SymbolExpr SymbolExpr::scale(Complex c, SymbolExpr inner) {
  return sum({std::move(inner)}, {c});
}

SymbolExpr SymbolExpr::product(std::vector<SymbolExpr> factors) {
  if (factors.empty()) throw std::invalid_argument("SymbolExpr::product: no factors");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kProduct;
  n->children = std::move(factors);
  return SymbolExpr(std::move(n));
}

SymbolExpr SymbolExpr::power(SymbolExpr base, unsigned exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPower;
  n->exponent = exponent;
  n->children = {std::move(base)};
  return SymbolExpr(std::move(n));
}

SymbolExpr SymbolExpr::compose(SymbolExpr outer, SymbolExpr inner) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCompose;
  n->children = {std::move(outer), std::move(inner)};
  return SymbolExpr(std::move(n));
}

SymbolExpr SymbolExpr::mobius(DiskPoint lambda) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kMobius;
  n->parameter = lambda.value();
  return SymbolExpr(std::move(n));
}

SymbolExpr SymbolExpr::blaschke(std::vector<DiskPoint> zeros) {
  if (zeros.empty()) throw std::invalid_argument("SymbolExpr::blaschke: no zeros");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kBlaschke;
  n->zeros.reserve(zeros.size());
  for (const auto& a : zeros) n->zeros.push_back(a.value());
  return SymbolExpr(std::move(n));
}

SymbolExpr::Kind SymbolExpr::kind() const noexcept { return node_->kind; }
Complex SymbolExpr::parameter() const noexcept { return node_->parameter; }
unsigned SymbolExpr::exponent() const noexcept { return node_->exponent; }
std::span<const SymbolExpr> SymbolExpr::children() const noexcept { return node_->children; }
std::span<const Complex> SymbolExpr::coefficients() const noexcept {
  return node_->coefficients;
}
std::span<const Complex> SymbolExpr::zeros() const noexcept { return node_->zeros; }

bool SymbolExpr::is_zero_constant() const noexcept {
  return node_->kind == Kind::kConstant && node_->parameter == Complex{0.0, 0.0};
}

Jet SymbolExpr::jet(Complex z) const noexcept {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConstant:
      return {n.parameter, {0.0, 0.0}};
    case Kind::kIdentity:
      return {z, {1.0, 0.0}};
    case Kind::kMonomial: {
      if (n.exponent == 0) return {{1.0, 0.0}, {0.0, 0.0}};
      const Complex lower = detail::integer_power(z, n.exponent - 1);
      return {lower * z, static_cast<double>(n.exponent) * lower};
    }
    case Kind::kSum: {
      Jet acc{{0.0, 0.0}, {0.0, 0.0}};
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        const Jet t = n.children[i].jet(z);
        acc.value += n.coefficients[i] * t.value;
        acc.deriv += n.coefficients[i] * t.deriv;
      }
      return acc;
    }
    case Kind::kProduct: {
      Jet acc = n.children.front().jet(z);
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        const Jet t = n.children[i].jet(z);
        acc = {acc.value * t.value, acc.deriv * t.value + acc.value * t.deriv};
      }
      return acc;
    }
    case Kind::kPower: {
      const Jet b = n.children.front().jet(z);
      if (n.exponent == 0) return {{1.0, 0.0}, {0.0, 0.0}};
      const Complex lower = detail::integer_power(b.value, n.exponent - 1);
      return {lower * b.value, static_cast<double>(n.exponent) * lower * b.deriv};
    }
    case Kind::kCompose: {
      const Jet inner = n.children[1].jet(z);
      const Jet outer = n.children[0].jet(inner.value);
      return {outer.value, outer.deriv * inner.deriv};
    }
    case Kind::kMobius: {
      const Complex l = n.parameter;
      const Complex d = 1.0 - std::conj(l) * z;
      return {(l - z) / d, (std::norm(l) - 1.0) / (d * d)};
    }
    case Kind::kBlaschke: {
      Jet acc{{1.0, 0.0}, {0.0, 0.0}};
      for (const Complex& a : n.zeros) {
        const Complex d = 1.0 - std::conj(a) * z;
        const Jet f{(z - a) / d, (1.0 - std::norm(a)) / (d * d)};
        acc = {acc.value * f.value, acc.deriv * f.value + acc.value * f.deriv};
      }
      return acc;
    }
  }
  return {{0.0, 0.0}, {0.0, 0.0}};
}

SymbolExpr operator+(const SymbolExpr& a, const SymbolExpr& b) {
  return SymbolExpr::sum({a, b});
}

SymbolExpr operator-(const SymbolExpr& a, const SymbolExpr& b) {
  return SymbolExpr::sum({a, b}, {Complex{1.0, 0.0}, Complex{-1.0, 0.0}});
}

SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b) {
  return SymbolExpr::product({a, b});
}

SymbolExpr operator*(Complex c, const SymbolExpr& f) { return SymbolExpr::scale(c, f); }

Complex eval(const SymbolExpr& f, DiskPoint z) { return f.jet(z.value()).value; }

Complex deriv(const SymbolExpr& f, DiskPoint z) { return f.jet(z.value()).deriv; }

SelfMapVerdict validate_self_map(const SymbolExpr& phi, double margin, int boundary_samples) {
  if (!(margin > 0.0 && margin < 1.0)) {
    throw std::invalid_argument("validate_self_map: margin must lie in (0, 1)");
  }
  if (boundary_samples < 64) {
    throw std::invalid_argument("validate_self_map: need at least 64 boundary samples");
  }
  constexpr double kLimit = 1.0 - 1e-9;
  SelfMapVerdict verdict;
  verdict.self_map = true;
  for (int j = 0; j <= 8; ++j) {
    const double r = 1.0 - margin * std::ldexp(1.0, -j);
    for (int k = 0; k < boundary_samples; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / boundary_samples;
      const Complex z = std::polar(r, theta);
      const double m = std::abs(phi.value_at(z));
      const bool finite = std::isfinite(m);
      if (!finite || m > verdict.sup_estimate) {
        verdict.sup_estimate = finite ? m : INFINITY;
        if (verdict.self_map) verdict.witness = z;
      }
      if (verdict.self_map && (!finite || m > kLimit)) {
        verdict.self_map = false;
        verdict.witness = z;
      }
    }
  }
  return verdict;
}

}  // namespace blochdiff
