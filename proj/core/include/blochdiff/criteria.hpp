#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blochdiff/bloch.hpp"
#include "blochdiff/grid.hpp"
#include "blochdiff/symbol_expr.hpp"

namespace blochdiff {

/// (phi, psi, g, h) with exponents (alpha, beta): the difference operator
/// C^g_phi - C^h_psi from B^alpha to B^beta.
struct SymbolQuadruple {
  SymbolExpr phi;
  SymbolExpr psi;
  SymbolExpr g;
  SymbolExpr h;
  double alpha = 1.0;
  double beta = 1.0;
  /// Skip sampled self-map validation for symbols known to map D into D.
  bool declared_self_map = false;

  /// (phi, g) <-> (psi, h).
  [[nodiscard]] SymbolQuadruple swapped() const;
  /// C^g_phi alone (h = 0).
  [[nodiscard]] SymbolQuadruple only_phi() const;
  /// C^h_psi alone (g = 0).
  [[nodiscard]] SymbolQuadruple only_psi() const;
};

/// Runs validate_self_map on phi and psi unless declared.  Throws DomainError
/// naming the offending symbol and witness.
void validate_quadruple(const SymbolQuadruple& quad, double margin = 1e-3,
                        int boundary_samples = 256);

enum class Verdict { kYes, kNo, kInconclusive };
const char* to_string(Verdict v) noexcept;

struct Thresholds {
  /// Diverging when a trace grows by more than this factor ...
  double divergence_factor = 10.0;
  /// ... across this many trailing steps.
  int divergence_window = 4;
  /// Essential quantities below this count as zero.
  double compact_epsilon = 1e-3;
  /// A tail above epsilon that keeps at least this fraction of its value two
  /// steps back is "not decreasing".
  double stagnation_ratio = 0.9;
  /// First n of the limsup tails.
  unsigned tail_n0 = 64;
  /// Values below this are treated as exact zeros in ratios and growth tests.
  double zero_floor = 1e-12;
};

struct ASamplePolicy {
  /// Test-function centres per grid ring; ring 0 contributes a = 0.
  int per_ring = 4;
  /// Also use a = phi(w), psi(w) at the argmax points w of the D-terms.
  bool witness_images = true;
};

struct CriteriaConfig {
  GridParams grid{};
  /// Grid for the inner sups of the test-function quantity.
  GridParams inner_grid{14, 8.0, 6};
  std::vector<unsigned> n_schedule = default_n_schedule(4096);
  std::vector<double> r_schedule{0.9, 0.99, 0.999, 0.9999};
  ASamplePolicy a_samples{};
  Thresholds thresholds{};
  double self_map_margin = 1e-3;
  int self_map_samples = 256;

  /// {0, 1, 2, 4, ..., 2^k <= nmax}.
  static std::vector<unsigned> default_n_schedule(unsigned nmax);
};

/// Symbol values cached on every point of a grid.
struct FieldSample {
  Complex z;
  Complex phi;
  Complex psi;
  Complex g;
  Complex h;
  double weight;  // (1 - |z|^2)^beta
};

class SymbolField {
 public:
  SymbolField(SymbolQuadruple quad, SamplingGrid grid);

  [[nodiscard]] const SymbolQuadruple& quad() const noexcept { return quad_; }
  [[nodiscard]] const SamplingGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const FieldSample> samples() const noexcept { return samples_; }
  /// Same computation as the cached samples, at an arbitrary point.
  [[nodiscard]] FieldSample at(Complex z) const noexcept;

 private:
  SymbolQuadruple quad_;
  SamplingGrid grid_;
  std::vector<FieldSample> samples_;
};

/// A point at which a reported value is attained.
struct Witness {
  std::string label;
  Complex point;
  double value = 0.0;
};

/// A boundedness / essential-norm quantity: finite value or Diverging.
struct Quantity {
  double value = 0.0;
  bool diverging = false;
  /// Abscissae of `trace` (ring radii, n, or a-ring radii).
  std::vector<double> schedule;
  std::vector<double> trace;
  std::vector<Witness> witnesses;
};

/// True when trace[last] > factor * trace[last - window] and the last value
/// exceeds the zero floor.
bool trace_diverges(std::span<const double> trace, const Thresholds& thr);

// ---------------------------------------------------------------------------
// Pointwise ingredients.

/// (C^g_phi f)(z) = int_0^z f'(phi(xi)) g(xi) dxi along the segment [0, z].
/// Throws QuadratureNonConvergence.
Complex apply_operator(const DerivativeFn& fprime, const SymbolExpr& phi, const SymbolExpr& g,
                       DiskPoint z, double quad_tol = 1e-12);
Complex apply_operator(const SymbolExpr& f, const SymbolExpr& phi, const SymbolExpr& g,
                       DiskPoint z, double quad_tol = 1e-12);

enum class Branch { kPhiG, kPsiH };

/// D_{phi,g}(z) = (1 - |z|^2)^beta g(z) / (1 - |phi(z)|^2)^alpha, or the
/// (psi, h) counterpart.
Complex D_weight(Branch which, const SymbolQuadruple& quad, DiskPoint z);

/// sup_z (1 - |z|^2)^beta |f'(phi(z)) g(z) - f'(psi(z)) h(z)|, the B^beta
/// norm of (C^g_phi - C^h_psi) f (the image vanishes at 0).
SeminormEstimate diff_seminorm_on(const DerivativeFn& fprime, const SymbolField& field,
                                  std::span<const Complex> seeds = {});
SeminormEstimate diff_seminorm_on(const DerivativeFn& fprime, const SymbolQuadruple& quad,
                                  const SamplingGrid& grid, std::span<const Complex> seeds = {});

// ---------------------------------------------------------------------------
// Boundedness characterisations.

/// sup|D_phi,g - D_psi,h| + sup|D_psi,h| rho.
Quantity quantity_iia(const SymbolField& field, const Thresholds& thr = {});
/// sup|D_phi,g - D_psi,h| + sup|D_phi,g| rho.
Quantity quantity_iib(const SymbolField& field, const Thresholds& thr = {});

/// Rings for the test-function centres: the main grid's, stopping enough
/// levels inside the inner grid that the extremal z of each f_a (at
/// 1 - |z| ~ (1 - |a|) beta / (2 alpha - beta)) is still resolved.
GridParams test_center_grid(const CriteriaConfig& config, double alpha, double beta);

/// sup_a ||(C - C) f_a|| + ||(C - C) g_a||, a over grid rings (plus witness
/// images).  `extra_centers` are additional a's that enter the value but not
/// the ring trace.  Carries the outermost-two-ring maximum as witness
/// "limsup_outer".
Quantity quantity_iii(const SymbolField& inner_field, const SamplingGrid& a_grid,
                      const ASamplePolicy& policy, std::span<const Complex> extra_centers = {},
                      const Thresholds& thr = {});

/// sup_n sup_z (n+1)^alpha (1 - |z|^2)^beta |phi^n g - psi^n h| over the
/// schedule; the trace holds one refined sup per n.
Quantity quantity_iv(const SymbolField& field, std::span<const unsigned> n_schedule,
                     const Thresholds& thr = {});

// ---------------------------------------------------------------------------
// Essential-norm quantities.

struct EssentialA {
  std::vector<double> r_schedule;
  std::vector<double> phi_term;    // sup_{|phi|>r} |D_phi,g| rho
  std::vector<double> psi_term;    // sup_{|psi|>r} |D_psi,h| rho
  std::vector<double> joint_term;  // sup_{|phi|>r, |psi|>r} |D_phi,g - D_psi,h|
  std::vector<double> total;
  double value = 0.0;  // total at the last r
  bool monotone = true;
  bool diverging = false;
  std::vector<Witness> witnesses;
};

/// Restricted sups over grid points only; an empty restriction gives 0.
/// `global_terms`, when given ({diff, phi_rho, psi_rho} from the boundedness
/// pass), mark the result Diverging when a term diverges globally and its
/// restricted sup is non-zero.
EssentialA ess_quantity_A(const SymbolField& field, std::span<const double> r_schedule,
                          const std::vector<bool>* global_terms_diverging = nullptr);

/// limsup_n of the quantity_iv trace: max over n >= N0, Diverging when the
/// iv trace diverges.
Quantity ess_quantity_B(const Quantity& iv, std::span<const unsigned> n_schedule, unsigned n0);

/// Monomial lower bound: per n >= 1, ||(C - C) z^n|| / ||z^n||; value is the
/// max over n >= N0.
Quantity ess_lower_monomials(const SymbolField& field, std::span<const unsigned> n_schedule,
                             unsigned n0, const Thresholds& thr = {});

// ---------------------------------------------------------------------------
// Verdicts.

struct BoundednessResult {
  Verdict verdict = Verdict::kInconclusive;
  std::map<std::string, double> cross_ratios;
};

/// Yes when all four are finite, No when all four diverge, Inconclusive when
/// the flags disagree (the characterisation forbids that).
BoundednessResult boundedness_verdict(const Quantity& iia, const Quantity& iib,
                                      const Quantity& iii, const Quantity& iv,
                                      const Thresholds& thr = {});

/// Two-criterion boundedness of a single operator (quantity_iia and
/// quantity_iv on the reduced quadruple).
Verdict single_operator_verdict(const SymbolQuadruple& reduced, const SamplingGrid& grid,
                                std::span<const unsigned> n_schedule, const Thresholds& thr);

/// Decision from the three essential quantities alone.
Verdict compactness_from_essentials(const EssentialA& a, const Quantity& b,
                                    const Quantity& lower, const Thresholds& thr);

/// Full compactness verdict.  Throws HypothesisUnmet when either single
/// operator is unbounded.
Verdict compactness_verdict(const SymbolQuadruple& quad, const CriteriaConfig& config);

// ---------------------------------------------------------------------------
// Induced distance.

struct Dictionary {
  std::vector<DiskPoint> fa_centers;
  std::vector<DiskPoint> ga_centers;
  std::vector<unsigned> monomials;

  /// f_z, f_w, g_z, g_w and z^n for n = 1, 2, 4, ..., 64.
  static Dictionary standard(DiskPoint z, DiskPoint w);
};

/// max over normalized dictionary members u of
/// |(1 - |z|^2)^alpha u'(z) - (1 - |w|^2)^alpha u'(w)|.  Every member is
/// normalized by its exact seminorm, so this is a lower bound for the
/// Bloch-type induced distance.
double bloch_distance_lb(DiskPoint z, DiskPoint w, double alpha, const Dictionary& dictionary);

// ---------------------------------------------------------------------------
// Full report.

struct CriterionReport {
  std::string member_id;
  std::optional<double> t;
  SymbolQuadruple quad;
  CriteriaConfig config;

  Quantity q_iia;
  Quantity q_iib;
  Quantity q_iii;
  Quantity q_iv;
  EssentialA ess_a;
  Quantity ess_b;
  Quantity ess_lower;

  Verdict bounded_verdict = Verdict::kInconclusive;
  /// nullopt when the single-operator hypothesis fails.
  std::optional<Verdict> compact_verdict;
  Verdict phi_operator_bounded = Verdict::kInconclusive;
  Verdict psi_operator_bounded = Verdict::kInconclusive;
  std::map<std::string, double> cross_ratios;
  std::vector<Witness> witnesses;
};

/// Evaluates every quantity and both verdicts for one quadruple.
CriterionReport evaluate_quadruple(const SymbolQuadruple& quad, const CriteriaConfig& config,
                                   std::string member_id = "member",
                                   std::optional<double> t = std::nullopt);

}  // namespace blochdiff
