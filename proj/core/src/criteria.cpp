#include "blochdiff/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "blochdiff/errors.hpp"
#include "blochdiff/quadrature.hpp"
#include "blochdiff/test_functions.hpp"

namespace blochdiff {

// ---------------------------------------------------------------------------
// Quadruples and fields.

SymbolQuadruple SymbolQuadruple::swapped() const {
  SymbolQuadruple s = *this;
  std::swap(s.phi, s.psi);
  std::swap(s.g, s.h);
  return s;
}

SymbolQuadruple SymbolQuadruple::only_phi() const {
  SymbolQuadruple s = *this;
  s.h = SymbolExpr::constant(0.0);
  return s;
}

SymbolQuadruple SymbolQuadruple::only_psi() const {
  SymbolQuadruple s = *this;
  s.g = SymbolExpr::constant(0.0);
  return s;
}

void validate_quadruple(const SymbolQuadruple& quad, double margin, int boundary_samples) {
  if (!(quad.alpha > 0.0) || !(quad.beta > 0.0)) {
    throw std::invalid_argument("quadruple exponents alpha, beta must be positive");
  }
  if (quad.declared_self_map) return;
  const std::pair<const char*, const SymbolExpr*> maps[] = {{"phi", &quad.phi},
                                                            {"psi", &quad.psi}};
  for (const auto& [name, f] : maps) {
    const SelfMapVerdict v = validate_self_map(*f, margin, boundary_samples);
    if (!v.self_map) {
      std::ostringstream os;
      os.precision(12);
      os << name << " is not a self-map of the disk: |" << name << "(" << v.witness
         << ")| = " << std::abs(f->value_at(v.witness));
      throw DomainError(os.str());
    }
  }
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kYes: return "Yes";
    case Verdict::kNo: return "No";
    case Verdict::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<unsigned> CriteriaConfig::default_n_schedule(unsigned nmax) {
  std::vector<unsigned> n{0};
  for (unsigned k = 1; k != 0 && k <= nmax; k *= 2) n.push_back(k);
  return n;
}

namespace {

FieldSample sample_at(const SymbolQuadruple& q, Complex z) noexcept {
  return {z,
          q.phi.value_at(z),
          q.psi.value_at(z),
          q.g.value_at(z),
          q.h.value_at(z),
          std::pow(1.0 - std::norm(z), q.beta)};
}

}  // namespace

SymbolField::SymbolField(SymbolQuadruple quad, SamplingGrid grid)
    : quad_(std::move(quad)), grid_(std::move(grid)) {
  samples_.resize(grid_.size());
  grid_.for_each_point(
      [&](std::size_t i, std::size_t, Complex z) { samples_[i] = sample_at(quad_, z); });
}

FieldSample SymbolField::at(Complex z) const noexcept { return sample_at(quad_, z); }

bool trace_diverges(std::span<const double> trace, const Thresholds& thr) {
  const auto window = static_cast<std::size_t>(std::max(1, thr.divergence_window));
  if (trace.size() <= window) return false;
  const double last = trace.back();
  const double earlier = trace[trace.size() - 1 - window];
  if (!std::isfinite(last)) return true;
  return last > thr.zero_floor && last > thr.divergence_factor * earlier;
}

// ---------------------------------------------------------------------------
// Pointwise ingredients.

Complex apply_operator(const DerivativeFn& fprime, const SymbolExpr& phi, const SymbolExpr& g,
                       DiskPoint z, double quad_tol) {
  auto integrand = [&](Complex xi) { return fprime(phi.value_at(xi)) * g.value_at(xi); };
  return integrate_segment(integrand, z.value(), quad_tol).value;
}

Complex apply_operator(const SymbolExpr& f, const SymbolExpr& phi, const SymbolExpr& g,
                       DiskPoint z, double quad_tol) {
  return apply_operator([&](Complex u) { return f.deriv_at(u); }, phi, g, z, quad_tol);
}

namespace {

struct DPair {
  Complex d_phi;
  Complex d_psi;
  double rho;
};

DPair d_pair(const FieldSample& s, double alpha) noexcept {
  return {s.weight * s.g / std::pow(1.0 - std::norm(s.phi), alpha),
          s.weight * s.h / std::pow(1.0 - std::norm(s.psi), alpha),
          detail::pseudo_hyperbolic(s.phi, s.psi)};
}

}  // namespace

Complex D_weight(Branch which, const SymbolQuadruple& quad, DiskPoint z) {
  const FieldSample s = sample_at(quad, z.value());
  const DPair d = d_pair(s, quad.alpha);
  return which == Branch::kPhiG ? d.d_phi : d.d_psi;
}

namespace {

template <class Derivative>
double diff_objective(const Derivative& fprime, const FieldSample& s) {
  return s.weight * std::abs(fprime(s.phi) * s.g - fprime(s.psi) * s.h);
}

}  // namespace

SeminormEstimate diff_seminorm_on(const DerivativeFn& fprime, const SymbolField& field,
                                  std::span<const Complex> seeds) {
  const auto samples = field.samples();
  auto est = scan_grid(field.grid(), 1, [&](std::size_t i, Complex, std::span<double> out) {
    out[0] = diff_objective(fprime, samples[i]);
  });
  SeminormEstimate e = std::move(est.front());
  auto point = [&](Complex z) { return diff_objective(fprime, field.at(z)); };
  for (const Complex& s : seeds) offer(e, s, point(s));
  refine(e, field.grid(), point);
  return e;
}

SeminormEstimate diff_seminorm_on(const DerivativeFn& fprime, const SymbolQuadruple& quad,
                                  const SamplingGrid& grid, std::span<const Complex> seeds) {
  return diff_seminorm_on(fprime, SymbolField(quad, grid), seeds);
}

// ---------------------------------------------------------------------------
// D-term sups shared by quantity_iia / quantity_iib / ess_quantity_A.

namespace {

// The last two are the D-terms of the single-operator reductions (h = 0 and
// g = 0), where the difference term is |D| alone and the rho terms vanish.
enum DTerm : std::size_t { kDiff = 0, kPhiRho = 1, kPsiRho = 2, kPhiAbs = 3, kPsiAbs = 4 };
constexpr std::size_t kDTerms = 5;
constexpr std::array<const char*, kDTerms> kDTermNames = {"diff", "phi_rho", "psi_rho",
                                                          "phi_abs", "psi_abs"};

void d_terms_of(const DPair& d, std::span<double> out) noexcept {
  out[kDiff] = std::abs(d.d_phi - d.d_psi);
  out[kPhiRho] = std::abs(d.d_phi) * d.rho;
  out[kPsiRho] = std::abs(d.d_psi) * d.rho;
  out[kPhiAbs] = std::abs(d.d_phi);
  out[kPsiAbs] = std::abs(d.d_psi);
}

std::vector<SeminormEstimate> d_term_sups(const SymbolField& field) {
  const auto samples = field.samples();
  const double alpha = field.quad().alpha;
  auto est =
      scan_grid(field.grid(), kDTerms, [&](std::size_t i, Complex, std::span<double> out) {
        d_terms_of(d_pair(samples[i], alpha), out);
      });
  for (std::size_t k = 0; k < kDTerms; ++k) {
    refine(est[k], field.grid(), [&](Complex z) {
      std::array<double, kDTerms> v{};
      d_terms_of(d_pair(field.at(z), alpha), v);
      return v[k];
    });
  }
  return est;
}

std::vector<double> ring_radii(const SamplingGrid& grid) {
  std::vector<double> r;
  for (const auto& ring : grid.rings()) r.push_back(ring.radius);
  return r;
}

Quantity combine_d_terms(const std::vector<SeminormEstimate>& est, DTerm first, DTerm second,
                         const SamplingGrid& grid, const Thresholds& thr) {
  Quantity q;
  q.schedule = ring_radii(grid);
  const auto a = est[first].ring_trace();
  q.trace.assign(a.begin(), a.end());
  q.value = est[first].value;
  q.witnesses = {{kDTermNames[first], est[first].argmax, est[first].value}};
  if (second != first) {
    const auto b = est[second].ring_trace();
    for (std::size_t i = 0; i < a.size(); ++i) q.trace[i] += b[i];
    q.value += est[second].value;
    q.witnesses.push_back({kDTermNames[second], est[second].argmax, est[second].value});
  }
  q.diverging = trace_diverges(q.trace, thr);
  return q;
}

}  // namespace

Quantity quantity_iia(const SymbolField& field, const Thresholds& thr) {
  return combine_d_terms(d_term_sups(field), kDiff, kPsiRho, field.grid(), thr);
}

Quantity quantity_iib(const SymbolField& field, const Thresholds& thr) {
  return combine_d_terms(d_term_sups(field), kDiff, kPhiRho, field.grid(), thr);
}

// ---------------------------------------------------------------------------
// Test-function quantity.

namespace {

std::vector<Complex> centers_on_ring(const SamplingGrid::Ring& ring, int per_ring) {
  if (ring.radius == 0.0) return {Complex{0.0, 0.0}};
  std::vector<Complex> c;
  for (int k = 0; k < per_ring; ++k) {
    c.push_back(std::polar(ring.radius, 2.0 * std::numbers::pi * k / per_ring));
  }
  return c;
}

struct CenterResult {
  Complex a;
  SeminormEstimate fa;
  SeminormEstimate ga;
  [[nodiscard]] double total() const { return fa.value + ga.value; }
};

CenterResult test_function_sups(const SymbolField& field, Complex a, double alpha) {
  const DiskPoint center(a);
  const TestFunction fa(TestFunction::Kind::kFa, center, alpha);
  const TestFunction ga(TestFunction::Kind::kGa, center, alpha);
  auto dfa = [&](Complex u) { return fa.deriv(u); };
  auto dga = [&](Complex u) { return ga.deriv(u); };
  const auto samples = field.samples();
  auto est = scan_grid(field.grid(), 2, [&](std::size_t i, Complex, std::span<double> out) {
    out[0] = diff_objective(dfa, samples[i]);
    out[1] = diff_objective(dga, samples[i]);
  });
  refine(est[0], field.grid(), [&](Complex z) { return diff_objective(dfa, field.at(z)); });
  refine(est[1], field.grid(), [&](Complex z) { return diff_objective(dga, field.at(z)); });
  return {a, std::move(est[0]), std::move(est[1])};
}

}  // namespace

GridParams test_center_grid(const CriteriaConfig& config, double alpha, double beta) {
  const double spread = std::max(1.0, (2.0 * alpha - beta) / beta);
  const int margin = static_cast<int>(std::ceil(std::log2(spread))) + 1;
  GridParams p = config.grid;
  p.levels = std::max(4, std::min(config.grid.levels, config.inner_grid.levels - margin));
  return p;
}

Quantity quantity_iii(const SymbolField& inner_field, const SamplingGrid& a_grid,
                      const ASamplePolicy& policy, std::span<const Complex> extra_centers,
                      const Thresholds& thr) {
  if (policy.per_ring < 1) throw std::invalid_argument("quantity_iii: per_ring must be >= 1");
  const double alpha = inner_field.quad().alpha;
  Quantity q;
  q.schedule = ring_radii(a_grid);
  const auto rings = a_grid.rings();
  double running = 0.0;
  double outer = 0.0;
  Complex outer_a{0.0, 0.0};
  std::optional<CenterResult> best;
  for (std::size_t j = 0; j < rings.size(); ++j) {
    for (const Complex& a : centers_on_ring(rings[j], policy.per_ring)) {
      CenterResult r = test_function_sups(inner_field, a, alpha);
      const double total = r.total();
      running = std::max(running, total);
      if (j + 2 >= rings.size() && total >= outer) {
        outer = total;
        outer_a = a;
      }
      if (!best || total > best->total()) best = std::move(r);
    }
    q.trace.push_back(running);
  }
  for (const Complex& a : extra_centers) {
    if (!DiskPoint::admissible(a)) continue;
    CenterResult r = test_function_sups(inner_field, a, alpha);
    if (!best || r.total() > best->total()) best = std::move(r);
  }
  q.value = best->total();
  q.diverging = trace_diverges(q.trace, thr);
  q.witnesses = {{"a", best->a, best->total()},
                 {"fa_argmax", best->fa.argmax, best->fa.value},
                 {"ga_argmax", best->ga.argmax, best->ga.value},
                 {"limsup_outer", outer_a, outer}};
  return q;
}

// ---------------------------------------------------------------------------
// Power-schedule quantities.

namespace {

/// base^e for a sorted exponent list, reusing the previous power: squaring
/// when e doubles, square-and-multiply for 2e + 1.
class PowerLadder {
 public:
  explicit PowerLadder(std::vector<unsigned> exponents) : exps_(std::move(exponents)) {
    for (std::size_t i = 1; i < exps_.size(); ++i) {
      if (exps_[i] <= exps_[i - 1]) {
        throw std::invalid_argument("n schedule must be strictly increasing");
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return exps_.size(); }
  [[nodiscard]] unsigned exponent(std::size_t i) const noexcept { return exps_[i]; }

  void apply(Complex base, std::span<Complex> out, std::size_t upto) const noexcept {
    Complex prev{1.0, 0.0};
    unsigned prev_e = 0;
    for (std::size_t i = 0; i < upto; ++i) {
      const unsigned e = exps_[i];
      if (e == prev_e) {
        // unchanged
      } else if (prev_e != 0 && e == 2 * prev_e) {
        prev = prev * prev;
      } else if (prev_e != 0 && e == 2 * prev_e + 1) {
        prev = prev * prev * base;
      } else {
        prev = prev * detail::integer_power(base, e - prev_e);
      }
      prev_e = e;
      out[i] = prev;
    }
  }

 private:
  std::vector<unsigned> exps_;
};

// Per exponent: the difference, and optionally the h = 0 and g = 0 parts.
enum PowerPart : std::size_t { kPowDiff = 0, kPowPhi = 1, kPowPsi = 2 };

struct PowerObjective {
  PowerLadder ladder;
  std::vector<double> factors;  // multiplier per exponent
  std::size_t parts = 1;        // 1, or 3 with the single-operator parts

  void values(const FieldSample& s, std::span<double> out, std::size_t upto,
              std::span<Complex> pphi, std::span<Complex> ppsi) const noexcept {
    ladder.apply(s.phi, pphi, upto);
    ladder.apply(s.psi, ppsi, upto);
    for (std::size_t i = 0; i < upto; ++i) {
      const Complex a = pphi[i] * s.g;
      const Complex b = ppsi[i] * s.h;
      const double f = factors[i] * s.weight;
      out[i * parts + kPowDiff] = f * std::abs(a - b);
      if (parts == 3) {
        out[i * parts + kPowPhi] = f * std::abs(a);
        out[i * parts + kPowPsi] = f * std::abs(b);
      }
    }
  }
};

// Estimates indexed [exponent * parts + part].
std::vector<SeminormEstimate> power_sups(const SymbolField& field, const PowerObjective& obj) {
  const std::size_t m = obj.ladder.size();
  const std::size_t width = m * obj.parts;
  const auto samples = field.samples();
  std::vector<Complex> pphi(m), ppsi(m);
  auto est = scan_grid(field.grid(), width, [&](std::size_t i, Complex, std::span<double> out) {
    obj.values(samples[i], out, m, pphi, ppsi);
  });
  std::vector<double> scratch(width);
  for (std::size_t k = 0; k < width; ++k) {
    refine(est[k], field.grid(), [&](Complex z) {
      obj.values(field.at(z), scratch, k / obj.parts + 1, pphi, ppsi);
      return scratch[k];
    });
  }
  return est;
}

std::vector<unsigned> sorted_schedule(std::span<const unsigned> n_schedule) {
  std::vector<unsigned> n(n_schedule.begin(), n_schedule.end());
  if (n.empty()) throw std::invalid_argument("n schedule must not be empty");
  return n;
}

std::vector<SeminormEstimate> iv_sups(const SymbolField& field,
                                      std::span<const unsigned> n_schedule, std::size_t parts) {
  PowerObjective obj{PowerLadder(sorted_schedule(n_schedule)), {}, parts};
  for (unsigned n : n_schedule) obj.factors.push_back(std::pow(n + 1.0, field.quad().alpha));
  return power_sups(field, obj);
}

Quantity iv_from(const std::vector<SeminormEstimate>& est, std::span<const unsigned> n_schedule,
                 std::size_t parts, PowerPart part, const Thresholds& thr) {
  Quantity q;
  std::size_t best = 0;
  for (std::size_t k = 0; k < n_schedule.size(); ++k) {
    const SeminormEstimate& e = est[k * parts + part];
    q.schedule.push_back(n_schedule[k]);
    q.trace.push_back(e.value);
    if (e.value > est[best * parts + part].value) best = k;
  }
  const SeminormEstimate& eb = est[best * parts + part];
  const SeminormEstimate& el = est[(n_schedule.size() - 1) * parts + part];
  q.value = eb.value;
  q.diverging = trace_diverges(q.trace, thr);
  q.witnesses = {{"n=" + std::to_string(n_schedule[best]), eb.argmax, eb.value},
                 {"n=" + std::to_string(n_schedule.back()), el.argmax, el.value}};
  return q;
}

}  // namespace

Quantity quantity_iv(const SymbolField& field, std::span<const unsigned> n_schedule,
                     const Thresholds& thr) {
  return iv_from(iv_sups(field, n_schedule, 1), n_schedule, 1, kPowDiff, thr);
}

namespace {

Quantity tail_of(const Quantity& per_n, unsigned n0, const Thresholds& thr) {
  Quantity q = per_n;
  q.witnesses.clear();
  bool any = false;
  double best = 0.0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < per_n.schedule.size(); ++k) {
    if (per_n.schedule[k] < n0) continue;
    if (!any || per_n.trace[k] > best) {
      best = per_n.trace[k];
      best_k = k;
    }
    any = true;
  }
  if (!any) throw std::invalid_argument("tail start N0 exceeds the n schedule");
  q.value = best;
  q.witnesses.push_back({"tail_max_n=" + std::to_string(static_cast<unsigned>(
                                             per_n.schedule[best_k])),
                         {0.0, 0.0}, best});
  (void)thr;
  return q;
}

}  // namespace

Quantity ess_quantity_B(const Quantity& iv, std::span<const unsigned> n_schedule, unsigned n0) {
  if (iv.schedule.size() != n_schedule.size()) {
    throw std::invalid_argument("ess_quantity_B: schedule does not match the iv trace");
  }
  Quantity q = tail_of(iv, n0, {});
  q.diverging = iv.diverging;
  // Keep the argmax of the tail maximum from the iv witnesses when present.
  for (const auto& w : iv.witnesses) {
    if (w.value == q.value) q.witnesses.push_back(w);
  }
  return q;
}

Quantity ess_lower_monomials(const SymbolField& field, std::span<const unsigned> n_schedule,
                             unsigned n0, const Thresholds& thr) {
  std::vector<unsigned> ns;
  for (unsigned n : n_schedule) {
    if (n >= 1) ns.push_back(n);
  }
  if (ns.empty()) throw std::invalid_argument("ess_lower_monomials: no n >= 1 in schedule");
  std::vector<unsigned> exps;
  PowerObjective obj{PowerLadder({}), {}, 1};
  for (unsigned n : ns) {
    exps.push_back(n - 1);
    obj.factors.push_back(n / monomial_seminorm_exact(n, field.quad().alpha));
  }
  obj.ladder = PowerLadder(std::move(exps));
  const auto est = power_sups(field, obj);
  Quantity per_n;
  for (std::size_t k = 0; k < est.size(); ++k) {
    per_n.schedule.push_back(ns[k]);
    per_n.trace.push_back(est[k].value);
  }
  Quantity q = tail_of(per_n, n0, thr);
  q.diverging = trace_diverges(q.trace, thr);
  for (std::size_t k = 0; k < est.size(); ++k) {
    if (est[k].value == q.value && ns[k] >= n0) {
      q.witnesses.push_back({"n=" + std::to_string(ns[k]), est[k].argmax, est[k].value});
      break;
    }
  }
  return q;
}

// ---------------------------------------------------------------------------
// Essential quantity A.

EssentialA ess_quantity_A(const SymbolField& field, std::span<const double> r_schedule,
                          const std::vector<bool>* global_terms_diverging) {
  for (std::size_t i = 1; i < r_schedule.size(); ++i) {
    if (!(r_schedule[i] > r_schedule[i - 1])) {
      throw std::invalid_argument("r schedule must be strictly increasing");
    }
  }
  if (r_schedule.empty()) throw std::invalid_argument("r schedule must not be empty");
  const std::size_t m = r_schedule.size();
  EssentialA e;
  e.r_schedule.assign(r_schedule.begin(), r_schedule.end());
  e.phi_term.assign(m, 0.0);
  e.psi_term.assign(m, 0.0);
  e.joint_term.assign(m, 0.0);
  std::array<Complex, 3> last_arg{};
  const double alpha = field.quad().alpha;
  for (const FieldSample& s : field.samples()) {
    const double mp = std::abs(s.phi);
    const double mq = std::abs(s.psi);
    if (mp <= r_schedule.front() && mq <= r_schedule.front()) continue;
    const DPair d = d_pair(s, alpha);
    const double t_phi = std::abs(d.d_phi) * d.rho;
    const double t_psi = std::abs(d.d_psi) * d.rho;
    const double t_joint = std::abs(d.d_phi - d.d_psi);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = r_schedule[i];
      const bool in_phi = mp > r;
      const bool in_psi = mq > r;
      if (!in_phi && !in_psi) break;
      const bool last = i + 1 == m;
      if (in_phi && t_phi > e.phi_term[i]) {
        e.phi_term[i] = t_phi;
        if (last) last_arg[0] = s.z;
      }
      if (in_psi && t_psi > e.psi_term[i]) {
        e.psi_term[i] = t_psi;
        if (last) last_arg[1] = s.z;
      }
      if (in_phi && in_psi && t_joint > e.joint_term[i]) {
        e.joint_term[i] = t_joint;
        if (last) last_arg[2] = s.z;
      }
    }
  }
  e.total.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    e.total[i] = e.phi_term[i] + e.psi_term[i] + e.joint_term[i];
    if (i > 0 && e.total[i] > e.total[i - 1]) e.monotone = false;
  }
  e.value = e.total.back();
  e.witnesses = {{"phi_term", last_arg[0], e.phi_term.back()},
                 {"psi_term", last_arg[1], e.psi_term.back()},
                 {"joint_term", last_arg[2], e.joint_term.back()}};
  if (global_terms_diverging != nullptr && global_terms_diverging->size() == 3) {
    const auto& g = *global_terms_diverging;
    e.diverging = (g[kPhiRho] && e.phi_term.back() > 0.0) ||
                  (g[kPsiRho] && e.psi_term.back() > 0.0) ||
                  (g[kDiff] && e.joint_term.back() > 0.0);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Verdicts.

BoundednessResult boundedness_verdict(const Quantity& iia, const Quantity& iib,
                                      const Quantity& iii, const Quantity& iv,
                                      const Thresholds& thr) {
  const std::array<std::pair<const char*, const Quantity*>, 4> qs = {
      {{"iia", &iia}, {"iib", &iib}, {"iii", &iii}, {"iv", &iv}}};
  BoundednessResult r;
  int diverging = 0;
  for (const auto& [name, q] : qs) diverging += q->diverging ? 1 : 0;
  r.verdict = diverging == 0 ? Verdict::kYes
              : diverging == 4 ? Verdict::kNo
                               : Verdict::kInconclusive;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = i + 1; j < qs.size(); ++j) {
      const Quantity& a = *qs[i].second;
      const Quantity& b = *qs[j].second;
      if (a.diverging || b.diverging) continue;
      if (!(a.value > thr.zero_floor) || !(b.value > thr.zero_floor)) continue;
      r.cross_ratios[std::string(qs[i].first) + "/" + qs[j].first] = a.value / b.value;
    }
  }
  return r;
}

namespace {

Verdict two_criterion_verdict(const Quantity& iia, const Quantity& iv) {
  if (!iia.diverging && !iv.diverging) return Verdict::kYes;
  if (iia.diverging && iv.diverging) return Verdict::kNo;
  return Verdict::kInconclusive;
}

// Tail judgement for one essential quantity.
struct TailState {
  bool small_and_decreasing = false;
  bool stagnant = false;
};

TailState judge_tail(std::span<const double> tail, bool diverging, const Thresholds& thr) {
  TailState s;
  if (tail.empty()) return s;
  const double last = tail.back();
  bool non_increasing = true;
  const std::size_t from = tail.size() >= 3 ? tail.size() - 2 : 1;
  for (std::size_t i = from; i < tail.size(); ++i) non_increasing &= tail[i] <= tail[i - 1];
  const double back2 = tail[tail.size() >= 3 ? tail.size() - 3 : 0];
  s.small_and_decreasing = !diverging && last < thr.compact_epsilon && non_increasing;
  s.stagnant = diverging ||
               (last >= thr.compact_epsilon && last >= thr.stagnation_ratio * back2);
  return s;
}

std::vector<double> tail_values(const Quantity& q, unsigned n0) {
  std::vector<double> t;
  for (std::size_t k = 0; k < q.schedule.size(); ++k) {
    if (q.schedule[k] >= n0) t.push_back(q.trace[k]);
  }
  return t;
}

}  // namespace

Verdict single_operator_verdict(const SymbolQuadruple& reduced, const SamplingGrid& grid,
                                std::span<const unsigned> n_schedule, const Thresholds& thr) {
  const SymbolField field(reduced, grid);
  return two_criterion_verdict(
      combine_d_terms(d_term_sups(field), kDiff, kPsiRho, grid, thr),
      quantity_iv(field, n_schedule, thr));
}

Verdict compactness_from_essentials(const EssentialA& a, const Quantity& b,
                                    const Quantity& lower, const Thresholds& thr) {
  const TailState sa = judge_tail(a.total, a.diverging, thr);
  const TailState sb = judge_tail(tail_values(b, thr.tail_n0), b.diverging, thr);
  const TailState sl = judge_tail(tail_values(lower, thr.tail_n0), lower.diverging, thr);
  if (sa.small_and_decreasing && sb.small_and_decreasing && sl.small_and_decreasing) {
    return Verdict::kYes;
  }
  if (sa.stagnant || sb.stagnant || sl.stagnant) return Verdict::kNo;
  return Verdict::kInconclusive;
}

Verdict compactness_verdict(const SymbolQuadruple& quad, const CriteriaConfig& config) {
  const CriterionReport r = evaluate_quadruple(quad, config);
  if (!r.compact_verdict) {
    throw HypothesisUnmet("a single generalized composition operator is unbounded (phi: " +
                          std::string(to_string(r.phi_operator_bounded)) +
                          ", psi: " + to_string(r.psi_operator_bounded) + ")");
  }
  return *r.compact_verdict;
}

// ---------------------------------------------------------------------------
// Induced distance.

Dictionary Dictionary::standard(DiskPoint z, DiskPoint w) {
  Dictionary d;
  d.fa_centers = {z, w};
  d.ga_centers = {z, w};
  d.monomials = {1, 2, 4, 8, 16, 32, 64};
  return d;
}

double bloch_distance_lb(DiskPoint z, DiskPoint w, double alpha, const Dictionary& dictionary) {
  if (dictionary.fa_centers.empty() && dictionary.ga_centers.empty() &&
      dictionary.monomials.empty()) {
    throw std::invalid_argument("bloch_distance_lb: empty dictionary");
  }
  const double wz = std::pow(1.0 - z.norm(), alpha);
  const double ww = std::pow(1.0 - w.norm(), alpha);
  auto gap = [&](auto&& fprime, double norm) {
    return std::abs(wz * fprime(z.value()) - ww * fprime(w.value())) / norm;
  };
  double best = 0.0;
  for (const DiskPoint& a : dictionary.fa_centers) {
    const TestFunction f(TestFunction::Kind::kFa, a, alpha);
    best = std::max(best, gap([&](Complex u) { return f.deriv(u); }, 1.0));
  }
  const double ga_norm = ga_seminorm_exact(alpha);
  for (const DiskPoint& a : dictionary.ga_centers) {
    const TestFunction f(TestFunction::Kind::kGa, a, alpha);
    best = std::max(best, gap([&](Complex u) { return f.deriv(u); }, ga_norm));
  }
  for (unsigned n : dictionary.monomials) {
    if (n == 0) continue;
    const double norm = monomial_seminorm_exact(n, alpha);
    best = std::max(best, gap(
                              [&](Complex u) {
                                return static_cast<double>(n) * detail::integer_power(u, n - 1);
                              },
                              norm));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Full report.

CriterionReport evaluate_quadruple(const SymbolQuadruple& quad, const CriteriaConfig& config,
                                   std::string member_id, std::optional<double> t) {
  validate_quadruple(quad, config.self_map_margin, config.self_map_samples);
  const Thresholds& thr = config.thresholds;
  CriterionReport r;
  r.member_id = std::move(member_id);
  r.t = t;
  r.quad = quad;
  r.config = config;

  const SamplingGrid grid(config.grid);
  const SymbolField field(quad, grid);

  const auto d = d_term_sups(field);
  r.q_iia = combine_d_terms(d, kDiff, kPsiRho, grid, thr);
  r.q_iib = combine_d_terms(d, kDiff, kPhiRho, grid, thr);
  const auto iv = iv_sups(field, config.n_schedule, 3);
  r.q_iv = iv_from(iv, config.n_schedule, 3, kPowDiff, thr);

  std::vector<Complex> images;
  if (config.a_samples.witness_images) {
    for (std::size_t k = 0; k <= kPsiRho; ++k) {
      const FieldSample s = field.at(d[k].argmax);
      images.push_back(s.phi);
      images.push_back(s.psi);
    }
  }
  {
    const SymbolField inner(quad, SamplingGrid(config.inner_grid));
    const SamplingGrid centers(test_center_grid(config, quad.alpha, quad.beta));
    r.q_iii = quantity_iii(inner, centers, config.a_samples, images, thr);
  }

  BoundednessResult b = boundedness_verdict(r.q_iia, r.q_iib, r.q_iii, r.q_iv, thr);
  r.bounded_verdict = b.verdict;
  r.cross_ratios = std::move(b.cross_ratios);

  std::vector<bool> global_div(3);
  for (std::size_t k = 0; k < 3; ++k) global_div[k] = trace_diverges(d[k].ring_trace(), thr);
  r.ess_a = ess_quantity_A(field, config.r_schedule, &global_div);
  r.ess_b = ess_quantity_B(r.q_iv, config.n_schedule, thr.tail_n0);
  r.ess_lower = ess_lower_monomials(field, config.n_schedule, thr.tail_n0, thr);

  r.phi_operator_bounded =
      quad.g.is_zero_constant()
          ? Verdict::kYes
          : two_criterion_verdict(combine_d_terms(d, kPhiAbs, kPhiAbs, grid, thr),
                                  iv_from(iv, config.n_schedule, 3, kPowPhi, thr));
  r.psi_operator_bounded =
      quad.h.is_zero_constant()
          ? Verdict::kYes
          : two_criterion_verdict(combine_d_terms(d, kPsiAbs, kPsiAbs, grid, thr),
                                  iv_from(iv, config.n_schedule, 3, kPowPsi, thr));
  if (r.phi_operator_bounded == Verdict::kNo || r.psi_operator_bounded == Verdict::kNo) {
    r.compact_verdict = std::nullopt;
  } else if (r.phi_operator_bounded != Verdict::kYes || r.psi_operator_bounded != Verdict::kYes) {
    r.compact_verdict = Verdict::kInconclusive;
  } else {
    r.compact_verdict = compactness_from_essentials(r.ess_a, r.ess_b, r.ess_lower, thr);
  }

  auto add = [&](const std::string& prefix, const std::vector<Witness>& ws) {
    for (const auto& w : ws) r.witnesses.push_back({prefix + ":" + w.label, w.point, w.value});
  };
  add("Q_iia", r.q_iia.witnesses);
  add("Q_iib", r.q_iib.witnesses);
  add("Q_iii", r.q_iii.witnesses);
  add("Q_iv", r.q_iv.witnesses);
  add("ess_A", r.ess_a.witnesses);
  add("ess_B", r.ess_b.witnesses);
  add("ess_lower", r.ess_lower.witnesses);
  return r;
}

}  // namespace blochdiff
