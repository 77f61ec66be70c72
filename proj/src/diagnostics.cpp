#include "adabb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adabb/solvers.hpp"

namespace adabb {

namespace {

const double kSqrt2 = std::sqrt(2.0);
constexpr double kEqTol = 1e-14;    // relative, for stated equalities
constexpr double kIneqTol = 1e-10;  // relative, for stated inequalities

bool theta1_reset_flagged(const RunTrace& t) {
  const auto it = t.meta.find("theta1_reset");
  return it != t.meta.end() && it->second == "1";
}

bool is_ledger_kind(ControllerKind k) {
  return k == ControllerKind::AdaBB || k == ControllerKind::AdaBB_SC ||
         k == ControllerKind::AdaPBB;
}

double sq(double v) { return v * v; }

// lhs <= rhs within relative slack.
bool leq_tol(double lhs, double rhs, double tol) {
  return lhs <= rhs + tol * std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

bool eq_tol(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

[[noreturn]] void ledger_fail(int k, const std::string& what) {
  throw LedgerMismatch("ledger relation failed at k=" + std::to_string(k) +
                       ": " + what);
}

void require_vectors(const RunTrace& trace, const char* who) {
  for (const auto& st : trace.states)
    if (st.x.size() == 0)
      throw InvalidState(std::string(who) +
                         ": trace was recorded without diagnostics");
}

void require_reference(const RunTrace& trace, const ReferenceSolution& ref,
                       const char* who) {
  if (ref.x_star.size() == 0)
    throw RequiresReference(std::string(who) + ": reference solution required");
  if (!trace.states.empty() && trace.states[0].x.size() != 0 &&
      ref.x_star.size() != trace.states[0].x.size())
    throw InvalidState(std::string(who) + ": reference dimension mismatch");
}

void validate_ledger(const RunTrace& trace,
                     const std::vector<LedgerRow>& rows) {
  const auto& s = trace.states;
  const int K = static_cast<int>(s.size()) - 1;
  const ControllerKind kind = trace.controller.kind;

  if (kind == ControllerKind::AdaPBB) {
    for (int k = 1; k <= K; ++k) {
      if (!eq_tol(s[k].alpha_k * rows[k].E, s[k].theta_k, kEqTol))
        ledger_fail(k, "alpha_k E_k != theta_k");
      if (rows[k].E < 0.0) ledger_fail(k, "E_k < 0");
      if (rows[k].B < 0.0) ledger_fail(k, "B_k < 0");
    }
    for (int k = 0; k < K; ++k) {
      if (!leq_tol(2.0 * rows[k + 1].B * sq(s[k + 1].alpha_k),
                   sq(s[k].alpha_k), kIneqTol))
        ledger_fail(k + 1, "2 B_{k+1} alpha_{k+1}^2 > alpha_k^2");
      if (!leq_tol(rows[k + 1].E * sq(s[k + 1].alpha_k),
                   rows[k].E * sq(s[k].alpha_k) + s[k].alpha_k, kIneqTol))
        ledger_fail(k + 1, "E ledger telescoping inequality");
    }
    return;
  }

  // Smooth families.
  for (int k = 1; k <= K; ++k) {
    if (!eq_tol(rows[k].P, s[k].alpha_k * s[k].theta_k, kEqTol))
      ledger_fail(k, "P_k != alpha_k theta_k");
    if (!leq_tol(2.0 * rows[k].M, 1.0, kIneqTol)) ledger_fail(k, "2 M_k > 1");
    if (rows[k].M < -kIneqTol) ledger_fail(k, "M_k < 0");
    if (rows[k].P < -kIneqTol) ledger_fail(k, "P_k < 0");
  }
  if (kind == ControllerKind::AdaBB) {
    for (int k = 1; k < K; ++k)
      if (!leq_tol(rows[k + 1].P, rows[k].P + s[k].alpha_k, kIneqTol))
        ledger_fail(k + 1, "P_{k+1} > P_k + alpha_k");
  } else {  // AdaBB_SC
    const double eta = trace.controller.eta;
    for (int k = 0; k < K; ++k)
      if (!leq_tol(rows[k + 1].P, s[k].alpha_k + eta * rows[k].P, kIneqTol))
        ledger_fail(k + 1, "P_{k+1} > alpha_k + eta P_k");
  }
}

}  // namespace

std::vector<LedgerRow> compute_ledger(const RunTrace& trace) {
  const ControllerKind kind = trace.controller.kind;
  if (!is_ledger_kind(kind))
    throw InvalidState("compute_ledger: ledger defined for AdaBB-family traces");
  const auto& s = trace.states;
  if (s.size() < 2)
    throw InvalidState("compute_ledger: trace needs at least one adaptive step");
  const int K = static_cast<int>(s.size()) - 1;

  std::vector<LedgerRow> rows(K + 1);
  for (int k = 1; k <= K; ++k) {
    const double a = s[k].alpha_k;
    const double ap = s[k - 1].alpha_k;
    const double lam = s[k].lambda_k;
    LedgerRow& r = rows[k];
    r.k = k;
    r.category = s[k].case_tag == CaseTag::CaseI    ? 1
                 : s[k].case_tag == CaseTag::CaseII ? 2
                                                    : 3;
    switch (kind) {
      // P is written as alpha times the controller's theta expression,
      // token for token.  The distributed forms cancel catastrophically near
      // the case boundaries (e.g. 2a^2/ap - a^2/lam as lam -> ap/2), which
      // would make the P = alpha*theta consistency check fail on noise.
      case ControllerKind::AdaBB:
        switch (s[k].case_tag) {
          case CaseTag::CaseI:
            r.M = 0.0;
            r.P = a * (a / ap);
            break;
          case CaseTag::CaseII:
            r.M = a * a / (lam * ap) - a * a / (ap * ap);
            r.P = a * (2.0 * a / ap - a / lam);
            break;
          default:  // CaseIII
            r.M = a * a / (lam * lam) - a * a / (ap * lam);
            r.P = a * (a / ap);
            break;
        }
        break;
      case ControllerKind::AdaBB_SC:
        switch (s[k].case_tag) {
          case CaseTag::CaseI:
            r.M = 0.0;
            r.P = a * (a / ap);
            break;
          case CaseTag::CaseII:
            r.M = a / ap - a * a / (ap * ap);
            r.P = a * (2.0 * a / ap - 1.0);
            break;
          default:  // CaseIII
            r.M = 0.5 - lam / (2.0 * ap);
            r.P = a * (a / ap);
            break;
        }
        break;
      default:  // AdaPBB
        switch (s[k].case_tag) {
          case CaseTag::CaseI:
            r.B = 0.0;
            r.E = 1.0 / ap;
            break;
          case CaseTag::CaseII:
            r.B = 1.0;
            r.E = 0.0;
            break;
          default:  // CaseIII
            r.B = (ap - lam) * (ap - lam) / (lam * lam);
            r.E = 0.0;
            break;
        }
        break;
    }
  }

  // Synthetic row 0 closing the telescoping at the seed step.
  rows[0].k = 0;
  rows[0].category = 0;
  const double a0 = s[0].alpha_k;
  if (kind == ControllerKind::AdaPBB) {
    const double a1 = s[1].alpha_k;
    rows[0].E = (rows[1].E * a1 * a1 - a0) / (a0 * a0);
  } else if (kind == ControllerKind::AdaBB) {
    rows[0].P = rows[1].P - a0;
  } else {
    const double eta = trace.controller.eta;
    rows[0].P = eta > 0.0 ? (rows[1].P - a0) / eta : 0.0;
  }

  for (int k = 0; k < K; ++k) {
    if (kind == ControllerKind::AdaPBB)
      rows[k].w = s[k].alpha_k + rows[k].E * sq(s[k].alpha_k) -
                  rows[k + 1].E * sq(s[k + 1].alpha_k);
    else
      rows[k].w = s[k].alpha_k + rows[k].P - rows[k + 1].P;
  }
  rows[K].w = 0.0;

  if (!theta1_reset_flagged(trace)) validate_ledger(trace, rows);
  return rows;
}

LyapunovSeq lyapunov_sequence(const RunTrace& trace,
                              const ReferenceSolution& ref) {
  if (trace.composite)
    throw InvalidState(
        "lyapunov_sequence: composite traces use composite_energy_sequence");
  require_reference(trace, ref, "lyapunov_sequence");
  const auto rows = compute_ledger(trace);
  require_vectors(trace, "lyapunov_sequence");

  const auto& s = trace.states;
  const int K = static_cast<int>(s.size()) - 1;
  LyapunovSeq out;
  out.upsilon.reserve(K);
  out.phi.reserve(K);
  for (int k = 1; k <= K; ++k) {
    const double gap_prev = s[k - 1].fval - ref.f_star;
    const double ups = (s[k].x - ref.x_star).squaredNorm() +
                       2.0 * rows[k].M * (s[k].x - s[k - 1].x).squaredNorm() +
                       (2.0 * s[k - 1].alpha_k + 2.0 * rows[k - 1].P) * gap_prev;
    out.upsilon.push_back(ups);
    out.phi.push_back(ups - 2.0 * rows[k - 1].w * gap_prev);
  }
  return out;
}

CompositeEnergySeq composite_energy_sequence(const RunTrace& trace,
                                             const ReferenceSolution& ref) {
  if (!trace.composite)
    throw InvalidState("composite_energy_sequence: smooth trace");
  require_reference(trace, ref, "composite_energy_sequence");
  const auto rows = compute_ledger(trace);
  require_vectors(trace, "composite_energy_sequence");

  const auto& s = trace.states;
  const int K = static_cast<int>(s.size()) - 1;
  CompositeEnergySeq out;
  out.V.reserve(K);
  out.U.reserve(K);
  for (int k = 1; k <= K; ++k) {
    if (!s[k - 1].xi)
      throw InvalidState("composite_energy_sequence: trace lacks xi");
    const double gap_prev = s[k - 1].fval - ref.f_star;
    const double pg2 = (s[k - 1].grad + *s[k - 1].xi).squaredNorm();
    const double base = (s[k].x - ref.x_star).squaredNorm() +
                        2.0 * rows[k].B * sq(s[k].alpha_k) * pg2;
    out.V.push_back(base + 2.0 * s[k - 1].alpha_k *
                               (1.0 + rows[k - 1].E * s[k - 1].alpha_k) *
                               gap_prev);
    out.U.push_back(base + 2.0 * rows[k].E * sq(s[k].alpha_k) * gap_prev);
  }
  return out;
}

double containment_radius(const RunTrace& trace,
                          const ReferenceSolution& ref) {
  require_reference(trace, ref, "containment_radius");
  const auto rows = compute_ledger(trace);
  require_vectors(trace, "containment_radius");
  const auto& s = trace.states;

  const double dist2 = (s[0].x - ref.x_star).squaredNorm();
  const double gap0 = s[0].fval - ref.f_star;
  const double a0 = s[0].alpha_k;
  double r2;
  if (trace.composite) {
    if (!s[0].xi) throw InvalidState("containment_radius: trace lacks xi");
    const double pg2 = (s[0].grad + *s[0].xi).squaredNorm();
    const double coef =
        std::max(2.0 * (rows[1].E * sq(s[1].alpha_k) - a0), 0.0);
    r2 = dist2 + 2.0 * a0 * a0 * pg2 + coef * gap0;
  } else {
    const double coef = std::max(2.0 * rows[1].P - 2.0 * a0, 0.0);
    r2 = dist2 + a0 * a0 * (1.0 + 2.0 * rows[1].M) * s[0].grad.squaredNorm() +
         coef * gap0;
  }
  return std::sqrt(std::max(r2, 0.0));
}

Categorization categorize(const RunTrace& trace) {
  const auto& s = trace.states;
  Categorization out;
  if (s.size() < 2) return out;
  const int K = static_cast<int>(s.size()) - 1;

  out.labels.reserve(K);
  for (int k = 1; k <= K; ++k) {
    const double lam = s[k].lambda_k;
    const double ap = s[k - 1].alpha_k;
    if (lam >= ap)
      out.labels.push_back(1);
    else if (lam > 0.5 * ap)
      out.labels.push_back(2);
    else
      out.labels.push_back(3);
  }

  for (int i = 1; i <= K; ++i) {
    if (out.labels[i - 1] != 1) continue;
    const bool next_is_3 = i + 1 <= K && out.labels[i] == 3;
    if (!next_is_3) out.break_indices.push_back(i);
  }

  const auto lab = [&](int i) { return out.labels[i - 1]; };
  if (K >= 1 && lab(1) == 2) {
    out.i0 = 0;
    out.i0_defined = true;
  } else if (K >= 2 && lab(1) == 1) {
    out.i0 = lab(2) == 3 ? 0 : 1;
    out.i0_defined = true;
  } else if (K >= 2 && lab(1) == 3 && lab(2) == 3) {
    out.i0 = 0;
    out.i0_defined = true;
  } else if (K >= 2 && lab(1) == 3 && lab(2) == 2) {
    out.i0 = 1;
    out.i0_defined = true;
  } else if (K >= 3 && lab(1) == 3 && lab(2) == 1) {
    out.i0 = lab(3) == 3 ? 1 : 2;
    out.i0_defined = true;
  }
  return out;
}

BoundReport verify_stepsize_bounds(const RunTrace& trace, double L) {
  if (!(L > 0.0))
    throw InvalidState("verify_stepsize_bounds: L must be positive");
  const auto& s = trace.states;
  if (s.size() < 2)
    throw InvalidState("verify_stepsize_bounds: trace needs k >= 1");
  const auto cat = categorize(trace);
  const int K = static_cast<int>(s.size()) - 1;
  constexpr double kTol = 1e-9;
  const double inf = std::numeric_limits<double>::infinity();

  BoundReport rep;
  rep.checked_iters = K;
  rep.worst_floor_margin = inf;
  rep.worst_sum_margin = inf;
  rep.worst_cat2_margin = inf;
  rep.worst_pre3_margin = inf;
  rep.worst_triple_margin = inf;

  const double floor = 1.0 / (kSqrt2 * L);
  for (int i = 1; i <= K; ++i) {
    const double margin = s[i].alpha_k - floor;
    if (margin < rep.worst_floor_margin) {
      rep.worst_floor_margin = margin;
      rep.worst_floor_index = i;
    }
    if (margin < -kTol / L)
      throw BoundViolation("alpha floor 1/(sqrt(2)L) fails first at i=" +
                           std::to_string(i));
  }

  double sum = 0.0;
  for (int k = 1; k <= K; ++k) {
    sum += s[k].alpha_k;
    const double bound = (k - 2.0 + kSqrt2) / L;
    const double margin = sum - bound;
    if (margin < rep.worst_sum_margin) {
      rep.worst_sum_margin = margin;
      rep.worst_sum_index = k;
    }
    if (margin < -kTol * (std::abs(bound) + 1.0 / L))
      throw BoundViolation("stepsize sum bound fails first at k=" +
                           std::to_string(k));
  }

  for (int i = 1; i <= K; ++i) {
    if (cat.labels[i - 1] != 2) continue;
    const double margin = s[i].alpha_k - 1.0 / L;
    if (margin < rep.worst_cat2_margin) {
      rep.worst_cat2_margin = margin;
      rep.worst_cat2_index = i;
    }
    if (margin < -kTol / L)
      throw BoundViolation("I2 bound alpha_i >= 1/L fails first at i=" +
                           std::to_string(i));
  }

  for (int i = 0; i < K; ++i) {  // (i+1) in I3 => alpha_i >= 2/L
    if (cat.labels[i] != 3) continue;
    const double margin = s[i].alpha_k - 2.0 / L;
    if (margin < rep.worst_pre3_margin) {
      rep.worst_pre3_margin = margin;
      rep.worst_pre3_index = i;
    }
    if (margin < -kTol / L)
      throw BoundViolation("pre-I3 bound alpha_i >= 2/L fails first at i=" +
                           std::to_string(i));
  }

  for (int i = 1; i < K; ++i) {  // i in I3 with both neighbors recorded
    if (cat.labels[i - 1] != 3) continue;
    const double triple =
        s[i - 1].alpha_k + s[i].alpha_k + s[i + 1].alpha_k;
    const double margin = triple - (2.0 + kSqrt2) / L;
    if (margin < rep.worst_triple_margin) {
      rep.worst_triple_margin = margin;
      rep.worst_triple_index = i;
    }
    if (margin < -kTol / L)
      throw BoundViolation("I3 triple bound fails first at i=" +
                           std::to_string(i));
  }

  return rep;
}

ErgodicSeq ergodic_average(const RunTrace& trace) {
  const auto rows = compute_ledger(trace);
  require_vectors(trace, "ergodic_average");
  const auto& s = trace.states;
  const int K = static_cast<int>(s.size()) - 1;
  const bool comp = trace.composite;

  ErgodicSeq out;
  out.x_bar.reserve(K);
  out.S.reserve(K);
  Vector wsum = Vector::Zero(s[0].x.size());
  double S = comp ? rows[1].E * sq(s[1].alpha_k) : rows[1].P;
  for (int k = 1; k <= K; ++k) {
    S += s[k].alpha_k;
    const double head = comp ? s[k].alpha_k * (1.0 + rows[k].E * s[k].alpha_k)
                             : s[k].alpha_k + rows[k].P;
    out.x_bar.push_back((head * s[k].x + wsum) / S);
    out.S.push_back(S);
    wsum += rows[k].w * s[k].x;
  }
  return out;
}

ReferenceSolution analytic_reference(Vector x_star, double f_star) {
  ReferenceSolution r;
  r.x_star = std::move(x_star);
  r.f_star = f_star;
  r.source = ReferenceSolution::Source::Analytic;
  return r;
}

ReferenceSolution high_accuracy_reference(const SmoothOracle& oracle,
                                          const Vector& x0, int max_iter,
                                          double tol) {
  RunConfig cfg;
  cfg.controller = Controller::adabb();
  cfg.alpha_0 = 1e-10;
  cfg.max_iter = max_iter;
  cfg.grad_tol = tol;
  cfg.record_diagnostics = false;
  const RunTrace t = run_smooth(oracle, x0, cfg);
  if (!t.converged || t.states.empty())
    throw RequiresReference(
        "high_accuracy_reference: run did not reach the gradient tolerance");
  ReferenceSolution r;
  r.x_star = t.states.back().x;
  r.f_star = t.states.back().fval;
  r.source = ReferenceSolution::Source::HighAccuracyRun;
  return r;
}

ReferenceSolution high_accuracy_reference(const CompositeOracle& oracle,
                                          const Vector& x0, int max_iter,
                                          double tol) {
  RunConfig cfg;
  cfg.controller = Controller::baseline(ControllerKind::AdaPGM);
  cfg.alpha_0 = 1e-10;
  cfg.max_iter = max_iter;
  cfg.grad_tol = tol;
  cfg.record_diagnostics = false;
  const RunTrace t = run_composite(oracle, x0, cfg);
  if (!t.converged || t.states.empty())
    throw RequiresReference(
        "high_accuracy_reference: run did not reach the residual tolerance");
  ReferenceSolution r;
  r.x_star = t.states.back().x;
  r.f_star = t.states.back().fval;
  r.source = ReferenceSolution::Source::HighAccuracyRun;
  return r;
}

}  // namespace adabb
