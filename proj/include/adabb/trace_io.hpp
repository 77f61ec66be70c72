#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "adabb/types.hpp"

namespace adabb {

// One row per iterate: k,fval,grad_norm,alpha,theta,lambda,case with numbers
// printed to 17 significant digits (round-trip exact).  grad_norm is the
// stopping residual (||grad f|| smooth, prox-gradient residual composite).
void write_trace_csv(const RunTrace& trace, std::ostream& out);
void write_trace_csv(const RunTrace& trace, const std::string& path);

// Plot-ready columns: k, fgap (f - f_star clipped below at 1e-17),
// grad_norm, grad_calls, value_calls.
void write_plot_csv(const RunTrace& trace, double f_star, std::ostream& out);
void write_plot_csv(const RunTrace& trace, double f_star,
                    const std::string& path);

struct SummaryRow {
  std::string problem;
  std::string controller;
  double final_fval = 0.0;
  double final_gap = 0.0;       // final f - f_star (batch-min convention)
  std::int64_t iters_to_1e8 = -1;  // first k with f - f_star <= 1e-8
  double final_residual = 0.0;
  std::int64_t iters = 0;
  std::int64_t grad_calls = 0;
  std::int64_t value_calls = 0;
  double wall_time_s = 0.0;
  bool converged = false;
  std::string stop_reason;
};

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);
void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path);

// 17-significant-digit formatting used across all CSV output.
std::string format_g17(double v);

}  // namespace adabb
