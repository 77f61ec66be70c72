#include "adabb/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace adabb {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << "k,fval,grad_norm,alpha,theta,lambda,case\n";
  for (const auto& st : trace.states) {
    out << st.k << ',' << format_g17(st.fval) << ',' << format_g17(st.residual)
        << ',' << format_g17(st.alpha_k) << ',' << format_g17(st.theta_k)
        << ',' << format_g17(st.lambda_k) << ',' << case_tag_name(st.case_tag)
        << '\n';
  }
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
  auto out = open_or_throw(path);
  write_trace_csv(trace, out);
}

void write_plot_csv(const RunTrace& trace, double f_star, std::ostream& out) {
  out << "k,fgap,grad_norm,grad_calls,value_calls\n";
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    const auto& st = trace.states[i];
    const double gap = std::max(st.fval - f_star, 1e-17);
    out << st.k << ',' << format_g17(gap) << ',' << format_g17(st.residual)
        << ',' << trace.grad_calls_at[i] << ',' << trace.value_calls_at[i]
        << '\n';
  }
}

void write_plot_csv(const RunTrace& trace, double f_star,
                    const std::string& path) {
  auto out = open_or_throw(path);
  write_plot_csv(trace, f_star, out);
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       std::ostream& out) {
  out << "problem,controller,final_fval,final_gap,iters_to_1e8,"
         "final_residual,iters,grad_calls,value_calls,wall_time_s,"
         "converged,stop_reason\n";
  for (const auto& r : rows) {
    out << r.problem << ',' << r.controller << ',' << format_g17(r.final_fval)
        << ',' << format_g17(r.final_gap) << ',' << r.iters_to_1e8 << ','
        << format_g17(r.final_residual) << ',' << r.iters << ','
        << r.grad_calls << ',' << r.value_calls << ','
        << format_g17(r.wall_time_s) << ',' << (r.converged ? 1 : 0) << ','
        << r.stop_reason << '\n';
  }
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path) {
  auto out = open_or_throw(path);
  write_summary_csv(rows, out);
}

}  // namespace adabb
