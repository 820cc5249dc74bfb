#include "boltzlp/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace boltzlp {

std::string format_double(double value) {
  // JSON has no Inf/NaN literals; clamp to sentinels that round-trip
  if (std::isnan(value)) return "null";
  if (std::isinf(value)) return value > 0 ? "1e308" : "-1e308";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

void append_convergence(std::ostringstream& out, const char* key,
                        const ConvergenceReport& conv) {
  out << '"' << key << "\":{"
      << "\"levels\":[" << format_double(conv.fine) << ','
      << format_double(conv.mid) << ',' << format_double(conv.coarse) << "],"
      << "\"rate\":" << format_double(conv.rate) << ','
      << "\"truncation\":" << format_double(conv.truncation) << ','
      << "\"error_estimate\":" << format_double(conv.error_estimate) << ','
      << "\"converged\":" << (conv.converged ? "true" : "false") << '}';
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string reports_to_json(const std::vector<InequalityReport>& reports) {
  std::ostringstream out;
  out << "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const InequalityReport& r = reports[i];
    out << "{\"name\":\"" << escape(r.name) << "\","
        << "\"member\":" << r.member << ','
        << "\"lhs\":" << format_double(r.lhs) << ','
        << "\"rhs\":" << format_double(r.rhs) << ','
        << "\"margin\":" << format_double(r.margin) << ','
        << "\"tol_margin\":" << format_double(r.tol_margin) << ','
        << "\"pass\":" << (r.pass ? "true" : "false") << ','
        << "\"seed\":" << r.seed << ','
        << "\"constants\":{";
    for (std::size_t k = 0; k < r.constants.size(); ++k) {
      out << '"' << escape(r.constants[k].first)
          << "\":" << format_double(r.constants[k].second);
      if (k + 1 < r.constants.size()) out << ',';
    }
    out << "},";
    append_convergence(out, "lhs_convergence", r.lhs_convergence);
    out << ',';
    append_convergence(out, "rhs_convergence", r.rhs_convergence);
    out << '}';
    if (i + 1 < reports.size()) out << ',';
    out << '\n';
  }
  out << "]\n";
  return out.str();
}

}  // namespace boltzlp
