#include "qftn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qftn {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need at least two (x, y) pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 1e-14 * std::max(1.0, mx * mx) * n) throw std::invalid_argument("fit_line: degenerate design");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f.residuals.push_back(y[i] - f.intercept - f.slope * x[i]);
    rss += f.residuals.back() * f.residuals.back();
  }
  const double s2 = n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
  f.se_slope = std::sqrt(s2 / sxx);
  f.se_intercept = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  f.cov = -mx * s2 / sxx;
  return f;
}

ExtrapolationFit extrapolate_gap(const std::vector<std::pair<int, double>>& samples) {
  if (samples.size() < 3) throw std::invalid_argument("extrapolate_gap: need at least three samples");
  std::set<int> ks;
  std::vector<double> x, y;
  for (const auto& [k, v] : samples) {
    if (k <= 0) throw std::invalid_argument("extrapolate_gap: k_max must be positive");
    if (!ks.insert(k).second) throw std::invalid_argument("extrapolate_gap: repeated k_max");
    x.push_back(1.0 / k);
    y.push_back(v);
  }
  const auto line = fit_line(x, y);
  ExtrapolationFit out;
  out.samples = samples;
  out.a = line.intercept;
  out.b = line.slope;
  out.std_error = line.se_intercept;
  out.residuals = line.residuals;
  return out;
}

CriticalMassFit locate_critical_mass(const std::vector<std::pair<double, double>>& curve, double m_lo, double m_hi) {
  std::vector<double> m, g;
  for (const auto& [mi, gi] : curve)
    if (mi >= m_lo - 1e-12 && mi <= m_hi + 1e-12) {
      m.push_back(mi);
      g.push_back(gi);
    }
  if (m.size() < 3) throw std::invalid_argument("locate_critical_mass: fewer than three points in the window");
  CriticalMassFit out;
  out.line = fit_line(m, g);
  out.points_used = static_cast<int>(m.size());
  const auto& l = out.line;
  if (l.slope >= 0.0) {
    out.diagnostic = "fitted gap does not decrease with m; no root";
    return out;
  }
  out.has_root = true;
  out.m_c = -l.intercept / l.slope;
  // delta method on m_c = -a / b
  const double var = (l.se_intercept * l.se_intercept + out.m_c * out.m_c * l.se_slope * l.se_slope +
                      2.0 * out.m_c * l.cov) /
                     (l.slope * l.slope);
  out.error = std::sqrt(std::max(0.0, var));
  return out;
}

CriticalMassEstimate critical_mass_extrapolated(const std::map<int, std::vector<std::pair<double, double>>>& curves,
                                                double m_lo, double m_hi, ExtrapolationOrder order) {
  CriticalMassEstimate out;
  if (order == ExtrapolationOrder::RootThenCutoff) {
    std::vector<std::pair<int, double>> roots;
    for (const auto& [k, curve] : curves) {
      auto fit = locate_critical_mass(curve, m_lo, m_hi);
      if (!fit.has_root) throw std::domain_error("critical mass: no root at k_max = " + std::to_string(k));
      roots.emplace_back(k, fit.m_c);
      out.per_cutoff.emplace(k, std::move(fit));
    }
    out.cutoff_fit = extrapolate_gap(roots);
    out.m_c = out.cutoff_fit.a;
    // fit scatter plus the propagated per-cutoff root errors
    double prop = 0.0;
    for (const auto& [k, f] : out.per_cutoff) prop = std::max(prop, f.error);
    out.error = std::hypot(out.cutoff_fit.std_error, prop);
    return out;
  }
  std::map<double, std::vector<std::pair<int, double>>> by_mass;
  for (const auto& [k, curve] : curves)
    for (const auto& [m, g] : curve) by_mass[m].emplace_back(k, g);
  std::vector<std::pair<double, double>> extrapolated;
  for (const auto& [m, samples] : by_mass) {
    if (samples.size() != curves.size()) throw std::invalid_argument("critical mass: masses differ between cutoffs");
    extrapolated.emplace_back(m, extrapolate_gap(samples).a);
  }
  auto fit = locate_critical_mass(extrapolated, m_lo, m_hi);
  if (!fit.has_root) throw std::domain_error("critical mass: extrapolated gap has no root");
  out.m_c = fit.m_c;
  out.error = fit.error;
  return out;
}

}  // namespace qftn
