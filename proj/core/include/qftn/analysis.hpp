#pragma once

// Least-squares fits used for cutoff extrapolation and the critical mass.

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qftn {

struct LinearFit {
  double intercept = 0.0, slope = 0.0;
  double se_intercept = 0.0, se_slope = 0.0, cov = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = intercept + slope x. Throws std::invalid_argument
/// for fewer than two points or a degenerate design (all x equal).
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ExtrapolationFit {
  std::vector<std::pair<int, double>> samples;  ///< (k_max, value)
  double a = 0.0;  ///< value at k_max -> infinity
  double b = 0.0;  ///< coefficient of 1 / k_max
  double std_error = 0.0;
  std::vector<double> residuals;
};

/// value = a + b / k_max over >= 3 distinct k_max.
ExtrapolationFit extrapolate_gap(const std::vector<std::pair<int, double>>& samples);

struct CriticalMassFit {
  double m_c = 0.0;
  double error = 0.0;
  bool has_root = false;
  std::string diagnostic;
  LinearFit line;
  int points_used = 0;
};

/// Root of the line fitted to the (m, gap) points inside [m_lo, m_hi].
/// A non-negative slope leaves has_root false with a diagnostic. Throws
/// std::invalid_argument when fewer than three points fall in the window.
CriticalMassFit locate_critical_mass(const std::vector<std::pair<double, double>>& curve, double m_lo = 0.1,
                                     double m_hi = 0.25);

enum class ExtrapolationOrder { RootThenCutoff, CutoffThenRoot };

struct CriticalMassEstimate {
  double m_c = 0.0;
  double error = 0.0;
  std::map<int, CriticalMassFit> per_cutoff;  ///< filled for RootThenCutoff
  ExtrapolationFit cutoff_fit;                 ///< RootThenCutoff only
};

/// Combines gap curves at several cutoffs (k_max -> (m, gap) points). The
/// first order locates m_c per cutoff and extrapolates it in 1/k_max; the
/// second extrapolates the gap per mass (masses must be shared) and locates
/// the root of the extrapolated curve.
CriticalMassEstimate critical_mass_extrapolated(const std::map<int, std::vector<std::pair<double, double>>>& curves,
                                                double m_lo, double m_hi, ExtrapolationOrder order);

}  // namespace qftn
