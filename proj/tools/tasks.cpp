#include "tasks.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <thread>

#include "qftn/analysis.hpp"
#include "qftn/dmrg.hpp"
#include "qftn/hamiltonian.hpp"
#include "qftn/mps.hpp"
#include "qftn/observables.hpp"
#include "qftn/tdvp.hpp"

namespace qftn::cli {

namespace {

using nlohmann::json;

struct Problem {
  ModeLayout layout;
  ModelParams params;
  DmrgSettings dmrg;
  Charge sector = 0;
};

ModelKind kind_of(const RunConfig& c) {
  try {
    return model_from_string(c.text("model.kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ModelParams params_of(const RunConfig& c) {
  ModelParams p;
  p.sg.delta = c.real("model.delta");
  p.sg.soliton_mass = c.real("model.soliton_mass");
  p.ms.charge_e = c.real("model.charge");
  p.ms.mass = c.real("model.mass");
  p.ms.theta = c.real("model.theta");
  if (!(p.sg.delta > 0.0 && p.sg.delta < 1.0)) throw ConfigError("model.delta must lie in (0, 1)");
  if (p.sg.soliton_mass < 0.0) throw ConfigError("model.soliton_mass must be >= 0");
  if (!(p.ms.charge_e > 0.0)) throw ConfigError("model.charge must be positive");
  if (p.ms.mass < 0.0) throw ConfigError("model.mass must be >= 0");
  return p;
}

double length_of(const RunConfig& c, ModelKind kind) {
  if (c.is_set("layout.length")) return c.real("layout.length");
  return kind == ModelKind::SineGordon ? 15.0 : 100.0;
}

// n_max_fallback replaces an unset layout.n_max (multi-cutoff tasks keep one profile)
ModeLayout layout_of(const RunConfig& c, ModelKind kind, int k_max, int n_max_fallback, double length) {
  const int n_max = c.is_set("layout.n_max") ? c.integer("layout.n_max") : n_max_fallback;
  const int n_zm = c.is_set("layout.n_zm") ? c.integer("layout.n_zm") : -1;
  if (k_max < 1 || n_max < 1) throw ConfigError("layout.k_max and layout.n_max must be >= 1");
  if (!(length > 0.0)) throw ConfigError("layout.length must be positive");
  try {
    return ModeLayout(kind, k_max, n_max, n_zm, length);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

DmrgSettings dmrg_of(const RunConfig& c, ModelKind kind) {
  DmrgSettings s;
  s.policy = {c.real("solver.eps"), c.integer("solver.chi_max")};
  s.max_sweeps = c.integer("solver.max_sweeps");
  s.min_sweeps = c.integer("solver.min_sweeps");
  s.energy_tol = c.is_set("solver.energy_tol") ? c.real("solver.energy_tol") : default_energy_tol(kind);
  s.solver.tol = c.real("solver.lanczos_tol");
  s.solver.max_iter = c.integer("solver.lanczos_max_iter");
  s.compute_variance = c.flag("solver.variance");
  if (s.policy.chi_max < 1 || s.max_sweeps < 1 || s.min_sweeps < 1) throw ConfigError("solver limits must be >= 1");
  return s;
}

Problem problem_of(const RunConfig& c) {
  Problem p;
  const auto kind = kind_of(c);
  const int k_max = c.integer("layout.k_max");
  p.layout = layout_of(c, kind, k_max, k_max, length_of(c, kind));
  p.params = params_of(c);
  p.dmrg = dmrg_of(c, kind);
  p.sector = c.integer("solver.sector");
  return p;
}

// one independent stream per run index, identical for any thread count
std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int t = std::max(1, std::min(threads, n));
  std::vector<std::thread> pool;
  for (int i = 1; i < t; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Spectrum {
  double e0 = 0.0, e1 = 0.0;
  double var0 = -1.0, var1 = -1.0;
  bool converged0 = false, converged1 = true;
  int sweeps0 = 0, sweeps1 = 0;
  int chi0 = 0, chi1 = 0;
  MpsState ground, excited;
  bool has_excited = false;
  double gap() const { return e1 - e0; }
  bool converged() const { return converged0 && converged1; }
};

Spectrum solve(const Problem& p, bool want_excited, std::mt19937_64& rng, OutputDir& out, const std::string& run) {
  const auto h = assemble_hamiltonian(p.layout, p.params);
  auto settings = p.dmrg;
  auto hook = [&](const char* state) {
    return [&out, run, state](const SweepRecord& r) {
      out.progress({{"event", "sweep"}, {"run", run}, {"state", state}, {"sweep", r.sweep}, {"energy", r.energy},
                    {"max_bond", r.max_bond}, {"discarded", r.discarded}, {"seconds", r.seconds}});
    };
  };
  Spectrum s;
  settings.on_sweep = hook("ground");
  auto g = ground_state(h, initial_state(h, p.layout, p.params, p.sector, rng), settings);
  s.e0 = g.energy;
  s.var0 = g.report.variance;
  s.converged0 = g.report.converged;
  s.sweeps0 = g.report.sweeps;
  s.chi0 = g.state.max_bond_dim();
  s.ground = std::move(g.state);
  if (want_excited) {
    settings.on_sweep = hook("excited");
    auto x = excited_state(h, {s.ground}, initial_state(h, p.layout, p.params, p.sector, rng), settings);
    s.e1 = x.energy;
    s.var1 = x.report.variance;
    s.converged1 = x.report.converged;
    s.sweeps1 = x.report.sweeps;
    s.chi1 = x.state.max_bond_dim();
    s.excited = std::move(x.state);
    s.has_excited = true;
  }
  return s;
}

void checkpoint(const RunConfig& c, OutputDir& out, const std::string& rel, const MpsState& psi) {
  if (!c.flag("output.checkpoint")) return;
  save_checkpoint(psi, out.tmp_path(rel).string());
  out.commit(rel);
}

const std::vector<std::string> kSpectrumHeader{"e0", "e1", "gap", "variance0", "variance1", "converged",
                                              "sweeps0",  "sweeps1", "max_bond0", "max_bond1"};

std::vector<double> spectrum_row(const Spectrum& s) {
  return {s.e0, s.e1, s.gap(), s.var0, s.var1, s.converged() ? 1.0 : 0.0, double(s.sweeps0), double(s.sweeps1),
          double(s.chi0), double(s.chi1)};
}

int status_of(bool converged) { return converged ? kExitOk : kExitNotConverged; }

// ground / gap
int task_spectrum(const RunConfig& c, OutputDir& out, json& summary, bool gap) {
  const auto p = problem_of(c);
  auto rng = rng_for(c.uint64("run.seed"), 0);
  const auto s = solve(p, gap, rng, out, gap ? "gap" : "ground");
  if (gap) {
    Csv csv(kSpectrumHeader);
    csv.row(spectrum_row(s));
    out.write_csv("gap.csv", csv);
    summary = {{"e0", s.e0}, {"e1", s.e1}, {"gap", s.gap()}, {"converged", s.converged()}};
  } else {
    Csv csv({"energy", "variance", "converged", "sweeps", "max_bond"});
    csv.row({s.e0, s.var0, s.converged0 ? 1.0 : 0.0, double(s.sweeps0), double(s.chi0)});
    out.write_csv("ground.csv", csv);
    summary = {{"energy", s.e0}, {"variance", s.var0}, {"converged", s.converged0}};
  }
  Csv bonds({"bond", "dim"});
  const auto dims = s.ground.bond_dims();
  for (std::size_t b = 0; b < dims.size(); ++b) bonds.row({double(b), double(dims[b])});
  out.write_csv("bonds.csv", bonds);
  checkpoint(c, out, "ground.mps", s.ground);
  if (s.has_excited) checkpoint(c, out, "excited.mps", s.excited);
  return status_of(s.converged());
}

// parameter scan, one isolated run per value
int task_sweep(const RunConfig& c, OutputDir& out, json& summary) {
  const auto name = c.text("sweep.parameter");
  const auto values = c.reals("sweep.values");
  const auto quantity = c.text("sweep.quantity");
  if (values.empty()) throw ConfigError("sweep.values is empty");
  if (quantity != "gap" && quantity != "ground") throw ConfigError("sweep.quantity must be gap or ground");
  static const std::map<std::string, std::string> keys{{"mass", "model.mass"},
                                                       {"theta", "model.theta"},
                                                       {"delta", "model.delta"},
                                                       {"soliton_mass", "model.soliton_mass"},
                                                       {"charge", "model.charge"},
                                                       {"length", "layout.length"}};
  const auto key = keys.find(name);
  if (key == keys.end()) throw ConfigError("unknown sweep.parameter '" + name + "'");
  std::vector<Problem> problems;
  for (double v : values) {
    RunConfig run = c;
    run.set(key->second, fmt(v));
    problems.push_back(problem_of(run));
  }

  const int n = static_cast<int>(values.size());
  std::vector<Spectrum> results(n);
  std::vector<char> done(n, 0);
  std::exception_ptr failure;
  try {
    parallel_for(n, c.integer("run.threads"), [&](int i) {
      auto rng = rng_for(c.uint64("run.seed"), static_cast<std::uint64_t>(i));
      const std::string label = "run" + std::to_string(i);
      results[i] = solve(problems[i], quantity == "gap", rng, out, label);
      Csv one(kSpectrumHeader);
      one.row(spectrum_row(results[i]));
      out.write_csv("runs/" + label + "/result.csv", one);
      checkpoint(c, out, "runs/" + label + "/ground.mps", results[i].ground);
      done[i] = 1;
    });
  } catch (...) {
    failure = std::current_exception();
  }

  auto header = kSpectrumHeader;
  header.insert(header.begin(), name);
  Csv csv(header);
  bool converged = true;
  for (int i = 0; i < n; ++i) {
    if (!done[i]) continue;
    auto row = spectrum_row(results[i]);
    row.insert(row.begin(), values[i]);
    csv.row(row);
    converged = converged && results[i].converged();
  }
  out.write_csv("sweep.csv", csv);
  summary = {{"runs", n}, {"completed", csv.size()}, {"converged", converged}};
  if (failure) std::rethrow_exception(failure);
  return status_of(converged);
}

int task_quench(const RunConfig& c, OutputDir& out, json& summary) {
  const auto p = problem_of(c);
  ModelParams pre = p.params;
  pre.ms.mass = c.real("tdvp.pre_mass");
  pre.sg.delta = c.is_set("tdvp.pre_delta") ? c.real("tdvp.pre_delta") : p.params.sg.delta;
  pre.sg.soliton_mass = c.real("tdvp.pre_soliton_mass");
  if (p.sector != 0) throw ConfigError("quench runs in sector 0");

  TdvpSettings s;
  s.dt = c.real("tdvp.dt");
  s.policy = {c.real("tdvp.eps"), c.integer("tdvp.chi_max")};
  s.krylov_count = c.integer("tdvp.krylov_count");
  s.eps_k = c.real("tdvp.eps_k");
  s.eps_m = c.real("tdvp.eps_m");
  s.krylov_chi = c.integer("tdvp.krylov_chi");
  s.expand_every_step = c.flag("tdvp.expand_every_step");
  if (!(s.dt > 0.0)) throw ConfigError("tdvp.dt must be positive");
  const double t_total = c.real("tdvp.t_total");
  if (t_total < 0.0) throw ConfigError("tdvp.t_total must be >= 0");

  QuenchObservables obs;
  obs.rdm_modes = c.integers("tdvp.rdm_modes");
  obs.rdm_times = c.reals("tdvp.rdm_times");
  for (int k : obs.rdm_modes)
    if (std::abs(k) > p.layout.k_max()) throw ConfigError("tdvp.rdm_modes outside the layout");

  auto rng = rng_for(c.uint64("run.seed"), 0);
  const auto psi0 = pre_quench_state(p.layout, pre, p.dmrg, rng);

  const int bonds = p.layout.num_sites() - 1;
  Csv traj({"t", "energy", "cos_re", "cos_im", "norm", "max_chi", "discarded"});
  std::vector<std::string> eh{"t"};
  for (int b = 1; b <= bonds; ++b) eh.push_back("S" + std::to_string(b));
  Csv ent(eh);
  auto on_sample = [&](const QuenchSample& q) {
    traj.row({q.t, q.energy, q.cos_value.real(), q.cos_value.imag(), q.norm, double(q.max_chi), q.discarded});
    if (!q.entropies.empty()) {
      std::vector<double> row{q.t};
      row.insert(row.end(), q.entropies.begin(), q.entropies.end());
      ent.row(row);
    }
    out.progress({{"event", "step"}, {"t", q.t}, {"energy", q.energy}, {"cos", q.cos_value.real()},
                  {"max_chi", q.max_chi}});
  };
  auto flush = [&] {
    out.write_csv("quench.csv", traj);
    out.write_csv("entropies.csv", ent);
  };
  QuenchTrajectory result;
  try {
    result = quench_run(p.layout, p.params, psi0, t_total, s, obs, on_sample);
  } catch (const std::runtime_error&) {
    flush();  // partial trajectory
    throw;
  }
  flush();
  for (const auto& r : result.rdms) {
    Csv rho({"row", "col", "re", "im"});
    for (int i = 0; i < r.rho.rows(); ++i)
      for (int j = 0; j < r.rho.cols(); ++j) rho.row({double(i), double(j), r.rho(i, j).real(), r.rho(i, j).imag()});
    out.write_csv("rdm/mode" + std::to_string(r.mode) + "_t" + fmt(r.t) + ".csv", rho);
  }
  checkpoint(c, out, "final.mps", result.final_state);
  const auto& first = result.samples.front();
  const auto& last = result.samples.back();
  summary = {{"steps", result.samples.size() - 1},
             {"energy_drift", std::abs(last.energy - first.energy) / std::max(1.0, std::abs(first.energy))},
             {"norm_drift", std::abs(last.norm - first.norm)},
             {"max_chi", last.max_chi}};
  return kExitOk;
}

int task_wigner(const RunConfig& c, OutputDir& out, json& summary) {
  const auto p = problem_of(c);
  const int k = c.integer("wigner.mode");
  const auto which = c.text("wigner.state");
  if (which != "ground" && which != "excited") throw ConfigError("wigner.state must be ground or excited");
  if (std::abs(k) > p.layout.k_max()) throw ConfigError("wigner.mode outside the layout");
  GridSpec g;
  g.phi_min = c.real("wigner.phi_min");
  g.phi_max = c.real("wigner.phi_max");
  g.pi_min = c.real("wigner.pi_min");
  g.pi_max = c.real("wigner.pi_max");
  g.phi_points = c.integer("wigner.phi_points");
  g.pi_points = c.integer("wigner.pi_points");
  g.samples = c.integer("wigner.samples");
  double omega = 0.0;
  try {
    omega = mode_frequency(p.layout, k, p.params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  auto rng = rng_for(c.uint64("run.seed"), 0);
  const auto s = solve(p, which == "excited", rng, out, "wigner");
  const auto& psi = which == "excited" ? s.excited : s.ground;
  const auto rho = single_mode_rdm(psi, k);
  WignerGrid w;
  try {
    w = wigner_single_mode(rho, omega, g);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }

  Csv rc({"row", "col", "re", "im"});
  for (int i = 0; i < rho.rows(); ++i)
    for (int j = 0; j < rho.cols(); ++j) rc.row({double(i), double(j), rho(i, j).real(), rho(i, j).imag()});
  out.write_csv("rdm.csv", rc);
  Csv wc({"phi", "pi", "w"});
  double total = 0.0, lowest = w.values.minCoeff();
  const double dphi = w.phi.size() > 1 ? w.phi[1] - w.phi[0] : 0.0;
  const double dpi = w.pi.size() > 1 ? w.pi[1] - w.pi[0] : 0.0;
  for (std::size_t i = 0; i < w.phi.size(); ++i)
    for (std::size_t j = 0; j < w.pi.size(); ++j) {
      wc.row({w.phi[i], w.pi[j], w.values(i, j)});
      total += w.values(i, j) * dphi * dpi;
    }
  out.write_csv("wigner.csv", wc);
  checkpoint(c, out, which + ".mps", psi);
  summary = {{"omega", omega}, {"integral", total}, {"min", lowest}, {"converged", s.converged()}};
  return status_of(s.converged());
}

int task_fcs(const RunConfig& c, OutputDir& out, json& summary) {
  const auto p = problem_of(c);
  if (p.layout.model() != ModelKind::MassiveSchwinger) throw ConfigError("fcs is available for the Schwinger model");
  if (p.sector != 0) throw ConfigError("fcs needs sector 0");
  FcsSpec f;
  f.s_points = c.integer("fcs.s_points");
  f.x_min = c.real("fcs.x_min");
  f.x_max = c.real("fcs.x_max");
  f.x_points = c.integer("fcs.x_points");
  auto rng = rng_for(c.uint64("run.seed"), 0);
  const auto s = solve(p, false, rng, out, "fcs");
  FcsResult r;
  try {
    r = fcs_field(s.ground, p.params, f);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Csv chi({"s", "re", "im"});
  for (std::size_t i = 0; i < r.s.size(); ++i) chi.row({r.s[i], r.chi[i].real(), r.chi[i].imag()});
  out.write_csv("fcs_chi.csv", chi);
  Csv dist({"phi", "p"});
  for (std::size_t i = 0; i < r.x.size(); ++i) dist.row({r.x[i], r.p[i]});
  out.write_csv("fcs_p.csv", dist);
  checkpoint(c, out, "ground.mps", s.ground);
  summary = {{"sigma2_free", r.sigma2_free}, {"mean", r.mean}, {"converged", s.converged()}};
  return status_of(s.converged());
}

// gaps at several cutoffs that share one occupation profile
std::vector<Spectrum> gaps_over_cutoffs(const RunConfig& c, OutputDir& out, const std::vector<int>& ks,
                                        const std::vector<ModelParams>& params, std::vector<std::string> labels) {
  const auto kind = kind_of(c);
  const int profile = *std::max_element(ks.begin(), ks.end());
  const double length = length_of(c, kind);
  const auto base = dmrg_of(c, kind);
  const int n = static_cast<int>(ks.size());
  std::vector<Problem> problems(n);
  for (int i = 0; i < n; ++i) {
    problems[i].layout = layout_of(c, kind, ks[i], profile, length);
    problems[i].params = params[i];
    problems[i].dmrg = base;
    problems[i].sector = c.integer("solver.sector");
  }
  std::vector<Spectrum> res(n);
  parallel_for(n, c.integer("run.threads"), [&](int i) {
    auto rng = rng_for(c.uint64("run.seed"), static_cast<std::uint64_t>(i));
    res[i] = solve(problems[i], true, rng, out, labels[i]);
    Csv one(kSpectrumHeader);
    one.row(spectrum_row(res[i]));
    out.write_csv("runs/" + labels[i] + "/result.csv", one);
  });
  return res;
}

int task_extrapolate(const RunConfig& c, OutputDir& out, json& summary) {
  const auto ks = c.integers("extrapolate.k_values");
  if (ks.size() < 3) throw ConfigError("extrapolate.k_values needs at least three cutoffs");
  for (int k : ks)
    if (k < 1) throw ConfigError("extrapolate.k_values must be positive");
  const auto params = params_of(c);
  std::vector<std::string> labels;
  for (int k : ks) labels.push_back("k" + std::to_string(k));
  const auto res = gaps_over_cutoffs(c, out, ks, std::vector<ModelParams>(ks.size(), params), labels);
  std::vector<std::pair<int, double>> samples;
  bool converged = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    samples.emplace_back(ks[i], res[i].gap());
    converged = converged && res[i].converged();
  }
  ExtrapolationFit fit;
  try {
    fit = extrapolate_gap(samples);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Csv sc({"k_max", "inv_k", "e0", "e1", "gap", "residual", "converged"});
  for (std::size_t i = 0; i < ks.size(); ++i)
    sc.row({double(ks[i]), 1.0 / ks[i], res[i].e0, res[i].e1, res[i].gap(), fit.residuals[i],
            res[i].converged() ? 1.0 : 0.0});
  out.write_csv("extrapolation.csv", sc);
  Csv fc({"a", "b", "std_error"});
  fc.row({fit.a, fit.b, fit.std_error});
  out.write_csv("fit.csv", fc);
  summary = {{"gap_extrapolated", fit.a}, {"slope", fit.b}, {"std_error", fit.std_error}, {"converged", converged}};
  return status_of(converged);
}

int task_critical(const RunConfig& c, OutputDir& out, json& summary) {
  if (kind_of(c) != ModelKind::MassiveSchwinger) throw ConfigError("critical-mass needs the Schwinger model");
  const auto ks = c.integers("critical.k_values");
  const auto masses = c.reals("critical.masses");
  const double lo = c.real("critical.m_lo"), hi = c.real("critical.m_hi");
  const auto order_name = c.text("critical.order");
  if (order_name != "root-first" && order_name != "cutoff-first")
    throw ConfigError("critical.order must be root-first or cutoff-first");
  if (ks.size() < 3) throw ConfigError("critical.k_values needs at least three cutoffs");
  if (masses.size() < 3 || !(lo < hi)) throw ConfigError("critical.masses/window need three points and m_lo < m_hi");

  std::vector<int> run_k;
  std::vector<ModelParams> run_p;
  std::vector<std::string> labels;
  const auto base = params_of(c);
  for (int k : ks)
    for (std::size_t j = 0; j < masses.size(); ++j) {
      run_k.push_back(k);
      run_p.push_back(base);
      run_p.back().ms.mass = masses[j];
      labels.push_back("k" + std::to_string(k) + "_m" + std::to_string(j));
    }
  const auto res = gaps_over_cutoffs(c, out, run_k, run_p, labels);

  std::map<int, std::vector<std::pair<double, double>>> curves;
  Csv gc({"k_max", "mass", "e0", "e1", "gap", "converged"});
  bool converged = true;
  for (std::size_t i = 0; i < res.size(); ++i) {
    curves[run_k[i]].emplace_back(run_p[i].ms.mass, res[i].gap());
    gc.row({double(run_k[i]), run_p[i].ms.mass, res[i].e0, res[i].e1, res[i].gap(), res[i].converged() ? 1.0 : 0.0});
    converged = converged && res[i].converged();
  }
  out.write_csv("gaps.csv", gc);

  Csv rc({"k_max", "has_root", "m_c", "error", "slope", "intercept", "points_used"});
  for (const auto& [k, curve] : curves) {
    const auto f = locate_critical_mass(curve, lo, hi);
    rc.row({double(k), f.has_root ? 1.0 : 0.0, f.m_c, f.error, f.line.slope, f.line.intercept, double(f.points_used)});
  }
  out.write_csv("roots.csv", rc);

  Csv cc({"order", "m_c", "error"});
  json estimates = json::object();
  for (auto [name, order] : {std::pair{"root-first", ExtrapolationOrder::RootThenCutoff},
                             std::pair{"cutoff-first", ExtrapolationOrder::CutoffThenRoot}}) {
    try {
      const auto e = critical_mass_extrapolated(curves, lo, hi, order);
      cc.text_row({name, fmt(e.m_c), fmt(e.error)});
      estimates[name] = {{"m_c", e.m_c}, {"error", e.error}};
    } catch (const std::domain_error& e) {
      estimates[name] = {{"diagnostic", e.what()}};
    }
  }
  out.write_csv("critical.csv", cc);
  summary = {{"order", order_name}, {"estimates", estimates}, {"selected", estimates[order_name]},
             {"converged", converged}};
  return status_of(converged);
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> n{"ground", "gap", "sweep", "quench", "wigner", "fcs", "extrapolate",
                                          "critical-mass"};
  return n;
}

int run_task(const std::string& task, const RunConfig& cfg, OutputDir& out, json& summary) {
  if (cfg.integer("run.threads") < 1) throw ConfigError("run.threads must be >= 1");
  if (task == "ground") return task_spectrum(cfg, out, summary, false);
  if (task == "gap") return task_spectrum(cfg, out, summary, true);
  if (task == "sweep") return task_sweep(cfg, out, summary);
  if (task == "quench") return task_quench(cfg, out, summary);
  if (task == "wigner") return task_wigner(cfg, out, summary);
  if (task == "fcs") return task_fcs(cfg, out, summary);
  if (task == "extrapolate") return task_extrapolate(cfg, out, summary);
  if (task == "critical-mass") return task_critical(cfg, out, summary);
  throw ConfigError("unknown task '" + task + "'");
}

}  // namespace qftn::cli
