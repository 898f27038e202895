#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace qftn::cli {

namespace {
using T = ValueType;

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument(s);
  return v;
}

long long parse_int(const std::string& s) {
  std::size_t pos = 0;
  long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument(s);
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument(s);
}

}  // namespace

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> s{
      {"model", "kind", "schwinger", T::Text, "sine-gordon | schwinger"},
      {"model", "delta", "0.25", T::Real, "sG scaling dimension, beta^2 = 8 pi delta"},
      {"model", "soliton_mass", "1", T::Real, "sG soliton mass M_s"},
      {"model", "charge", "1", T::Real, "mS coupling e"},
      {"model", "mass", "0.1", T::Real, "mS fermion mass m"},
      {"model", "theta", "3.141592653589793", T::Real, "mS background angle"},
      {"layout", "k_max", "4", T::Int, "momentum cutoff"},
      {"layout", "n_max", "auto", T::Int, "occupation of the |k| = 1 modes (auto: k_max)"},
      {"layout", "n_zm", "auto", T::Int, "zero-mode cutoff (auto: n_max)"},
      {"layout", "length", "auto", T::Real, "system size L (auto: 15 sG, 100 mS)"},
      {"solver", "sector", "0", T::Int, "total momentum sector"},
      {"solver", "eps", "1e-6", T::Real, "DMRG truncation error"},
      {"solver", "chi_max", "2500", T::Int, "DMRG bond dimension limit"},
      {"solver", "max_sweeps", "40", T::Int, "DMRG sweep limit"},
      {"solver", "min_sweeps", "2", T::Int, "DMRG minimum sweeps"},
      {"solver", "energy_tol", "auto", T::Real, "sweep energy tolerance (auto: 1e-9 sG, 1e-8 mS)"},
      {"solver", "lanczos_tol", "1e-10", T::Real, "local eigensolver tolerance"},
      {"solver", "lanczos_max_iter", "200", T::Int, "local eigensolver matvec limit"},
      {"solver", "variance", "true", T::Bool, "evaluate the final energy variance"},
      {"tdvp", "dt", "0.02", T::Real, "time step"},
      {"tdvp", "t_total", "5", T::Real, "evolution time"},
      {"tdvp", "eps", "1e-4", T::Real, "TDVP truncation error"},
      {"tdvp", "chi_max", "2500", T::Int, "TDVP bond dimension limit"},
      {"tdvp", "krylov_count", "2", T::Int, "global Krylov vectors per expansion"},
      {"tdvp", "eps_k", "1e-8", T::Real, "Krylov vector compression"},
      {"tdvp", "eps_m", "1e-10", T::Real, "expansion cutoff"},
      {"tdvp", "krylov_chi", "3000", T::Int, "Krylov bond dimension limit"},
      {"tdvp", "expand_every_step", "true", T::Bool, "false: expand once before the first step"},
      {"tdvp", "pre_mass", "0", T::Real, "pre-quench fermion mass m0 (mS)"},
      {"tdvp", "pre_delta", "auto", T::Real, "pre-quench sG delta (auto: model.delta)"},
      {"tdvp", "pre_soliton_mass", "0", T::Real, "pre-quench sG soliton mass"},
      {"tdvp", "rdm_modes", "", T::IntList, "modes whose RDM is stored"},
      {"tdvp", "rdm_times", "", T::RealList, "times of the RDM snapshots"},
      {"sweep", "parameter", "mass", T::Text, "mass | theta | delta | soliton_mass | length"},
      {"sweep", "values", "0.1, 0.2, 0.3", T::RealList, "parameter values"},
      {"sweep", "quantity", "gap", T::Text, "gap | ground"},
      {"extrapolate", "k_values", "3, 4, 5, 6", T::IntList, "cutoffs sharing one occupation profile"},
      {"critical", "k_values", "2, 3, 4", T::IntList, "cutoffs of the gap curves"},
      {"critical", "masses", "0.1, 0.125, 0.15, 0.175, 0.2, 0.225, 0.25", T::RealList, "fermion masses"},
      {"critical", "m_lo", "0.1", T::Real, "fit window start"},
      {"critical", "m_hi", "0.25", T::Real, "fit window end"},
      {"critical", "order", "root-first", T::Text, "root-first | cutoff-first"},
      {"wigner", "mode", "0", T::Int, "mode number k"},
      {"wigner", "state", "ground", T::Text, "ground | excited"},
      {"wigner", "phi_min", "-4", T::Real, ""},
      {"wigner", "phi_max", "4", T::Real, ""},
      {"wigner", "pi_min", "-4", T::Real, ""},
      {"wigner", "pi_max", "4", T::Real, ""},
      {"wigner", "phi_points", "101", T::Int, ""},
      {"wigner", "pi_points", "101", T::Int, ""},
      {"wigner", "samples", "128", T::Int, "characteristic-function samples per axis"},
      {"fcs", "s_points", "257", T::Int, "odd number of s samples"},
      {"fcs", "x_min", "-3", T::Real, ""},
      {"fcs", "x_max", "3", T::Real, ""},
      {"fcs", "x_points", "241", T::Int, ""},
      {"output", "dir", "qftn_out", T::Text, "output directory"},
      {"output", "checkpoint", "true", T::Bool, "store final MPS checkpoints"},
      {"run", "seed", "1", T::Int, "64-bit seed of every random choice"},
      {"run", "threads", "1", T::Int, "workers for independent runs"},
  };
  return s;
}

RunConfig::RunConfig() {
  for (const auto& k : schema()) values_[std::string(k.section) + "." + k.key] = k.fallback;
}

const KeySpec& RunConfig::spec(const std::string& dotted) const {
  for (const auto& k : schema())
    if (dotted == std::string(k.section) + "." + k.key) return k;
  throw ConfigError("unknown configuration key '" + dotted + "'");
}

void RunConfig::validate(const KeySpec& s, const std::string& v) const {
  if (v.empty() || v == "auto") {
    if (v == "auto" && std::string(s.fallback) != "auto")
      throw ConfigError(std::string(s.section) + "." + s.key + " does not accept 'auto'");
    return;
  }
  try {
    switch (s.type) {
      case T::Real: parse_real(v); break;
      case T::Int: parse_int(v); break;
      case T::Bool: parse_bool(v); break;
      case T::Text: break;
      case T::RealList:
        for (const auto& x : split_list(v)) parse_real(x);
        break;
      case T::IntList:
        for (const auto& x : split_list(v)) parse_int(x);
        break;
    }
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + v + "' for " + s.section + "." + s.key);
  }
}

void RunConfig::set(const std::string& dotted, const std::string& value) {
  const auto& s = spec(dotted);
  const std::string v = trim(value);
  validate(s, v);
  values_[dotted] = v;
}

void RunConfig::load_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, leaf] : body) set(section + "." + key, leaf.data());
  }
}

void RunConfig::load_env() {
  for (const auto& k : schema()) {
    std::string name = std::string("QFTN_") + k.section + "_" + k.key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    if (const char* v = std::getenv(name.c_str())) set(std::string(k.section) + "." + k.key, v);
  }
}

bool RunConfig::is_set(const std::string& dotted) const {
  const auto& v = values_.at(spec(dotted).section + std::string(".") + spec(dotted).key);
  return !v.empty() && v != "auto";
}

double RunConfig::real(const std::string& d) const {
  if (!is_set(d)) throw ConfigError(d + " is not set");
  return parse_real(values_.at(d));
}
int RunConfig::integer(const std::string& d) const {
  if (!is_set(d)) throw ConfigError(d + " is not set");
  return static_cast<int>(parse_int(values_.at(d)));
}
std::uint64_t RunConfig::uint64(const std::string& d) const {
  if (!is_set(d)) throw ConfigError(d + " is not set");
  return static_cast<std::uint64_t>(parse_int(values_.at(d)));
}
bool RunConfig::flag(const std::string& d) const {
  if (!is_set(d)) throw ConfigError(d + " is not set");
  return parse_bool(values_.at(d));
}
std::string RunConfig::text(const std::string& d) const {
  spec(d);
  return values_.at(d);
}
std::vector<double> RunConfig::reals(const std::string& d) const {
  spec(d);
  std::vector<double> out;
  for (const auto& x : split_list(values_.at(d))) out.push_back(parse_real(x));
  return out;
}
std::vector<int> RunConfig::integers(const std::string& d) const {
  spec(d);
  std::vector<int> out;
  for (const auto& x : split_list(values_.at(d))) out.push_back(static_cast<int>(parse_int(x)));
  return out;
}

std::string RunConfig::canonical(bool provenance_only) const {
  std::string out, section;
  for (const auto& k : schema()) {
    // where and how fast a run executes does not change its results
    if (provenance_only && (std::string(k.section) == "output" || std::string(k.key) == "threads")) continue;
    if (section != k.section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += std::string(k.key) + " = " + values_.at(section + "." + k.key) + "\n";
  }
  return out;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical(true)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qftn::cli
