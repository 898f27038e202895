#include "qftn/basis_layout.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace qftn {

std::string to_string(ModelKind m) {
  return m == ModelKind::SineGordon ? "sine-gordon" : "schwinger";
}

ModelKind model_from_string(const std::string& s) {
  if (s == "sine-gordon" || s == "sg" || s == "sG") return ModelKind::SineGordon;
  if (s == "schwinger" || s == "ms" || s == "mS") return ModelKind::MassiveSchwinger;
  throw std::invalid_argument("unknown model '" + s + "'");
}

std::map<int, int> occupation_profile(int k_max, int n_max) {
  if (k_max < 1 || n_max < 1) throw std::invalid_argument("occupation_profile: k_max and n_max must be >= 1");
  std::map<int, int> out;
  for (int k = 1; k <= k_max; ++k) {
    out[k] = n_max / k;
    out[-k] = n_max / k;
  }
  return out;
}

GradedSpace mode_space(ModelKind model, int k, int cap) {
  if (k == 0) {
    const int d = model == ModelKind::SineGordon ? 2 * cap + 1 : cap + 1;
    return GradedSpace({{0, d}}, Direction::Out);
  }
  std::vector<Sector> s;
  for (int n = 0; n <= cap; ++n) s.push_back({k * n, 1});
  return GradedSpace(std::move(s), Direction::Out);
}

ModeLayout::ModeLayout(ModelKind model, int k_max, int n_max, int n_zm, double length)
    : model_(model), k_max_(k_max), n_max_(n_max), n_zm_(n_zm < 0 ? n_max : n_zm), length_(length) {
  if (k_max < 1 || n_max < 1) throw std::invalid_argument("ModeLayout: k_max and n_max must be >= 1");
  if (!(length > 0)) throw std::invalid_argument("ModeLayout: length must be positive");
  auto prof = occupation_profile(k_max, n_max);
  caps_.assign(num_sites(), 0);
  for (auto [k, n] : prof) caps_[site_of(k)] = n;
  caps_[zero_site()] = n_zm_;
  rebuild();
}

ModeLayout ModeLayout::with_caps(const std::map<int, int>& caps) const {
  ModeLayout out = *this;
  for (auto [k, n] : caps) {
    if (k == 0 || std::abs(k) > k_max_) continue;
    if (n < 0) throw std::invalid_argument("ModeLayout: negative cap");
    out.caps_[site_of(k)] = n;
  }
  out.rebuild();
  return out;
}

void ModeLayout::rebuild() {
  spaces_.clear();
  for (int s = 0; s < num_sites(); ++s) spaces_.push_back(mode_space(model_, mode(s), caps_[s]));
}

int ModeLayout::local_dim(int site) const { return spaces_[site].dim(); }

Charge ModeLayout::level_charge(int site, int level) const { return mode(site) * level * (site != zero_site()); }

int ModeLayout::dense_position(int site, int level) const {
  if (site == zero_site()) return level;
  const int k = mode(site);
  return k > 0 ? level : caps_[site] - level;
}

int ModeLayout::level_at(int site, int pos) const { return dense_position(site, pos); }

double ModeLayout::total_dim() const {
  double d = 1.0;
  for (const auto& s : spaces_) d *= s.dim();
  return d;
}

std::uint64_t ModeLayout::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(model_));
  mix(static_cast<std::uint64_t>(k_max_));
  mix(static_cast<std::uint64_t>(n_max_));
  mix(static_cast<std::uint64_t>(n_zm_));
  std::uint64_t lb;
  std::memcpy(&lb, &length_, sizeof lb);
  mix(lb);
  for (int c : caps_) mix(static_cast<std::uint64_t>(c));
  return h;
}

}  // namespace qftn
