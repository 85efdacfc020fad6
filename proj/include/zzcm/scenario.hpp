#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zzcm/cumulant.hpp"
#include "zzcm/frame.hpp"
#include "zzcm/lattice.hpp"
#include "zzcm/operator_core.hpp"
#include "zzcm/propagator.hpp"
#include "zzcm/pulse.hpp"

namespace zzcm {

enum class ScenarioKind {
  IsolatedHalfX,        // s1: σˣ/2 on one qubit, 4 spectators
  IsolatedX,            // s1b: σˣ on one qubit, 4 spectators
  ParallelNextNearest,  // s2: σˣ⊗σʸ on diagonal neighbours
  ParallelNearest,      // s2nn: σˣ⊗σʸ on adjacent qubits
  SwapWithSingles,      // s3: SWAP ⊗ σˣ ⊗ σʸ ⊗ I, two steps
  ParallelSwap,         // s4: SWAP ⊗ SWAP, two steps
};

enum class Scheme { Zzcm, Dynamical };

/// How the drive amplitude is fixed for single-qubit scenarios.
enum class AmplitudeMode {
  Uncapped,  // Ω₀ fixed; the modulated peak grows with k
  Capped,    // peak of the modulated drive fixed at Ω_m; Ω₀ = Ω_m / M(k, γ)
};

/// Spectator single-qubit drives of the SWAP ⊗ σˣ ⊗ σʸ scenario.
enum class SpectatorDrive {
  Literal,    // J(t)/2 drives added unchanged to the lab Hamiltonian in both steps
  FrameSide,  // J(t)/2 drives are frame-side targets, mapped to the lab by 𝒜(·)𝒜†
};

/// Unit of the η ratio axis.
enum class Normalization { DriveAmplitude, AmplitudeCap, Coupling };

inline std::string_view normalization_name(Normalization n) {
  switch (n) {
    case Normalization::DriveAmplitude: return "drive-amplitude";
    case Normalization::AmplitudeCap: return "amplitude-cap";
    case Normalization::Coupling: return "coupling";
  }
  return "?";
}

inline Normalization parse_normalization(std::string_view s) {
  if (s == "drive-amplitude") return Normalization::DriveAmplitude;
  if (s == "amplitude-cap") return Normalization::AmplitudeCap;
  if (s == "coupling") return Normalization::Coupling;
  throw Error("unknown normalization '" + std::string(s) + "'");
}

struct ScenarioOptions {
  int k = 4;
  AmplitudeMode amplitude = AmplitudeMode::Uncapped;
  SpectatorDrive spectator_drive = SpectatorDrive::Literal;
};

/// Smallest positive γ zeroing the error cumulant for a pulse of the given area (cached).
inline double optimal_gamma(double area) {
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(area); it != cache.end()) return it->second;
  }
  // γ* does not depend on k; the bracket covers the first root for areas ≥ π/8.
  const double g = find_gamma(area, 1, {0.5, 10.0, 0.01, 1e-9, 1}).gamma;
  std::lock_guard lock(mutex);
  cache.emplace(area, g);
  return g;
}

namespace detail {

inline std::string site_tag(const Site& s) {
  return "r" + std::to_string(s.row) + "c" + std::to_string(s.col);
}

inline double drive_phase(Axis a) {
  if (a == Axis::X) return 0.0;
  if (a == Axis::Y) return std::numbers::pi / 2;
  throw Error("drive axis must be x or y");
}

// Frame-side single-site term coefficient·σ^axis, used for the spectator drives.
struct SiteTerm {
  Site site;
  Axis axis;
  Envelope envelope;
};

}  // namespace detail

/// One step of a scenario schedule in the lab frame.
struct ScenarioStep {
  double duration;
  double period;
  std::optional<FrameGenerator> frame;
  std::vector<DriveTerm> drives;              // lab drives, corrections merged per (site, axis)
  std::vector<XYEdge> couplings;
  std::vector<detail::SiteTerm> frame_side;  // terms needing conjugation by 𝒜
};

/**
 * A fully specified experiment: register (the qubit box), ZZ edges with unit
 * strength, step recipes and the ideal target. schedule(η) instantiates the
 * lab-frame Hamiltonians for a crosstalk ratio η (in units of the reference
 * amplitude, which is 1).
 */
class Scenario {
 public:
  Scenario(std::string name, ScenarioKind kind, Scheme scheme, ScenarioOptions options, RegisterPtr reg,
           std::vector<std::pair<Site, Site>> zz_pairs, std::vector<GateSpec> gates, Normalization norm)
      : name_(std::move(name)),
        kind_(kind),
        scheme_(scheme),
        options_(options),
        reg_(std::move(reg)),
        zz_pairs_(std::move(zz_pairs)),
        gates_(std::move(gates)),
        norm_(norm) {}

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] ScenarioKind kind() const { return kind_; }
  [[nodiscard]] Scheme scheme() const { return scheme_; }
  [[nodiscard]] const ScenarioOptions& options() const { return options_; }
  [[nodiscard]] int k() const { return scheme_ == Scheme::Zzcm ? options_.k : 0; }
  [[nodiscard]] const RegisterPtr& reg() const { return reg_; }
  [[nodiscard]] Normalization normalization() const { return norm_; }
  [[nodiscard]] const std::vector<ScenarioStep>& steps() const { return steps_; }
  [[nodiscard]] const std::vector<GateSpec>& gates() const { return gates_; }
  [[nodiscard]] const std::vector<std::pair<Site, Site>>& zz_pairs() const { return zz_pairs_; }

  /// Base amplitude Ω₀ (single-qubit) or J₀ (two-qubit) in reference units.
  [[nodiscard]] double base_amplitude() const { return base_amplitude_; }
  /// Modulation ratio γ (0 for dynamical baselines).
  [[nodiscard]] double gamma() const { return gamma_; }

  [[nodiscard]] std::vector<ZZEdge> zz_edges(double eta) const {
    std::vector<ZZEdge> out;
    out.reserve(zz_pairs_.size());
    for (const auto& [a, b] : zz_pairs_) out.push_back({a, b, eta});
    return out;
  }

  [[nodiscard]] DenseOperator ideal() const { return ideal_gate(reg_, gates_); }

  [[nodiscard]] double total_time() const {
    double t = 0.0;
    for (const auto& s : steps_) t += s.duration;
    return t;
  }

  /// Shortest frame period (the slow-drift condition is |η|·τ ≪ 1).
  [[nodiscard]] double shortest_period() const {
    double p = total_time();
    for (const auto& s : steps_) p = std::min(p, s.period);
    return p;
  }

  /// Lab-frame Hamiltonian of one step at crosstalk strength η.
  [[nodiscard]] HamiltonianFn lab_hamiltonian(std::size_t step_index, double eta) const {
    const ScenarioStep& step = steps_.at(step_index);
    TimeDependentHamiltonian h = build_drive(reg_, step.drives) + build_xy(reg_, step.couplings);
    h += build_zz(reg_, zz_edges(eta));
    h.restrict_support(step.duration);
    HamiltonianFn fn(h);
    if (!step.frame_side.empty()) {
      if (!step.frame) throw Error("frame-side terms require a frame");
      TimeDependentHamiltonian side(reg_, step.duration);
      for (const auto& term : step.frame_side) side.add_term(term.envelope, embed_pauli(reg_, term.site, term.axis));
      const FrameGenerator g = *step.frame;
      fn = fn + HamiltonianFn(reg_, step.duration,
                              [g, side](double t) { return g.conjugate(side.matrix_at(t), t, false); });
    }
    return fn;
  }

  [[nodiscard]] Schedule schedule(double eta) const {
    Schedule s(reg_);
    for (std::size_t i = 0; i < steps_.size(); ++i)
      s.add_step(lab_hamiltonian(i, eta), steps_[i].duration, steps_[i].period);
    return s;
  }

  /**
   * Sampled control channels across all steps: one per driven (site, axis),
   * one per XY coupling, and Pauli components of frame-side rotated drives.
   */
  [[nodiscard]] std::vector<PulseChannel> pulses() const;

  // Filled by the factory functions below.
  void set_parameters(double base_amplitude, double gamma) {
    base_amplitude_ = base_amplitude;
    gamma_ = gamma;
  }
  void add_step(ScenarioStep step) { steps_.push_back(std::move(step)); }

 private:
  std::string name_;
  ScenarioKind kind_;
  Scheme scheme_;
  ScenarioOptions options_;
  RegisterPtr reg_;
  std::vector<std::pair<Site, Site>> zz_pairs_;
  std::vector<GateSpec> gates_;
  Normalization norm_;
  std::vector<ScenarioStep> steps_;
  double base_amplitude_ = 1.0;
  double gamma_ = 0.0;
};

namespace detail {

// Adds θ̇(t)·S = ω sin(2πt/τ)·Σσ to the drive list, merging with an existing
// drive on the same (site, axis) so each site carries one modulated envelope.
inline void add_correction_drives(std::vector<DriveTerm>& drives, const FrameGenerator& g) {
  const Envelope rate = g.profile().rate_envelope();
  for (const auto& f : *g.factors()) {
    const double phase = drive_phase(f.axis);
    bool merged = false;
    for (auto& d : drives)
      if (d.site == f.site && d.phase == phase) {
        d.envelope = d.envelope + rate;
        merged = true;
        break;
      }
    if (!merged) drives.push_back({f.site, rate, phase});
  }
}

struct SingleQubitLayout {
  std::vector<Site> box;
  std::vector<std::pair<Site, Site>> zz;
  std::vector<std::pair<Site, Axis>> gate_drives;
  std::vector<PauliFactor> frame;
  std::vector<GateSpec> gates;
  double area;
};

inline SingleQubitLayout single_qubit_layout(ScenarioKind kind) {
  const Site q{0, 0};
  const std::vector<std::pair<Site, Site>> around_q = {
      {q, {-1, 0}}, {q, {1, 0}}, {q, {0, -1}}, {q, {0, 1}}};
  using std::numbers::pi;
  switch (kind) {
    case ScenarioKind::IsolatedHalfX:
    case ScenarioKind::IsolatedX: {
      const bool half = kind == ScenarioKind::IsolatedHalfX;
      return {{q, {-1, 0}, {1, 0}, {0, -1}, {0, 1}},
              around_q,
              {{q, Axis::X}},
              {{q, Axis::X}},
              {{{q}, half ? GateLabel::HalfX : GateLabel::X}},
              half ? pi / 4 : pi / 2};
    }
    case ScenarioKind::ParallelNextNearest: {
      const Site p{1, 1};
      auto zz = around_q;
      for (Site s : {Site{0, 1}, Site{2, 1}, Site{1, 0}, Site{1, 2}}) zz.emplace_back(p, s);
      return {{q, p, {-1, 0}, {1, 0}, {0, -1}, {0, 1}, {2, 1}, {1, 2}},
              zz,
              {{q, Axis::X}, {p, Axis::Y}},
              {{q, Axis::X}, {p, Axis::Y}},
              {{{q}, GateLabel::X}, {{p}, GateLabel::Y}},
              pi / 2};
    }
    case ScenarioKind::ParallelNearest: {
      const Site p{0, 1};
      auto zz = around_q;
      for (Site s : {Site{-1, 1}, Site{1, 1}, Site{0, 2}}) zz.emplace_back(p, s);
      return {{q, p, {-1, 0}, {1, 0}, {0, -1}, {-1, 1}, {1, 1}, {0, 2}},
              zz,
              {{q, Axis::X}, {p, Axis::Y}},
              {{{-1, 1}, Axis::X}, {q, Axis::X}, {{0, 2}, Axis::X}, {{1, 1}, Axis::X}},
              {{{q}, GateLabel::X}, {{p}, GateLabel::Y}},
              pi / 2};
    }
    default: throw Error("not a single-qubit scenario kind");
  }
}

inline std::string scenario_base_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::IsolatedHalfX: return "s1";
    case ScenarioKind::IsolatedX: return "s1b";
    case ScenarioKind::ParallelNextNearest: return "s2";
    case ScenarioKind::ParallelNearest: return "s2nn";
    case ScenarioKind::SwapWithSingles: return "s3";
    case ScenarioKind::ParallelSwap: return "s4";
  }
  return "?";
}

}  // namespace detail

/**
 * Single-qubit-gate scenarios (s1, s1b, s2, s2nn). The frame-side target is
 * Ω₀sin²(πt/T) on each gate qubit; the lab drive adds the frame correction
 * ω·sin(2πt/τ) on every frame site, with ω = γ·k·Ω₀ and γ zeroing the error
 * cumulant. The dynamical baseline drives the gate qubits with a plain sin²
 * pulse of amplitude equal to the reference (Ω₀ uncapped, Ω_m capped).
 */
inline Scenario make_single_qubit_scenario(ScenarioKind kind, Scheme scheme, ScenarioOptions opt = {}) {
  if (opt.k < 1) throw Error("scenario: k must be positive");
  const auto layout = detail::single_qubit_layout(kind);
  const auto reg = make_register(layout.box);
  const bool capped = opt.amplitude == AmplitudeMode::Capped;
  std::string name = detail::scenario_base_name(kind) + (scheme == Scheme::Dynamical ? "-dy" : "");
  Scenario sc(std::move(name), kind, scheme, opt, reg, layout.zz, layout.gates,
              capped ? Normalization::AmplitudeCap : Normalization::DriveAmplitude);

  if (scheme == Scheme::Dynamical) {
    const double amp = 1.0;
    const double gate_time = 2.0 * layout.area / amp;
    ScenarioStep step{gate_time, gate_time, std::nullopt, {}, {}, {}};
    for (const auto& [site, axis] : layout.gate_drives)
      step.drives.push_back({site, Envelope::sin_squared(amp, gate_time), detail::drive_phase(axis)});
    sc.set_parameters(amp, 0.0);
    sc.add_step(std::move(step));
    return sc;
  }

  const double gamma = optimal_gamma(layout.area);
  const double omega0 = capped ? 1.0 / peak_ratio(opt.k, gamma) : 1.0;
  const double gate_time = 2.0 * layout.area / omega0;
  const double tau = gate_time / opt.k;
  const FrameGenerator frame(reg, layout.frame, PhaseProfile(gamma * opt.k * omega0, tau), opt.k);

  ScenarioStep step{gate_time, tau, frame, {}, {}, {}};
  for (const auto& [site, axis] : layout.gate_drives)
    step.drives.push_back({site, Envelope::sin_squared(omega0, gate_time), detail::drive_phase(axis)});
  for (const auto& d : step.drives)
    if (!commutes_with_frame(frame, build_drive(reg, {d}).terms().front().op))
      throw Error("scenario: frame-side drive does not commute with the frame");
  detail::add_correction_drives(step.drives, frame);
  sc.set_parameters(omega0, gamma);
  sc.add_step(std::move(step));
  return sc;
}

/**
 * Two-qubit scenarios (s3, s4) with J(t) = J₀sin²(πt/T), ∫J dt = π/2 per step
 * and J₀ = 1. ZZCM runs two steps of length T under σˣ-type then σʸ-type
 * frames with ω = γ·k·J₀; the dynamical baseline is a single step.
 */
inline Scenario make_two_qubit_scenario(ScenarioKind kind, Scheme scheme, ScenarioOptions opt = {}) {
  if (opt.k < 1) throw Error("scenario: k must be positive");
  using std::numbers::pi;
  const Site q{0, 0};
  const Site p{0, 1};
  const double j0 = 1.0;
  const double gate_time = pi / j0;
  const Envelope coupling = Envelope::sin_squared(j0, gate_time);

  std::vector<Site> box;
  std::vector<std::pair<Site, Site>> zz;
  std::vector<GateSpec> gates;
  std::vector<XYEdge> xy;
  std::vector<Site> frame_sites;
  std::string name = detail::scenario_base_name(kind);

  if (kind == ScenarioKind::SwapWithSingles) {
    box = {q, p, {-1, 0}, {1, 0}, {0, -1}, {-1, 1}, {1, 1}, {0, 2}};
    zz = {{q, {-1, 0}}, {q, {1, 0}}, {q, {0, -1}}, {q, p}, {p, {-1, 1}}, {p, {1, 1}}, {p, {0, 2}}};
    gates = {{{q, p}, GateLabel::Swap},
             {{{-1, 1}}, GateLabel::X},
             {{{0, 2}}, GateLabel::Y},
             {{{1, 1}}, GateLabel::Identity}};
    xy = {{q, p, coupling}};
    frame_sites = {{-1, 1}, q, {0, 2}, {1, 1}};
    if (scheme == Scheme::Zzcm && opt.spectator_drive == SpectatorDrive::FrameSide) name += "-frame";
  } else if (kind == ScenarioKind::ParallelSwap) {
    const Site r{1, 0};
    const Site s{1, 1};
    box = {q, p, r, s, {-1, 0}, {-1, 1}, {2, 0}, {2, 1}};
    zz = {{q, {-1, 0}}, {q, r}, {q, p}, {p, {-1, 1}}, {p, s}, {r, s}, {r, {2, 0}}, {s, {2, 1}}};
    gates = {{{q, p}, GateLabel::Swap}, {{r, s}, GateLabel::Swap}};
    xy = {{q, p, coupling}, {r, s, coupling}};
    frame_sites = {{-1, 1}, q, s, {2, 0}};
  } else {
    throw Error("not a two-qubit scenario kind");
  }
  if (scheme == Scheme::Dynamical) name += "-dy";

  const auto reg = make_register(box);
  Scenario sc(std::move(name), kind, scheme, opt, reg, zz, gates, Normalization::Coupling);
  const bool singles = kind == ScenarioKind::SwapWithSingles;

  if (scheme == Scheme::Dynamical) {
    ScenarioStep step{gate_time, gate_time, std::nullopt, {}, xy, {}};
    if (singles) {
      step.drives.push_back({{-1, 1}, coupling, 0.0});
      step.drives.push_back({{0, 2}, coupling, pi / 2});
    }
    sc.set_parameters(j0, 0.0);
    sc.add_step(std::move(step));
    return sc;
  }

  const double gamma = optimal_gamma(pi / 2);
  const double tau = gate_time / opt.k;
  const Envelope half_coupling = 0.5 * coupling;
  for (Axis axis : {Axis::X, Axis::Y}) {
    std::vector<PauliFactor> factors;
    for (const auto& site : frame_sites) factors.push_back({site, axis});
    const FrameGenerator frame(reg, factors, PhaseProfile(gamma * opt.k * j0, tau), opt.k);
    ScenarioStep step{gate_time, tau, frame, {}, xy, {}};
    detail::add_correction_drives(step.drives, frame);
    if (singles) {
      const std::vector<detail::SiteTerm> spectators = {{{-1, 1}, Axis::X, half_coupling},
                                                        {{0, 2}, Axis::Y, half_coupling}};
      for (const auto& term : spectators) {
        const bool commutes = commutes_with_frame(frame, embed_pauli(reg, term.site, term.axis).matrix());
        if (opt.spectator_drive == SpectatorDrive::Literal || commutes) {
          step.drives.push_back({term.site, term.envelope, detail::drive_phase(term.axis)});
        } else {
          step.frame_side.push_back(term);
        }
      }
    }
    sc.add_step(std::move(step));
  }
  sc.set_parameters(j0, gamma);
  return sc;
}

inline Scenario scenario_s1(int k, AmplitudeMode mode = AmplitudeMode::Uncapped, Scheme scheme = Scheme::Zzcm) {
  return make_single_qubit_scenario(ScenarioKind::IsolatedHalfX, scheme, {k, mode});
}
inline Scenario scenario_s1b(int k, AmplitudeMode mode = AmplitudeMode::Uncapped, Scheme scheme = Scheme::Zzcm) {
  return make_single_qubit_scenario(ScenarioKind::IsolatedX, scheme, {k, mode});
}
inline Scenario scenario_s2(int k, AmplitudeMode mode = AmplitudeMode::Capped, Scheme scheme = Scheme::Zzcm) {
  return make_single_qubit_scenario(ScenarioKind::ParallelNextNearest, scheme, {k, mode});
}
inline Scenario scenario_s2nn(int k, AmplitudeMode mode = AmplitudeMode::Capped, Scheme scheme = Scheme::Zzcm) {
  return make_single_qubit_scenario(ScenarioKind::ParallelNearest, scheme, {k, mode});
}
inline Scenario scenario_s3(int k = 4, Scheme scheme = Scheme::Zzcm, SpectatorDrive drive = SpectatorDrive::Literal) {
  return make_two_qubit_scenario(ScenarioKind::SwapWithSingles, scheme, {k, AmplitudeMode::Uncapped, drive});
}
inline Scenario scenario_s4(int k = 4, Scheme scheme = Scheme::Zzcm) {
  return make_two_qubit_scenario(ScenarioKind::ParallelSwap, scheme, {k, AmplitudeMode::Uncapped});
}

struct ScenarioInfo {
  std::string name;
  std::string description;
};

inline const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = {
      {"s1", "isolated sigma_x/2 gate, 5 qubits, modulated drive"},
      {"s1-dy", "isolated sigma_x/2 gate, plain sin^2 drive"},
      {"s1b", "isolated sigma_x gate, 5 qubits, modulated drive"},
      {"s1b-dy", "isolated sigma_x gate, plain sin^2 drive"},
      {"s2", "parallel sigma_x (x) sigma_y on next-nearest neighbours, 8 qubits"},
      {"s2-dy", "parallel sigma_x (x) sigma_y on next-nearest neighbours, plain drives"},
      {"s2nn", "parallel sigma_x (x) sigma_y on nearest neighbours, 8 qubits"},
      {"s2nn-dy", "parallel sigma_x (x) sigma_y on nearest neighbours, plain drives"},
      {"s3", "SWAP (x) sigma_x (x) sigma_y (x) I, two frame steps, J(t)/2 spectator drives in the lab, 8 qubits"},
      {"s3-frame", "as s3 with the J(t)/2 spectator drives specified in the rotating frame"},
      {"s3-dy", "SWAP (x) sigma_x (x) sigma_y (x) I, single XY pulse"},
      {"s4", "parallel SWAP (x) SWAP, two frame steps, 8 qubits"},
      {"s4-dy", "parallel SWAP (x) SWAP, single XY pulse"},
  };
  return catalog;
}

/// Builds a catalog scenario by name. `k` and `amplitude` are ignored where they do not apply.
inline Scenario make_scenario(std::string_view name, int k, AmplitudeMode amplitude) {
  std::string base(name);
  Scheme scheme = Scheme::Zzcm;
  if (base.size() > 3 && base.ends_with("-dy")) {
    scheme = Scheme::Dynamical;
    base.resize(base.size() - 3);
  }
  if (base == "s1") return scenario_s1(k, amplitude, scheme);
  if (base == "s1b") return scenario_s1b(k, amplitude, scheme);
  if (base == "s2") return scenario_s2(k, amplitude, scheme);
  if (base == "s2nn") return scenario_s2nn(k, amplitude, scheme);
  if (base == "s3") return scenario_s3(k, scheme);
  if (base == "s3-frame" && scheme == Scheme::Zzcm) return scenario_s3(k, scheme, SpectatorDrive::FrameSide);
  if (base == "s4") return scenario_s4(k, scheme);
  throw Error("unknown scenario '" + std::string(name) + "'");
}

inline bool is_two_qubit_scenario(std::string_view name) {
  return name.starts_with("s3") || name.starts_with("s4");
}

inline std::vector<PulseChannel> Scenario::pulses() const {
  std::vector<PulseChannel> channels;
  // Adds `sampler` to channel `cname` in step i, zero-padding earlier steps and
  // summing with anything already placed in the same step.
  auto place = [&](const std::string& cname, std::size_t i, PulseChannel::Sampler sampler) {
    auto it = std::find_if(channels.begin(), channels.end(), [&](const auto& c) { return c.name == cname; });
    if (it == channels.end()) {
      channels.push_back({cname, {}});
      it = channels.end() - 1;
    }
    auto& segs = it->segments;
    while (segs.size() < i) segs.emplace_back([](double) { return 0.0; }, steps_[segs.size()].duration);
    if (segs.size() == i) {
      segs.emplace_back(std::move(sampler), steps_[i].duration);
    } else {
      auto prev = segs.back().first;
      segs.back().first = [prev, sampler](double t) { return prev(t) + sampler(t); };
    }
  };

  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const ScenarioStep& step = steps_[i];
    for (const auto& d : step.drives) {
      const std::string cname = "drive_" + detail::site_tag(d.site) + (d.phase == 0.0 ? "_x" : "_y");
      place(cname, i, PulseChannel::from(d.envelope));
    }
    for (const auto& e : step.couplings)
      place("coupling_" + detail::site_tag(e.a) + "_" + detail::site_tag(e.b), i, PulseChannel::from(e.coupling));
    for (const auto& term : step.frame_side) {
      // Pauli components of 𝒜 σ 𝒜† on the term's site.
      Axis frame_axis = Axis::Z;
      bool rotated = false;
      for (const auto& f : *step.frame->factors())
        if (f.site == term.site) {
          frame_axis = f.axis;
          rotated = true;
        }
      const PhaseProfile profile = step.frame->profile();
      const Envelope env = term.envelope;
      const Axis in = term.axis;
      for (Axis out : {Axis::X, Axis::Y, Axis::Z}) {
        auto sampler = [=](double t) {
          const double th = rotated ? profile.theta(t) : 0.0;
          const detail::Rot2 r =
              std::cos(th) * detail::Rot2::Identity() + cplx{0.0, -std::sin(th)} * detail::pauli2(frame_axis);
          const detail::Rot2 m = r * detail::pauli2(in) * r.adjoint();
          return eval(env, t) * 0.5 * (detail::pauli2(out) * m).trace().real();
        };
        place("drive_" + detail::site_tag(term.site) + "_" + std::string(1, axis_name(out)), i, sampler);
      }
    }
  }
  for (auto& c : channels)
    while (c.segments.size() < steps_.size())
      c.segments.emplace_back([](double) { return 0.0; }, steps_[c.segments.size()].duration);
  return channels;
}

}  // namespace zzcm
