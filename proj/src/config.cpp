#include "nlstokes/config.hpp"

#include "json.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace nlstokes {

using nlohmann::json;

std::string_view to_string(Subcommand c) noexcept {
  switch (c) {
    case Subcommand::kernels: return "kernels";
    case Subcommand::symbols: return "symbols";
    case Subcommand::scan: return "scan";
    case Subcommand::solve: return "solve";
    case Subcommand::converge: return "converge";
    case Subcommand::grid1d: return "grid1d";
    case Subcommand::validate: return "validate";
  }
  return "unknown";
}

std::optional<Subcommand> parse_subcommand(std::string_view text) noexcept {
  for (auto c : {Subcommand::kernels, Subcommand::symbols, Subcommand::scan, Subcommand::solve,
                 Subcommand::converge, Subcommand::grid1d, Subcommand::validate}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::string_view to_string(StudyKind s) noexcept {
  switch (s) {
    case StudyKind::delta: return "delta";
    case StudyKind::spectral: return "spectral";
    case StudyKind::compatibility: return "compatibility";
  }
  return "unknown";
}

RadialProfile KernelConfig::profile(KernelRole role, int dim, bool normalize) const {
  RadialProfile p = [&] {
    switch (kind) {
      case ProfileKind::fractional: return RadialProfile::fractional(beta, role, amplitude);
      case ProfileKind::constant: return RadialProfile::constant(role, amplitude);
      case ProfileKind::cubic_spline: return RadialProfile::cubic_spline(role, amplitude);
      case ProfileKind::truncated_gaussian: return RadialProfile::truncated_gaussian(sigma, role, amplitude);
      case ProfileKind::piecewise_fractional:
        return RadialProfile::piecewise_fractional(beta, epsilon, role, amplitude);
    }
    throw Error(ErrorCode::invalid_argument, "unknown profile kind");
  }();
  return normalize ? normalize_profile(p.with_amplitude(1.0), dim) : p;
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string s = "invalid configuration";
  for (const auto& p : problems) s += "; " + p;
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorCode::config_error, join_problems(problems)), problems_(std::move(problems)) {}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"command", "subcommand this document is meant for (must match when given)"},
      {"dim", "spatial dimension"},
      {"delta", "smoothing length"},
      {"deltas", "list of smoothing lengths (delta ladder or compatibility path)"},
      {"N", "modes per axis"},
      {"Ns", "list of modes per axis (N ladder or compatibility path)"},
      {"N_ref", "reference lattice size for studies (0 = twice the largest N)"},
      {"nu", "viscosity"},
      {"variant", "nonlocal | modified | local"},
      {"diffusion_kind", "fractional | constant | cubic_spline | truncated_gaussian | piecewise_fractional"},
      {"diffusion_beta", "diffusion fractional exponent"},
      {"diffusion_sigma", "diffusion gaussian width"},
      {"diffusion_epsilon", "diffusion piecewise cutover"},
      {"diffusion_amplitude", "diffusion amplitude when normalize is false"},
      {"gradient_kind", "fractional | constant | cubic_spline | truncated_gaussian | piecewise_fractional"},
      {"gradient_beta", "gradient fractional exponent"},
      {"gradient_sigma", "gradient gaussian width"},
      {"gradient_epsilon", "gradient piecewise cutover"},
      {"gradient_amplitude", "gradient amplitude when normalize is false"},
      {"normalize", "rescale kernels to unit moments"},
      {"forcing", "taylor_green | modes | random"},
      {"forcing_amplitude", "forcing amplitude"},
      {"forcing_band", "random forcing: largest |xi_k|"},
      {"forcing_decay", "random forcing: coefficients scaled by exp(-decay |xi|)"},
      {"forcing_divergence_free", "random forcing: project out the gradient part"},
      {"forcing_modes", "explicit modes: [{\"xi\": [...], \"amplitude\": [[re, im], ...]}]"},
      {"study", "delta | spectral | compatibility"},
      {"path_c", "compatibility path delta = c N^-gamma"},
      {"path_gamma", "compatibility path exponent"},
      {"xi_min", "lower end of the wavenumber range (exclusive)"},
      {"xi_max", "upper end of the wavenumber range"},
      {"samples", "number of wavenumber samples"},
      {"bracket_tolerance", "scan bracket width"},
      {"op", "L | G | D | all"},
      {"xi", "plane-wave wavevector"},
      {"pairs", "number of random (u, p) pairs for the adjointness check"},
      {"realspace", "also write point values of the solution"},
      {"radial_nodes", "Gauss-Legendre nodes per radial panel"},
      {"angular_nodes", "Gauss-Legendre nodes per angular panel"},
      {"rel_tolerance", "symbol quadrature tolerance"},
      {"max_refinements", "symbol quadrature refinement levels"},
      {"out", "output directory"},
      {"threads", "worker cap"},
      {"seed", "64-bit seed"},
  };
  return keys;
}

namespace {

class Reader {
 public:
  Reader(const json& doc, std::vector<std::string>& problems) : doc_(doc), problems_(problems) {}

  [[nodiscard]] bool has(const char* key) const { return doc_.contains(key); }

  void get(const char* key, int& out) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_number_integer()) return bad(key, "an integer");
    const auto x = v.get<long long>();
    if (x < INT32_MIN || x > INT32_MAX) return bad(key, "a 32-bit integer");
    out = int(x);
  }

  void get(const char* key, double& out) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_number()) return bad(key, "a number");
    out = v.get<double>();
    if (!std::isfinite(out)) bad(key, "a finite number");
  }

  void get(const char* key, bool& out) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_boolean()) return bad(key, "true or false");
    out = v.get<bool>();
  }

  void get(const char* key, std::string& out) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_string()) return bad(key, "a string");
    out = v.get<std::string>();
  }

  void get(const char* key, std::uint64_t& out) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (v.is_number_unsigned()) {
      out = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<long long>() >= 0) {
      out = std::uint64_t(v.get<long long>());
    } else if (v.is_string()) {
      const auto s = v.get<std::string>();
      std::size_t pos = 0;
      try {
        out = std::stoull(s, &pos, 10);
      } catch (...) {
        pos = 0;
      }
      if (pos == 0 || pos != s.size() || s.front() == '-') bad(key, "an unsigned 64-bit integer");
    } else {
      bad(key, "an unsigned 64-bit integer");
    }
  }

  void get(const char* key, std::vector<int>& out) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_array()) return bad(key, "a list of integers");
    std::vector<int> tmp;
    for (const auto& e : v) {
      if (!e.is_number_integer()) return bad(key, "a list of integers");
      tmp.push_back(e.get<int>());
    }
    out = std::move(tmp);
  }

  void get(const char* key, std::vector<double>& out) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_array()) return bad(key, "a list of numbers");
    std::vector<double> tmp;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) return bad(key, "a list of finite numbers");
      tmp.push_back(e.get<double>());
    }
    out = std::move(tmp);
  }

  void bad(const char* key, const char* expected) {
    problems_.push_back(std::string(key) + " must be " + expected);
  }

 private:
  const json& doc_;
  std::vector<std::string>& problems_;
};

json parse_override(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

void read_kernel(Reader& rd, const std::string& prefix, KernelConfig& k, std::vector<std::string>& problems) {
  std::string kind;
  rd.get((prefix + "_kind").c_str(), kind);
  if (!kind.empty()) {
    if (auto pk = parse_kind(kind)) {
      k.kind = *pk;
    } else {
      problems.push_back("unknown kernel kind '" + kind + "' for " + prefix + "_kind");
    }
  }
  rd.get((prefix + "_beta").c_str(), k.beta);
  rd.get((prefix + "_sigma").c_str(), k.sigma);
  rd.get((prefix + "_epsilon").c_str(), k.epsilon);
  rd.get((prefix + "_amplitude").c_str(), k.amplitude);
}

ModeList read_modes(const json& doc, int dim, std::vector<std::string>& problems) {
  ModeList list;
  if (!doc.contains("forcing_modes")) {
    problems.push_back("forcing=modes needs forcing_modes");
    return list;
  }
  const auto& arr = doc.at("forcing_modes");
  if (!arr.is_array()) {
    problems.push_back("forcing_modes must be a list of {xi, amplitude} objects");
    return list;
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    const std::string where = "forcing_modes[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("xi") || !e.contains("amplitude")) {
      problems.push_back(where + " must have xi and amplitude");
      continue;
    }
    ModeAmplitude m;
    bool ok = e.at("xi").is_array() && int(e.at("xi").size()) == dim;
    if (ok) {
      for (const auto& v : e.at("xi")) {
        if (!v.is_number_integer()) ok = false;
        else m.xi.push_back(v.get<int>());
      }
    }
    if (!ok) {
      problems.push_back(where + ".xi must be " + std::to_string(dim) + " integers");
      continue;
    }
    const auto& amp = e.at("amplitude");
    ok = amp.is_array() && int(amp.size()) == dim;
    if (ok) {
      for (const auto& v : amp) {
        if (v.is_number()) {
          m.amplitude.emplace_back(v.get<double>(), 0.0);
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
          m.amplitude.emplace_back(v[0].get<double>(), v[1].get<double>());
        } else {
          ok = false;
        }
      }
    }
    if (!ok) {
      problems.push_back(where + ".amplitude must be " + std::to_string(dim) + " numbers or [re, im] pairs");
      continue;
    }
    list.modes.push_back(std::move(m));
  }
  return list;
}

bool even_lattice(int n) { return n >= 4 && n % 2 == 0; }

void apply_command_defaults(ExperimentConfig& c) {
  switch (c.command) {
    case Subcommand::solve:
      c.delta = 0.1;
      c.N = 32;
      break;
    case Subcommand::converge:
      c.N = 64;
      break;
    case Subcommand::grid1d:
      c.dim = 1;
      c.delta = 0.5;
      c.N = 32;
      c.gradient = {ProfileKind::constant};
      break;
    case Subcommand::validate:
      c.delta = 0.4;
      c.Ns = {32, 64, 128};
      c.gradient = {ProfileKind::constant};
      break;
    default:
      break;
  }
}

}  // namespace

ExperimentConfig parse_config(Subcommand command, std::string_view text,
                              const std::map<std::string, std::string>& overrides) {
  std::vector<std::string> problems;
  json doc = json::object();
  if (!text.empty()) {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError({std::string("malformed document: ") + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({"malformed document: top level must be an object"});
  }
  for (const auto& [k, v] : overrides) doc[k] = parse_override(v);

  std::set<std::string_view> known;
  for (const auto& key : config_keys()) known.insert(key.name);
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) problems.push_back("unknown key '" + item.key() + "'");
  }

  ExperimentConfig c;
  c.command = command;
  apply_command_defaults(c);
  Reader rd(doc, problems);

  std::string s;
  rd.get("command", s);
  if (!s.empty() && s != to_string(command)) {
    problems.push_back("document is for command '" + s + "' but '" + std::string(to_string(command)) + "' was run");
  }

  if (command != Subcommand::grid1d) rd.get("dim", c.dim);
  rd.get("delta", c.delta);
  rd.get("deltas", c.deltas);
  rd.get("N", c.N);
  rd.get("Ns", c.Ns);
  rd.get("N_ref", c.N_ref);
  rd.get("nu", c.nu);
  s.clear();
  rd.get("variant", s);
  if (!s.empty()) {
    if (auto v = parse_variant(s)) c.variant = *v;
    else problems.push_back("variant must be nonlocal, modified or local");
  }
  read_kernel(rd, "diffusion", c.diffusion, problems);
  read_kernel(rd, "gradient", c.gradient, problems);
  rd.get("normalize", c.normalize);

  std::string forcing = "taylor_green";
  rd.get("forcing", forcing);
  double amplitude = 1.0;
  rd.get("forcing_amplitude", amplitude);
  RandomBandLimited random;
  random.amplitude = amplitude;
  rd.get("forcing_band", random.band);
  rd.get("forcing_decay", random.decay);
  rd.get("forcing_divergence_free", random.divergence_free);

  s.clear();
  rd.get("study", s);
  if (s == "delta") c.study = StudyKind::delta;
  else if (s == "spectral") c.study = StudyKind::spectral;
  else if (s == "compatibility") c.study = StudyKind::compatibility;
  else if (!s.empty()) problems.push_back("study must be delta, spectral or compatibility");
  rd.get("path_c", c.path_c);
  rd.get("path_gamma", c.path_gamma);

  rd.get("xi_min", c.xi_min);
  rd.get("xi_max", c.xi_max);
  rd.get("samples", c.samples);
  rd.get("bracket_tolerance", c.bracket_tolerance);
  rd.get("op", c.op);
  rd.get("xi", c.xi);
  rd.get("pairs", c.pairs);
  rd.get("realspace", c.realspace);
  rd.get("radial_nodes", c.quadrature.radial_nodes);
  rd.get("angular_nodes", c.quadrature.angular_nodes);
  rd.get("rel_tolerance", c.quadrature.rel_tolerance);
  rd.get("max_refinements", c.quadrature.max_refinements);
  rd.get("out", c.out);
  rd.get("threads", c.threads);
  rd.get("seed", c.seed);
  random.seed = c.seed;

  // numeric ranges
  const bool field_command = command == Subcommand::solve || command == Subcommand::converge ||
                             command == Subcommand::validate;
  if (c.dim < 1 || c.dim > 3) problems.push_back("dim must be 1, 2 or 3");
  else if (field_command && c.dim == 1) problems.push_back("dim must be 2 or 3 for " + std::string(to_string(command)));
  if (!(c.delta > 0.0)) problems.push_back("delta must be positive");
  for (double d : c.deltas) {
    if (!(d > 0.0)) {
      problems.push_back("deltas must all be positive");
      break;
    }
  }
  if (!even_lattice(c.N)) problems.push_back("N must be even and at least 4");
  for (int n : c.Ns) {
    if (!even_lattice(n)) {
      problems.push_back("Ns entries must be even and at least 4");
      break;
    }
  }
  if (c.N_ref != 0 && !even_lattice(c.N_ref)) problems.push_back("N_ref must be 0 or even and at least 4");
  if (!(c.nu > 0.0)) problems.push_back("nu must be positive");
  if (c.threads < 1) problems.push_back("threads must be at least 1");
  if (c.pairs < 0) problems.push_back("pairs must be nonnegative");
  if (!(c.xi_min >= 0.0) || !(c.xi_max > c.xi_min)) problems.push_back("need 0 <= xi_min < xi_max");
  if (c.samples < 2) problems.push_back("samples must be at least 2");
  if (command == Subcommand::scan && c.samples < 64) problems.push_back("scan needs samples >= 64");
  if (!(c.bracket_tolerance > 0.0)) problems.push_back("bracket_tolerance must be positive");
  if (c.quadrature.radial_nodes < 2 || c.quadrature.angular_nodes < 2) {
    problems.push_back("quadrature node counts must be at least 2");
  }
  if (!(c.quadrature.rel_tolerance > 0.0)) problems.push_back("rel_tolerance must be positive");
  if (c.quadrature.max_refinements < 1) problems.push_back("max_refinements must be at least 1");
  if (c.op != "L" && c.op != "G" && c.op != "D" && c.op != "all") problems.push_back("op must be L, G, D or all");
  if (random.band < 0) problems.push_back("forcing_band must be nonnegative");
  if (!(random.decay >= 0.0)) problems.push_back("forcing_decay must be nonnegative");

  // kernels: constructing and measuring them applies the kernel preconditions
  const int kdim = command == Subcommand::grid1d ? 1 : c.dim;
  if (kdim >= 1 && kdim <= 3) {
    const std::pair<const char*, std::pair<KernelConfig*, KernelRole>> roles[] = {
        {"diffusion", {&c.diffusion, KernelRole::diffusion}}, {"gradient", {&c.gradient, KernelRole::gradient}}};
    for (const auto& [name, kr] : roles) {
      if (command == Subcommand::grid1d && kr.second == KernelRole::diffusion) continue;
      try {
        const RadialProfile p = kr.first->profile(kr.second, kdim, false);
        (void)kernel_moment(p, kdim);
        if (c.normalize) (void)normalize_profile(p.with_amplitude(1.0), kdim);
      } catch (const Error& e) {
        problems.push_back(std::string(name) + " kernel: " + e.what());
      }
    }
  }

  // forcing
  if (forcing == "taylor_green") {
    c.forcing = TaylorGreen{c.nu, amplitude};
    if (field_command && c.dim == 1) problems.push_back("taylor_green forcing needs dim 2 or 3");
  } else if (forcing == "random") {
    c.forcing = random;
  } else if (forcing == "modes") {
    ModeList list = read_modes(doc, c.dim, problems);
    for (auto& m : list.modes) {
      for (auto& a : m.amplitude) a *= amplitude;
    }
    c.forcing = std::move(list);
  } else {
    problems.push_back("forcing must be taylor_green, modes or random");
  }

  // command specific
  switch (command) {
    case Subcommand::converge: {
      if (c.study == StudyKind::delta) {
        if (c.deltas.empty()) c.deltas = {0.2, 0.1, 0.05, 0.025};
        for (std::size_t i = 1; i < c.deltas.size(); ++i) {
          if (!(c.deltas[i] < c.deltas[i - 1])) {
            problems.push_back("deltas must be strictly decreasing");
            break;
          }
        }
      } else if (c.study == StudyKind::spectral) {
        if (c.Ns.empty()) c.Ns = {16, 32, 64};
        for (std::size_t i = 1; i < c.Ns.size(); ++i) {
          if (!(c.Ns[i] > c.Ns[i - 1])) {
            problems.push_back("Ns must be strictly increasing");
            break;
          }
        }
      } else {
        if (c.Ns.empty()) c.Ns = {16, 32, 64, 128};
        if (c.deltas.empty()) {
          if (!(c.path_c > 0.0)) problems.push_back("path_c must be positive");
          for (int n : c.Ns) c.deltas.push_back(c.path_c * std::pow(double(n), -c.path_gamma));
        } else if (c.deltas.size() != c.Ns.size()) {
          problems.push_back("compatibility path needs as many deltas as Ns");
        }
      }
      break;
    }
    case Subcommand::grid1d: {
      const double h = 2.0 * std::numbers::pi / double(c.N);
      if (c.delta < h * (1.0 - 1e-12)) problems.push_back("grid1d needs delta >= h = 2 pi / N for the regular layout");
      break;
    }
    case Subcommand::validate: {
      if (c.Ns.empty()) c.Ns = {c.N};
      if (!(c.delta < std::numbers::pi)) problems.push_back("validate needs delta < pi");
      for (int n : c.Ns) {
        if (2.0 * std::numbers::pi / double(n) > c.delta) {
          problems.push_back("validate needs h = 2 pi / N <= delta for N=" + std::to_string(n));
        }
      }
      if (c.xi.empty()) {
        c.xi.assign(std::size_t(std::max(c.dim, 1)), 0);
        c.xi[0] = 1;
      }
      if (int(c.xi.size()) != c.dim) problems.push_back("xi must have dim entries");
      for (int n : c.Ns) {
        for (int v : c.xi) {
          if (std::abs(v) > n / 2 - 1) {
            problems.push_back("xi is not retained on the lattice N=" + std::to_string(n));
            break;
          }
        }
      }
      break;
    }
    default:
      break;
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

}  // namespace nlstokes
