#include "nsdv/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nsdv/errors.hpp"
#include "nsdv/format.hpp"
#include "nsdv/initdata.hpp"

namespace nsdv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class KeyValues {
 public:
  void set(const std::string& key, const std::string& value, int line) {
    if (values_.count(key))
      throw ConfigError("line " + std::to_string(line) + ": duplicate key " + key);
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string take_string(const std::string& key, const std::string& def) {
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  double take_double(const std::string& key, double def) {
    if (!has(key)) return def;
    const auto s = take_string(key, "");
    double v = 0.0;
    if (!parse_double(s, v)) throw ConfigError("key " + key + ": not a number: " + s);
    return v;
  }

  std::optional<double> take_optional(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return take_double(key, 0.0);
  }

  unsigned long long take_uint(const std::string& key, unsigned long long def) {
    if (!has(key)) return def;
    const auto s = take_string(key, "");
    unsigned long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ConfigError("key " + key + ": not a non-negative integer: " + s);
    return v;
  }

  void require_empty() const {
    if (!values_.empty())
      throw ConfigError("unknown key " + values_.begin()->first);
  }

 private:
  std::map<std::string, std::string> values_;
};

void emit(std::ostringstream& os, const char* key, double v) {
  os << key << " = " << format_double(v) << '\n';
}

}  // namespace

const char* initial_kind_name(const InitialDataSpec& spec) {
  static const char* names[] = {"equilibrium", "smooth_bump", "shock_like",
                                "rarefaction", "from_v0",     "manufactured"};
  return names[spec.index()];
}

ModelParams ScenarioConfig::model() const {
  return ModelParams::create(alpha, gamma, half_length);
}

Grid1D ScenarioConfig::grid() const { return Grid1D(n_cells, half_length); }

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return alpha == o.alpha && gamma == o.gamma && half_length == o.half_length &&
         n_cells == o.n_cells && solver == o.solver && initial == o.initial &&
         seed == o.seed && noise == o.noise;
}

ScenarioConfig parse_config(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto cut = raw.find_first_of("#;");
    const std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("line " + std::to_string(line) + ": malformed section");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(line) + ": key outside a section");
    kv.set(section + "." + trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line);
  }

  ScenarioConfig c;
  c.alpha = kv.take_double("model.alpha", c.alpha);
  c.gamma = kv.take_double("model.gamma", c.gamma);
  c.half_length = kv.take_double("model.half_length", c.half_length);
  c.n_cells = kv.take_uint("grid.n_cells", c.n_cells);

  auto& sv = c.solver;
  sv.cfl_number = kv.take_double("solver.cfl", sv.cfl_number);
  sv.t_end = kv.take_double("solver.t_end", sv.t_end);
  sv.output_cadence = kv.take_double("solver.output_cadence", sv.output_cadence);
  const auto form = kv.take_string("solver.formulation", "primitive");
  if (form == "primitive") sv.formulation = Formulation::Primitive;
  else if (form == "effective") sv.formulation = Formulation::Effective;
  else throw ConfigError("unknown formulation " + form);
  const auto diff = kv.take_string("solver.diffusion", "semi_implicit");
  if (diff == "semi_implicit") sv.diffusion = DiffusionTreatment::SemiImplicit;
  else if (diff == "explicit") sv.diffusion = DiffusionTreatment::Explicit;
  else throw ConfigError("unknown diffusion treatment " + diff);
  sv.fixed_dt = kv.take_optional("solver.fixed_dt");
  sv.dt_over_dx2 = kv.take_optional("solver.dt_over_dx2");

  const auto kind = kv.take_string("initial_data.kind", "equilibrium");
  if (kind == "equilibrium") {
    c.initial = init::Equilibrium{};
  } else if (kind == "smooth_bump") {
    init::SmoothBump b;
    b.amplitude = kv.take_double("initial_data.amplitude", b.amplitude);
    b.width = kv.take_double("initial_data.width", b.width);
    b.velocity = kv.take_double("initial_data.velocity", b.velocity);
    c.initial = b;
  } else if (kind == "shock_like") {
    init::ShockLike b;
    b.jump = kv.take_double("initial_data.jump", b.jump);
    b.steepness = kv.take_double("initial_data.steepness", b.steepness);
    b.envelope = kv.take_double("initial_data.envelope", b.envelope);
    c.initial = b;
  } else if (kind == "rarefaction") {
    init::Rarefaction b;
    b.amplitude = kv.take_double("initial_data.amplitude", b.amplitude);
    b.envelope = kv.take_double("initial_data.envelope", b.envelope);
    c.initial = b;
  } else if (kind == "from_v0") {
    init::FromV0 b;
    b.profile = kv.take_string("initial_data.profile", b.profile);
    b.mollifier_n = static_cast<int>(
        kv.take_uint("initial_data.mollifier_n", static_cast<unsigned>(b.mollifier_n)));
    b.scale = kv.take_double("initial_data.scale", b.scale);
    b.rho_amplitude = kv.take_double("initial_data.rho_amplitude", b.rho_amplitude);
    b.rho_width = kv.take_double("initial_data.rho_width", b.rho_width);
    c.initial = b;
  } else if (kind == "manufactured") {
    init::Manufactured b;
    b.id = kv.take_string("initial_data.id", b.id);
    c.initial = b;
  } else {
    throw ConfigError("unknown initial_data kind " + kind);
  }

  c.seed = kv.take_uint("run.seed", 0);
  c.noise = kv.take_double("run.noise", 0.0);
  kv.require_empty();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "[model]\n";
  emit(os, "alpha", c.alpha);
  emit(os, "gamma", c.gamma);
  emit(os, "half_length", c.half_length);
  os << "\n[grid]\nn_cells = " << c.n_cells << "\n";
  const auto& sv = c.solver;
  os << "\n[solver]\n";
  emit(os, "cfl", sv.cfl_number);
  emit(os, "t_end", sv.t_end);
  emit(os, "output_cadence", sv.output_cadence);
  os << "formulation = "
     << (sv.formulation == Formulation::Primitive ? "primitive" : "effective") << '\n';
  os << "diffusion = "
     << (sv.diffusion == DiffusionTreatment::SemiImplicit ? "semi_implicit" : "explicit")
     << '\n';
  if (sv.fixed_dt) emit(os, "fixed_dt", *sv.fixed_dt);
  if (sv.dt_over_dx2) emit(os, "dt_over_dx2", *sv.dt_over_dx2);

  os << "\n[initial_data]\nkind = " << initial_kind_name(c.initial) << '\n';
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, init::SmoothBump>) {
          emit(os, "amplitude", d.amplitude);
          emit(os, "width", d.width);
          emit(os, "velocity", d.velocity);
        } else if constexpr (std::is_same_v<T, init::ShockLike>) {
          emit(os, "jump", d.jump);
          emit(os, "steepness", d.steepness);
          emit(os, "envelope", d.envelope);
        } else if constexpr (std::is_same_v<T, init::Rarefaction>) {
          emit(os, "amplitude", d.amplitude);
          emit(os, "envelope", d.envelope);
        } else if constexpr (std::is_same_v<T, init::FromV0>) {
          os << "profile = " << d.profile << '\n';
          os << "mollifier_n = " << d.mollifier_n << '\n';
          emit(os, "scale", d.scale);
          emit(os, "rho_amplitude", d.rho_amplitude);
          emit(os, "rho_width", d.rho_width);
        } else if constexpr (std::is_same_v<T, init::Manufactured>) {
          os << "id = " << d.id << '\n';
        }
      },
      c.initial);
  os << "\n[run]\nseed = " << c.seed << '\n';
  emit(os, "noise", c.noise);
  return os.str();
}

std::string config_hash(const ScenarioConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", fnv1a64(serialize_config(c)));
  return buf;
}

void validate_config(const ScenarioConfig& c) {
  try {
    (void)c.model();
    (void)c.grid();
    c.solver.validate();
    if (!(c.noise >= 0.0)) throw ConfigError("noise must be >= 0");
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, init::SmoothBump>) {
            if (!(d.width > 0.0)) throw ConfigError("bump width must be > 0");
            if (!(d.amplitude > -1.0)) throw ConfigError("bump amplitude must exceed -1");
          } else if constexpr (std::is_same_v<T, init::ShockLike>) {
            if (!(d.envelope > 0.0)) throw ConfigError("envelope must be > 0");
          } else if constexpr (std::is_same_v<T, init::Rarefaction>) {
            if (!(d.envelope > 0.0)) throw ConfigError("envelope must be > 0");
          } else if constexpr (std::is_same_v<T, init::FromV0>) {
            if (d.mollifier_n < 1) throw ConfigError("mollifier_n must be >= 1");
            if (!(d.rho_width > 0.0)) throw ConfigError("rho_width must be > 0");
            if (!(d.rho_amplitude > -1.0))
              throw ConfigError("rho_amplitude must exceed -1");
          }
        },
        c.initial);
    (void)build_initial(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace nsdv
