#include "udmac/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "udmac/errors.hpp"
#include "udmac/harness/csv.hpp"

namespace udmac::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view what, std::string_view value, std::string_view expected) {
  throw ConfigError(std::string(what) + ": cannot parse '" + std::string(value) + "' as " +
                    std::string(expected));
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  const auto s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    bad_value(what, text, std::is_integral_v<T> ? "an integer" : "a number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) bad_value(what, text, "a finite number");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Comma-separated items; an item "a:b:step" expands to a, a+step, ... <= b,
// and for integers "a..b" expands with step 1.
template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view what) {
  std::vector<T> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) bad_value(what, text, "a comma-separated list");
    const auto colon = split(item, ':');
    const auto dots = item.find("..");
    if (colon.size() == 3) {
      const T a = parse_number<T>(colon[0], what);
      const T b = parse_number<T>(colon[1], what);
      const T step = parse_number<T>(colon[2], what);
      if (!(step > 0)) bad_value(what, item, "a range with positive step");
      const double slack = std::is_integral_v<T> ? 0.0 : 1e-9 * static_cast<double>(step);
      for (long long i = 0;; ++i) {
        const T v = static_cast<T>(a + static_cast<T>(i) * step);
        if (static_cast<double>(v) > static_cast<double>(b) + slack) break;
        out.push_back(v);
        if (out.size() > 1000000) bad_value(what, item, "a range of at most 1e6 values");
      }
    } else if constexpr (std::is_integral_v<T>) {
      if (dots != std::string_view::npos && colon.size() == 1) {
        const T a = parse_number<T>(item.substr(0, dots), what);
        const T b = parse_number<T>(item.substr(dots + 2), what);
        if (b < a) bad_value(what, item, "an increasing range");
        if (b - a > 1000000) bad_value(what, item, "a range of at most 1e6 values");
        for (T v = a;; ++v) {
          out.push_back(v);
          if (v == b) break;
        }
      } else {
        out.push_back(parse_number<T>(item, what));
      }
    } else {
      out.push_back(parse_number<T>(item, what));
    }
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_number(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string fmt(double v) { return format_number(v); }

markov::Rounding parse_rounding(std::string_view s) {
  s = trim(s);
  if (s == "floor") return markov::Rounding::Floor;
  if (s == "round") return markov::Rounding::Round;
  if (s == "ceil") return markov::Rounding::Ceil;
  bad_value("mac.rounding", s, "floor, round or ceil");
}

std::string to_string(markov::Rounding r) {
  switch (r) {
    case markov::Rounding::Floor: return "floor";
    case markov::Rounding::Round: return "round";
    case markov::Rounding::Ceil: return "ceil";
  }
  return "floor";
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define UDMAC_NUM_KEY(sec, key, field, type)                                             \
  Key {                                                                                  \
    sec, key, [](ExperimentConfig& c, std::string_view v) {                              \
      c.field = parse_number<type>(v, sec "." key);                                      \
    },                                                                                   \
        [](const ExperimentConfig& c) {                                                  \
          if constexpr (std::is_floating_point_v<type>) return fmt(c.field);             \
          else return std::to_string(c.field);                                           \
        }                                                                                \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      UDMAC_NUM_KEY("scene", "radius_km", scene_radius_km, double),
      UDMAC_NUM_KEY("scene", "comm_range_km", comm_range_km, double),
      UDMAC_NUM_KEY("scene", "height_km", height_km, double),
      UDMAC_NUM_KEY("scene", "speed_kmh", speed_kmh, double),

      UDMAC_NUM_KEY("mac", "uavs", uavs, int),
      UDMAC_NUM_KEY("mac", "min_window", backoff.min_window, int),
      UDMAC_NUM_KEY("mac", "max_stage", backoff.max_stage, int),
      UDMAC_NUM_KEY("mac", "p_has_packet", backoff.p_has_packet, double),
      {"mac", "rounding", [](ExperimentConfig& c, std::string_view v) { c.rounding = parse_rounding(v); },
       [](const ExperimentConfig& c) { return to_string(c.rounding); }},
      {"mac", "mode_assignment",
       [](ExperimentConfig& c, std::string_view v) {
         v = trim(v);
         if (v == "fixed-split") c.mode_assignment = sim::ModeAssignment::FixedSplit;
         else if (v == "bernoulli") c.mode_assignment = sim::ModeAssignment::Bernoulli;
         else bad_value("mac.mode_assignment", v, "fixed-split or bernoulli");
       },
       [](const ExperimentConfig& c) {
         return std::string(c.mode_assignment == sim::ModeAssignment::FixedSplit ? "fixed-split" : "bernoulli");
       }},

      UDMAC_NUM_KEY("timing", "rts_us", timing.rts_us, double),
      UDMAC_NUM_KEY("timing", "cts_us", timing.cts_us, double),
      UDMAC_NUM_KEY("timing", "rcts_us", timing.rcts_us, double),
      UDMAC_NUM_KEY("timing", "sifs_us", timing.sifs_us, double),
      UDMAC_NUM_KEY("timing", "difs_us", timing.difs_us, double),
      UDMAC_NUM_KEY("timing", "slot_us", timing.slot_us, double),

      UDMAC_NUM_KEY("data", "payload_bits", tin.payload_bits, double),
      UDMAC_NUM_KEY("data", "channels", tin.channels, int),
      UDMAC_NUM_KEY("data", "rate_bps", tin.rate_bps, double),
      {"data", "channel_policy",
       [](ExperimentConfig& c, std::string_view v) {
         v = trim(v);
         if (v == "shared") c.channel_policy = sim::ChannelPolicy::Shared;
         else if (v == "partitioned") c.channel_policy = sim::ChannelPolicy::Partitioned;
         else bad_value("data.channel_policy", v, "shared or partitioned");
       },
       [](const ExperimentConfig& c) {
         return std::string(c.channel_policy == sim::ChannelPolicy::Shared ? "shared" : "partitioned");
       }},
      UDMAC_NUM_KEY("data", "a2a_channels", a2a_channels, int),

      UDMAC_NUM_KEY("vemac", "frame_slots", vemac_frame_slots, int),
      {"vemac", "slot_us",
       [](ExperimentConfig& c, std::string_view v) {
         if (trim(v) == "auto") c.vemac_slot_us.reset();
         else c.vemac_slot_us = parse_number<double>(v, "vemac.slot_us");
       },
       [](const ExperimentConfig& c) { return c.vemac_slot_us ? fmt(*c.vemac_slot_us) : std::string("auto"); }},

      UDMAC_NUM_KEY("sim", "duration_s", sim_duration_s, double),
      UDMAC_NUM_KEY("sim", "scf_count", sim_scf_count, int),
      UDMAC_NUM_KEY("sim", "freeze_slots", sim_freeze_slots, int),

      {"sweep", "dims", [](ExperimentConfig& c, std::string_view v) { c.dims = parse_list<int>(v, "sweep.dims"); },
       [](const ExperimentConfig& c) { return join(c.dims); }},
      {"sweep", "d_km",
       [](ExperimentConfig& c, std::string_view v) { c.d_grid_km = parse_list<double>(v, "sweep.d_km"); },
       [](const ExperimentConfig& c) { return join(c.d_grid_km); }},
      {"sweep", "t_s", [](ExperimentConfig& c, std::string_view v) { c.t_grid_s = parse_list<double>(v, "sweep.t_s"); },
       [](const ExperimentConfig& c) { return join(c.t_grid_s); }},
      {"sweep", "freeze_slots",
       [](ExperimentConfig& c, std::string_view v) { c.freeze_grid = parse_list<int>(v, "sweep.freeze_slots"); },
       [](const ExperimentConfig& c) { return join(c.freeze_grid); }},
      {"sweep", "scf_counts",
       [](ExperimentConfig& c, std::string_view v) { c.scf_grid = parse_list<int>(v, "sweep.scf_counts"); },
       [](const ExperimentConfig& c) { return join(c.scf_grid); }},
      {"sweep", "seeds",
       [](ExperimentConfig& c, std::string_view v) { c.seeds = parse_list<std::uint64_t>(v, "sweep.seeds"); },
       [](const ExperimentConfig& c) { return join(c.seeds); }},
      UDMAC_NUM_KEY("sweep", "mc_samples", mc_samples, std::size_t),
      {"sweep", "protocols",
       [](ExperimentConfig& c, std::string_view v) {
         c.protocols.clear();
         for (auto item : split(v, ',')) c.protocols.push_back(sim::protocol_from_string(item));
       },
       [](const ExperimentConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.protocols.size(); ++i) {
           if (i) out += ',';
           out += sim::to_string(c.protocols[i]);
         }
         return out;
       }},
  };
  return table;
}

#undef UDMAC_NUM_KEY

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

geometry::SceneGeometry ExperimentConfig::scene(geometry::Dimension dim) const {
  geometry::SceneGeometry g;
  g.scene_radius_km = scene_radius_km;
  g.comm_range_km = comm_range_km;
  g.height_km = height_km;
  g.speed_km_per_s = speed_kmh / 3600.0;
  g.dim = dim;
  return g;
}

sim::SimConfig ExperimentConfig::sim_config() const {
  sim::SimConfig s;
  s.population = markov::PopulationMix::from_counts(uavs, sim_scf_count);
  s.backoff = backoff;
  s.timing = timing;
  s.tin = tin;
  s.freeze_slots = sim_freeze_slots;
  s.mode_assignment = mode_assignment;
  s.duration_s = sim_duration_s;
  s.seed = seeds.empty() ? 1 : seeds.front();
  s.vemac_frame_slots = vemac_frame_slots;
  s.vemac_slot_us = vemac_slot_us;
  s.channel_policy = channel_policy;
  s.a2a_channels = a2a_channels;
  return s;
}

void ExperimentConfig::validate() const {
  require(!dims.empty(), "sweep.dims is empty");
  require(!d_grid_km.empty(), "sweep.d_km is empty");
  require(!t_grid_s.empty(), "sweep.t_s is empty");
  require(!freeze_grid.empty(), "sweep.freeze_slots is empty");
  require(!seeds.empty(), "sweep.seeds is empty");
  require(!protocols.empty(), "sweep.protocols is empty");
  require(mc_samples >= 1, "sweep.mc_samples must be >= 1");
  require(std::set<int>(dims.begin(), dims.end()).size() == dims.size(), "sweep.dims has duplicates");

  for (int dim : dims) {
    require(dim >= 1 && dim <= 3, "sweep.dims: dimension must be 1, 2 or 3, got " + std::to_string(dim));
    const auto g = scene(geometry::dimension_from_int(dim));
    try {
      g.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[scene] ") + e.what());
    }
    for (double d : d_grid_km) {
      try {
        geometry::case_boundary_time(g, d);
      } catch (const DomainError& e) {
        throw ConfigError("sweep.d_km = " + fmt(d) + " is invalid in " + std::to_string(dim) + "-D: " + e.what());
      }
    }
  }
  for (double t : t_grid_s) require(t >= 0.0, "sweep.t_s values must be >= 0, got " + fmt(t));
  for (int f : freeze_grid) require(f >= 0, "sweep.freeze_slots values must be >= 0");
  for (int k : scf_grid) require(k >= 0 && k <= uavs, "sweep.scf_counts values must lie in [0, mac.uavs]");

  require(uavs >= 1, "mac.uavs must be >= 1");
  require(sim_scf_count >= 0 && sim_scf_count <= uavs, "sim.scf_count must lie in [0, mac.uavs]");
  sim_config().validate();
  markov::check_admissible(timing, tin);
}

std::vector<std::string> preset_names() { return {"paper-2023"}; }

ExperimentConfig preset(std::string_view name) {
  if (name != "paper-2023") {
    throw ConfigError("unknown preset '" + std::string(name) + "' (available: paper-2023)");
  }
  ExperimentConfig c;
  c.d_grid_km = parse_list<double>("0.5:4.5:0.5", "preset");
  c.t_grid_s = parse_list<double>("0:600:60", "preset");
  c.freeze_grid = {0, 25, 50, 100};
  c.seeds = parse_list<std::uint64_t>("1..10", "preset");
  c.sim_duration_s = 2.0;
  c.sim_scf_count = 10;
  return c;
}

void set_value(ExperimentConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
  for (const auto& k : keys()) {
    if (section == k.section && key == k.name) {
      k.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + std::string(section) + "." + std::string(key) + "'");
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form section.key=value");
  }
  set_value(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
            assignment.substr(eq + 1));
}

void apply_ini(ExperimentConfig& cfg, std::istream& in, const std::string& source) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError(source + ": key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      set_value(cfg, section, key, value.get_value<std::string>());
    }
  }
}

void apply_ini_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  apply_ini(cfg, in, path.string());
}

std::string to_ini(const ExperimentConfig& cfg) {
  std::ostringstream os;
  std::string_view section;
  for (const auto& k : keys()) {
    if (section != k.section) {
      if (!section.empty()) os << '\n';
      section = k.section;
      os << '[' << section << "]\n";
    }
    os << k.name << " = " << k.get(cfg) << '\n';
  }
  return os.str();
}

}  // namespace udmac::harness
