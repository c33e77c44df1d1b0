#include "wmi/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "wmi/io.hpp"

namespace wmi {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("config: '" + std::string(key) + "' expects " + expected + ", got '" + std::string(value) + "'");
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

long long parse_int(std::string_view key, std::string_view v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

std::string show(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string show(bool v) { return v ? "true" : "false"; }

struct Key {
  const char* name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    auto boolean = [&](const char* name, auto member) {
      k.push_back({name, [=](RunConfig& c, std::string_view v) { member(c) = parse_bool(name, v); },
                   [=](RunConfig c) { return show(member(c)); }});
    };
    auto integer = [&](const char* name, auto member) {
      k.push_back({name,
                   [=](RunConfig& c, std::string_view v) {
                     member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(parse_int(name, v));
                   },
                   [=](RunConfig c) { return std::to_string(member(c)); }});
    };
    auto real = [&](const char* name, auto member) {
      k.push_back({name, [=](RunConfig& c, std::string_view v) { member(c) = parse_double(name, v); },
                   [=](RunConfig c) { return show(member(c)); }});
    };

    boolean("diffusion", [](RunConfig& c) -> bool& { return c.pipeline.diffusion; });
    integer("diffusion-iterations", [](RunConfig& c) -> int& { return c.pipeline.diffusion_params.iterations; });
    real("diffusion-lambda", [](RunConfig& c) -> double& { return c.pipeline.diffusion_params.lambda; });
    real("diffusion-kappa", [](RunConfig& c) -> double& { return c.pipeline.diffusion_params.kappa; });
    k.push_back({"diffusion-conduction",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "rational") c.pipeline.diffusion_params.conduction = Conduction::rational;
                   else if (v == "exponential") c.pipeline.diffusion_params.conduction = Conduction::exponential;
                   else bad_value("diffusion-conduction", v, "'rational' or 'exponential'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.pipeline.diffusion_params.conduction == Conduction::rational ? "rational"
                                                                                                   : "exponential");
                 }});
    integer("mser-delta", [](RunConfig& c) -> int& { return c.pipeline.mser_delta; });
    real("mser-min-area", [](RunConfig& c) -> double& { return c.pipeline.mser_min_area_fraction; });
    real("mser-max-area", [](RunConfig& c) -> double& { return c.pipeline.mser_max_area_fraction; });
    real("mser-max-variation", [](RunConfig& c) -> double& { return c.pipeline.mser_max_variation; });
    integer("ga-population", [](RunConfig& c) -> int& { return c.pipeline.ga.population; });
    integer("ga-generations", [](RunConfig& c) -> int& { return c.pipeline.ga.generations; });
    real("ga-crossover", [](RunConfig& c) -> double& { return c.pipeline.ga.crossover_rate; });
    real("ga-mutation", [](RunConfig& c) -> double& { return c.pipeline.ga.mutation_rate; });
    integer("ga-elitism", [](RunConfig& c) -> int& { return c.pipeline.ga.elitism; });
    k.push_back({"seed",
                 [](RunConfig& c, std::string_view v) {
                   const long long s = parse_int("seed", v);
                   if (s < 0) bad_value("seed", v, "a non-negative integer");
                   c.pipeline.ga.rng_seed = static_cast<std::uint64_t>(s);
                 },
                 [](const RunConfig& c) { return std::to_string(c.pipeline.ga.rng_seed); }});
    real("z-threshold", [](RunConfig& c) -> double& { return c.pipeline.z_threshold; });
    real("dist-min", [](RunConfig& c) -> double& { return c.pipeline.filter.dist_min; });
    real("discard-fraction", [](RunConfig& c) -> double& { return c.pipeline.filter.discard_fraction; });
    boolean("size-constraint", [](RunConfig& c) -> bool& { return c.pipeline.filter.size_constraint; });
    boolean("distance-constraint", [](RunConfig& c) -> bool& { return c.pipeline.filter.distance_constraint; });
    integer("min-lesion-size", [](RunConfig& c) -> int& { return c.pipeline.filter.min_lesion_size; });
    real("dth", [](RunConfig& c) -> double& { return c.pipeline.fine.d_threshold; });
    integer("n-adjacent", [](RunConfig& c) -> int& { return c.pipeline.fine.n_adjacent; });
    integer("threads", [](RunConfig& c) -> int& { return c.pipeline.threads; });
    k.push_back({"out", [](RunConfig& c, std::string_view v) { c.out = std::string(v); },
                 [](const RunConfig& c) { return c.out.string(); }});
    boolean("overlays", [](RunConfig& c) -> bool& { return c.overlays; });
    return k;
  }();
  return keys;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : key_table()) n.emplace_back(k.name);
    return n;
  }();
  return names;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  for (const auto& k : key_table()) {
    if (key == k.name) {
      k.set(config, trim(value));
      return;
    }
  }
  throw ConfigError("config: unknown key '" + std::string(key) + "'");
}

void parse_config(RunConfig& config, std::string_view text, const std::string& origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoErrorKind::missing_file, "config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  parse_config(config, ss.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& k : key_table()) items.emplace_back(k.name, k.get(config));
  return items;
}

std::string dump_config(const RunConfig& config) {
  std::string out;
  for (const auto& [key, value] : config_items(config)) out += key + " = " + value + '\n';
  return out;
}

}  // namespace wmi
