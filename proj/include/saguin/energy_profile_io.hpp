#ifndef SAGUIN_ENERGY_PROFILE_IO_HPP
#define SAGUIN_ENERGY_PROFILE_IO_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "saguin/energy_lifetime.hpp"
#include "saguin/error.hpp"
#include "saguin/key_value.hpp"

namespace saguin {

// Profile text format, one key per line:
//   name, supply_voltage_v, tx_current_a, sleep_current_a, overhead_energy_j
//   states = wake_up, rx1_wait, ...        (execution order)
//   state.<name>.duration_s / state.<name>.current_a
// Inside experiment configs the same keys appear under a "profile." prefix.

inline std::string profile_to_text(const ClassAProfile& p, std::string_view prefix = "") {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += fmt::format("{}{} = {}\n", prefix, key, value);
  };
  line("name", p.name);
  line("supply_voltage_v", kv::format_number(p.supply_voltage_v));
  line("tx_current_a", kv::format_number(p.tx_current_a));
  line("sleep_current_a", kv::format_number(p.sleep_current_a));
  line("overhead_energy_j", kv::format_number(p.overhead_energy_j));
  std::string names;
  for (std::size_t i = 0; i < p.states.size(); ++i) names += (i ? ", " : "") + p.states[i].name;
  line("states", names);
  for (const auto& s : p.states) {
    line(fmt::format("state.{}.duration_s", s.name), kv::format_number(s.duration_s));
    line(fmt::format("state.{}.current_a", s.name), kv::format_number(s.current_a));
  }
  return out;
}

/// Builds a profile from entries whose keys start with `prefix`. Entries
/// without the prefix are ignored; unknown prefixed keys are errors.
inline ClassAProfile profile_from_entries(const kv::Entries& entries, std::string_view prefix = "") {
  ClassAProfile p = ClassAProfile::tx_only();
  p.name = "custom";
  std::vector<std::string> order;
  bool have_states = false;
  kv::Entries state_keys;
  for (const auto& [full_key, value] : entries) {
    if (full_key.compare(0, prefix.size(), prefix) != 0) continue;
    const std::string key = full_key.substr(prefix.size());
    if (key == "name") {
      p.name = value;
    } else if (key == "supply_voltage_v") {
      p.supply_voltage_v = kv::to_double(full_key, value);
    } else if (key == "tx_current_a") {
      p.tx_current_a = kv::to_double(full_key, value);
    } else if (key == "sleep_current_a") {
      p.sleep_current_a = kv::to_double(full_key, value);
    } else if (key == "overhead_energy_j") {
      p.overhead_energy_j = kv::to_double(full_key, value);
    } else if (key == "states") {
      have_states = true;
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto name = kv::trim(rest.substr(0, comma));
        if (name.empty()) throw ConfigError(fmt::format("'{}': empty state name", full_key));
        order.emplace_back(name);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else if (key.rfind("state.", 0) == 0) {
      state_keys.emplace_back(key, value);
    } else {
      throw ConfigError(fmt::format("unknown profile key '{}'", full_key));
    }
  }
  for (const auto& name : order) p.states.push_back(DeviceState{name, 0.0, 0.0});
  std::vector<int> seen(order.size() * 2, 0);
  for (const auto& [key, value] : state_keys) {
    const auto dot = key.rfind('.');
    const std::string name = key.substr(6, dot - 6);
    const std::string field = key.substr(dot + 1);
    std::size_t i = 0;
    while (i < order.size() && order[i] != name) ++i;
    if (!have_states || i == order.size())
      throw ConfigError(fmt::format("state '{}' is not listed in '{}states'", name, prefix));
    if (field == "duration_s") {
      p.states[i].duration_s = kv::to_double(key, value);
      ++seen[2 * i];
    } else if (field == "current_a") {
      p.states[i].current_a = kv::to_double(key, value);
      ++seen[2 * i + 1];
    } else {
      throw ConfigError(fmt::format("unknown state field '{}{}'", prefix, key));
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    if (seen[2 * i] != 1 || seen[2 * i + 1] != 1)
      throw ConfigError(fmt::format("state '{}' needs duration_s and current_a", order[i]));
  try {
    validate(p);
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("profile '{}': {}", p.name, e.what()));
  }
  return p;
}

inline ClassAProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open profile '{}'", path.string()));
  return profile_from_entries(kv::parse(in, path.string()));
}

inline void save_profile(const ClassAProfile& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write profile '{}'", path.string()));
  out << profile_to_text(p);
}

/// "default" is the built-in placeholder table; other names are looked up
/// as <dir>/<name>.profile, then as a literal path.
inline ClassAProfile resolve_profile(const std::string& name, const std::filesystem::path& dir) {
  if (name == "default") return ClassAProfile::placeholder();
  if (name == "tx_only") return ClassAProfile::tx_only();
  const auto in_dir = dir / (name + ".profile");
  if (std::filesystem::exists(in_dir)) return load_profile(in_dir);
  if (std::filesystem::exists(name)) return load_profile(name);
  throw ConfigError(fmt::format("energy profile '{}' not found (looked in '{}')", name, dir.string()));
}

}  // namespace saguin

#endif  // SAGUIN_ENERGY_PROFILE_IO_HPP
