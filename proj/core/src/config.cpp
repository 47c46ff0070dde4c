#include "risim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "risim/errors.hpp"

namespace risim {

namespace {

std::string trim(const std::string& s) {
  auto begin = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  auto end = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return begin < end ? std::string(begin, end) : std::string();
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("key '" + key + "': '" + text + "' is not a number");
  }
}

long long to_int(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("key '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

// Resolves an override key: exact match, or a unique known key whose last
// dotted component equals it.
std::optional<std::string> resolve_key(const std::string& key) {
  const auto& known = KeyValueConfig::known_keys();
  if (known.count(key)) return key;
  if (key.find('.') != std::string::npos) return std::nullopt;
  std::optional<std::string> found;
  for (const auto& k : known) {
    const auto dot = k.rfind('.');
    if (dot != std::string::npos && k.substr(dot + 1) == key) {
      if (found) return std::nullopt;
      found = k;
    }
  }
  return found;
}

}  // namespace

std::vector<std::string> split_trimmed(const std::string& text, char separator) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(text);
  while (std::getline(is, field, separator)) {
    field = trim(field);
    if (!field.empty()) out.push_back(field);
  }
  return out;
}

const std::set<std::string>& KeyValueConfig::known_keys() {
  static const std::set<std::string> keys = {
      "scene.tx",
      "scene.rx",
      "ris.rows",
      "ris.cols",
      "ris.spacing",
      "ris.spacing_wavelengths",
      "ris.origin",
      "grid.range_points",
      "grid.crossrange_points",
      "grid.spacing",
      "grid.spacing_wavelengths",
      "grid.origin",
      "radio.carrier_hz",
      "radio.speed",
      "radio.eta",
      "radio.pulse_spectrum",
      "noise.sigma",
      "targets.positions",
      "targets.indices",
      "targets.amplitudes",
      "targets.snap",
      "targets.shape",
      "experiment.kind",
      "experiment.phase_sources",
      "experiment.n_pulses_list",
      "experiment.ris_sizes",
      "experiment.num_realizations",
      "experiment.master_seed",
      "experiment.record_raw",
      "design.num_pulses",
      "design.phase_source",
      "design.step_size",
      "design.max_iter",
      "design.seed",
      "design.objective_tolerance",
      "design.normalize_gradient",
      "recovery.lambda",
      "recovery.lambda_fraction",
      "recovery.max_iterations",
      "recovery.tolerance",
      "run.threads",
  };
  return keys;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string> unknown;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      unknown.push_back(key);
      continue;
    }
    cfg.values_[key] = value;
  }
  if (!unknown.empty()) {
    std::string msg = origin + ": unknown keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw InvalidArgument(msg);
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

void KeyValueConfig::apply_overrides(const std::vector<std::string>& overrides) {
  std::vector<std::string> unknown;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("override '" + o + "' is not of the form key=value");
    }
    const auto key = resolve_key(trim(o.substr(0, eq)));
    if (!key) {
      unknown.push_back(trim(o.substr(0, eq)));
      continue;
    }
    values_[*key] = trim(o.substr(eq + 1));
  }
  if (!unknown.empty()) {
    std::string msg = "unknown override keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw InvalidArgument(msg);
  }
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (!known_keys().count(key)) throw InvalidArgument("unknown key: " + key);
  values_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string KeyValueConfig::require_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument(origin_ + ": missing required key '" + key + "'");
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double(key, it->second);
}

std::optional<double> KeyValueConfig::get_optional_double(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return std::nullopt;
  return to_double(key, it->second);
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_int(key, it->second);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("key '" + key + "': '" + it->second + "' is not a boolean");
}

Vec3 KeyValueConfig::get_vec3(const std::string& key, const Vec3& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto parts = split_trimmed(it->second, ',');
  if (parts.size() != 3) throw InvalidArgument("key '" + key + "' needs three comma-separated values");
  return {to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])};
}

Complex KeyValueConfig::get_complex(const std::string& key, Complex fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto parts = split_trimmed(it->second, ',');
  if (parts.size() == 1) return {to_double(key, parts[0]), 0.0};
  if (parts.size() == 2) return {to_double(key, parts[0]), to_double(key, parts[1])};
  throw InvalidArgument("key '" + key + "' needs 're' or 're, im'");
}

std::vector<long long> KeyValueConfig::get_int_list(const std::string& key) const {
  std::vector<long long> out;
  for (const auto& p : get_list(key)) out.push_back(to_int(key, p));
  return out;
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key, char separator) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return {};
  return split_trimmed(it->second, separator);
}

std::string KeyValueConfig::to_string() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace risim
