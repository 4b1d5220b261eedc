#include "aelab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aelab/error.hpp"

namespace aelab {

namespace {

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size();
}

bool parse_ll(const std::string& s, long long& out) {
  const std::string t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc{} && ptr == t.data() + t.size() && !t.empty();
}

std::string canonical(const ParamSpec& spec, const std::string& value) {
  auto fail = [&](const char* what) -> std::string {
    throw UsageError("config key '" + spec.key + "': expected " + what + ", got '" + value + "'");
  };
  switch (spec.type) {
    case ParamType::Int: {
      long long v = 0;
      if (!parse_ll(value, v)) return fail("an integer");
      return std::to_string(v);
    }
    case ParamType::Real: {
      double v = 0;
      if (!parse_double(value, v)) return fail("a real number");
      return format_real(v);
    }
    case ParamType::Bool: {
      const std::string t = trim(value);
      if (t == "true" || t == "1") return "true";
      if (t == "false" || t == "0") return "false";
      return fail("true or false");
    }
    case ParamType::String:
      return trim(value);
    case ParamType::RealList:
      try {
        return format_real_list(parse_real_list(value));
      } catch (const UsageError&) {
        return fail("a list of reals");
      }
  }
  return value;
}

std::string json_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_real(v.get<double>());
  throw UsageError("config key '" + key + "': unsupported JSON value");
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.empty()) return out;
  if (t.find(':') != std::string::npos) {
    std::stringstream ss(t);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c);
    double lo = 0, hi = 0;
    long long n = 0;
    if (!parse_double(a, lo) || !parse_double(b, hi) || !parse_ll(c, n) || n < 1)
      throw UsageError("range must look like lo:hi:count, got '" + text + "'");
    if (n == 1) return {lo};
    for (long long i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0;
    if (!parse_double(item, v)) throw UsageError("not a real number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string format_real_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_real(values[i]);
  return out;
}

ExperimentConfig::ExperimentConfig(std::string experiment, const Schema& schema)
    : experiment_(std::move(experiment)), schema_(schema) {
  for (const auto& s : schema_) values_.emplace_back(s.key, canonical(s, s.default_value));
}

const ParamSpec& ExperimentConfig::spec(const std::string& key) const {
  for (const auto& s : schema_)
    if (s.key == key) return s;
  throw UsageError("unknown config key '" + key + "' for experiment " + experiment_);
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  spec(key);
  return *find_value(values_, key);
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const std::string c = canonical(spec(key), value);
  for (auto& [k, v] : values_)
    if (k == key) v = c;
}

long long ExperimentConfig::get_int(const std::string& key) const {
  long long v = 0;
  parse_ll(raw(key), v);
  return v;
}

std::size_t ExperimentConfig::get_count(const std::string& key) const {
  const long long v = get_int(key);
  if (v < 0) throw UsageError("config key '" + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

double ExperimentConfig::get_real(const std::string& key) const { return std::stod(raw(key)); }

bool ExperimentConfig::get_bool(const std::string& key) const { return raw(key) == "true"; }

const std::string& ExperimentConfig::get_string(const std::string& key) const { return raw(key); }

std::vector<double> ExperimentConfig::get_reals(const std::string& key) const { return parse_real_list(raw(key)); }

KeyValues parse_config_text(const std::string& text) {
  const std::string t = trim(text);
  KeyValues kv;
  if (!t.empty() && t[0] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("config JSON: ") + e.what());
    }
    for (const auto& [key, v] : j.items()) {
      if (key == "meta" && v.is_object()) {
        for (const auto& [mk, mv] : v.items())
          kv.emplace_back("meta." + mk, mv.is_primitive() ? json_scalar(mv, "meta." + mk) : mv.dump());
      } else if (v.is_array()) {
        std::vector<double> xs;
        for (const auto& e : v) {
          if (!e.is_number()) throw UsageError("config key '" + key + "': arrays must hold numbers");
          xs.push_back(e.get<double>());
        }
        kv.emplace_back(key, format_real_list(xs));
      } else {
        kv.emplace_back(key, json_scalar(v, key));
      }
    }
    return kv;
  }
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string l = trim(line);
    if (l.empty() || l[0] == '#') continue;
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    kv.emplace_back(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ExperimentConfig make_config(const std::string& experiment, const Schema& schema, const KeyValues& raw) {
  ExperimentConfig cfg(experiment, schema);
  for (const auto& [k, v] : raw) {
    if (k.rfind("meta.", 0) == 0) continue;
    if (k == "experiment") {
      if (v != experiment) throw UsageError("config names experiment '" + v + "', not '" + experiment + "'");
      continue;
    }
    cfg.set(k, v);
  }
  return cfg;
}

}  // namespace aelab
