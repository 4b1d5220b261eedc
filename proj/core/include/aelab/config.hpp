#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aelab/io.hpp"

namespace aelab {

enum class ParamType { Int, Real, Bool, String, RealList };

struct ParamSpec {
  std::string key;
  ParamType type;
  std::string default_value;
  std::string help;
};

using Schema = std::vector<ParamSpec>;

/// Validated configuration of one registered experiment. Values are stored in
/// canonical text form, in schema order, so that a manifest written from them
/// parses back to the same configuration.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;
  ExperimentConfig(std::string experiment, const Schema& schema);

  const std::string& experiment() const { return experiment_; }
  const KeyValues& values() const { return values_; }

  /// Throws UsageError for keys outside the schema or values of the wrong type.
  void set(const std::string& key, const std::string& value);

  long long get_int(const std::string& key) const;
  std::size_t get_count(const std::string& key) const;
  double get_real(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  std::vector<double> get_reals(const std::string& key) const;

 private:
  const ParamSpec& spec(const std::string& key) const;
  const std::string& raw(const std::string& key) const;

  std::string experiment_;
  Schema schema_;
  KeyValues values_;
};

/// Flat "key=value" lines, or a JSON object whose values are scalars or
/// arrays of numbers; a nested "meta" object flattens to "meta.*" keys.
KeyValues parse_config_text(const std::string& text);
KeyValues read_config_file(const std::filesystem::path& path);

/// Applies `raw` over the schema defaults. An "experiment" key must match the
/// given name; "meta.*" keys are ignored.
ExperimentConfig make_config(const std::string& experiment, const Schema& schema, const KeyValues& raw);

/// "0.1,0.2,0.3" or "lo:hi:count" (inclusive, evenly spaced).
std::vector<double> parse_real_list(const std::string& text);
std::string format_real_list(const std::vector<double>& values);

}  // namespace aelab
