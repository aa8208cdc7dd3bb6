#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/coefficients.hpp"
#include "frontlab/entire.hpp"

namespace frontlab {

/// Flat `key = value` configuration with dotted sections and `#` comments.
/// Unknown keys are rejected at use time (see validate_keys), parse errors
/// carry the line number.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  std::string get_str(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& dflt) const;
  double get_num(const std::string& key) const;
  double get_num(const std::string& key, double dflt) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t dflt) const;

  /// Rejects keys outside `allowed` with a lined ConfigError.
  void validate_keys(const std::vector<std::string>& allowed) const;

  /// Resolved key/value view in file order (manifest echo).
  const std::vector<std::pair<std::string, std::string>>& items() const {
    return items_;
  }

 private:
  std::map<std::string, std::string> map_;
  std::map<std::string, int> lines_;
  std::vector<std::pair<std::string, std::string>> items_;
  std::string origin_;
};

/// Documented field keys: kind, a0, B0, q0, bumps, periodic.cell,
/// periodic.amp, random.model, random.intensity, random.amplitude,
/// random.mollifier, random.seed, random.window.
CoefficientField field_from_config(const Config& c);
/// Keys consumed by field_from_config (for validate_keys composition).
std::vector<std::string> field_config_keys();

/// "1.5:1.0,1.7:0.5" -> atoms (lambda:weight pairs)
SpectralMeasure parse_measure(const std::string& text);

/// "0:1:0.5;3:0.7:-0.2" -> bump triples center:width:amplitude
std::vector<Bump> parse_bumps(const std::string& text);

}  // namespace frontlab
