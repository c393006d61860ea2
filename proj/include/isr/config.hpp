#ifndef ISR_CONFIG_HPP
#define ISR_CONFIG_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

namespace isr {

/// Parsed key-value configuration document.
///
/// Format: INI-like sections with whitespace-separated multi-token values,
///   [kinetics]
///   eta_P = 1.0e-6         # autocrine secretion coefficient
///   eta_S = 0.4 0.2        # per-layer: media adventitia
/// '#' and ';' start comments. Order of keys is preserved so a document can
/// be re-serialized verbatim (modulo comments/whitespace).
class ConfigDoc {
public:
  ConfigDoc() = default;

  static ConfigDoc parse_file(const std::string& path);
  static ConfigDoc parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;

  /// Raw tokens of a key; throws if absent.
  const std::vector<std::string>& tokens(const std::string& section,
                                         const std::string& key) const;

  double get_scalar(const std::string& section, const std::string& key) const;
  double get_scalar(const std::string& section, const std::string& key,
                    double fallback) const;

  /// One or two values; a single value is broadcast to both layers.
  std::pair<double, double> get_layered(const std::string& section,
                                        const std::string& key,
                                        std::pair<double, double> fallback) const;
  std::pair<double, double> get_layered(const std::string& section,
                                        const std::string& key) const;

  std::vector<double> get_values(const std::string& section,
                                 const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;

  void set(const std::string& section, const std::string& key,
           const std::vector<std::string>& toks);
  void set_scalar(const std::string& section, const std::string& key,
                  double value);

  /// Keys seen by any getter so far; used to reject unknown keys.
  std::vector<std::string> unconsumed_keys() const;

  std::string serialize() const;

  const std::vector<std::string>& section_order() const { return section_order_; }

private:
  struct Entry {
    std::string key;
    std::vector<std::string> toks;
  };
  std::vector<std::string> section_order_;
  std::map<std::string, std::vector<Entry>> sections_;
  mutable std::set<std::string> consumed_;

  const Entry* find(const std::string& section, const std::string& key) const;
};

double parse_double(const std::string& tok, const std::string& context);

} // namespace isr

#endif
