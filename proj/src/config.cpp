#include "isr/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

} // namespace

double parse_double(const std::string& tok, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw std::runtime_error("config: cannot parse number '" + tok + "' for " +
                             context);
  return v;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("config: cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

ConfigDoc ConfigDoc::parse_string(const std::string& text) {
  ConfigDoc doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: malformed section header at line " +
                                 std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (!doc.sections_.count(section)) {
        doc.sections_[section] = {};
        doc.section_order_.push_back(section);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected 'key = value' at line " +
                               std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " +
                               std::to_string(lineno));
    std::istringstream vs(line.substr(eq + 1));
    std::vector<std::string> toks;
    std::string tok;
    while (vs >> tok) {
      // allow comma separated lists
      while (!tok.empty() && tok.back() == ',') tok.pop_back();
      if (!tok.empty()) toks.push_back(tok);
    }
    doc.set(section, key, toks);
  }
  return doc;
}

const ConfigDoc::Entry* ConfigDoc::find(const std::string& section,
                                        const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return nullptr;
  for (const auto& e : it->second)
    if (e.key == key) {
      consumed_.insert(section + "." + key);
      return &e;
    }
  return nullptr;
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const std::vector<std::string>& ConfigDoc::tokens(const std::string& section,
                                                  const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw std::runtime_error("config: missing required key [" + section + "] " +
                             key);
  return e->toks;
}

double ConfigDoc::get_scalar(const std::string& section,
                             const std::string& key) const {
  const auto& t = tokens(section, key);
  if (t.size() != 1)
    throw std::runtime_error("config: [" + section + "] " + key +
                             " expects a single value");
  return parse_double(t[0], "[" + section + "] " + key);
}

double ConfigDoc::get_scalar(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_scalar(section, key) : fallback;
}

std::pair<double, double> ConfigDoc::get_layered(const std::string& section,
                                                 const std::string& key) const {
  const auto& t = tokens(section, key);
  const std::string ctx = "[" + section + "] " + key;
  if (t.size() == 1) {
    const double v = parse_double(t[0], ctx);
    return {v, v};
  }
  if (t.size() == 2)
    return {parse_double(t[0], ctx), parse_double(t[1], ctx)};
  throw std::runtime_error("config: " + ctx +
                           " expects one value or two (media adventitia)");
}

std::pair<double, double> ConfigDoc::get_layered(
    const std::string& section, const std::string& key,
    std::pair<double, double> fallback) const {
  return has(section, key) ? get_layered(section, key) : fallback;
}

std::vector<double> ConfigDoc::get_values(const std::string& section,
                                          const std::string& key) const {
  const auto& t = tokens(section, key);
  std::vector<double> out;
  out.reserve(t.size());
  for (const auto& s : t)
    out.push_back(parse_double(s, "[" + section + "] " + key));
  return out;
}

std::string ConfigDoc::get_string(const std::string& section,
                                  const std::string& key,
                                  const std::string& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->toks.size() != 1)
    throw std::runtime_error("config: [" + section + "] " + key +
                             " expects a single token");
  return e->toks[0];
}

bool ConfigDoc::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
  const std::string s = get_string(section, key, fallback ? "true" : "false");
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw std::runtime_error("config: [" + section + "] " + key +
                           " expects a boolean, got '" + s + "'");
}

int ConfigDoc::get_int(const std::string& section, const std::string& key,
                       int fallback) const {
  if (!has(section, key)) return fallback;
  const double v = get_scalar(section, key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw std::runtime_error("config: [" + section + "] " + key +
                             " expects an integer");
  return i;
}

void ConfigDoc::set(const std::string& section, const std::string& key,
                    const std::vector<std::string>& toks) {
  if (!sections_.count(section)) {
    sections_[section] = {};
    section_order_.push_back(section);
  }
  for (auto& e : sections_[section])
    if (e.key == key) {
      e.toks = toks;
      return;
    }
  sections_[section].push_back({key, toks});
}

void ConfigDoc::set_scalar(const std::string& section, const std::string& key,
                           double value) {
  std::ostringstream ss;
  ss.precision(17);
  ss << value;
  set(section, key, {ss.str()});
}

std::vector<std::string> ConfigDoc::unconsumed_keys() const {
  std::vector<std::string> out;
  for (const auto& sec : section_order_)
    for (const auto& e : sections_.at(sec)) {
      const std::string id = sec + "." + e.key;
      if (!consumed_.count(id)) out.push_back(id);
    }
  return out;
}

std::string ConfigDoc::serialize() const {
  std::ostringstream ss;
  for (const auto& sec : section_order_) {
    ss << "[" << sec << "]\n";
    for (const auto& e : sections_.at(sec)) {
      ss << e.key << " =";
      for (const auto& t : e.toks) ss << " " << t;
      ss << "\n";
    }
    ss << "\n";
  }
  return ss.str();
}

} // namespace isr
