#include "polylap/config.hpp"

#include <fstream>
#include <sstream>
#include <type_traits>

#include "polylap/error.hpp"
#include "polylap/format.hpp"

namespace polylap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    if constexpr (std::is_floating_point_v<T>) {
      os << format_double(values[i]);
    } else {
      os << values[i];
    }
  }
  return os.str();
}

}  // namespace

void RunConfig::load_text(const std::string& text, const std::string& source) {
  std::istringstream is(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        error(source + ":" + std::to_string(line_no) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      error(source + ":" + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    if (!section.empty() && section != command_) continue;
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      error(source + ":" + std::to_string(line_no) + ": empty key");
      continue;
    }
    values_[key] = trim(line.substr(eq + 1));
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

void RunConfig::remember(const std::string& key, const std::string& value) {
  consumed_.insert(key);
  resolved_[key] = value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) {
  const auto it = values_.find(key);
  const std::string v = it == values_.end() ? fallback : it->second;
  remember(key, v);
  return v;
}

double RunConfig::get_double(const std::string& key, double fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    remember(key, format_double(fallback));
    return fallback;
  }
  remember(key, it->second);
  try {
    return parse_double(it->second, key.c_str());
  } catch (const ValidationError& e) {
    error(e.what());
    return fallback;
  }
}

long long RunConfig::get_int(const std::string& key, long long fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    remember(key, std::to_string(fallback));
    return fallback;
  }
  remember(key, it->second);
  try {
    return parse_int(it->second, key.c_str());
  } catch (const ValidationError& e) {
    error(e.what());
    return fallback;
  }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    remember(key, fallback ? "true" : "false");
    return fallback;
  }
  remember(key, it->second);
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  error(key + ": expected true or false, got '" + it->second + "'");
  return fallback;
}

std::vector<double> RunConfig::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    remember(key, join(fallback));
    return fallback;
  }
  remember(key, it->second);
  std::vector<double> out;
  std::istringstream is(it->second);
  std::string item;
  try {
    while (std::getline(is, item, ',')) {
      if (!trim(item).empty()) out.push_back(parse_double(item, key.c_str()));
    }
  } catch (const ValidationError& e) {
    error(e.what());
    return fallback;
  }
  return out;
}

std::vector<std::size_t> RunConfig::get_size_list(const std::string& key,
                                                  const std::vector<std::size_t>& fallback) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    remember(key, join(fallback));
    return fallback;
  }
  remember(key, it->second);
  std::vector<std::size_t> out;
  std::istringstream is(it->second);
  std::string item;
  try {
    while (std::getline(is, item, ',')) {
      if (trim(item).empty()) continue;
      const long long v = parse_int(item, key.c_str());
      if (v < 0) throw ValidationError(key + ": values must be nonnegative");
      out.push_back(static_cast<std::size_t>(v));
    }
  } catch (const ValidationError& e) {
    error(e.what());
    return fallback;
  }
  return out;
}

void RunConfig::finish() {
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) error("unknown parameter '" + key + "' for command " + command_);
  }
  if (errors_.empty()) return;
  std::ostringstream os;
  os << "invalid configuration (" << errors_.size() << " problem"
     << (errors_.size() == 1 ? "" : "s") << "):";
  for (const auto& e : errors_) os << "\n  - " << e;
  throw ValidationError(os.str());
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  os << "# polylap " << command_ << '\n';
  for (const auto& [key, value] : resolved_) os << key << " = " << value << '\n';
  return os.str();
}

}  // namespace polylap
