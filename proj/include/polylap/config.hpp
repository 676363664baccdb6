#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace polylap {

/// Flat key=value run configuration.
///
///   # comment
///   seed = 7            <- global, applies to every command
///   [sweep]
///   n_grid = 1024,2048  <- only read by the `sweep` command
///
/// Typed getters never throw; problems are collected and reported together
/// by finish(), which also rejects keys no getter asked for.
class RunConfig {
 public:
  explicit RunConfig(std::string command) : command_(std::move(command)) {}

  /// Loads the global section and the section named after the command.
  void load_text(const std::string& text, const std::string& source);
  void load_file(const std::string& path);
  /// Later calls win; used for --key=value flags.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  long long get_int(const std::string& key, long long fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback);
  std::vector<std::size_t> get_size_list(const std::string& key,
                                         const std::vector<std::size_t>& fallback);

  /// Records a validation problem found by the caller.
  void error(const std::string& message) { errors_.push_back(message); }
  /// Throws a single ValidationError listing every problem.
  void finish();

  /// Resolved parameters (explicit values and consulted defaults), one
  /// "key = value" line each, sorted by key.
  std::string echo() const;
  const std::string& command() const { return command_; }

 private:
  void remember(const std::string& key, const std::string& value);

  std::string command_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> resolved_;
  std::set<std::string> consumed_;
  std::vector<std::string> errors_;
};

}  // namespace polylap
