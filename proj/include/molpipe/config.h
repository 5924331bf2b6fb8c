#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molpipe/tokenizer.h"

namespace molpipe {

// Pipeline settings. Later sources win: defaults, config file, MOLPIPE_<KEY>
// environment variables, command-line flags.
struct Config {
  std::uint64_t seed = 0;
  std::optional<double> k;  // unset: measured from the library
  double alpha = 1.5;
  std::size_t shard_size = 100000;
  std::string out;
  std::string vocab;
  std::string groups;
  std::string templates;
  bool invalid_as_zero = false;
  SpecialPairing special_pairing = SpecialPairing::kMnemonic;
  unsigned threads = 0;

  static const std::vector<std::string> &keys();

  // Throws ConfigError for unknown keys and unparseable values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  // "key = value" lines, '#' comments, blank lines ignored.
  void load_text(std::string_view text, std::string_view origin = "config");
  void load_file(const std::string &path);
  // Looks up MOLPIPE_<KEY> for every key through `getenv`.
  void load_env(const std::function<const char *(const char *)> &getenv);
};

}  // namespace molpipe
