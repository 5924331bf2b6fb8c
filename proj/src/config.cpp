#include "molpipe/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "molpipe/error.h"

namespace molpipe {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

template <class T>
T number(std::string_view key, std::string_view v) {
  T out {};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("bad value for " + std::string(key) + ": '"
                      + std::string(v) + "'");
  return out;
}

bool boolean(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on")
    return true;
  if (v == "0" || v == "false" || v == "no" || v == "off")
    return false;
  throw ConfigError("bad value for " + std::string(key) + ": '"
                    + std::string(v) + "'");
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

const std::vector<std::string> &Config::keys() {
  static const std::vector<std::string> k = {
    "seed", "k", "alpha", "shard_size", "out", "vocab", "groups",
    "templates", "invalid_as_zero", "special_pairing", "threads",
  };
  return k;
}

void Config::set(std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  if (key == "seed") {
    seed = number<std::uint64_t>(key, v);
  } else if (key == "k") {
    if (v.empty() || v == "auto") {
      k.reset();
    } else {
      const double x = number<double>(key, v);
      if (!(x >= 1.0))
        throw ConfigError("k must be >= 1");
      k = x;
    }
  } else if (key == "alpha") {
    const double x = number<double>(key, v);
    if (!(x > 0.0))
      throw ConfigError("alpha must be > 0");
    alpha = x;
  } else if (key == "shard_size") {
    shard_size = number<std::size_t>(key, v);
    if (shard_size == 0)
      throw ConfigError("shard_size must be >= 1");
  } else if (key == "out") {
    out = v;
  } else if (key == "vocab") {
    vocab = v;
  } else if (key == "groups") {
    groups = v;
  } else if (key == "templates") {
    templates = v;
  } else if (key == "invalid_as_zero") {
    invalid_as_zero = boolean(key, v);
  } else if (key == "special_pairing") {
    try {
      special_pairing = parse_special_pairing(v);
    } catch (const Error &e) {
      throw ConfigError(e.what());
    }
  } else if (key == "threads") {
    threads = number<unsigned>(key, v);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::string Config::get(std::string_view key) const {
  if (key == "seed")
    return std::to_string(seed);
  if (key == "k")
    return k ? format_double(*k) : "auto";
  if (key == "alpha")
    return format_double(alpha);
  if (key == "shard_size")
    return std::to_string(shard_size);
  if (key == "out")
    return out;
  if (key == "vocab")
    return vocab;
  if (key == "groups")
    return groups;
  if (key == "templates")
    return templates;
  if (key == "invalid_as_zero")
    return invalid_as_zero ? "true" : "false";
  if (key == "special_pairing")
    return std::string(to_string(special_pairing));
  if (key == "threads")
    return std::to_string(threads);
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void Config::load_text(std::string_view text, std::string_view origin) {
  std::istringstream in { std::string(text) };
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no)
                        + ": expected key = value");
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError &e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no)
                        + ": " + e.what());
    }
  }
}

void Config::load_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  load_text(text.str(), path);
}

void Config::load_env(const std::function<const char *(const char *)> &getenv) {
  for (const std::string &key: keys()) {
    std::string name = "MOLPIPE_" + key;
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (const char *v = getenv(name.c_str())) {
      try {
        set(key, v);
      } catch (const ConfigError &e) {
        throw ConfigError(name + ": " + e.what());
      }
    }
  }
}

}  // namespace molpipe
