#include "doctest.h"
#include "support.h"

#include <fstream>
#include <map>

#include "molpipe/config.h"
#include "molpipe/error.h"

using namespace molpipe;

TEST_CASE("defaults") {
  const Config c;
  CHECK(c.seed == 0);
  CHECK_FALSE(c.k.has_value());
  CHECK(c.alpha == 1.5);
  CHECK(c.special_pairing == SpecialPairing::kMnemonic);
  CHECK_FALSE(c.invalid_as_zero);
  for (const std::string &key: Config::keys())
    CHECK_NOTHROW(c.get(key));
}

TEST_CASE("file, environment, then flags") {
  Config c;
  c.load_text("# comment\nseed = 5\nalpha=2.5  # trailing\n\nk = 30\nspecial_pairing = swapped\n");
  CHECK(c.seed == 5);
  CHECK(c.alpha == 2.5);
  CHECK(*c.k == 30);
  CHECK(c.special_pairing == SpecialPairing::kSwapped);

  const std::map<std::string, std::string> env { { "MOLPIPE_SEED", "9" },
                                                 { "MOLPIPE_INVALID_AS_ZERO", "true" } };
  c.load_env([&](const char *name) -> const char * {
    const auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  CHECK(c.seed == 9);
  CHECK(c.invalid_as_zero);
  CHECK(c.alpha == 2.5);

  c.set("seed", "11");
  CHECK(c.seed == 11);
  c.set("k", "auto");
  CHECK_FALSE(c.k.has_value());
}

TEST_CASE("bad configuration") {
  Config c;
  CHECK_THROWS_AS(c.load_text("nonsense\n"), ConfigError);
  CHECK_THROWS_AS(c.load_text("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(c.set("seed", "-1"), ConfigError);
  CHECK_THROWS_AS(c.set("alpha", "0"), ConfigError);
  CHECK_THROWS_AS(c.set("k", "0.5"), ConfigError);
  CHECK_THROWS_AS(c.set("shard_size", "0"), ConfigError);
  CHECK_THROWS_AS(c.set("invalid_as_zero", "maybe"), ConfigError);
  CHECK_THROWS_AS(c.set("special_pairing", "other"), ConfigError);
  CHECK_THROWS_AS(c.load_file("/nonexistent/molpipe.conf"), IoError);
  try {
    c.load_text("seed = 1\nalpha = x\n", "run.conf");
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("run.conf:2") != std::string::npos);
  }
}

TEST_CASE("load_file") {
  const std::string dir = testsupport::temp_dir("config");
  const std::string path = dir + "/a.conf";
  std::ofstream(path) << "shard_size = 7\nthreads = 2\n";
  Config c;
  c.load_file(path);
  CHECK(c.shard_size == 7);
  CHECK(c.threads == 2);
}
