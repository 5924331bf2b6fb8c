#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "json.hpp"
#include "molpipe/dataset.h"
#include "molpipe/error.h"

namespace molpipe {
namespace fs = std::filesystem;
namespace {

std::string shard_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shard-%05zu.jsonl", index);
  return buf;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw Error("SHA-256 initialisation failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256 &) = delete;
  Sha256 &operator=(const Sha256 &) = delete;

  void update(std::string_view data) {
    EVP_DigestUpdate(ctx_, data.data(), data.size());
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
      out += kDigits[md[i] >> 4];
      out += kDigits[md[i] & 0xf];
    }
    return out;
  }

 private:
  EVP_MD_CTX *ctx_;
};

}  // namespace

struct JsonlWriter::State {
  fs::path dir;
  std::size_t shard_size;
  Manifest manifest;
  std::ofstream out;
  std::unique_ptr<Sha256> digest;
  std::size_t in_shard = 0;
  std::vector<fs::path> created;
  bool finished = false;
};

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["records"] = records;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const ShardInfo &s: shards)
    list.push_back({ { "path", s.path }, { "records", s.records },
                     { "sha256", s.sha256 } });
  j["shards"] = std::move(list);
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto &[k, v]: config)
    cfg[k] = v;
  j["config"] = std::move(cfg);
  return j.dump(2) + "\n";
}

JsonlWriter::JsonlWriter(fs::path out_dir, std::size_t shard_size,
                         std::vector<std::pair<std::string, std::string>> config)
    : state_(new State { std::move(out_dir), shard_size, {}, {}, {}, 0, {}, false }) {
  state_->manifest.config = std::move(config);
  if (shard_size == 0) {
    delete state_;
    throw DomainError("shard size must be at least 1");
  }
  std::error_code ec;
  fs::create_directories(state_->dir, ec);
  if (ec) {
    const std::string msg = "cannot create " + state_->dir.string() + ": "
                            + ec.message();
    delete state_;
    throw IoError(msg);
  }
}

JsonlWriter::~JsonlWriter() {
  if (!state_->finished)
    cleanup();
  delete state_;
}

void JsonlWriter::cleanup() noexcept {
  state_->out.close();
  std::error_code ec;
  for (const fs::path &p: state_->created)
    fs::remove(p, ec);
  state_->created.clear();
}

void JsonlWriter::close_shard() {
  State &s = *state_;
  if (!s.out.is_open())
    return;
  s.out.close();
  if (!s.out)
    throw IoError("failed writing " + s.created.back().string());
  s.manifest.shards.push_back({ s.created.back().filename().string(),
                                s.in_shard, s.digest->hex() });
  s.digest.reset();
  s.in_shard = 0;
}

void JsonlWriter::write(const InstructionRecord &r) {
  State &s = *state_;
  if (s.finished)
    throw Error("write after finish");
  if (s.in_shard == s.shard_size)
    close_shard();
  if (!s.out.is_open()) {
    const fs::path path = s.dir / shard_name(s.manifest.shards.size());
    s.out.open(path, std::ios::binary | std::ios::trunc);
    if (!s.out)
      throw IoError("cannot open " + path.string() + " for writing");
    s.created.push_back(path);
    s.digest = std::make_unique<Sha256>();
  }
  const std::string line = to_jsonl(r) + "\n";
  s.out << line;
  if (!s.out)
    throw IoError("failed writing " + s.created.back().string());
  s.digest->update(line);
  ++s.in_shard;
  ++s.manifest.records;
}

Manifest JsonlWriter::finish() {
  State &s = *state_;
  close_shard();
  const fs::path path = s.dir / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  s.created.push_back(path);
  out << s.manifest.to_json();
  out.close();
  if (!out)
    throw IoError("failed writing " + path.string());
  s.finished = true;
  return s.manifest;
}

Manifest emit_jsonl(const std::vector<InstructionRecord> &records,
                    std::size_t shard_size, const fs::path &out_dir,
                    std::vector<std::pair<std::string, std::string>> config) {
  JsonlWriter writer(out_dir, shard_size, std::move(config));
  for (const InstructionRecord &r: records)
    writer.write(r);
  return writer.finish();
}

std::vector<InstructionRecord> read_dataset(const fs::path &dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + manifest_path.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw FormatError("bad manifest: " + std::string(e.what()));
  }
  std::vector<InstructionRecord> out;
  try {
    for (const auto &shard: manifest.at("shards")) {
      const fs::path path = dir / shard.at("path").get<std::string>();
      std::ifstream sin(path, std::ios::binary);
      if (!sin)
        throw IoError("cannot read " + path.string());
      Sha256 digest;
      std::string line;
      std::size_t n = 0;
      while (std::getline(sin, line)) {
        digest.update(line);
        digest.update("\n");
        out.push_back(parse_jsonl(line));
        ++n;
      }
      if (digest.hex() != shard.at("sha256").get<std::string>())
        throw FormatError("digest mismatch for " + path.string());
      if (n != shard.at("records").get<std::size_t>())
        throw FormatError("record count mismatch for " + path.string());
    }
  } catch (const nlohmann::json::exception &e) {
    throw FormatError("bad manifest: " + std::string(e.what()));
  }
  return out;
}

}  // namespace molpipe
