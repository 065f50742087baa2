#include "seqmd/models/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "seqmd/error.h"
#include "seqmd/models/factory.h"
#include "seqmd/models/md_adaptor.h"
#include "seqmd/models/seq_model.h"

namespace seqmd {
namespace {

constexpr std::size_t kMagicLen = sizeof(kCheckpointMagic) - 1;

void PutU64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

bool GetU64(std::istream& in, std::uint64_t& v) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return true;
}

bool StartsWith(const std::string& s, const std::string& prefix) {
  return s.size() > prefix.size() && s.compare(0, prefix.size(), prefix) == 0 &&
         s[prefix.size()] == '.';
}

// The task a SEQ surgery target may add: present in target, absent in source.
std::optional<Task> AddedTask(const ModelSpec& source, const ModelSpec& target) {
  if (target.tasks.size() != source.tasks.size() + 1) return std::nullopt;
  std::optional<Task> added;
  for (Task t : target.tasks) {
    if (std::find(source.tasks.begin(), source.tasks.end(), t) != source.tasks.end()) continue;
    if (added) return std::nullopt;
    added = t;
  }
  for (Task t : source.tasks) {
    if (std::find(target.tasks.begin(), target.tasks.end(), t) == target.tasks.end()) {
      return std::nullopt;
    }
  }
  return added;
}

}  // namespace

const Checkpoint::Entry* Checkpoint::Find(const std::string& name) const {
  for (const Entry& e : params) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Checkpoint Snapshot(const RankingModel& model) {
  Checkpoint ck;
  ck.spec = model.spec();
  ck.seed_lineage = model.seed_lineage();
  for (const Parameter* p : model.params().All()) ck.params.push_back({p->name, p->value});
  return ck;
}

void WriteCheckpoint(const Checkpoint& ck, std::ostream& out) {
  Json header = Json::object();
  header["format"] = "seqmd-checkpoint";
  header["version"] = kCheckpointVersion;
  header["spec"] = ck.spec;
  header["seed_lineage"] = ck.seed_lineage;
  Json params = Json::array();
  for (const auto& e : ck.params) {
    params.push_back({{"name", e.name}, {"shape", e.value.shape()}});
  }
  header["params"] = std::move(params);
  const std::string text = header.dump();
  out.write(kCheckpointMagic, kMagicLen);
  PutU64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& e : ck.params) {
    for (double v : e.value.data()) PutU64(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw Error("failed to write checkpoint");
}

void SaveCheckpoint(const RankingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  WriteCheckpoint(Snapshot(model), out);
}

Checkpoint ReadCheckpoint(std::istream& in) {
  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen) || std::memcmp(magic, kCheckpointMagic, kMagicLen) != 0) {
    throw FormatError("not a seqmd checkpoint (bad magic)");
  }
  std::uint64_t len = 0;
  if (!GetU64(in, len) || len > (std::uint64_t{1} << 32)) {
    throw FormatError("checkpoint header length missing or implausible");
  }
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) {
    throw FormatError("checkpoint header truncated");
  }
  Checkpoint ck;
  Json header;
  try {
    header = Json::parse(text);
    if (header.at("format") != "seqmd-checkpoint") throw FormatError("unknown checkpoint format");
    if (header.at("version").get<int>() != kCheckpointVersion) {
      throw FormatError("unsupported checkpoint version " + header.at("version").dump());
    }
    ck.spec = header.at("spec").get<ModelSpec>();
    ck.seed_lineage = header.at("seed_lineage").get<std::vector<std::uint64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  std::set<std::string> seen;
  for (const Json& p : header.at("params")) {
    std::string name;
    Shape shape;
    try {
      name = p.at("name").get<std::string>();
      shape = p.at("shape").get<Shape>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("checkpoint parameter entry: ") + e.what());
    }
    if (!seen.insert(name).second) throw FormatError("duplicate parameter '" + name + "'");
    Tensor value(shape);
    for (double& v : value.data()) {
      std::uint64_t bits = 0;
      if (!GetU64(in, bits)) throw FormatError("payload of parameter '" + name + "' is truncated");
      v = std::bit_cast<double>(bits);
      if (!std::isfinite(v)) {
        throw FormatError("parameter '" + name + "' holds a non-finite value");
      }
    }
    ck.params.push_back({std::move(name), std::move(value)});
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("checkpoint has trailing bytes after the last parameter");
  }
  return ck;
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  return ReadCheckpoint(in);
}

void RestoreParameters(const Checkpoint& ck, RankingModel& model) {
  for (const auto& e : ck.params) {
    Parameter* p = model.params().Find(e.name);
    if (!p) throw FormatError("unknown parameter '" + e.name + "' in checkpoint");
    if (p->value.shape() != e.value.shape()) {
      throw FormatError("shape mismatch on parameter '" + e.name + "': checkpoint " +
                        ShapeToString(e.value.shape()) + ", model " +
                        ShapeToString(p->value.shape()));
    }
  }
  for (const Parameter* p : std::as_const(model).params().All()) {
    if (!ck.Find(p->name)) throw FormatError("checkpoint lacks parameter '" + p->name + "'");
  }
  for (const auto& e : ck.params) model.params().Get(e.name).value = e.value;
}

std::unique_ptr<RankingModel> LoadModel(const Checkpoint& ck,
                                        const std::optional<ModelSpec>& target) {
  const ModelSpec& spec = target ? *target : ck.spec;
  auto model = BuildModel(spec);
  std::optional<Task> added;
  if (spec.tasks != ck.spec.tasks) {
    if (spec.architecture != Architecture::kSeq || ck.spec.architecture != Architecture::kSeq) {
      throw ConfigError("task-set surgery requires a seq checkpoint and a seq target");
    }
    added = AddedTask(ck.spec, spec);
    if (!added) throw ConfigError("surgery can only add exactly one task");
  }
  for (const auto& e : ck.params) {
    Parameter* p = model->params().Find(e.name);
    if (!p) throw FormatError("unknown parameter '" + e.name + "' in checkpoint");
    if (p->value.shape() != e.value.shape()) {
      throw FormatError("shape mismatch on parameter '" + e.name + "': checkpoint " +
                        ShapeToString(e.value.shape()) + ", model " +
                        ShapeToString(p->value.shape()));
    }
    p->value = e.value;
  }
  for (const Parameter* p : std::as_const(*model).params().All()) {
    if (ck.Find(p->name)) continue;
    const bool fresh = added && (StartsWith(p->name, SeqModel::TokenPrefix(*added)) ||
                                 StartsWith(p->name, MdAdaptor::MaskPrefix(*added)));
    if (!fresh) throw FormatError("checkpoint lacks parameter '" + p->name + "'");
  }
  std::vector<std::uint64_t> lineage = ck.seed_lineage;
  if (added) lineage.push_back(spec.seed);
  model->set_seed_lineage(std::move(lineage));
  return model;
}

std::unique_ptr<RankingModel> LoadCheckpoint(const std::filesystem::path& path,
                                             const std::optional<ModelSpec>& target) {
  return LoadModel(ReadCheckpoint(path), target);
}

}  // namespace seqmd
