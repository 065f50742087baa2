#include "manifest.h"

#include <chrono>
#include <ctime>
#include <fstream>

namespace seqmd::cli {
namespace {

#ifndef SEQMD_VERSION
#define SEQMD_VERSION "0.0.0"
#endif

std::string UtcNow() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void MergeObjects(Json& base, const Json& over) {
  for (auto it = over.begin(); it != over.end(); ++it) {
    if (base.contains(it.key()) && base[it.key()].is_object() && it.value().is_object()) {
      MergeObjects(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

}  // namespace

const char* ToolVersion() { return SEQMD_VERSION; }

Json LoadConfigFile(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  if (j.contains("tool") && j.contains("command") && j.contains("config")) {
    const std::string was = j.at("command").get<std::string>();
    if (was != command) {
      throw UsageError("manifest '" + path + "' records command '" + was + "', not '" +
                       command + "'");
    }
    return j.at("config");
  }
  return j;
}

Json ResolveConfig(const GlobalOptions& opts, const std::string& command, Json defaults) {
  if (!opts.config.empty()) MergeObjects(defaults, LoadConfigFile(opts.config, command));
  return defaults;
}

Manifest::Manifest(const GlobalOptions& opts, std::string command, Json config,
                   std::vector<std::string> artifacts)
    : opts_(opts), artifacts_(std::move(artifacts)) {
  doc_["tool"] = "seqmd";
  doc_["version"] = ToolVersion();
  doc_["command"] = std::move(command);
  doc_["argv"] = opts.argv;
  doc_["seed"] = opts.seed ? Json(*opts.seed) : Json(nullptr);
  doc_["config"] = std::move(config);
  Json paths = Json::object();
  for (const auto& a : artifacts_) paths[a] = Path(a).string();
  doc_["artifacts"] = std::move(paths);
  doc_["status"] = "running";
  doc_["started"] = nullptr;
  doc_["finished"] = nullptr;
}

std::filesystem::path Manifest::Path(const std::string& artifact) const {
  return opts_.out / artifact;
}

void Manifest::CheckOutputs() const {
  if (opts_.force) return;
  for (const auto& a : artifacts_) {
    if (std::filesystem::exists(Path(a))) {
      throw UsageError("output '" + Path(a).string() + "' exists; pass --force to overwrite");
    }
  }
}

void Manifest::Write() const {
  std::filesystem::create_directories(opts_.out);
  const auto path = opts_.out / "manifest.json";
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << doc_.dump(2) << '\n';
}

void Manifest::Run(const std::function<void()>& work) {
  CheckOutputs();
  doc_["started"] = UtcNow();
  Write();
  try {
    work();
  } catch (const std::exception& e) {
    doc_["status"] = "failed";
    doc_["error"] = e.what();
    doc_["finished"] = UtcNow();
    Write();
    throw;
  }
  doc_["status"] = "ok";
  doc_["finished"] = UtcNow();
  Write();
}

}  // namespace seqmd::cli
