#ifndef SEQMD_JSON_UTIL_H_
#define SEQMD_JSON_UTIL_H_

#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "seqmd/error.h"

namespace seqmd {

using Json = nlohmann::ordered_json;

// Reads `key` into `out` when present; leaves the default otherwise.
template <typename T>
void ReadOptional(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

// Throws ConfigError naming the first key not in `allowed`.
inline void RejectUnknownKeys(const Json& j, std::initializer_list<const char*> allowed,
                              const char* context) {
  if (!j.is_object()) throw ConfigError(std::string(context) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) {
      throw ConfigError(std::string(context) + ": unknown field '" + it.key() + "'");
    }
  }
}

}  // namespace seqmd

#endif  // SEQMD_JSON_UTIL_H_
