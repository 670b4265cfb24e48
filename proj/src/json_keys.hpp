#pragma once

#include <initializer_list>
#include <string>

#include "nlohmann/json.hpp"

#include "rispaces/error.hpp"

namespace rispaces::detail {

// Rejects keys outside `allowed`, so a stray key=value token is never silently dropped.
inline void allow_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) fail(ErrorKind::BadConfig, what + " spec must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) fail(ErrorKind::BadConfig, "unknown key '" + it.key() + "' in " + what + " spec");
  }
}

}  // namespace rispaces::detail
