#pragma once

// Strict JSON object reading: every key must be claimed by the reader,
// otherwise ConfigError names the unknown key.

#include <initializer_list>
#include <set>
#include <string>

#include "growform/config_error.hpp"
#include "json.hpp"

namespace growform::detail {

class FieldReader {
 public:
  FieldReader(const nlohmann::json &object, std::string path) : obj_(object), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected a JSON object");
  }

  template <typename T>
  void optional(const char *key, T &out) {
    claimed_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception &e) {
      throw ConfigError(path_ + "." + key, std::string("wrong type (") + e.what() + ")");
    }
  }

  template <typename T>
  void required(const char *key, T &out) {
    if (!obj_.contains(key)) throw ConfigError(path_ + "." + key, "missing required field");
    optional(key, out);
  }

  const nlohmann::json *child(const char *key) {
    claimed_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string path_of(const char *key) const { return path_ + "." + key; }

  /// Throws on the first key nobody asked for.
  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!claimed_.count(it.key())) throw ConfigError(path_ + "." + it.key(), "unknown key");
  }

 private:
  const nlohmann::json &obj_;
  std::string path_;
  std::set<std::string> claimed_;
};

}  // namespace growform::detail
