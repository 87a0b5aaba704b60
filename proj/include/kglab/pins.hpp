#pragma once

// Regression pins: named values from oracle runs, each with a provenance note.
// File layout: {"entries": {"<name>": {"value": "...", "provenance": "..."}}}.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "kglab/config.hpp"
#include "kglab/rational.hpp"

namespace kglab {

struct Pin {
  std::string value;
  std::string provenance;
};

class PinStore {
 public:
  static PinStore load(const std::string& path) {
    PinStore store;
    std::ifstream in(path);
    if (!in) return store;
    const Json j = Json::parse(in);
    for (const auto& [name, entry] : j.at("entries").items()) {
      store.pins_[name] = Pin{entry.at("value").get<std::string>(), entry.value("provenance", "")};
    }
    return store;
  }

  void save(const std::string& path) const {
    Json entries = Json::object();
    for (const auto& [name, pin] : pins_) entries[name] = {{"value", pin.value}, {"provenance", pin.provenance}};
    Json j;
    j["entries"] = entries;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write pins file '" + path + "'");
    out << j.dump(2) << '\n';
  }

  std::optional<std::string> get(const std::string& name) const {
    auto it = pins_.find(name);
    if (it == pins_.end()) return std::nullopt;
    return it->second.value;
  }

  std::optional<Rational> get_rational(const std::string& name) const {
    auto v = get(name);
    if (!v) return std::nullopt;
    return parse_rational(*v);
  }

  void set(const std::string& name, std::string value, std::string provenance) {
    pins_[name] = Pin{std::move(value), std::move(provenance)};
  }

  bool empty() const { return pins_.empty(); }
  std::size_t size() const { return pins_.size(); }

 private:
  std::map<std::string, Pin> pins_;
};

/// FNV-1a 64-bit digest, hex encoded; used to pin very long exact values.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kglab
