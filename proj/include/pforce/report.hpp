#pragma once

// Run reports shared by every CLI command.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "props.hpp"
#include "serialize.hpp"

namespace pforce {

/// FNV-1a, 64 bit.
class Digest {
 public:
  void add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
  }
  /// Records name=value and feeds it to the hash.
  void add_field(const std::string& name, const std::string& value) {
    add(name);
    add("=");
    add(value);
    add("\n");
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

inline std::string digest_of(std::string_view bytes) {
  Digest d;
  d.add(bytes);
  return d.hex();
}

struct RunReport {
  std::string command;
  /// Flag values and per-file digests, in the order they were recorded.
  Json flags = Json::object();
  Json files = Json::object();
  std::uint64_t seed = 0;
  std::vector<PropertyTally> outcome;
  std::vector<Json> witnesses;
  /// Command-specific payload.
  Json result = Json::object();

  void flag(const std::string& name, const Json& value) { flags[name] = value; }
  void file(const std::string& name, const std::string& path, std::string_view content) {
    Json j;
    j["path"] = path;
    j["digest"] = digest_of(content);
    files[name] = j;
  }

  /// One pass or fail for `property`; a failure carries its witness.
  void record(const std::string& property, bool ok, const Json& witness = Json::object()) {
    auto it = std::find_if(outcome.begin(), outcome.end(), [&](const auto& t) { return t.name == property; });
    if (it == outcome.end()) {
      outcome.push_back({property, 0, 0});
      it = outcome.end() - 1;
    }
    if (ok) {
      ++it->pass;
      return;
    }
    ++it->fail;
    Json w;
    w["property"] = property;
    w["payload"] = witness;
    witnesses.push_back(w);
  }

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& t : outcome) n += t.fail;
    return n;
  }
  bool ok() const { return failures() == 0; }

  std::string inputs_digest() const {
    Digest d;
    d.add_field("command", command);
    d.add_field("flags", flags.dump());
    d.add_field("files", files.dump());
    return d.hex();
  }

  Json to_json() const {
    Json j;
    j["command"] = command;
    Json in;
    in["digest"] = inputs_digest();
    in["flags"] = flags;
    in["files"] = files;
    j["inputs"] = in;
    j["seed"] = seed;
    Json out = Json::array();
    for (const auto& t : outcome) {
      Json e;
      e["property"] = t.name;
      e["pass"] = t.pass;
      e["fail"] = t.fail;
      out.push_back(e);
    }
    j["outcome"] = out;
    j["witnesses"] = witnesses;
    j["result"] = result;
    return j;
  }
};

/// Folds a suite run into the report; witnesses keep their trial index.
inline void absorb(RunReport& rep, const SuiteResult& r) {
  for (const auto& t : r.tallies) rep.outcome.push_back(t);
  for (const auto& w : r.witnesses) {
    Json j;
    j["trial"] = w.trial;
    j["property"] = w.property;
    j["payload"] = w.payload;
    rep.witnesses.push_back(j);
  }
  rep.result["suite"] = r.suite;
  rep.result["trials"] = r.trials;
  Json obs = Json::object();
  for (const auto& [k, v] : r.observations) obs[k] = v;
  rep.result["observations"] = obs;
}

}  // namespace pforce
