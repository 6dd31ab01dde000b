#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gpcover/errors.hpp"
#include "gpcover/group.hpp"
#include "gpcover/solver.hpp"
#include "gpcover/spectrum.hpp"
#include "gpcover/subset.hpp"

#include "json.hpp"

namespace gpcover {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSchema = "gpcover/1";

using nlohmann::json;

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
}

namespace detail {

inline const json& require_key(const json& j, const char* key,
                               const char* ctx) {
  auto it = j.find(key);
  if (it == j.end())
    throw InputError(std::string(ctx) + ": missing key \"" + key + "\"");
  return *it;
}

}  // namespace detail

// --- group files ----------------------------------------------------------
//
// {"kind":"permutation","degree":N,"generators":[[[1,2,3],[4,5]],...]}
// {"kind":"cayley","table":[[...]]}
// {"kind":"family","family":"psl2","q":7}  (or "n" for sym/alt/...)

inline GroupTable parse_group(const json& j,
                              std::uint32_t cap = GroupTable::kDefaultCap) {
  if (!j.is_object()) throw InputError("group spec must be a JSON object");
  std::string kind = detail::require_key(j, "kind", "group spec");
  if (kind == "permutation") {
    unsigned degree = detail::require_key(j, "degree", "permutation group");
    std::vector<std::vector<std::vector<int>>> gens =
        detail::require_key(j, "generators", "permutation group");
    return build_from_permutations(degree, gens, cap);
  }
  if (kind == "cayley") {
    std::vector<std::vector<std::uint32_t>> table =
        detail::require_key(j, "table", "cayley group");
    return build_from_cayley_table(table);
  }
  if (kind == "family") {
    Family fam = family_from_name(
        detail::require_key(j, "family", "family group"));
    unsigned param;
    if (j.contains("q"))
      param = j.at("q").get<unsigned>();
    else if (j.contains("n"))
      param = j.at("n").get<unsigned>();
    else if (j.contains("degree"))
      param = j.at("degree").get<unsigned>();
    else
      throw InputError("family group: missing parameter \"q\" or \"n\"");
    return build_family(fam, param, cap);
  }
  throw InputError("unknown group kind: " + kind);
}

inline GroupTable load_group(const std::string& path,
                             std::uint32_t cap = GroupTable::kDefaultCap) {
  return parse_group(load_json_file(path), cap);
}

// --- subset specs ---------------------------------------------------------
//
// {"kind":"indices","ids":[...]}
// {"kind":"class","rep":id}               (needs the class spectrum)
// {"kind":"random","size":s,"seed":u64}
// {"kind":"ball","gens":[ids],"radius":r}

inline Subset parse_subset(const json& j, const GroupTable& g,
                           const ClassSpectrum* sp = nullptr) {
  if (!j.is_object()) throw InputError("subset spec must be a JSON object");
  std::string kind = detail::require_key(j, "kind", "subset spec");
  if (kind == "indices") {
    std::vector<ElementId> ids =
        detail::require_key(j, "ids", "indices subset");
    return Subset::of(g, ids);
  }
  if (kind == "class") {
    ElementId rep = detail::require_key(j, "rep", "class subset");
    if (rep >= g.order()) throw InputError("class rep out of range");
    if (!sp)
      throw InputError("class subset spec needs the conjugacy spectrum");
    return sp->classes[sp->class_of[rep]].members;
  }
  if (kind == "random") {
    std::uint32_t size = detail::require_key(j, "size", "random subset");
    std::uint64_t seed = detail::require_key(j, "seed", "random subset");
    return random_subset(g, size, seed);
  }
  if (kind == "ball") {
    std::vector<ElementId> gens =
        detail::require_key(j, "gens", "ball subset");
    unsigned radius = detail::require_key(j, "radius", "ball subset");
    for (ElementId x : gens)
      if (x >= g.order()) throw InputError("ball generator out of range");
    return ball(g, gens, radius);
  }
  throw InputError("unknown subset kind: " + kind);
}

// A sets file is {"sets":[spec, ...]} or a bare array of specs.
inline std::vector<Subset> parse_sets(const json& j, const GroupTable& g,
                                      const ClassSpectrum* sp = nullptr) {
  const json& arr = j.is_array() ? j : detail::require_key(j, "sets", "sets file");
  if (!arr.is_array()) throw InputError("\"sets\" must be an array");
  std::vector<Subset> out;
  for (const auto& s : arr) out.push_back(parse_subset(s, g, sp));
  if (out.empty()) throw InputError("sets file contains no sets");
  return out;
}

// --- pipeline config ------------------------------------------------------

inline json config_to_json(const PipelineConfig& c) {
  return {{"rank", c.rank},
          {"zeta", {{"num", c.zeta.num}, {"den", c.zeta.den}}},
          {"delta", {{"num", c.delta.num}, {"den", c.delta.den}}},
          {"eta", c.eta},
          {"epsilon", c.epsilon},
          {"c_work", c.c_work},
          {"safety_rounds", c.safety_rounds},
          {"candidate_cap", c.candidate_cap},
          {"seed", c.seed}};
}

inline PipelineConfig parse_config(const json& j) {
  PipelineConfig c = PipelineConfig::for_rank(j.value("rank", 1));
  if (j.contains("zeta"))
    c.zeta = {j.at("zeta").at("num").get<long long>(),
              j.at("zeta").at("den").get<long long>()};
  if (j.contains("delta"))
    c.delta = {j.at("delta").at("num").get<long long>(),
               j.at("delta").at("den").get<long long>()};
  c.eta = j.value("eta", c.eta);
  c.epsilon = j.value("epsilon", c.eta / 25.0);
  c.c_work = j.value("c_work", c.c_work);
  c.safety_rounds = j.value("safety_rounds", c.safety_rounds);
  c.candidate_cap = j.value("candidate_cap", c.candidate_cap);
  c.seed = j.value("seed", c.seed);
  if (c.zeta.den <= 0 || c.delta.den <= 0 || c.zeta.num <= 0 ||
      c.delta.num <= 0)
    throw InputError("config: zeta and delta must be positive rationals");
  if (c.candidate_cap == 0) throw InputError("config: candidate_cap must be positive");
  return c;
}

// --- certificates ---------------------------------------------------------

inline json certificate_to_json(const CoverCertificate& c) {
  json trace = json::array();
  for (const auto& e : c.trace)
    trace.push_back({{"phase", phase_name(e.phase)},
                     {"range", {e.lo, e.hi}},
                     {"size", e.size}});
  return {{"conjugators", c.conjugators},
          {"trace", trace},
          {"final_size", c.final_size},
          {"covered", c.covered}};
}

inline CoverCertificate certificate_from_json(const json& j) {
  CoverCertificate c;
  c.conjugators = detail::require_key(j, "conjugators", "certificate")
                      .get<std::vector<ElementId>>();
  for (const auto& e : detail::require_key(j, "trace", "certificate")) {
    TraceEntry t;
    t.phase = phase_from_name(detail::require_key(e, "phase", "trace entry"));
    const json& r = detail::require_key(e, "range", "trace entry");
    if (!r.is_array() || r.size() != 2)
      throw InputError("trace entry: \"range\" must be [lo, hi]");
    t.lo = r[0].get<std::uint32_t>();
    t.hi = r[1].get<std::uint32_t>();
    t.size = detail::require_key(e, "size", "trace entry").get<std::uint64_t>();
    c.trace.push_back(t);
  }
  c.final_size = j.value("final_size", std::uint64_t{0});
  c.covered = detail::require_key(j, "covered", "certificate").get<bool>();
  return c;
}

// --- report envelope ------------------------------------------------------

// Every report carries schema, version, the verbatim config, and the group
// fingerprint. The timestamp is the only field allowed to differ between
// identical runs.
inline json report_envelope(const GroupTable& g, const json& config) {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return {{"schema", kSchema},
          {"version", kToolVersion},
          {"timestamp", buf},
          {"config", config},
          {"group", {{"description", g.describe()},
                     {"order", g.order()},
                     {"fingerprint", g.fingerprint()}}}};
}

// --- CSV ------------------------------------------------------------------

inline std::string to_csv(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  auto emit_row = [&os](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
      if (quote) {
        os << '"';
        for (char ch : row[i]) {
          if (ch == '"') os << '"';
          os << ch;
        }
        os << '"';
      } else {
        os << row[i];
      }
    }
    os << '\n';
  };
  emit_row(header);
  for (const auto& r : rows) emit_row(r);
  return os.str();
}

}  // namespace gpcover
