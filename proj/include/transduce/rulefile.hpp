#pragma once

#include <regex>
#include <string>

#include <json.hpp>

#include "transduce/errors.hpp"
#include "transduce/generalize.hpp"
#include "transduce/rule.hpp"

namespace transduce {

// Rule files and service payloads are JSON documents with a fixed field
// order, so equal rules serialize to byte-identical text.

using Json = nlohmann::ordered_json;

inline constexpr int kRuleFormatVersion = 1;

namespace detail {

inline Json symbol_json(int v) { return v; }
inline Json symbol_json(ChainTag t) { return t == ChainTag::In ? "I" : "O"; }
inline Json symbol_json(const SlotKind& k) {
  switch (k.type) {
    case SlotKindType::V: return k.nilTail ? "V/" : "V";
    case SlotKindType::A: return k.nilTail ? "A/" : "A";
    case SlotKindType::C: {
      Json j;
      j["C"] = k.value;
      if (k.nilTail) j["nil"] = true;
      return j;
    }
  }
  return nullptr;
}

inline void symbol_from(const Json& j, int& v) {
  if (!j.is_number_integer()) throw ParseError("expected an integer symbol");
  v = j.get<int>();
}
inline void symbol_from(const Json& j, ChainTag& t) {
  if (j == "I") t = ChainTag::In;
  else if (j == "O") t = ChainTag::Out;
  else throw ParseError("expected chain tag I or O");
}
inline void symbol_from(const Json& j, SlotKind& k) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "V") k = SlotKind::var();
    else if (s == "V/") k = {SlotKindType::V, {}, true};
    else if (s == "A") k = SlotKind::anon();
    else if (s == "A/") k = SlotKind::anon(true);
    else throw ParseError("unknown slot kind '" + s + "'");
  } else if (j.is_object() && j.contains("C") && j["C"].is_string()) {
    k = SlotKind::constant(j["C"].get<std::string>(), j.value("nil", false));
  } else {
    throw ParseError("malformed slot kind");
  }
}

template <typename T>
Json seq_json(const GeneralizedSeq<T>& g) {
  Json arr = Json::array();
  for (const auto& run : g) {
    Json term;
    term["count"] = to_string(run.count);
    Json pat = Json::array();
    for (const auto& s : run.pattern) pat.push_back(symbol_json(s));
    term["pattern"] = std::move(pat);
    arr.push_back(std::move(term));
  }
  return arr;
}

inline CountExpr parse_count(const std::string& s) {
  static const std::regex affine(R"(^([12]?)L([+-]\d+)?$)");
  static const std::regex constant(R"(^\d+$)");
  std::smatch m;
  if (std::regex_match(s, constant)) {
    int k = std::stoi(s);
    if (k < 1) throw ParseError("constant count must be positive");
    return CountExpr::constant(k);
  }
  if (std::regex_match(s, m, affine)) {
    int a = m[1].str().empty() ? 1 : std::stoi(m[1].str());
    int b = m[2].matched ? std::stoi(m[2].str()) : 0;
    return CountExpr::affine(a, b);
  }
  throw ParseError("malformed count expression '" + s + "'");
}

template <typename T>
GeneralizedSeq<T> seq_from(const Json& j, const char* field) {
  if (!j.is_array()) throw ParseError(std::string("field '") + field + "' must be an array");
  GeneralizedSeq<T> g;
  for (const auto& term : j) {
    if (!term.is_object() || !term.contains("count") || !term.contains("pattern") ||
        !term["count"].is_string() || !term["pattern"].is_array() || term["pattern"].empty())
      throw ParseError(std::string("malformed term in '") + field + "'");
    GeneralRun<T> run;
    run.count = parse_count(term["count"].get<std::string>());
    for (const auto& s : term["pattern"]) {
      T v{};
      symbol_from(s, v);
      run.pattern.push_back(std::move(v));
    }
    g.push_back(std::move(run));
  }
  return g;
}

}  // namespace detail

inline Json rule_to_json(const TransductionRule& r) {
  Json j;
  j["format"] = "transduce-rule";
  j["version"] = kRuleFormatVersion;
  j["base2"] = r.base2;
  j["delta"] = r.delta;
  j["min_len"] = r.minLen;
  j["guards"] = Json(std::vector<std::string>(r.guards.begin(), r.guards.end()));
  j["training_lengths"] = Json(std::vector<int>(r.trainingLengths.begin(), r.trainingLengths.end()));
  j["length_restricted"] = r.lengthRestricted;
  j["seq1"] = detail::seq_json(r.seq1);
  j["seq2"] = detail::seq_json(r.seq2);
  j["mask"] = detail::seq_json(r.mask);
  j["order"] = detail::seq_json(r.order);
  return j;
}

inline TransductionRule rule_from_json(const Json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != "transduce-rule")
      throw ParseError("not a transduce rule document");
    if (j.at("version").get<int>() != kRuleFormatVersion)
      throw ParseError("unsupported rule format version");
    TransductionRule r;
    r.base2 = j.at("base2").get<int>();
    r.delta = j.at("delta").get<int>();
    r.minLen = j.at("min_len").get<int>();
    for (const auto& g : j.at("guards")) r.guards.insert(g.get<std::string>());
    for (const auto& L : j.at("training_lengths")) r.trainingLengths.insert(L.get<int>());
    r.lengthRestricted = j.at("length_restricted").get<bool>();
    r.seq1 = detail::seq_from<int>(j.at("seq1"), "seq1");
    r.seq2 = detail::seq_from<int>(j.at("seq2"), "seq2");
    r.mask = detail::seq_from<SlotKind>(j.at("mask"), "mask");
    r.order = detail::seq_from<ChainTag>(j.at("order"), "order");
    if (r.minLen < 1) throw ParseError("min_len must be positive");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed rule: ") + e.what());
  }
}

inline std::string serialize_rule(const TransductionRule& r) { return rule_to_json(r).dump(2) + "\n"; }

inline TransductionRule parse_rule(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("rule file is not valid JSON: ") + e.what());
  }
  return rule_from_json(j);
}

/// Human-facing summary used by the service and the REPL.
inline Json formulas_json(const TransductionRule& r) {
  Json j;
  j["seq1"] = formula(r.seq1);
  j["seq2"] = formula(r.seq2);
  j["mask"] = formula(r.mask);
  j["order"] = formula(r.order);
  return j;
}

inline Json outcome_to_json(const LearnOutcome& o) {
  Json j;
  j["state"] = state_name(o.kind);
  j["length_restricted"] = o.lengthRestricted;
  if (!o.reason.empty()) j["reason"] = o.reason;
  if (!o.warnings.empty()) j["warnings"] = o.warnings;
  if (o.rule && o.learned()) {
    j["formulas"] = formulas_json(*o.rule);
    j["min_len"] = o.rule->minLen;
    j["delta"] = o.rule->delta;
  }
  return j;
}

}  // namespace transduce
