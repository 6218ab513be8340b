#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>

#include "transduce/engine.hpp"
#include "transduce/generalize.hpp"
#include "transduce/rulefile.hpp"
#include "transduce/tokens.hpp"

namespace transduce {

/// Status code plus JSON body, independent of the HTTP layer.
struct Reply {
  int status = 200;
  Json body;
};

struct Session {
  std::string id;
  std::vector<ExamplePair> examples;
  LearnOutcome state;
};

/// In-memory learning sessions, optionally mirrored to one JSON file per
/// session under `dir`. A session's state is always learn(examples)
/// recomputed from scratch.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir = {}) : dir_(std::move(dir)) {
    if (!dir_.empty()) {
      std::filesystem::create_directories(dir_);
      load_all();
    }
  }

  Reply create() {
    auto entry = std::make_shared<Entry>();
    {
      std::lock_guard lock(mapMutex_);
      do entry->session.id = fresh_id();
      while (sessions_.count(entry->session.id));
      entry->session.state = learn({});
      sessions_[entry->session.id] = entry;
    }
    std::lock_guard lock(entry->mutex);
    persist(entry->session);
    Json j;
    j["id"] = entry->session.id;
    return {201, j};
  }

  Reply get(const std::string& id) {
    auto entry = find(id);
    if (!entry) return not_found(id);
    std::lock_guard lock(entry->mutex);
    return {200, describe(entry->session)};
  }

  Reply add_example(const std::string& id, const Json& body) {
    auto entry = find(id);
    if (!entry) return not_found(id);
    ExamplePair pair;
    try {
      pair = read_pair(body);
    } catch (const ParseError& e) {
      return unprocessable(e.what());
    }
    if (pair.input.size() < 2) return unprocessable("input must hold at least two tokens");
    if (pair.output.empty()) return unprocessable("output must not be empty");

    std::lock_guard lock(entry->mutex);
    auto examples = entry->session.examples;
    examples.push_back(pair);
    try {
      entry->session.state = learn(examples);
    } catch (const Error& e) {
      return unprocessable(e.what());
    }
    entry->session.examples = std::move(examples);
    persist(entry->session);
    return {200, describe(entry->session)};
  }

  Reply apply(const std::string& id, const Json& body) {
    auto entry = find(id);
    if (!entry) return not_found(id);
    TokenSeq input;
    try {
      input = read_tokens(body, "input", mode_of(body));
    } catch (const ParseError& e) {
      return unprocessable(e.what());
    }
    std::lock_guard lock(entry->mutex);
    const auto& st = entry->session.state;
    if (!st.learned() || !st.rule) return {409, error_body("not_learned", "session has no learned rule")};
    auto out = apply_rule(*st.rule, input);
    Json j;
    if (ok(out)) {
      const auto& toks = std::get<TokenSeq>(out);
      j["output"] = toks;
      j["text"] = join(toks, " ");
      return {200, j};
    }
    const auto& err = error_of(out);
    switch (err.kind) {
      case ExecError::Kind::GuardFailure:
        j["error"] = "guard_failure";
        j["position"] = err.position;
        break;
      case ExecError::Kind::TooShort:
        j["error"] = "too_short";
        j["min_len"] = err.minLen;
        break;
      case ExecError::Kind::AmbiguousAtLength: j["error"] = "ambiguous_at_length"; break;
      case ExecError::Kind::Internal: return {500, error_body("internal", err.message())};
    }
    j["message"] = err.message();
    return {200, j};
  }

  Reply rule(const std::string& id) {
    auto entry = find(id);
    if (!entry) return not_found(id);
    std::lock_guard lock(entry->mutex);
    const auto& st = entry->session.state;
    if (!st.learned() || !st.rule) return {409, error_body("not_learned", "session has no learned rule")};
    return {200, rule_to_json(*st.rule)};
  }

  std::size_t size() const {
    std::lock_guard lock(mapMutex_);
    return sessions_.size();
  }

 private:
  struct Entry {
    std::mutex mutex;
    Session session;
  };

  static Json error_body(const std::string& code, const std::string& message) {
    Json j;
    j["error"] = code;
    j["message"] = message;
    return j;
  }
  static Reply not_found(const std::string& id) { return {404, error_body("not_found", "no session '" + id + "'")}; }
  static Reply unprocessable(const std::string& m) { return {422, error_body("malformed_example", m)}; }

  static TokenizerMode mode_of(const Json& body) {
    if (!body.is_object() || !body.value("raw", false)) return TokenizerMode::delimited(" ");
    auto name = body.value("tokenizer", std::string("symbols"));
    if (name == "symbols") return TokenizerMode::symbols();
    if (name == "chars") return TokenizerMode::chars();
    throw ParseError("unknown tokenizer '" + name + "'");
  }

  // A field is either a token array or a string split by `mode`.
  static TokenSeq read_tokens(const Json& body, const char* field, const TokenizerMode& mode) {
    if (!body.is_object() || !body.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    const auto& v = body[field];
    if (v.is_string()) return tokenize(v.get<std::string>(), mode);
    if (v.is_array()) {
      TokenSeq out;
      for (const auto& t : v) {
        if (!t.is_string() || t.get<std::string>().empty())
          throw ParseError(std::string("'") + field + "' must hold non-empty strings");
        out.push_back(t.get<std::string>());
      }
      return out;
    }
    throw ParseError(std::string("'") + field + "' must be a string or an array of strings");
  }

  static ExamplePair read_pair(const Json& body) {
    auto mode = mode_of(body);
    return {read_tokens(body, "input", mode), read_tokens(body, "output", mode)};
  }

  static Json describe(const Session& s) {
    Json j;
    j["id"] = s.id;
    Json ex = Json::array();
    for (const auto& p : s.examples) ex.push_back(Json::array({p.input, p.output}));
    j["examples"] = std::move(ex);
    auto state = outcome_to_json(s.state);
    for (auto& [k, v] : state.items()) j[k] = v;
    return j;
  }

  std::string fresh_id() {
    std::uniform_int_distribution<std::uint64_t> dist;
    std::ostringstream os;
    os << std::hex << dist(rng_);
    return os.str();
  }

  std::shared_ptr<Entry> find(const std::string& id) {
    std::lock_guard lock(mapMutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  void persist(const Session& s) const {
    if (dir_.empty()) return;
    Json j;
    j["id"] = s.id;
    Json ex = Json::array();
    for (const auto& p : s.examples) ex.push_back(Json::array({p.input, p.output}));
    j["examples"] = std::move(ex);
    auto tmp = dir_ / (s.id + ".json.tmp");
    {
      std::ofstream out(tmp);
      out << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, dir_ / (s.id + ".json"));
  }

  void load_all() {
    for (const auto& e : std::filesystem::directory_iterator(dir_)) {
      if (e.path().extension() != ".json") continue;
      std::ifstream in(e.path());
      Json j = Json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.contains("id")) continue;
      auto entry = std::make_shared<Entry>();
      entry->session.id = j["id"].get<std::string>();
      for (const auto& p : j.value("examples", Json::array()))
        entry->session.examples.push_back({p.at(0).get<TokenSeq>(), p.at(1).get<TokenSeq>()});
      try {
        entry->session.state = learn(entry->session.examples);
      } catch (const Error& err) {
        entry->session.state.reason = err.what();
      }
      sessions_[entry->session.id] = entry;
    }
  }

  std::filesystem::path dir_;
  mutable std::mutex mapMutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mt19937_64 rng_{std::random_device{}()};
};

/// Routes /api/v1 onto a store. The server does not own the store.
inline void bind_routes(httplib::Server& server, SessionStore& store) {
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(2) + "\n", "application/json");
  };
  auto body_of = [](const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    return Json::parse(req.body, nullptr, false);
  };
  auto bad_json = [send](httplib::Response& res) {
    Json j;
    j["error"] = "malformed_json";
    j["message"] = "request body is not valid JSON";
    send(res, {422, j});
  };

  server.Post("/api/v1/sessions", [&store, send](const httplib::Request&, httplib::Response& res) {
    send(res, store.create());
  });
  server.Get(R"(/api/v1/sessions/([^/]+))", [&store, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.get(req.matches[1]));
  });
  server.Post(R"(/api/v1/sessions/([^/]+)/examples)",
              [&store, send, body_of, bad_json](const httplib::Request& req, httplib::Response& res) {
                auto body = body_of(req);
                if (body.is_discarded()) return bad_json(res);
                send(res, store.add_example(req.matches[1], body));
              });
  server.Post(R"(/api/v1/sessions/([^/]+)/apply)",
              [&store, send, body_of, bad_json](const httplib::Request& req, httplib::Response& res) {
                auto body = body_of(req);
                if (body.is_discarded()) return bad_json(res);
                send(res, store.apply(req.matches[1], body));
              });
  server.Get(R"(/api/v1/sessions/([^/]+)/rule)", [&store, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.rule(req.matches[1]));
  });
}

}  // namespace transduce
