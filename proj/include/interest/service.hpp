#pragma once

#include <httplib.h>
#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "interest/connectors.hpp"
#include "interest/pipeline.hpp"
#include "interest/profile.hpp"
#include "interest/report.hpp"

namespace interest {

/// JSON-over-HTTP facade. Handlers are plain member functions returning a
/// status and body so they can be driven without a socket; `mount` wires
/// them onto an httplib server.
class Service {
 public:
  struct Reply {
    int status = 200;
    std::string body;
  };

  Service(ProfileStore& profiles, const ConnectorRegistry& connectors)
      : profiles_(profiles), connectors_(connectors), pipeline_(profiles, connectors) {}

  Reply health() const { return ok(json{{"status", "ok"}}); }

  Reply list_connectors() const {
    json out = json::array();
    for (const auto& [name, spec] : connectors_.specs()) {
      out.push_back({{"name", name}, {"kind", to_string(spec.kind)}});
    }
    return ok(out);
  }

  Reply handle_rerank(std::string_view body) const {
    return guarded([&] { return ok(pipeline_.rerank(parse_rerank(parse_object(body)))); });
  }

  Reply handle_compare(std::string_view body) const {
    return guarded([&] {
      const auto j = parse_object(body);
      CompareRequest req;
      req.base = parse_rerank(j, /*scorer_required=*/false);
      if (j.contains("scorers")) {
        const auto& s = j.at("scorers");
        if (!s.is_array() || s.size() != 2 || !s[0].is_string() || !s[1].is_string()) {
          throw UsageError("'scorers' must be an array of two scorer names");
        }
        req.base.scorer = parse_scorer(s[0].get<std::string>());
        req.scorer_b = parse_scorer(s[1].get<std::string>());
      } else {
        req.base.scorer = parse_scorer(string_field(j, "scorer_a"));
        req.scorer_b = parse_scorer(string_field(j, "scorer_b"));
      }
      if (j.contains("top_k")) req.top_k = unsigned_field(j, "top_k");
      if (j.contains("outlier_factor")) {
        if (!j.at("outlier_factor").is_number()) throw UsageError("'outlier_factor' must be a number");
        req.outlier_factor = j.at("outlier_factor").get<double>();
      }
      return ok(pipeline_.compare(req));
    });
  }

  Reply list_profiles() const {
    return guarded([&] { return ok(json(profiles_.list())); });
  }

  Reply get_profile(const std::string& name) const {
    return guarded([&] { return ok(profile_json(profiles_.load(name))); });
  }

  /// Validates before persisting; an invalid profile is answered with 422
  /// and its violation list, and the store is left untouched.
  Reply put_profile(const std::string& name, std::string_view body) {
    return guarded([&] {
      if (!is_valid_profile_name(name)) throw UsageError("invalid profile name '" + name + "'");
      auto profile = profile_from_body(name, parse_object(body));
      if (auto vs = validate_profile(profile); !vs.empty()) return violations_reply(vs);
      profiles_.save(profile);
      return ok(profile_json(profiles_.load(name)));
    });
  }

  /// Validates a candidate profile body without storing it.
  Reply validate_profile_body(const std::string& name, std::string_view body) const {
    return guarded([&] {
      auto profile = profile_from_body(name, parse_object(body));
      return ok(json{{"violations", violations_json(validate_profile(profile))}});
    });
  }

  Reply validate_stored_profile(const std::string& name) const {
    return guarded([&] {
      return ok(json{{"violations", violations_json(validate_profile(profiles_.load(name)))}});
    });
  }

  void mount(httplib::Server& server) {
    auto send = [](httplib::Response& res, const Reply& r) {
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.Get("/health", [=, this](const httplib::Request&, httplib::Response& res) { send(res, health()); });
    server.Get("/api/connectors",
               [=, this](const httplib::Request&, httplib::Response& res) { send(res, list_connectors()); });
    server.Post("/api/rerank", [=, this](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_rerank(req.body));
    });
    server.Post("/api/compare", [=, this](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_compare(req.body));
    });
    server.Get("/api/profiles",
               [=, this](const httplib::Request&, httplib::Response& res) { send(res, list_profiles()); });
    server.Get(R"(/api/profiles/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
      send(res, get_profile(req.matches[1]));
    });
    server.Put(R"(/api/profiles/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
      send(res, put_profile(req.matches[1], req.body));
    });
    server.Get(R"(/api/profiles/([^/]+)/validate)", [=, this](const httplib::Request& req, httplib::Response& res) {
      send(res, validate_stored_profile(req.matches[1]));
    });
    server.Post(R"(/api/profiles/([^/]+)/validate)", [=, this](const httplib::Request& req, httplib::Response& res) {
      send(res, validate_profile_body(req.matches[1], req.body));
    });
  }

  static int status_for(const Error& e) {
    const auto& c = e.code();
    if (c == "bad_request" || c == "unknown_scorer") return 400;
    if (c == "unknown_profile" || c == "unknown_connector") return 404;
    if (c == "connector_unavailable" || c == "malformed_response") return 502;
    if (c == "invalid_profile" || c == "MalformedLine" || c == "empty_result_set" ||
        c == "degenerate_pairing" || c == "duplicate_result" || c == "id_mismatch" ||
        c == "invalid_pairing" || c == "empty_corpus") {
      return 422;
    }
    return 500;
  }

 private:
  static Reply ok(const json& j) { return {200, report::to_body(j)}; }

  static Reply error_reply(int status, const std::string& code, const std::string& message) {
    return {status, report::to_body(json{{"code", code}, {"message", message}})};
  }

  template <typename Fn>
  static Reply guarded(Fn&& fn) {
    try {
      return fn();
    } catch (const InvalidProfile& e) {
      return violations_reply(e.violations());
    } catch (const Error& e) {
      return error_reply(status_for(e), e.code(), e.what());
    } catch (const json::exception& e) {
      return error_reply(400, "bad_request", e.what());
    } catch (const std::exception& e) {
      return error_reply(500, "internal", e.what());
    }
  }

  static json violations_json(const std::vector<Violation>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back({{"code", v.code}, {"entry", v.entry}, {"message", v.message}});
    return out;
  }

  static Reply violations_reply(const std::vector<Violation>& vs) {
    return {422, report::to_body(json{{"code", "invalid_profile"},
                                      {"message", "profile violates its invariants"},
                                      {"violations", violations_json(vs)}})};
  }

  static json parse_object(std::string_view body) {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw UsageError(std::string("request body is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("request body must be a JSON object");
    return j;
  }

  static std::string string_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) throw UsageError(std::string("'") + key + "' must be a string");
    return j.at(key).get<std::string>();
  }

  static std::size_t unsigned_field(const json& j, const char* key) {
    if (!j.at(key).is_number_unsigned()) throw UsageError(std::string("'") + key + "' must be a non-negative integer");
    return j.at(key).get<std::size_t>();
  }

  static RerankRequest parse_rerank(const json& j, bool scorer_required = true) {
    RerankRequest req;
    req.connector = string_field(j, "connector");
    req.query = string_field(j, "query");
    req.profile = string_field(j, "profile");
    if (req.query.find_first_not_of(" \t\r\n") == std::string::npos) throw UsageError("query must not be empty");
    if (scorer_required || j.contains("scorer")) req.scorer = parse_scorer(string_field(j, "scorer"));
    if (j.contains("max_results")) {
      req.max_results = unsigned_field(j, "max_results");
      if (req.max_results < 1) throw UsageError("max_results must be at least 1");
    }
    if (j.contains("fetch_bodies")) {
      if (!j.at("fetch_bodies").is_boolean()) throw UsageError("'fetch_bodies' must be a boolean");
      req.fetch_bodies = j.at("fetch_bodies").get<bool>();
    }
    return req;
  }

  /// Each list element is parsed as one line of a profile file.
  DomainProfile profile_from_body(const std::string& name, const json& j) const {
    DomainProfile p;
    p.name = name;
    p.stopwords = profiles_.stopwords();
    std::vector<Violation> malformed;
    auto read_list = [&](const char* key, EntrySet& into) {
      if (!j.contains(key)) return;
      const auto& list = j.at(key);
      if (!list.is_array()) throw UsageError(std::string("'") + key + "' must be an array of strings");
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (!list[i].is_string()) throw UsageError(std::string("'") + key + "' must be an array of strings");
        const auto line = list[i].get<std::string>();
        try {
          auto entries = parse_profile_file(line, p.stopwords);
          into.insert(entries.begin(), entries.end());
        } catch (const MalformedLine&) {
          malformed.push_back({"MalformedLine", line,
                               std::string(key) + " line " + std::to_string(i + 1) + " consists only of stopwords"});
        }
      }
    };
    read_list("target", p.target);
    read_list("competitors", p.competitors);
    if (!malformed.empty()) throw InvalidProfile(std::move(malformed));
    return p;
  }

  static json profile_json(const DomainProfile& p) {
    json target = json::array();
    json competitors = json::array();
    for (const auto& e : p.target) target.push_back(e.key());
    for (const auto& e : p.competitors) competitors.push_back(e.key());
    return json{{"name", p.name}, {"target", target}, {"competitors", competitors}};
  }

  ProfileStore& profiles_;
  const ConnectorRegistry& connectors_;
  Pipeline pipeline_;
};

}  // namespace interest
