#pragma once

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include "interest/error.hpp"
#include "interest/io.hpp"
#include "interest/reranker.hpp"
#include "interest/text.hpp"

namespace interest {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// HTML to text

namespace detail {

inline bool iequals_prefix(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
  }
  return true;
}

inline std::string tag_name(std::string_view html, std::size_t lt) {
  std::size_t i = lt + 1;
  if (i < html.size() && html[i] == '/') ++i;
  std::string name;
  while (i < html.size() && std::isalnum(static_cast<unsigned char>(html[i]))) {
    name += static_cast<char>(std::tolower(static_cast<unsigned char>(html[i])));
    ++i;
  }
  return name;
}

// Tags that do not separate words.
inline bool is_inline_tag(std::string_view name) {
  static const std::unordered_set<std::string_view> kInline = {
      "a", "abbr", "b", "bdi", "bdo", "cite", "code", "data", "dfn", "em", "font", "i", "kbd",
      "mark", "q", "s", "samp", "small", "span", "strong", "sub", "sup", "time", "u", "var"};
  return kInline.contains(name);
}

inline std::optional<std::string> named_entity(std::string_view name) {
  static const std::map<std::string_view, std::string_view> kEntities = {
      {"amp", "&"},        {"lt", "<"},         {"gt", ">"},         {"quot", "\""},
      {"apos", "'"},       {"nbsp", " "},       {"copy", "©"},  {"reg", "®"},
      {"mdash", "—"}, {"ndash", "–"}, {"hellip", "…"}, {"laquo", "«"},
      {"raquo", "»"}, {"lsquo", "‘"}, {"rsquo", "’"}, {"ldquo", "“"},
      {"rdquo", "”"}, {"trade", "™"}, {"deg", "°"},  {"eacute", "é"}};
  auto it = kEntities.find(name);
  if (it == kEntities.end()) return std::nullopt;
  return std::string(it->second);
}

inline std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += s[i++];
      continue;
    }
    const auto body = s.substr(i + 1, semi - i - 1);
    std::optional<std::string> decoded;
    if (body.size() > 1 && body[0] == '#') {
      const bool hex = body[1] == 'x' || body[1] == 'X';
      const auto digits = body.substr(hex ? 2 : 1);
      char* end = nullptr;
      const std::string digits_str(digits);
      const long cp = digits_str.empty() ? -1 : std::strtol(digits_str.c_str(), &end, hex ? 16 : 10);
      if (!digits_str.empty() && end && *end == '\0' && cp > 0 && cp <= 0x10FFFF &&
          !(cp >= 0xD800 && cp <= 0xDFFF)) {
        std::string enc;
        append_utf8(enc, cp == 0xA0 ? 0x20 : static_cast<UChar32>(cp));
        decoded = std::move(enc);
      }
    } else {
      decoded = named_entity(body);
    }
    if (decoded) {
      out += *decoded;
      i = semi + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

}  // namespace detail

/// Minimal tag stripper: drops markup, comments, and script/style content,
/// decodes entity references and collapses whitespace. Malformed markup
/// degrades to best-effort text.
inline std::string extract_text(std::string_view html) {
  std::string text;
  text.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      text += html[i++];
      continue;
    }
    if (html.compare(i, 4, "<!--") == 0) {
      const auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      text += ' ';
      continue;
    }
    const bool opening = i + 1 < html.size() && html[i + 1] != '/';
    const auto name = detail::tag_name(html, i);
    if (name.empty() && (i + 1 >= html.size() || (html[i + 1] != '/' && html[i + 1] != '!' &&
                                                 html[i + 1] != '?'))) {
      // A bare '<' that does not start a tag.
      text += html[i++];
      continue;
    }
    const auto gt = html.find('>', i);
    if (gt == std::string_view::npos) break;
    i = gt + 1;
    if (opening && (name == "script" || name == "style")) {
      const std::string closing = "</" + name;
      std::size_t j = i;
      while (j < html.size() && !detail::iequals_prefix(html, j, closing)) ++j;
      const auto close_gt = html.find('>', j);
      i = close_gt == std::string_view::npos ? html.size() : close_gt + 1;
      text += ' ';
      continue;
    }
    if (!detail::is_inline_tag(name)) text += ' ';
  }
  return detail::collapse_whitespace(detail::decode_entities(text));
}

// ---------------------------------------------------------------------------
// Result identity

/// Drops the scheme, lowercases the host, strips default ports and
/// any fragment, and gives an empty path "/". http and https forms of the
/// same address are one result.
inline std::string normalize_url(std::string_view url) {
  std::string_view rest = url;
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);

  if (auto p = rest.find("://"); p != std::string_view::npos) rest.remove_prefix(p + 3);
  if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);

  const auto path_start = rest.find_first_of("/?");
  auto authority = rest.substr(0, path_start);
  std::string_view path = path_start == std::string_view::npos ? std::string_view{} : rest.substr(path_start);

  std::string host;
  for (char c : authority) host += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (std::string_view port : {":80", ":443"}) {
    if (host.size() > port.size() && host.ends_with(port)) {
      host.resize(host.size() - port.size());
      break;
    }
  }
  std::string out = host;
  if (path.empty() || path.front() == '?') out += '/';
  out += path;
  return out;
}

/// 64-bit FNV-1a of the normalized URL, hex encoded.
inline std::string result_id(std::string_view url) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : normalize_url(url)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Fixture corpus: line-delimited JSON, header line then one line per result.

struct Fixture {
  std::string query;
  std::string engine;
  std::string recorded_at;
  std::vector<SearchResult> results;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string serialize_fixture(const Fixture& f) {
  std::string out = json{{"query", f.query}, {"engine", f.engine}, {"recorded_at", f.recorded_at}}.dump();
  out += '\n';
  for (const auto& r : f.results) {
    out += json{{"id", r.id},       {"rank", r.engine_rank},   {"url", r.url},
                {"title", r.title}, {"snippet", r.snippet}, {"body", r.body}}
               .dump();
    out += '\n';
  }
  return out;
}

inline Fixture parse_fixture(std::string_view content, const std::string& origin = "fixture") {
  Fixture f;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    auto line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw MalformedResponse(where + ": " + e.what());
    }
    auto field = [&](const char* key) -> const json& {
      if (!j.is_object() || !j.contains(key)) throw MalformedResponse(where + ": missing field '" + key + "'");
      return j.at(key);
    };
    try {
      if (!have_header) {
        f.query = field("query").get<std::string>();
        f.engine = field("engine").get<std::string>();
        f.recorded_at = field("recorded_at").get<std::string>();
        have_header = true;
        continue;
      }
      SearchResult r;
      r.id = field("id").get<std::string>();
      r.engine_rank = field("rank").get<std::size_t>();
      r.url = field("url").get<std::string>();
      r.title = field("title").get<std::string>();
      r.snippet = field("snippet").get<std::string>();
      r.body = field("body").get<std::string>();
      f.results.push_back(std::move(r));
    } catch (const json::type_error& e) {
      throw MalformedResponse(where + ": " + e.what());
    }
  }
  if (!have_header) throw MalformedResponse(origin + ": missing header record");
  for (std::size_t i = 0; i < f.results.size(); ++i) {
    if (f.results[i].engine_rank != i + 1) {
      throw MalformedResponse(origin + ": ranks must run 1..n in file order");
    }
  }
  return f;
}

inline Fixture load_fixture(const std::filesystem::path& path) {
  return parse_fixture(io::read_file(path), path.string());
}

/// Writes the corpus atomically, replacing whatever was at `path`.
inline void record_fixture(const std::vector<SearchResult>& results, std::string_view query,
                           const std::filesystem::path& path, std::string_view engine = "fixture") {
  Fixture f{std::string(query), std::string(engine), utc_timestamp(), results};
  io::write_file_atomic(path, serialize_fixture(f));
}

// ---------------------------------------------------------------------------
// Connectors

enum class ConnectorKind { Fixture, HttpTemplate };

struct ConnectorSpec {
  std::string name;
  ConnectorKind kind = ConnectorKind::Fixture;
  json parameters = json::object();
};

struct FetchPolicy {
  std::size_t max_results = 100;
  bool fetch_bodies = false;
  std::chrono::milliseconds timeout{10000};
  double rate_limit = 1.0;  // requests per second per host
};

inline std::string_view to_string(ConnectorKind k) {
  return k == ConnectorKind::Fixture ? "fixture" : "http_template";
}

inline void validate_spec(const ConnectorSpec& spec) {
  const auto& p = spec.parameters;
  if (spec.kind == ConnectorKind::Fixture) {
    if (!p.contains("path") || !p.at("path").is_string()) {
      throw InvalidConnectorSpec(spec.name + ": fixture connector needs a 'path'");
    }
    const std::filesystem::path path = p.at("path").get<std::string>();
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      throw InvalidConnectorSpec(spec.name + ": fixture corpus " + path.string() + " is not readable");
    }
  } else {
    if (!p.contains("url_template") || !p.at("url_template").is_string() ||
        p.at("url_template").get<std::string>().find("{query}") == std::string::npos) {
      throw InvalidConnectorSpec(spec.name + ": url_template must contain a {query} placeholder");
    }
  }
}

/// Spaces requests to the same host at least 1/rate seconds apart.
class RateLimiter {
 public:
  void acquire(const std::string& host, double rate) {
    if (!(rate > 0.0)) return;
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / rate));
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mutex_);
      const auto now = std::chrono::steady_clock::now();
      auto& next = next_[host];
      slot = std::max(now, next);
      next = slot + interval;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_;
};

namespace detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string host;
  std::string target;  // path and query
};

inline SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConnectorUnavailable("not an absolute URL: " + url);
  const auto path_start = url.find_first_of("/?", scheme_end + 3);
  SplitUrl s;
  s.origin = url.substr(0, path_start);
  s.host = url.substr(scheme_end + 3, path_start == std::string::npos ? std::string::npos
                                                                        : path_start - scheme_end - 3);
  s.target = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (!s.target.empty() && s.target.front() == '?') s.target.insert(s.target.begin(), '/');
  return s;
}

inline std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

inline void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

/// Follows a dot-separated path; numeric segments index arrays.
inline const json* follow_path(const json& root, std::string_view path) {
  const json* cur = &root;
  while (!path.empty()) {
    const auto dot = path.find('.');
    const auto seg = std::string(path.substr(0, dot));
    path = dot == std::string_view::npos ? std::string_view{} : path.substr(dot + 1);
    if (cur->is_object()) {
      auto it = cur->find(seg);
      if (it == cur->end()) return nullptr;
      cur = &*it;
    } else if (cur->is_array() && !seg.empty() &&
               std::all_of(seg.begin(), seg.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const auto idx = std::stoul(seg);
      if (idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else {
      return nullptr;
    }
  }
  return cur;
}

inline std::string param_string(const json& p, const char* key, std::string fallback) {
  if (p.contains(key) && p.at(key).is_string()) return p.at(key).get<std::string>();
  return fallback;
}

inline httplib::Result http_get(const std::string& url, std::chrono::milliseconds timeout,
                                const httplib::Headers& headers, RateLimiter& limiter, double rate) {
  const auto parts = split_url(url);
  limiter.acquire(parts.host, rate);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_follow_location(true);
  return client.Get(parts.target, headers);
}

}  // namespace detail

/// Text bodies for `results`, fetched with a few workers. A page that fails
/// to load leaves its body empty.
inline void fetch_bodies(std::vector<SearchResult>& results, const FetchPolicy& policy,
                         RateLimiter& limiter) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < results.size(); i = next++) {
      try {
        auto res = detail::http_get(results[i].url, policy.timeout, {}, limiter, policy.rate_limit);
        if (res && res->status == 200) results[i].body = extract_text(res->body);
      } catch (const Error&) {
        // unreachable page: keep the snippet-only text
      }
    }
  };
  const auto n_workers = std::min<std::size_t>(4, results.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

/// One request against a configured search API. Parameters:
///   url_template   e.g. "https://host/search?q={query}&n={max_results}&key={credential}"
///   results_path   dot path to the result array ("" for a top-level array)
///   url_field, title_field, snippet_field   dot paths inside each item
///   credential_env name of the env var substituted for {credential}
///   headers        optional object; values may use {credential}
///   rate_limit, timeout_ms   override the fetch policy
inline std::vector<SearchResult> search_http_template(const ConnectorSpec& spec, std::string_view query,
                                                      FetchPolicy policy, RateLimiter& limiter) {
  const auto& p = spec.parameters;
  if (p.contains("rate_limit") && p.at("rate_limit").is_number()) policy.rate_limit = p.at("rate_limit").get<double>();
  if (p.contains("timeout_ms") && p.at("timeout_ms").is_number_integer()) {
    policy.timeout = std::chrono::milliseconds(p.at("timeout_ms").get<long>());
  }

  std::string credential;
  if (const auto env = detail::param_string(p, "credential_env", ""); !env.empty()) {
    const char* value = std::getenv(env.c_str());
    if (value == nullptr) throw ConnectorUnavailable(spec.name + ": credential variable " + env + " is not set");
    credential = value;
  }

  auto url = p.at("url_template").get<std::string>();
  detail::replace_all(url, "{query}", detail::url_encode(query));
  detail::replace_all(url, "{max_results}", std::to_string(policy.max_results));
  detail::replace_all(url, "{credential}", detail::url_encode(credential));

  httplib::Headers headers;
  if (p.contains("headers") && p.at("headers").is_object()) {
    for (const auto& [k, v] : p.at("headers").items()) {
      auto value = v.is_string() ? v.get<std::string>() : v.dump();
      detail::replace_all(value, "{credential}", credential);
      headers.emplace(k, value);
    }
  }

  auto res = detail::http_get(url, policy.timeout, headers, limiter, policy.rate_limit);
  if (!res) throw ConnectorUnavailable(spec.name + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw ConnectorUnavailable(spec.name + ": HTTP " + std::to_string(res->status));
  }

  json body;
  try {
    body = json::parse(res->body);
  } catch (const json::exception& e) {
    throw MalformedResponse(spec.name + ": response is not JSON: " + e.what());
  }
  const auto results_path = detail::param_string(p, "results_path", "");
  const json* items = detail::follow_path(body, results_path);
  if (items == nullptr || !items->is_array()) {
    throw MalformedResponse(spec.name + ": no result array at path '" + results_path + "'");
  }

  const auto url_field = detail::param_string(p, "url_field", "url");
  const auto title_field = detail::param_string(p, "title_field", "title");
  const auto snippet_field = detail::param_string(p, "snippet_field", "snippet");

  std::vector<SearchResult> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < items->size() && out.size() < policy.max_results; ++i) {
    const auto& item = (*items)[i];
    auto read = [&](const std::string& field) {
      const json* v = detail::follow_path(item, field);
      if (v == nullptr || !v->is_string()) {
        const auto prefix = results_path.empty() ? std::string{} : results_path + ".";
        throw MalformedResponse(spec.name + ": missing field '" + prefix + std::to_string(i) + "." + field + "'");
      }
      return v->get<std::string>();
    };
    SearchResult r;
    r.url = read(url_field);
    r.title = read(title_field);
    r.snippet = read(snippet_field);
    r.id = result_id(r.url);
    if (!seen.insert(r.id).second) continue;  // same page listed twice
    r.engine_rank = out.size() + 1;
    out.push_back(std::move(r));
  }
  if (policy.fetch_bodies) fetch_bodies(out, policy, limiter);
  return out;
}

namespace detail {

inline std::string fold_query(std::string_view q) {
  std::string out;
  for (const auto& t : tokenize(q)) {
    if (!out.empty()) out += ' ';
    out += t.value;
  }
  return out;
}

}  // namespace detail

/// Fetches results for `query`. Fixture connectors replay their recorded
/// results when the query matches the recorded one (case and punctuation
/// folded); recorded bodies are only returned when the policy asks for
/// bodies.
inline std::vector<SearchResult> search(const ConnectorSpec& spec, std::string_view query,
                                        const FetchPolicy& policy, RateLimiter& limiter) {
  if (query.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw UsageError("query must not be empty");
  }
  if (policy.max_results < 1) throw UsageError("max_results must be at least 1");
  validate_spec(spec);

  if (spec.kind == ConnectorKind::HttpTemplate) return search_http_template(spec, query, policy, limiter);

  auto fixture = load_fixture(spec.parameters.at("path").get<std::string>());
  if (detail::fold_query(fixture.query) != detail::fold_query(query)) {
    throw ConnectorUnavailable(spec.name + ": fixture holds results for '" + fixture.query +
                               "', not '" + std::string(query) + "'");
  }
  auto results = std::move(fixture.results);
  if (results.size() > policy.max_results) results.resize(policy.max_results);
  if (!policy.fetch_bodies) {
    for (auto& r : results) r.body.clear();
  }
  return results;
}

inline std::vector<SearchResult> search(const ConnectorSpec& spec, std::string_view query,
                                        const FetchPolicy& policy) {
  RateLimiter limiter;
  return search(spec, query, policy, limiter);
}

/// Connector configuration: a JSON object mapping connector names to their
/// parameters plus a "kind" of "fixture" or "http_template". Relative
/// fixture paths resolve against the config file's directory.
class ConnectorRegistry {
 public:
  ConnectorRegistry() = default;

  static ConnectorRegistry from_json(const json& config, const std::filesystem::path& base_dir = {}) {
    if (!config.is_object()) throw InvalidConnectorSpec("connector config must be a JSON object");
    ConnectorRegistry reg;
    for (const auto& [name, params] : config.items()) {
      if (!params.is_object()) throw InvalidConnectorSpec(name + ": parameters must be an object");
      ConnectorSpec spec;
      spec.name = name;
      const auto kind = detail::param_string(params, "kind", "");
      if (kind == "fixture") {
        spec.kind = ConnectorKind::Fixture;
      } else if (kind == "http_template") {
        spec.kind = ConnectorKind::HttpTemplate;
      } else {
        throw InvalidConnectorSpec(name + ": unknown kind '" + kind + "'");
      }
      spec.parameters = params;
      if (spec.kind == ConnectorKind::Fixture && params.contains("path") && params.at("path").is_string()) {
        std::filesystem::path path = params.at("path").get<std::string>();
        if (path.is_relative() && !base_dir.empty()) spec.parameters["path"] = (base_dir / path).string();
      }
      reg.add(std::move(spec));
    }
    return reg;
  }

  static ConnectorRegistry load(const std::filesystem::path& path) {
    json config;
    try {
      config = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
      throw InvalidConnectorSpec(path.string() + ": " + e.what());
    }
    return from_json(config, path.parent_path());
  }

  void add(ConnectorSpec spec) {
    auto name = spec.name;
    specs_.insert_or_assign(std::move(name), std::move(spec));
  }

  const ConnectorSpec& find(const std::string& name) const {
    auto it = specs_.find(name);
    if (it == specs_.end()) throw UnknownConnector(name);
    return it->second;
  }

  const std::map<std::string, ConnectorSpec>& specs() const { return specs_; }

  std::vector<SearchResult> search(const std::string& name, std::string_view query,
                                   const FetchPolicy& policy) const {
    return interest::search(find(name), query, policy, *limiter_);
  }

 private:
  std::map<std::string, ConnectorSpec> specs_;
  std::shared_ptr<RateLimiter> limiter_ = std::make_shared<RateLimiter>();
};

}  // namespace interest
