#pragma once

#include <CLI11.hpp>
#include <httplib.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "interest/connectors.hpp"
#include "interest/io.hpp"
#include "interest/pipeline.hpp"
#include "interest/profile.hpp"
#include "interest/report.hpp"
#include "interest/service.hpp"

namespace interest::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kUsage = 2,
  kIo = 3,
  kConnector = 4,
};

inline int exit_code_for(const Error& e) {
  const auto& c = e.code();
  if (c == "bad_request" || c == "unknown_scorer") return kUsage;
  if (c == "io_failure" || c == "unknown_profile") return kIo;
  if (c == "connector_unavailable" || c == "malformed_response" || c == "unknown_connector" ||
      c == "invalid_connector_spec") {
    return kConnector;
  }
  return kValidation;
}

namespace detail {

struct Globals {
  std::string profiles_dir = "profiles";
  std::string stopwords;
  std::string connectors_config = "connectors.json";

  std::filesystem::path stopwords_path() const {
    if (!stopwords.empty()) return stopwords;
    return std::filesystem::path(profiles_dir) / "stopwords";
  }

  ProfileStore store() const {
    if (!stopwords.empty() && !std::filesystem::exists(stopwords)) {
      throw IoFailure("stopwords file " + stopwords + " does not exist");
    }
    return ProfileStore(profiles_dir, stopwords_path());
  }

  /// A missing default config is an empty registry; an explicitly named
  /// one must exist.
  ConnectorRegistry registry(bool explicit_config) const {
    if (!std::filesystem::exists(connectors_config)) {
      if (explicit_config) throw IoFailure("connector config " + connectors_config + " does not exist");
      return {};
    }
    return ConnectorRegistry::load(connectors_config);
  }
};

struct Source {
  std::string fixture;
  std::string connector;
  std::string query;
  std::size_t max_results = 100;
  bool fetch_bodies = false;

  void add_options(CLI::App* cmd) {
    auto* f = cmd->add_option("--fixture", fixture, "Fixture corpus file to replay");
    auto* c = cmd->add_option("--connector", connector, "Configured connector name");
    f->excludes(c);
    cmd->add_option("--query", query, "Search query (defaults to the fixture's recorded query)");
    cmd->add_option("--max-results", max_results, "Result window")->check(CLI::PositiveNumber);
    cmd->add_flag("--fetch-bodies", fetch_bodies, "Score page bodies as well as title and snippet");
  }

  /// Resolves the connector; a --fixture file becomes an ad-hoc connector
  /// named "fixture".
  RerankRequest resolve(ConnectorRegistry& registry) {
    RerankRequest req;
    if (!fixture.empty()) {
      if (!std::filesystem::is_regular_file(fixture)) throw IoFailure("fixture " + fixture + " does not exist");
      ConnectorSpec spec{"fixture", ConnectorKind::Fixture, json{{"kind", "fixture"}, {"path", fixture}}};
      registry.add(spec);
      req.connector = "fixture";
      if (query.empty()) query = load_fixture(fixture).query;
    } else if (!connector.empty()) {
      req.connector = connector;
    } else {
      throw UsageError("one of --fixture or --connector is required");
    }
    req.query = query;
    req.max_results = max_results;
    req.fetch_bodies = fetch_bodies;
    return req;
  }
};

inline void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoFailure("cannot create output directory " + dir.string());
  }
}

}  // namespace detail

/// Runs the command line. Diagnostics go to `err`, normal output to `out`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Re-rank search results by interestingness against a domain profile"};
  app.require_subcommand(1);
  detail::Globals g;
  app.add_option("--profiles-dir", g.profiles_dir, "Directory of <name>.target / <name>.competitor files");
  app.add_option("--stopwords", g.stopwords, "Stopwords file (default: <profiles-dir>/stopwords)");
  auto* config_opt = app.add_option("--connectors-config", g.connectors_config, "Connector config JSON");

  // rerank
  auto* rerank_cmd = app.add_subcommand("rerank", "Re-rank one result set and write rerank.csv/.json");
  detail::Source rerank_src;
  std::string rerank_profile, rerank_scorer, rerank_output;
  rerank_src.add_options(rerank_cmd);
  rerank_cmd->add_option("--profile", rerank_profile, "Profile name")->required();
  rerank_cmd->add_option("--scorer", rerank_scorer, "mm or tfidf")->required();
  rerank_cmd->add_option("--output", rerank_output, "Output directory")->required();

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Compare two scorers' orders over one result set");
  detail::Source compare_src;
  std::string compare_profile, scorer_a, scorer_b, compare_output;
  std::size_t top_k = 0;
  double outlier_factor = kDefaultOutlierFactor;
  compare_src.add_options(compare_cmd);
  compare_cmd->add_option("--profile", compare_profile, "Profile name")->required();
  compare_cmd->add_option("--scorer-a", scorer_a, "First scorer")->required();
  compare_cmd->add_option("--scorer-b", scorer_b, "Second scorer")->required();
  compare_cmd->add_option("--top-k", top_k, "Pair only the first k rows of order A (0 = all)");
  compare_cmd->add_option("--outlier-factor", outlier_factor, "Median multiple that flags an outlier")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--output", compare_output, "Output directory")->required();

  // profile validate
  auto* profile_cmd = app.add_subcommand("profile", "Profile operations");
  profile_cmd->require_subcommand(1);
  auto* validate_cmd = profile_cmd->add_subcommand("validate", "Check a profile's invariants");
  std::string validate_name;
  validate_cmd->add_option("name", validate_name, "Profile name")->required();

  // fixture record
  auto* fixture_cmd = app.add_subcommand("fixture", "Fixture corpus operations");
  fixture_cmd->require_subcommand(1);
  auto* record_cmd = fixture_cmd->add_subcommand("record", "Fetch live results and freeze them as a fixture");
  std::string record_connector, record_query, record_output;
  std::size_t record_max = 100;
  bool record_bodies = false;
  record_cmd->add_option("--connector", record_connector, "Configured connector name")->required();
  record_cmd->add_option("--query", record_query, "Search query")->required();
  record_cmd->add_option("--output", record_output, "Fixture file to write")->required();
  record_cmd->add_option("--max-results", record_max, "Result window")->check(CLI::PositiveNumber);
  record_cmd->add_flag("--fetch-bodies", record_bodies, "Fetch and store page text");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string host = "0.0.0.0";
  int port = 8080;
  std::string static_dir;
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--static-dir", static_dir, "Serve a web console from this directory at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const bool explicit_config = config_opt->count() > 0;

  try {
    if (rerank_cmd->parsed()) {
      RerankRequest req;
      const auto scorer = parse_scorer(rerank_scorer);
      auto store = g.store();
      auto registry = g.registry(explicit_config && rerank_src.fixture.empty());
      req = rerank_src.resolve(registry);
      req.profile = rerank_profile;
      req.scorer = scorer;
      const std::filesystem::path dir = rerank_output;
      detail::prepare_output_dir(dir);
      const auto response = Pipeline(store, registry).rerank(req);
      io::write_file_atomic(dir / "rerank.json", report::to_body(response));
      io::write_file_atomic(dir / "rerank.csv", report::rerank_csv(response));
      out << "wrote " << response.at("results").size() << " rows to " << (dir / "rerank.csv").string() << "\n";
      return kOk;
    }

    if (compare_cmd->parsed()) {
      CompareRequest req;
      const auto a = parse_scorer(scorer_a);
      const auto b = parse_scorer(scorer_b);
      auto store = g.store();
      auto registry = g.registry(explicit_config && compare_src.fixture.empty());
      req.base = compare_src.resolve(registry);
      req.base.profile = compare_profile;
      req.base.scorer = a;
      req.scorer_b = b;
      req.top_k = top_k;
      req.outlier_factor = outlier_factor;
      const std::filesystem::path dir = compare_output;
      detail::prepare_output_dir(dir);
      const auto response = Pipeline(store, registry).compare(req);
      io::write_file_atomic(dir / "comparison.json", report::to_body(response));
      io::write_file_atomic(dir / "comparison.csv", report::comparison_csv(response.at("pairs")));
      out << response.at("summary").dump() << "\n";
      return kOk;
    }

    if (validate_cmd->parsed()) {
      const auto profile = g.store().load(validate_name);
      const auto violations = validate_profile(profile);
      for (const auto& v : violations) {
        err << v.code;
        if (!v.entry.empty()) err << ": " << v.entry;
        err << "\n";
      }
      return violations.empty() ? kOk : kValidation;
    }

    if (record_cmd->parsed()) {
      const auto registry = g.registry(explicit_config);
      FetchPolicy policy;
      policy.max_results = record_max;
      policy.fetch_bodies = record_bodies;
      const auto results = registry.search(record_connector, record_query, policy);
      record_fixture(results, record_query, record_output, record_connector);
      out << "recorded " << results.size() << " results to " << record_output << "\n";
      return kOk;
    }

    if (serve_cmd->parsed()) {
      auto store = g.store();
      const auto registry = g.registry(explicit_config);
      Service service(store, registry);
      httplib::Server server;
      service.mount(server);
      if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
        throw IoFailure("cannot serve static files from " + static_dir);
      }
      out << "listening on " << host << ":" << port << std::endl;
      if (!server.listen(host, port)) throw IoFailure("cannot listen on " + host + ":" + std::to_string(port));
      return kOk;
    }
  } catch (const MalformedLine& e) {
    err << "MalformedLine: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    err << e.code() << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io_failure: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

}  // namespace interest::cli
