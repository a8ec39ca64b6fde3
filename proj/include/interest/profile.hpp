#pragma once

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "interest/error.hpp"
#include "interest/io.hpp"
#include "interest/text.hpp"

namespace interest {

/// One line of a Target or Competitor file. More than one term means a
/// phrase, matched as a contiguous run of tokens.
struct ProfileEntry {
  std::vector<Term> terms;

  bool is_phrase() const { return terms.size() > 1; }

  /// Canonical text form: terms joined by single spaces.
  std::string key() const {
    std::string out;
    for (const auto& t : terms) {
      if (!out.empty()) out += ' ';
      out += t.value;
    }
    return out;
  }

  auto operator<=>(const ProfileEntry&) const = default;
};

using EntrySet = std::set<ProfileEntry>;

struct DomainProfile {
  std::string name;
  EntrySet target;
  EntrySet competitors;
  TermSet stopwords;
};

struct Violation {
  std::string code;  // EmptyTarget, OverlapViolation, StopwordInEntry, EmptyEntry
  std::string entry;
  std::string message;

  bool operator==(const Violation&) const = default;
};

class InvalidProfile : public Error {
 public:
  explicit InvalidProfile(std::vector<Violation> violations)
      : Error("invalid_profile", describe(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& vs) {
    std::string out = "profile violates its invariants:";
    for (const auto& v : vs) out += " " + v.code + (v.entry.empty() ? "" : "(" + v.entry + ")");
    return out;
  }

  std::vector<Violation> violations_;
};

namespace detail {

template <typename Fn>
void for_each_content_line(std::string_view content, Fn&& fn) {
  std::size_t line_no = 0;
  while (!content.empty()) {
    ++line_no;
    const auto nl = content.find('\n');
    auto line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    fn(line_no, line);
  }
}

}  // namespace detail

/// Stopwords file: same line grammar as profile files; every token on a
/// line becomes a stopword.
inline TermSet parse_stopwords(std::string_view content) {
  TermSet out;
  detail::for_each_content_line(content, [&](std::size_t, std::string_view line) {
    for (auto& t : tokenize(line)) out.insert(std::move(t));
  });
  return out;
}

/// Parses a Target or Competitor file. Stopwords are dropped from each
/// entry; an entry made only of stopwords raises MalformedLine.
inline EntrySet parse_profile_file(std::string_view content, const TermSet& stopwords) {
  EntrySet out;
  detail::for_each_content_line(content, [&](std::size_t line_no, std::string_view line) {
    auto tokens = tokenize(line);
    if (tokens.empty()) return;
    ProfileEntry entry;
    for (auto& t : tokens) {
      if (!stopwords.contains(t)) entry.terms.push_back(std::move(t));
    }
    if (entry.terms.empty()) throw MalformedLine(line_no, "entry consists only of stopwords");
    out.insert(std::move(entry));
  });
  return out;
}

inline std::string serialize_entries(const EntrySet& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += e.key();
    out += '\n';
  }
  return out;
}

inline std::vector<Violation> validate_profile(const DomainProfile& p) {
  std::vector<Violation> out;
  if (p.target.empty()) out.push_back({"EmptyTarget", "", "target file has no entries"});

  auto check_entries = [&](const EntrySet& entries) {
    for (const auto& e : entries) {
      if (e.terms.empty()) {
        out.push_back({"EmptyEntry", "", "entry has no terms"});
        continue;
      }
      for (const auto& t : e.terms) {
        if (p.stopwords.contains(t)) {
          out.push_back({"StopwordInEntry", e.key(), "entry contains stopword '" + t.value + "'"});
          break;
        }
      }
    }
  };
  check_entries(p.target);
  check_entries(p.competitors);

  for (const auto& e : p.target) {
    if (p.competitors.contains(e)) {
      out.push_back({"OverlapViolation", e.key(), "entry is both a target and a competitor"});
    }
  }
  return out;
}

inline bool is_valid_profile_name(std::string_view name) {
  if (name.empty() || name.size() > 128) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  }) && name.front() != '.';
}

/// Profiles kept as `<name>.target` / `<name>.competitor` files in one
/// directory, plus a shared stopwords file. Reads share the lock; a save
/// holds it exclusively.
class ProfileStore {
 public:
  ProfileStore(std::filesystem::path dir, std::filesystem::path stopwords_path)
      : dir_(std::move(dir)), stopwords_path_(std::move(stopwords_path)) {}

  const std::filesystem::path& directory() const { return dir_; }

  /// A missing stopwords file means no stopwords.
  TermSet stopwords() const {
    std::shared_lock lock(mutex_);
    return load_stopwords();
  }

  std::vector<std::string> list() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> names;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir_, ec)) return names;
    for (const auto& de : std::filesystem::directory_iterator(dir_, ec)) {
      if (de.path().extension() == ".target" && de.is_regular_file()) {
        names.push_back(de.path().stem().string());
      }
    }
    std::sort(names.begin(), names.end());
    return names;
  }

  bool contains(std::string_view name) const {
    if (!is_valid_profile_name(name)) return false;
    std::shared_lock lock(mutex_);
    return std::filesystem::is_regular_file(target_path(name));
  }

  /// Loads without validating. A missing competitor file is an empty list.
  DomainProfile load(std::string_view name) const {
    if (!is_valid_profile_name(name)) throw UnknownProfile(std::string(name));
    std::shared_lock lock(mutex_);
    const auto tpath = target_path(name);
    if (!std::filesystem::is_regular_file(tpath)) throw UnknownProfile(std::string(name));
    DomainProfile p;
    p.name = std::string(name);
    p.stopwords = load_stopwords();
    p.target = parse_profile_file(io::read_file(tpath), p.stopwords);
    const auto cpath = competitor_path(name);
    if (std::filesystem::exists(cpath)) {
      p.competitors = parse_profile_file(io::read_file(cpath), p.stopwords);
    }
    return p;
  }

  /// Validates and persists. Throws InvalidProfile without touching disk
  /// when the profile breaks an invariant.
  void save(const DomainProfile& p) {
    if (!is_valid_profile_name(p.name)) throw UsageError("invalid profile name '" + p.name + "'");
    if (auto vs = validate_profile(p); !vs.empty()) throw InvalidProfile(std::move(vs));
    std::unique_lock lock(mutex_);
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoFailure("cannot create " + dir_.string() + ": " + ec.message());
    io::write_file_atomic(target_path(p.name), serialize_entries(p.target));
    io::write_file_atomic(competitor_path(p.name), serialize_entries(p.competitors));
  }

 private:
  std::filesystem::path target_path(std::string_view name) const {
    return dir_ / (std::string(name) + ".target");
  }
  std::filesystem::path competitor_path(std::string_view name) const {
    return dir_ / (std::string(name) + ".competitor");
  }

  TermSet load_stopwords() const {
    if (stopwords_path_.empty() || !std::filesystem::exists(stopwords_path_)) return {};
    return parse_stopwords(io::read_file(stopwords_path_));
  }

  std::filesystem::path dir_;
  std::filesystem::path stopwords_path_;
  mutable std::shared_mutex mutex_;
};

}  // namespace interest
