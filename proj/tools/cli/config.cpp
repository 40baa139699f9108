#include "config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "arithdyn/chebsweep/sweep.hpp"
#include "arithdyn/error.hpp"

namespace arithdyn::cli {
namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError("config key '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

// Field table shared by render and parse; order is the canonical order.
struct Field {
  const char* key;
  std::function<std::vector<std::string>(const ExperimentConfig&)> get;  // empty = default
  std::function<void(ExperimentConfig&, const std::vector<std::string>&)> set;
  bool list = false;
  bool quoted = true;
};

template <class T>
std::string scalar_text(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else {
    return std::to_string(v);
  }
}

template <class T>
Field scalar(const char* key, T ExperimentConfig::*m) {
  Field f;
  f.key = key;
  f.quoted = std::is_same_v<T, std::string>;
  f.get = [m](const ExperimentConfig& c) -> std::vector<std::string> {
    static const ExperimentConfig def;
    if (c.*m == def.*m) return {};
    return {scalar_text(c.*m)};
  };
  f.set = [m, key](ExperimentConfig& c, const std::vector<std::string>& in) {
    if (in.size() != 1) throw ParseError(std::string("config key '") + key + "' expects one value");
    const std::string& v = in[0];
    if constexpr (std::is_same_v<T, std::string>) {
      c.*m = v;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (v != "true" && v != "false") throw ParseError(std::string("config key '") + key + "' expects true or false");
      c.*m = v == "true";
    } else {
      std::uint64_t x = to_u64(key, v);
      if (x > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) {
        throw ParseError(std::string("config key '") + key + "' out of range");
      }
      c.*m = static_cast<T>(x);
    }
  };
  return f;
}

Field list(const char* key, std::vector<std::string> ExperimentConfig::*m) {
  Field f;
  f.key = key;
  f.list = true;
  f.get = [m](const ExperimentConfig& c) { return c.*m; };
  f.set = [m](ExperimentConfig& c, const std::vector<std::string>& in) { c.*m = in; };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      scalar("command", &ExperimentConfig::command),
      list("map", &ExperimentConfig::maps),
      list("targets", &ExperimentConfig::targets),
      list("start", &ExperimentConfig::starts),
      list("equation", &ExperimentConfig::equations),
      scalar("variety", &ExperimentConfig::variety_file),
      scalar("alpha", &ExperimentConfig::alpha),
      scalar("curve", &ExperimentConfig::curve),
      scalar("point", &ExperimentConfig::point),
      scalar("primes", &ExperimentConfig::primes),
      scalar("mode", &ExperimentConfig::mode),
      scalar("torsion", &ExperimentConfig::torsion),
      scalar("level", &ExperimentConfig::level),
      scalar("depth", &ExperimentConfig::depth),
      scalar("p", &ExperimentConfig::p),
      scalar("q", &ExperimentConfig::q),
      scalar("n", &ExperimentConfig::n),
      scalar("horizon", &ExperimentConfig::horizon),
      scalar("certify_prime_max", &ExperimentConfig::certify_prime_max),
      scalar("height_cap", &ExperimentConfig::height_cap),
      scalar("chunk_width", &ExperimentConfig::chunk_width),
      scalar("max_chunks", &ExperimentConfig::max_chunks),
      scalar("cross_check", &ExperimentConfig::cross_check),
      scalar("workers", &ExperimentConfig::workers),
      scalar("out", &ExperimentConfig::out),
      scalar("summary", &ExperimentConfig::summary),
      scalar("edges", &ExperimentConfig::edges),
      scalar("cache_dir", &ExperimentConfig::cache_dir),
  };
  return table;
}

const std::vector<std::string> kResultIrrelevant = {"workers", "out", "summary", "edges", "cache_dir", "max_chunks"};

std::string render_filtered(const ExperimentConfig& cfg, bool results_only) {
  std::string out;
  for (const Field& f : fields()) {
    if (results_only &&
        std::find(kResultIrrelevant.begin(), kResultIrrelevant.end(), f.key) != kResultIrrelevant.end()) {
      continue;
    }
    std::vector<std::string> vals = f.get(cfg);
    if (vals.empty()) continue;
    out += f.key;
    out += " = ";
    if (f.list) {
      out += "[";
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i].empty()) throw ParseError(std::string("config key '") + f.key + "' has an empty entry");
        if (i) out += ", ";
        out += quote(vals[i]);
      }
      out += "]";
    } else {
      out += f.quoted ? quote(vals[0]) : vals[0];
    }
    out += "\n";
  }
  return out;
}

std::uint64_t parse_bound(std::string_view s) {
  std::string t(s);
  auto number = [&](const std::string& v) {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw ParseError("bad prime bound '" + t + "'");
    }
    return x;
  };
  auto power = [&](std::uint64_t base, std::uint64_t mant, std::uint64_t e) {
    unsigned __int128 v = mant;
    for (std::uint64_t i = 0; i < e; ++i) {
      v *= base;
      if (v > std::numeric_limits<std::uint64_t>::max()) throw ParseError("prime bound '" + t + "' overflows");
    }
    return static_cast<std::uint64_t>(v);
  };
  if (auto pos = t.find('e'); pos != std::string::npos) {
    return power(10, number(t.substr(0, pos)), number(t.substr(pos + 1)));
  }
  if (auto pos = t.find('^'); pos != std::string::npos) {
    return power(number(t.substr(0, pos)), 1, number(t.substr(pos + 1)));
  }
  return number(t);
}

}  // namespace

std::string render_config(const ExperimentConfig& cfg) { return render_filtered(cfg, false); }

ExperimentConfig parse_config(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  std::vector<std::string> seen;
  for (const auto& item : items) {
    if (!item.parents.empty()) throw ParseError("config: sections are not supported (" + item.fullname() + ")");
    const Field* f = nullptr;
    for (const Field& cand : fields()) {
      if (item.name == cand.key) f = &cand;
    }
    if (f == nullptr) throw ParseError("config: unknown key '" + item.name + "'");
    if (std::find(seen.begin(), seen.end(), item.name) != seen.end()) {
      throw ParseError("config: duplicate key '" + item.name + "'");
    }
    seen.push_back(item.name);
    f->set(cfg, item.inputs);
  }
  return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(render_filtered(cfg, true))));
  return buf;
}

std::pair<std::uint64_t, std::uint64_t> parse_prime_range(std::string_view text) {
  auto pos = text.find("..");
  if (pos == std::string_view::npos) throw ParseError("prime range must look like lo..hi, got '" + std::string(text) + "'");
  std::uint64_t lo = parse_bound(text.substr(0, pos));
  std::uint64_t hi = parse_bound(text.substr(pos + 2));
  return {lo, hi};
}

}  // namespace arithdyn::cli
