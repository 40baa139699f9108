#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "arithdyn/chebsweep/sweep.hpp"
#include "arithdyn/dml/dml.hpp"
#include "arithdyn/error.hpp"
#include "arithdyn/forest/forest.hpp"
#include "arithdyn/lattes/lattes.hpp"
#include "arithdyn/moddyn/orbit.hpp"

#ifndef ARITHDYN_VERSION
#define ARITHDYN_VERSION "0.0.0"
#endif

namespace arithdyn::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string artifact_version() { return ARITHDYN_VERSION; }

namespace {

constexpr int kSummarySchema = 1;

// Writes through a temporary file so readers never see a partial artifact.
void write_file(const std::string& path, const std::string& content) {
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + target.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Artifact to --out, or to the stream when no path is set.
void emit(const ExperimentConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out.empty()) {
    out << content;
  } else {
    write_file(cfg.out, content);
  }
}

void emit_summary(const ExperimentConfig& cfg, const json& summary, std::ostream& out) {
  std::string text = summary.dump(2) + "\n";
  if (!cfg.summary.empty()) write_file(cfg.summary, text);
  out << text;
}

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json density_json(const DensityEstimate& d) {
  return json{{"eligible", d.eligible},
              {"hits", d.hits},
              {"proportion", to_string(d.proportion)},
              {"value", d.value()},
              {"wilson99", {d.wilson99_lo, d.wilson99_hi}}};
}

json header(const ExperimentConfig& cfg) {
  return json{{"schema", kSummarySchema},
              {"command", cfg.command},
              {"version", artifact_version()},
              {"config_hash", config_hash(cfg)}};
}

std::pair<std::uint64_t, std::uint64_t> range_or(const ExperimentConfig& cfg, const char* fallback) {
  return parse_prime_range(cfg.primes.empty() ? std::string_view(fallback) : std::string_view(cfg.primes));
}

std::vector<ProjPoint> parse_point_list(const std::string& text) {
  std::vector<ProjPoint> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) pts.push_back(ProjPoint::parse(item));
  if (pts.empty()) throw ParseError("empty target list");
  return pts;
}

std::vector<TargetEntry> target_entries(const ExperimentConfig& cfg) {
  if (cfg.maps.empty()) throw ParseError("at least one --map is required");
  if (cfg.targets.size() != cfg.maps.size()) {
    throw ParseError("give one --targets list per --map (" + std::to_string(cfg.maps.size()) + " maps, " +
                     std::to_string(cfg.targets.size()) + " target lists)");
  }
  std::vector<TargetEntry> entries;
  for (std::size_t i = 0; i < cfg.maps.size(); ++i) {
    entries.push_back(TargetEntry{RationalMap::parse(cfg.maps[i]), parse_point_list(cfg.targets[i])});
  }
  return entries;
}

std::string cache_dir(const ExperimentConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  const char* env = std::getenv(kCacheDirEnv);
  return env ? env : "";
}

const json kHypotheses = {{"almost_linearly_disjoint", "unverified"}};

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  const std::string started = utc_now();
  TargetSystem sys(target_entries(cfg), cfg.level);
  auto [lo, hi] = range_or(cfg, "3..10000");
  SweepOptions so;
  so.workers = cfg.workers;
  so.chunk_width = cfg.chunk_width;
  if (so.chunk_width == 0) throw ParseError("chunk_width must be positive");
  if (cfg.max_chunks > 0) so.max_new_chunks = cfg.max_chunks;
  if (std::string dir = cache_dir(cfg); !dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create cache directory " + dir + ": " + ec.message());
    so.cache_file = fs::path(dir) / ("sweep-" + sys.hash() + "-w" + std::to_string(so.chunk_width) + ".jsonl");
  }
  SweepResult r = sweep(sys, lo, hi, so);

  if (!cfg.out.empty() && r.complete) {
    std::ostringstream csv;
    write_sweep_csv(csv, sys, r.records);
    write_file(cfg.out, csv.str());
  }
  std::uint64_t infinity_hits = 0;
  for (const auto& rec : r.records) infinity_hits += rec.infinity_hit ? 1 : 0;
  json s = header(cfg);
  s["system"] = sys.canonical_text();
  s["system_hash"] = sys.hash();
  s["level"] = sys.level();
  s["labels"] = sys.labels();
  s["primes"] = {lo, hi};
  s["complete"] = r.complete;
  s["derangement"] = density_json(r.density);
  s["infinity_hits"] = infinity_hits;
  s["hypotheses"] = kHypotheses;
  emit_summary(cfg, s, out);

  if (!cfg.out.empty()) {
    json m{{"schema", kSummarySchema},
           {"artifact_version", artifact_version()},
           {"config_hash", config_hash(cfg)},
           {"config", render_config(cfg)},
           {"started", started},
           {"finished", utc_now()},
           {"cache_file", so.cache_file.string()},
           {"chunks", {{"total", r.chunks_total}, {"cached", r.chunks_cached}, {"computed", r.chunks_computed}}},
           {"complete", r.complete}};
    write_file(cfg.out + ".manifest.json", m.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_certify(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.maps.size() != 1) throw ParseError("certify takes exactly one --map");
  if (cfg.alpha.empty()) throw ParseError("certify needs --alpha");
  RationalMap map = RationalMap::parse(cfg.maps[0]);
  ProjPoint alpha = ProjPoint::parse(cfg.alpha);
  auto [lo, hi] = range_or(cfg, "3..1000");
  NonPeriodicScan scan = nonperiodic_prime_scan(map, alpha, lo, hi, cfg.workers);
  std::ostringstream jsonl;
  write_certificate_jsonl(jsonl, scan.certificate);
  emit(cfg, jsonl.str(), out);
  if (!cfg.summary.empty()) {
    json s = header(cfg);
    s["map"] = map.to_string();
    s["alpha"] = alpha.to_string();
    s["primes"] = {lo, hi};
    s["entries"] = scan.certificate.entries.size();
    s["verified_over_q"] = scan.certificate.verified_over_q;
    s["nonperiodic"] = density_json(scan.density);
    write_file(cfg.summary, s.dump(2) + "\n");
  }
  return kExitOk;
}

json certificate_json(const PadicCertificate& c) {
  json coords = json::array();
  for (const auto& co : c.coordinates) {
    json crit = json::array();
    for (const auto& pt : co.critical) crit.push_back(pt.to_string());
    coords.push_back({{"tail", co.shape.tail}, {"period", co.shape.period}, {"critical", crit}});
  }
  return json{{"p", c.p}, {"mode", c.mode == CertificateMode::kStrict ? "strict" : "relaxed"}, {"coordinates", coords}};
}

int cmd_dml(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.maps.empty()) throw ParseError("dml needs at least one --map");
  std::vector<RationalMap> maps;
  for (const auto& m : cfg.maps) maps.push_back(RationalMap::parse(m));
  std::vector<ProjPoint> starts;
  for (const auto& s : cfg.starts) starts.push_back(ProjPoint::parse(s));
  if (starts.size() != maps.size()) throw ParseError("give one --start per --map");
  std::string eqs;
  for (const auto& e : cfg.equations) eqs += e + "\n";
  if (!cfg.variety_file.empty()) eqs += read_file(cfg.variety_file);
  Subvariety V = Subvariety::parse(eqs, maps.size());
  if (cfg.mode != "strict" && cfg.mode != "relaxed") throw ParseError("mode must be strict or relaxed");
  SplitSystem sys(maps, starts);

  json doc = header(cfg);
  doc["N"] = cfg.horizon;
  std::vector<std::uint64_t> S;
  try {
    S = orbit_membership_scan(sys, V, cfg.horizon, cfg.height_cap);
  } catch (const HeightOverflowError& e) {
    doc["scan_partial"] = e.partial();
    doc["overflow_index"] = e.index();
    emit(cfg, doc.dump(2) + "\n", out);
    err << "error: " << e.what() << "\n";
    return kExitMath;
  }
  doc["scan"] = S;
  int status = kExitOk;
  try {
    std::ostringstream c;
    write_cover_json(c, fit_progressions(S, cfg.horizon));
    doc["cover"] = json::parse(c.str());
  } catch (const FitFailureError& e) {
    doc["cover"] = nullptr;
    err << "error: " << e.what() << "\n";
    status = kExitMath;
  }
  if (cfg.certify_prime_max > 0) {
    CertificateMode mode = cfg.mode == "strict" ? CertificateMode::kStrict : CertificateMode::kRelaxed;
    try {
      doc["certificate"] = certificate_json(find_padic_certificate(sys, 2, cfg.certify_prime_max, mode, cfg.workers));
    } catch (const MathError& e) {
      doc["certificate"] = nullptr;
      err << "error: " << e.what() << "\n";
      status = kExitMath;
    }
  }
  emit(cfg, doc.dump(2) + "\n", out);
  return status;
}

int cmd_lattes(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.curve.empty() || cfg.point.empty()) throw ParseError("lattes needs --curve and --point");
  EllipticCurve E = EllipticCurve::parse(cfg.curve);
  ECPoint Q = ECPoint::parse(cfg.point);
  if (cfg.q > 64 || cfg.n > 63) throw ParseError("q or n out of range");
  OrderSweepOptions opts;
  opts.workers = cfg.workers;
  opts.cross_check = cfg.cross_check;
  if (cfg.torsion == "reject") {
    opts.torsion = TorsionPolicy::kReject;
  } else if (cfg.torsion == "annotate") {
    opts.torsion = TorsionPolicy::kAnnotate;
  } else {
    throw ParseError("torsion must be reject or annotate");
  }
  auto [lo, hi] = range_or(cfg, "3..10000");
  OrderSweepResult r =
      order_divisibility_sweep(E, Q, static_cast<unsigned>(cfg.q), static_cast<unsigned>(cfg.n), lo, hi, opts);
  json doc = header(cfg);
  doc["curve"] = E.to_string();
  doc["point"] = Q.to_string();
  doc["q"] = cfg.q;
  doc["n"] = cfg.n;
  doc["primes"] = {lo, hi};
  doc["divisibility"] = density_json(r.density);
  doc["torsion_order"] = r.torsion_order ? json(*r.torsion_order) : json(nullptr);
  if (r.cross_check_system) {
    doc["cross_check"] = {{"system", *r.cross_check_system},
                          {"primes", r.cross_check_primes},
                          {"derangements", r.cross_check_derangements},
                          {"violations", r.cross_check_violations}};
  } else {
    doc["cross_check"] = nullptr;
  }
  doc["hypotheses"] = kHypotheses;
  emit(cfg, doc.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_forest(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.p == 0) throw ParseError("forest needs --p");
  TargetSystem sys(target_entries(cfg), 1);
  PreimageForestModP forest = build_forest_modp(sys, cfg.p, cfg.depth);
  std::ostringstream js;
  write_forest_json(js, sys, forest);
  emit(cfg, js.str(), out);
  if (!cfg.edges.empty()) {
    std::ostringstream e;
    write_forest_edges(e, forest);
    write_file(cfg.edges, e.str());
  }
  return kExitOk;
}

int cmd_independence(const ExperimentConfig& cfg, std::ostream& out) {
  TargetSystem sys(target_entries(cfg), cfg.level);
  auto [lo, hi] = range_or(cfg, "3..100000");
  IndependenceReport r = independence_report(sys, lo, hi, cfg.workers);
  json doc = header(cfg);
  doc["system"] = sys.canonical_text();
  doc["primes"] = {lo, hi};
  doc["labels"] = r.labels;
  doc["eligible"] = r.eligible;
  doc["marginals"] = r.marginals;
  doc["joint"] = r.joint;
  doc["product"] = r.product;
  doc["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
  doc["chi_square"] = r.chi_square;
  doc["dof"] = r.dof;
  doc["cells"] = r.cells;
  doc["hypotheses"] = kHypotheses;
  emit(cfg, doc.dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

int run_command(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    if (cfg.command == "certify") return cmd_certify(cfg, out);
    if (cfg.command == "dml") return cmd_dml(cfg, out, err);
    if (cfg.command == "lattes") return cmd_lattes(cfg, out);
    if (cfg.command == "forest") return cmd_forest(cfg, out);
    if (cfg.command == "independence") return cmd_independence(cfg, out);
    throw ParseError("unknown command '" + cfg.command + "'");
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MathError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMath;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

namespace {

// Flags are parsed into `flags`; only options actually given override the
// config file.
struct Binder {
  ExperimentConfig flags;
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> setters;

  template <class T>
  CLI::Option* bind(CLI::App* app, const std::string& name, T ExperimentConfig::*field, const std::string& help) {
    CLI::Option* opt = app->add_option(name, flags.*field, help);
    setters.emplace_back(opt, [this, field](ExperimentConfig& c) { c.*field = flags.*field; });
    return opt;
  }
};

void add_common(CLI::App* app, Binder& b, bool ranged) {
  b.bind(app, "--workers", &ExperimentConfig::workers, "Worker threads (0 = hardware)");
  b.bind(app, "--out", &ExperimentConfig::out, "Artifact path (default stdout)");
  if (ranged) b.bind(app, "--primes", &ExperimentConfig::primes, "Prime range lo..hi, half-open");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arithmetic dynamics experiments over Q and F_p", "arithdyn"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", artifact_version());
  std::string config_path;
  app.add_option("--config", config_path, "TOML config; command-line flags take precedence");

  Binder b;
  std::map<std::string, CLI::App*> subs;

  CLI::App* sw = app.add_subcommand("sweep", "Derangement statistics of iterate polynomials over primes");
  b.bind(sw, "--map", &ExperimentConfig::maps, "Rational map, repeatable")->allow_extra_args(false);
  b.bind(sw, "--targets", &ExperimentConfig::targets, "Comma-separated targets, one list per map")
      ->allow_extra_args(false);
  b.bind(sw, "--level", &ExperimentConfig::level, "Iterate level m");
  b.bind(sw, "--summary", &ExperimentConfig::summary, "Summary JSON path");
  b.bind(sw, "--cache-dir", &ExperimentConfig::cache_dir, "Chunk cache directory (default $ARITHDYN_CACHE_DIR)");
  b.bind(sw, "--chunk-width", &ExperimentConfig::chunk_width, "Prime chunk width");
  b.bind(sw, "--max-chunks", &ExperimentConfig::max_chunks, "Stop after this many new chunks (0 = all)");
  add_common(sw, b, true);
  subs["sweep"] = sw;

  CLI::App* ce = app.add_subcommand("certify", "Primes where a point is not periodic mod p");
  b.bind(ce, "--map", &ExperimentConfig::maps, "Rational map")->allow_extra_args(false);
  b.bind(ce, "--alpha", &ExperimentConfig::alpha, "Point of P^1(Q)");
  b.bind(ce, "--summary", &ExperimentConfig::summary, "Summary JSON path");
  add_common(ce, b, true);
  subs["certify"] = ce;

  CLI::App* dm = app.add_subcommand("dml", "Orbit membership scan, progression fit and p-adic certificate");
  b.bind(dm, "--map", &ExperimentConfig::maps, "Coordinate map, repeatable")->allow_extra_args(false);
  b.bind(dm, "--start", &ExperimentConfig::starts, "Coordinate start, repeatable")->allow_extra_args(false);
  b.bind(dm, "--equation", &ExperimentConfig::equations, "Equation in X1, Y1, ..., repeatable")
      ->allow_extra_args(false);
  b.bind(dm, "--variety", &ExperimentConfig::variety_file, "File with one equation per line");
  b.bind(dm, "--horizon", &ExperimentConfig::horizon, "Scan n = 0..N");
  b.bind(dm, "--certify-prime-max", &ExperimentConfig::certify_prime_max, "Search certificates up to this prime");
  b.bind(dm, "--mode", &ExperimentConfig::mode, "Certificate mode: strict or relaxed");
  b.bind(dm, "--height-cap", &ExperimentConfig::height_cap, "Coordinate size cap in bits");
  add_common(dm, b, false);
  subs["dml"] = dm;

  CLI::App* la = app.add_subcommand("lattes", "Order divisibility of a point on an elliptic curve over primes");
  b.bind(la, "--curve", &ExperimentConfig::curve, "Coefficients \"a b\" of y^2 = x^3 + ax + b");
  b.bind(la, "--point", &ExperimentConfig::point, "Point \"x y\"");
  b.bind(la, "--q", &ExperimentConfig::q, "Prime q");
  b.bind(la, "--n", &ExperimentConfig::n, "Exponent n");
  b.bind(la, "--torsion", &ExperimentConfig::torsion, "Torsion input: reject or annotate");
  {
    CLI::Option* opt = la->add_flag("--cross-check,!--no-cross-check", b.flags.cross_check,
                                    "Compare with the derangement sweep of the Lattes map");
    b.setters.emplace_back(opt, [&b](ExperimentConfig& c) { c.cross_check = b.flags.cross_check; });
  }
  add_common(la, b, true);
  subs["lattes"] = la;

  CLI::App* fo = app.add_subcommand("forest", "Preimage forest mod p");
  b.bind(fo, "--map", &ExperimentConfig::maps, "Rational map, repeatable")->allow_extra_args(false);
  b.bind(fo, "--target", &ExperimentConfig::targets, "Comma-separated targets, one list per map")
      ->allow_extra_args(false);
  b.bind(fo, "--p", &ExperimentConfig::p, "Prime");
  b.bind(fo, "--depth", &ExperimentConfig::depth, "Tree depth");
  b.bind(fo, "--edges", &ExperimentConfig::edges, "Edge list path");
  add_common(fo, b, false);
  subs["forest"] = fo;

  CLI::App* in = app.add_subcommand("independence", "Joint versus product no-root frequencies");
  b.bind(in, "--map", &ExperimentConfig::maps, "Rational map, repeatable")->allow_extra_args(false);
  b.bind(in, "--targets", &ExperimentConfig::targets, "Comma-separated targets, one list per map")
      ->allow_extra_args(false);
  b.bind(in, "--level", &ExperimentConfig::level, "Iterate level m");
  add_common(in, b, true);
  subs["independence"] = in;

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << artifact_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::string name;
  for (const auto& [n, sub] : subs) {
    if (sub->parsed()) name = n;
  }
  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = parse_config(read_file(config_path));
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  if (!cfg.command.empty() && cfg.command != name) {
    err << "config error: config file is for '" << cfg.command << "', not '" << name << "'\n";
    return kExitConfig;
  }
  cfg.command = name;
  for (const auto& [opt, set] : b.setters) {
    if (opt->count() > 0) set(cfg);
  }
  return run_command(cfg, out, err);
}

}  // namespace arithdyn::cli
