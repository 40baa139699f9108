#include "arithdyn/chebsweep/sweep.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "arithdyn/error.hpp"
#include "arithdyn/exact/primes.hpp"
#include "arithdyn/moddyn/orbit.hpp"
#include "arithdyn/parallel.hpp"

namespace arithdyn {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

TargetSystem::TargetSystem(std::vector<TargetEntry> entries, int level, int cap)
    : entries_(std::move(entries)), level_(level), cap_(cap) {
  if (entries_.empty()) throw MathError(Errc::kEmptySystem, "target system has no maps");
  if (level_ < 1) throw MathError(Errc::kInvalidArgument, "level must be at least 1");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto& e = entries_[i];
    std::vector<ProjPoint> unique;
    for (const auto& t : e.targets) {
      if (std::find(unique.begin(), unique.end(), t) == unique.end()) unique.push_back(t);
    }
    e.targets = std::move(unique);
    if (e.targets.empty()) {
      throw MathError(Errc::kEmptySystem, "map " + e.map.to_string() + " has an empty target list");
    }
    max_degree_ = std::max(max_degree_, e.map.degree());
    RationalMap phi_m = iterate(e.map, level_, cap_);
    for (const auto& t : e.targets) {
      RationalOrbit q = rational_orbit(e.map, t);
      if (q.kind == RationalOrbit::Kind::kPeriodic) {
        throw MathError(Errc::kPeriodicInput, "target " + t.to_string() + " is periodic under " + e.map.to_string() +
                                                  " (period " + std::to_string(q.shape.period) +
                                                  "); targets must be non-periodic");
      }
      polys_.push_back(build_iterate_poly_from(e.map, phi_m, t, level_));
      owner_.push_back(i);
    }
  }
}

std::vector<std::string> TargetSystem::labels() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    for (std::size_t j = 0; j < entries_[i].targets.size(); ++j) {
      out.push_back(std::to_string(i + 1) + "." + std::to_string(j + 1));
    }
  }
  return out;
}

std::string TargetSystem::canonical_text() const {
  std::string s = "level=" + std::to_string(level_);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    s += i == 0 ? ";" : "|";
    s += "map=" + entries_[i].map.to_string() + ";targets=";
    for (std::size_t j = 0; j < entries_[i].targets.size(); ++j) {
      if (j) s += ",";
      s += entries_[i].targets[j].to_string();
    }
  }
  return s;
}

std::string TargetSystem::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text())));
  return buf;
}

TargetSystem augment_targets(const TargetSystem& sys, const std::vector<Augmentation>& additions) {
  std::vector<TargetEntry> entries = sys.entries();
  for (const auto& a : additions) {
    if (a.entry >= entries.size() || a.target >= sys.entries()[a.entry].targets.size() || a.r < 0) {
      throw MathError(Errc::kInvalidArgument, "augmentation index out of range");
    }
    const RationalMap& map = entries[a.entry].map;
    long deg = 1;
    for (int k = 0; k < a.r; ++k) {
      deg *= map.degree();
      if (deg > sys.cap()) {
        throw MathError(Errc::kDegreeCapExceeded, "iterate " + std::to_string(a.r) + " of " + map.to_string() +
                                                      " exceeds cap " + std::to_string(sys.cap()));
      }
    }
    ProjPoint z = sys.entries()[a.entry].targets[a.target];
    for (int k = 0; k < a.r; ++k) z = apply(map, z);
    entries[a.entry].targets.push_back(z);
  }
  return TargetSystem(std::move(entries), sys.level(), sys.cap());
}

bool prime_eligible(const TargetSystem& sys, std::uint64_t p) {
  if (p <= static_cast<std::uint64_t>(sys.max_degree())) return false;
  for (const auto& e : sys.entries()) {
    if (!good_reduction(e.map, p)) return false;
  }
  for (const auto& ip : sys.polys()) {
    if (ip.is_bad_prime(p)) return false;
  }
  return true;
}

SweepRecord sweep_prime(const TargetSystem& sys, std::uint64_t p) {
  SweepRecord r;
  r.p = p;
  r.derangement = true;
  for (const auto& ip : sys.polys()) {
    RootCount rc = root_count_unchecked(ip, p);
    r.root_counts.push_back(static_cast<std::uint32_t>(rc.affine));
    r.inf_flags.push_back(rc.infinity ? 1 : 0);
    r.infinity_hit = r.infinity_hit || rc.infinity;
    if (rc.total() > 0) r.derangement = false;
  }
  return r;
}

namespace {

using Json = nlohmann::json;
using ChunkKey = std::pair<std::uint64_t, std::uint64_t>;

Json encode_chunk(const std::string& hash, ChunkKey key, const std::vector<SweepRecord>& recs) {
  Json rows = Json::array();
  for (const auto& r : recs) rows.push_back(Json::array({r.p, r.root_counts, r.inf_flags}));
  return Json{{"schema", kSweepSchemaVersion}, {"system", hash}, {"lo", key.first}, {"hi", key.second},
              {"records", std::move(rows)}};
}

std::vector<SweepRecord> decode_records(const Json& rows, std::size_t k) {
  std::vector<SweepRecord> out;
  for (const auto& row : rows) {
    SweepRecord r;
    r.p = row.at(0).get<std::uint64_t>();
    r.root_counts = row.at(1).get<std::vector<std::uint32_t>>();
    r.inf_flags = row.at(2).get<std::vector<std::uint8_t>>();
    if (r.root_counts.size() != k || r.inf_flags.size() != k) throw std::runtime_error("width mismatch");
    r.derangement = true;
    for (std::size_t j = 0; j < k; ++j) {
      r.infinity_hit = r.infinity_hit || r.inf_flags[j];
      if (r.root_counts[j] > 0 || r.inf_flags[j]) r.derangement = false;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Reads every well-formed line for this system. A torn last line left by an
// interrupted writer is ignored.
std::map<ChunkKey, std::vector<SweepRecord>> load_cache(const std::filesystem::path& file, const std::string& hash,
                                                        std::size_t k) {
  std::map<ChunkKey, std::vector<SweepRecord>> out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    try {
      Json j = Json::parse(line);
      if (j.at("schema").get<int>() != kSweepSchemaVersion || j.at("system").get<std::string>() != hash) continue;
      ChunkKey key{j.at("lo").get<std::uint64_t>(), j.at("hi").get<std::uint64_t>()};
      out.emplace(key, decode_records(j.at("records"), k));
    } catch (const std::exception&) {
      continue;
    }
  }
  return out;
}

}  // namespace

SweepResult sweep(const TargetSystem& sys, std::uint64_t lo, std::uint64_t hi, const SweepOptions& opts) {
  if (opts.chunk_width == 0) throw MathError(Errc::kInvalidArgument, "chunk width must be positive");
  std::vector<ChunkKey> chunks;
  for (std::uint64_t s = lo; s < hi;) {
    std::uint64_t e = std::min(hi, (s / opts.chunk_width + 1) * opts.chunk_width);
    chunks.emplace_back(s, e);
    s = e;
  }
  const std::string hash = sys.hash();
  const std::size_t k = sys.target_count();
  std::map<ChunkKey, std::vector<SweepRecord>> done;
  if (!opts.cache_file.empty()) done = load_cache(opts.cache_file, hash, k);

  SweepResult res;
  res.chunks_total = chunks.size();
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (done.count(chunks[i])) {
      ++res.chunks_cached;
    } else if (!opts.max_new_chunks || todo.size() < *opts.max_new_chunks) {
      todo.push_back(i);
    }
  }

  std::ofstream cache;
  if (!opts.cache_file.empty() && !todo.empty()) {
    if (opts.cache_file.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(opts.cache_file.parent_path(), ec);
    }
    bool torn = false;
    {
      std::ifstream tail(opts.cache_file, std::ios::binary | std::ios::ate);
      if (tail && tail.tellg() > 0) {
        tail.seekg(-1, std::ios::end);
        torn = tail.get() != '\n';
      }
    }
    cache.open(opts.cache_file, std::ios::app);
    if (!cache) throw IoError("cannot open sweep cache " + opts.cache_file.string());
    // Terminate a torn last line so it cannot swallow the next record.
    if (torn) cache << '\n';
  }
  std::vector<std::vector<SweepRecord>> fresh(todo.size());
  std::mutex mu;
  parallel_for(todo.size(), opts.workers, [&](std::size_t t) {
    const ChunkKey key = chunks[todo[t]];
    std::vector<SweepRecord> recs;
    for (std::uint64_t p : prime_range(key.first, key.second)) {
      if (prime_eligible(sys, p)) recs.push_back(sweep_prime(sys, p));
    }
    if (cache.is_open()) {
      std::string line = encode_chunk(hash, key, recs).dump() + "\n";
      std::lock_guard<std::mutex> lock(mu);
      cache << line << std::flush;
      if (!cache) throw IoError("write to sweep cache " + opts.cache_file.string() + " failed");
    }
    fresh[t] = std::move(recs);
  });
  for (std::size_t t = 0; t < todo.size(); ++t) done.emplace(chunks[todo[t]], std::move(fresh[t]));
  res.chunks_computed = todo.size();

  std::uint64_t hits = 0;
  for (const auto& key : chunks) {
    auto it = done.find(key);
    if (it == done.end()) {
      res.complete = false;
      continue;
    }
    for (const auto& r : it->second) {
      hits += r.derangement ? 1 : 0;
      res.records.push_back(r);
    }
  }
  res.density = make_density(hits, res.records.size());
  return res;
}

DensityEstimate derangement_density(const TargetSystem& sys, std::uint64_t lo, std::uint64_t hi, unsigned workers) {
  SweepOptions opts;
  opts.workers = workers;
  SweepResult r = sweep(sys, lo, hi, opts);
  if (r.density.eligible == 0) {
    throw MathError(Errc::kEmptySystem, "no eligible primes in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                            "); the proportion is undefined");
  }
  return r.density;
}

void write_sweep_csv(std::ostream& out, const TargetSystem& sys, const std::vector<SweepRecord>& records) {
  out << "p";
  for (const auto& l : sys.labels()) out << ",r" << l;
  out << ",inf_flags,derangement\n";
  for (const auto& r : records) {
    out << r.p;
    for (auto c : r.root_counts) out << ',' << c;
    out << ',';
    for (auto f : r.inf_flags) out << (f ? '1' : '0');
    out << ',' << (r.derangement ? 1 : 0) << '\n';
  }
}

IndependenceReport independence_report(const TargetSystem& sys, std::uint64_t lo, std::uint64_t hi,
                                       unsigned workers) {
  const std::size_t k = sys.target_count();
  if (k < 2) throw MathError(Errc::kInsufficientData, "independence needs at least 2 targets");
  if (k > kIndependenceMaxTargets) {
    throw MathError(Errc::kInvalidArgument, "independence supports at most " +
                                                std::to_string(kIndependenceMaxTargets) + " targets");
  }
  SweepOptions opts;
  opts.workers = workers;
  SweepResult sw = sweep(sys, lo, hi, opts);
  const std::uint64_t n = sw.records.size();
  if (n < kIndependenceMinPrimes) {
    throw MathError(Errc::kInsufficientData, std::to_string(n) + " eligible primes; at least " +
                                                 std::to_string(kIndependenceMinPrimes) + " required");
  }
  IndependenceReport rep;
  rep.labels = sys.labels();
  rep.eligible = n;
  rep.cells.assign(std::size_t{1} << k, 0);
  std::vector<std::uint64_t> none(k, 0);
  std::uint64_t all = 0;
  for (const auto& r : sw.records) {
    std::size_t mask = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (r.root_counts[j] == 0 && !r.inf_flags[j]) {
        mask |= std::size_t{1} << j;
        ++none[j];
      }
    }
    ++rep.cells[mask];
    if (mask == rep.cells.size() - 1) ++all;
  }
  const double nn = static_cast<double>(n);
  rep.product = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    rep.marginals.push_back(static_cast<double>(none[j]) / nn);
    rep.product *= rep.marginals.back();
  }
  rep.joint = static_cast<double>(all) / nn;
  if (rep.product > 0) rep.ratio = rep.joint / rep.product;
  for (std::size_t mask = 0; mask < rep.cells.size(); ++mask) {
    double e = nn;
    for (std::size_t j = 0; j < k; ++j) e *= (mask >> j & 1) ? rep.marginals[j] : 1.0 - rep.marginals[j];
    if (e > 0) rep.chi_square += std::pow(static_cast<double>(rep.cells[mask]) - e, 2) / e;
  }
  rep.dof = static_cast<int>((std::size_t{1} << k) - 1 - k);
  return rep;
}

}  // namespace arithdyn
