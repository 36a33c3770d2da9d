#include "fflab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fflab/distance.hpp"
#include "fflab/errors.hpp"
#include "fflab/field.hpp"
#include "fflab/incidence2d.hpp"
#include "fflab/kakeya3d.hpp"
#include "fflab/sumprod.hpp"

namespace fflab {
namespace {

constexpr const char* kArtifactVersion = "0.1.0";

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> k = {"sumprod", "incidence", "distance",
                                             "kakeya", "verify-all"};
  return k;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw BadConfig(key + ": not a number: '" + value + "'");
  return v;
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
  std::uint64_t v = parse_u64(key, value);
  if (v > 0xffffffffull) throw BadConfig(key + ": out of range: " + value);
  return static_cast<std::uint32_t>(v);
}

std::vector<std::uint32_t> parse_u32_list(const std::string& key,
                                          const std::string& value) {
  std::vector<std::uint32_t> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    if (item.empty()) throw BadConfig(key + ": empty list item");
    out.push_back(parse_u32(key, item));
  }
  if (out.empty()) throw BadConfig(key + ": empty list");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw BadConfig(key + ": expected 0/1/true/false, got '" + value + "'");
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::string join_u32(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Sorted, deduplicated copy; row order and the hash both use this form, so
// listing moduli in a different order is the same run.
ExperimentConfig canonical(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  std::sort(c.qs.begin(), c.qs.end());
  c.qs.erase(std::unique(c.qs.begin(), c.qs.end()), c.qs.end());
  std::sort(c.sizes.begin(), c.sizes.end());
  c.sizes.erase(std::unique(c.sizes.begin(), c.sizes.end()), c.sizes.end());
  return c;
}

std::string canonical_serial(const ExperimentConfig& c) {
  std::string s;
  s += "kind=" + c.kind + "\n";
  s += "q=" + join_u32(c.qs) + "\n";
  s += "sizes=" + join_u32(c.sizes) + "\n";
  s += std::string("mode=") + search_mode_name(c.mode) + "\n";
  s += "trials=" + std::to_string(c.trials) + "\n";
  s += "seed=" + std::to_string(c.seed) + "\n";
  s += "format=" + c.format + "\n";
  s += "generator=" + c.generator + "\n";
  s += "exclude_zero=" + std::string(c.exclude_zero ? "1" : "0") + "\n";
  return s;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void validate(const ExperimentConfig& c) {
  if (std::find(known_kinds().begin(), known_kinds().end(), c.kind) ==
      known_kinds().end())
    throw BadConfig("unknown kind: '" + c.kind + "'");
  if (c.format != "csv" && c.format != "json")
    throw BadConfig("format must be csv or json, got '" + c.format + "'");
  if (c.trials == 0) throw BadConfig("trials must be positive");
  if (c.qs.empty()) throw BadConfig("no moduli given");
  for (std::uint32_t q : c.qs) {
    try {
      PrimeField f(q);
    } catch (const Error& e) {
      throw BadConfig("bad modulus " + std::to_string(q) + ": " + e.what());
    }
  }
  const bool sized =
      c.kind == "sumprod" || c.kind == "incidence" || c.kind == "distance";
  if (sized && c.sizes.empty())
    throw BadConfig(c.kind + " needs at least one size (n=...)");
  for (std::uint32_t q : c.qs) {
    if (c.kind == "distance" && q % 4 != 3)
      throw BadConfig("distance needs q = 3 mod 4, got " + std::to_string(q));
    if (c.kind == "kakeya" && q > 13)
      throw BadConfig("kakeya search is capped at q <= 13, got " +
                      std::to_string(q));
    for (std::uint32_t n : c.sizes) {
      if ((c.kind == "sumprod" || c.kind == "distance") && n < 2)
        throw BadConfig(c.kind + ": sizes start at 2");
      if (n == 0) throw BadConfig("sizes must be positive");
      if (c.kind == "sumprod" && n > q)
        throw BadConfig("sumprod: size " + std::to_string(n) +
                        " exceeds field size " + std::to_string(q));
      if (c.kind == "distance" && static_cast<std::uint64_t>(n) > static_cast<std::uint64_t>(q) * q)
        throw BadConfig("distance: size " + std::to_string(n) +
                        " exceeds plane size");
      if (c.kind == "incidence" &&
          static_cast<std::uint64_t>(n) > static_cast<std::uint64_t>(q) * q)
        throw BadConfig("incidence: size " + std::to_string(n) +
                        " exceeds the q^2 instance cap");
    }
  }
  if (c.kind == "incidence") st_generator_from_name(c.generator);
}

std::size_t workers_from_env() {
  const char* s = std::getenv("FFLAB_WORKERS");
  if (!s || !*s) return 1;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s, s + std::strlen(s), v);
  if (ec != std::errc{} || *p != '\0' || v == 0) return 1;
  return static_cast<std::size_t>(v);
}

// Index-claiming pool; the caller writes results into preallocated slots, so
// output order is independent of scheduling. First exception wins and is
// rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

struct Row {
  std::string csv;        // rendered cells, no trailing newline
  nlohmann::json mirror;  // same fields, typed
  std::string provenance;
};

struct Table {
  std::string stem;    // file stem, e.g. "sumprod"
  std::string header;  // CSV header line
  std::vector<Row> rows;
};

Table run_sumprod(const ExperimentConfig& c) {
  Table t{"sumprod", "q,n,minMax,mode,trials,seed,argmin", {}};
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
  for (std::uint32_t q : c.qs)
    for (std::uint32_t n : c.sizes) cells.emplace_back(q, n);
  t.rows.resize(cells.size());
  parallel_for(cells.size(), workers_from_env(), [&](std::size_t i) {
    auto [q, n] = cells[i];
    PrimeField f(q);
    ExponentRow r = sumprod_min_search(f, n, c.mode, c.trials, c.seed);
    std::string arg;
    for (std::size_t j = 0; j < r.argmin.size(); ++j) {
      if (j) arg += ';';
      arg += std::to_string(r.argmin[j]);
    }
    Row& row = t.rows[i];
    row.csv = std::to_string(q) + "," + std::to_string(n) + "," +
              std::to_string(r.min_max) + "," + search_mode_name(r.mode) + "," +
              std::to_string(r.trials) + "," + std::to_string(r.seed) + "," + arg;
    row.mirror = {{"q", q},
                  {"n", n},
                  {"minMax", r.min_max},
                  {"mode", search_mode_name(r.mode)},
                  {"trials", r.trials},
                  {"seed", r.seed},
                  {"argmin", r.argmin}};
    row.provenance = std::string("sumprod_min_search/") +
                     search_mode_name(r.mode) + " q=" + std::to_string(q) +
                     " n=" + std::to_string(n);
  });
  return t;
}

Table run_incidence(const ExperimentConfig& c) {
  Table t{"incidence", "q,n,generator,trials,seed,maxIncidences,empiricalEps", {}};
  StGenerator gen = st_generator_from_name(c.generator);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
  for (std::uint32_t q : c.qs)
    for (std::uint32_t n : c.sizes) cells.emplace_back(q, n);
  t.rows.resize(cells.size());
  parallel_for(cells.size(), workers_from_env(), [&](std::size_t i) {
    auto [q, n] = cells[i];
    PrimeField f(q);
    StReport r = st_experiment(f, n, gen, c.trials, c.seed);
    Row& row = t.rows[i];
    row.csv = std::to_string(q) + "," + std::to_string(n) + "," +
              st_generator_name(r.generator) + "," + std::to_string(r.trials) +
              "," + std::to_string(r.seed) + "," +
              std::to_string(r.max_incidences) + "," + fmt6(r.empirical_eps);
    row.mirror = {{"q", q},
                  {"n", n},
                  {"generator", st_generator_name(r.generator)},
                  {"trials", r.trials},
                  {"seed", r.seed},
                  {"maxIncidences", r.max_incidences},
                  {"empiricalEps", r.empirical_eps}};
    row.provenance = std::string("st_experiment/") +
                     st_generator_name(r.generator) + " q=" + std::to_string(q) +
                     " n=" + std::to_string(n);
  });
  return t;
}

Table run_distance(const ExperimentConfig& c) {
  Table t{"distance", "q,n,minDistances,mode,trials,seed,excludeZero,witness", {}};
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
  for (std::uint32_t q : c.qs)
    for (std::uint32_t n : c.sizes) cells.emplace_back(q, n);
  t.rows.resize(cells.size());
  parallel_for(cells.size(), workers_from_env(), [&](std::size_t i) {
    auto [q, n] = cells[i];
    PrimeField f(q);
    DistanceReport r =
        distance_min_search(f, n, c.mode, c.trials, c.seed, c.exclude_zero);
    std::string wit;
    std::vector<std::string> wit_json;
    for (std::size_t j = 0; j < r.witness.size(); ++j) {
      std::string p = std::to_string(r.witness[j].x) + ":" +
                      std::to_string(r.witness[j].y);
      if (j) wit += ';';
      wit += p;
      wit_json.push_back(p);
    }
    Row& row = t.rows[i];
    row.csv = std::to_string(q) + "," + std::to_string(n) + "," +
              std::to_string(r.min_distances) + "," + search_mode_name(r.mode) +
              "," + std::to_string(r.trials) + "," + std::to_string(r.seed) +
              "," + (r.exclude_zero ? "1" : "0") + "," + wit;
    row.mirror = {{"q", q},
                  {"n", n},
                  {"minDistances", r.min_distances},
                  {"mode", search_mode_name(r.mode)},
                  {"trials", r.trials},
                  {"seed", r.seed},
                  {"excludeZero", r.exclude_zero},
                  {"witness", wit_json}};
    row.provenance = std::string("distance_min_search/") +
                     search_mode_name(r.mode) + " q=" + std::to_string(q) +
                     " n=" + std::to_string(n);
  });
  return t;
}

Table run_kakeya(const ExperimentConfig& c) {
  Table t{"kakeya", "q,trials,seed,minSize,reference", {}};
  t.rows.resize(c.qs.size());
  parallel_for(c.qs.size(), workers_from_env(), [&](std::size_t i) {
    std::uint32_t q = c.qs[i];
    PrimeField f(q);
    KakeyaReport r = kakeya_min_search(f, c.trials, c.seed);
    Row& row = t.rows[i];
    row.csv = std::to_string(q) + "," + std::to_string(r.trials) + "," +
              std::to_string(r.seed) + "," + std::to_string(r.min_size) + "," +
              fmt6(r.reference);
    row.mirror = {{"q", q},
                  {"trials", r.trials},
                  {"seed", r.seed},
                  {"minSize", r.min_size},
                  {"reference", r.reference}};
    row.provenance = "kakeya_min_search q=" + std::to_string(q);
  });
  return t;
}

Table run_verify(const ExperimentConfig& c, std::vector<SuiteResult>& suites,
                 bool& ok) {
  Table t{"verify-all", "suite,q,checks,violations,status", {}};
  suites = run_verify_suites(c.qs, c.seed);
  ok = true;
  for (const SuiteResult& s : suites) {
    Row row;
    row.csv = s.suite + "," + std::to_string(s.q) + "," +
              std::to_string(s.checks) + "," + std::to_string(s.violations) +
              "," + (s.passed() ? "pass" : "FAIL");
    row.mirror = {{"suite", s.suite},
                  {"q", s.q},
                  {"checks", s.checks},
                  {"violations", s.violations},
                  {"status", s.passed() ? "pass" : "FAIL"}};
    row.provenance = "verify/" + s.suite + " q=" + std::to_string(s.q);
    if (!s.passed()) ok = false;
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + p.string());
  os << body;
}

const char* plot_script(const std::string& stem);

}  // namespace

void apply_config_pair(ExperimentConfig& cfg, const std::string& key,
                       const std::string& value) {
  if (key == "kind") {
    cfg.kind = value;
  } else if (key == "q" || key == "qs") {
    cfg.qs = parse_u32_list(key, value);
  } else if (key == "n" || key == "sizes") {
    cfg.sizes = parse_u32_list(key, value);
  } else if (key == "mode") {
    cfg.mode = search_mode_from_name(value);
  } else if (key == "trials") {
    cfg.trials = parse_u32(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "format") {
    cfg.format = value;
  } else if (key == "generator") {
    cfg.generator = value;
  } else if (key == "exclude_zero") {
    cfg.exclude_zero = parse_bool(key, value);
  } else {
    throw BadConfig("unknown config key: '" + key + "'");
  }
}

void read_config_file(std::istream& is, ExperimentConfig& cfg) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw BadConfig("config line " + std::to_string(lineno) +
                      ": expected key=value");
    apply_config_pair(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string s = canonical_serial(canonical(cfg));
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

RunOutcome run_experiment(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = canonical(raw);
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  RunOutcome out;
  Table table;
  if (cfg.kind == "sumprod") {
    table = run_sumprod(cfg);
  } else if (cfg.kind == "incidence") {
    table = run_incidence(cfg);
  } else if (cfg.kind == "distance") {
    table = run_distance(cfg);
  } else if (cfg.kind == "kakeya") {
    table = run_kakeya(cfg);
  } else {
    table = run_verify(cfg, out.suites, out.ok);
  }

  std::string csv = table.header + "\n";
  nlohmann::json rows = nlohmann::json::array();
  for (const Row& r : table.rows) {
    csv += r.csv + "\n";
    rows.push_back(r.mirror);
    out.manifest.provenance.push_back(r.provenance);
  }

  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / (table.stem + ".csv"), csv);
  out.files.push_back(table.stem + ".csv");
  if (cfg.format == "json") {
    nlohmann::json j = {{"kind", cfg.kind}, {"rows", rows}};
    write_text(dir / (table.stem + ".json"), j.dump(2) + "\n");
    out.files.push_back(table.stem + ".json");
  }

  out.manifest.cfg_hash = config_hash(cfg);
  out.manifest.artifact_version = kArtifactVersion;
  out.manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  nlohmann::json man = {{"artifact_version", out.manifest.artifact_version},
                        {"config_hash", hash_hex(out.manifest.cfg_hash)},
                        {"provenance", out.manifest.provenance},
                        {"wall_seconds", out.manifest.wall_seconds}};
  write_text(dir / "manifest.json", man.dump(2) + "\n");
  out.files.push_back("manifest.json");
  return out;
}

std::vector<std::string> emit_plots(const std::string& results_dir) {
  std::filesystem::path dir(results_dir);
  std::vector<std::string> written;
  for (const char* stem : {"sumprod", "incidence", "distance", "kakeya"}) {
    if (!std::filesystem::exists(dir / (std::string(stem) + ".csv"))) continue;
    std::string name = std::string("plot_") + stem + ".py";
    write_text(dir / name, plot_script(stem));
    written.push_back(name);
  }
  if (written.empty())
    throw MissingResults("no result tables under " + results_dir);
  return written;
}

namespace {

// The scripts are intentionally self-contained: stdlib csv + matplotlib, data
// loaded relative to the script location so the directory can be moved around.
const char* plot_script(const std::string& stem) {
  if (stem == "sumprod")
    return R"PY(#!/usr/bin/env python3
"""Extremal sum-product sizes: min over A of max(|A+A|, |A.A|) against |A|."""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "sumprod.csv"), newline="") as fh:
    rows = list(csv.DictReader(fh))

series = {}
for r in rows:
    series.setdefault(int(r["q"]), []).append((int(r["n"]), int(r["minMax"])))

fig, ax = plt.subplots(figsize=(6, 4.5))
for q in sorted(series):
    pts = sorted(series[q])
    ax.plot([n for n, _ in pts], [m for _, m in pts], marker="o", label=f"q={q}")
ns = sorted({int(r["n"]) for r in rows})
if ns:
    ax.plot(ns, [n ** 1.5 for n in ns], linestyle="--", color="gray",
            label="n^(3/2) guide")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("n = |A|")
ax.set_ylabel("min max(|A+A|, |A.A|)")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "sumprod.png"), dpi=150)
print("wrote sumprod.png")
)PY";
  if (stem == "incidence")
    return R"PY(#!/usr/bin/env python3
"""Max point-line incidences per instance size, against the N^(3/2) envelope."""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "incidence.csv"), newline="") as fh:
    rows = list(csv.DictReader(fh))

series = {}
for r in rows:
    key = (int(r["q"]), r["generator"])
    series.setdefault(key, []).append((int(r["n"]), int(r["maxIncidences"])))

fig, ax = plt.subplots(figsize=(6, 4.5))
for (q, gen) in sorted(series):
    pts = sorted(series[(q, gen)])
    ax.plot([n for n, _ in pts], [i for _, i in pts], marker="o",
            label=f"q={q} {gen}")
ns = sorted({int(r["n"]) for r in rows})
if ns:
    ax.plot(ns, [n ** 1.5 for n in ns], linestyle="--", color="gray",
            label="N^(3/2) guide")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("N = #points = #lines")
ax.set_ylabel("max incidences")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "incidence.png"), dpi=150)
print("wrote incidence.png")
)PY";
  if (stem == "distance")
    return R"PY(#!/usr/bin/env python3
"""Minimum distinct distances over N-point sets in the affine plane."""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "distance.csv"), newline="") as fh:
    rows = list(csv.DictReader(fh))

series = {}
for r in rows:
    series.setdefault(int(r["q"]), []).append((int(r["n"]), int(r["minDistances"])))

fig, ax = plt.subplots(figsize=(6, 4.5))
for q in sorted(series):
    pts = sorted(series[q])
    ax.plot([n for n, _ in pts], [d for _, d in pts], marker="o", label=f"q={q}")
ns = sorted({int(r["n"]) for r in rows})
if ns:
    ax.plot(ns, [n ** 0.5 for n in ns], linestyle="--", color="gray",
            label="sqrt(N) guide")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("N = #points")
ax.set_ylabel("min |distance set|")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "distance.png"), dpi=150)
print("wrote distance.png")
)PY";
  return R"PY(#!/usr/bin/env python3
"""Smallest Besicovitch union found per modulus, against the q^(5/2) reference."""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "kakeya.csv"), newline="") as fh:
    rows = sorted(csv.DictReader(fh), key=lambda r: int(r["q"]))

qs = [int(r["q"]) for r in rows]
fig, ax = plt.subplots(figsize=(6, 4.5))
ax.plot(qs, [int(r["minSize"]) for r in rows], marker="o", label="best found")
ax.plot(qs, [float(r["reference"]) for r in rows], linestyle="--", color="gray",
        label="q^(5/2) reference")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("q")
ax.set_ylabel("|union of lines|")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "kakeya.png"), dpi=150)
print("wrote kakeya.png")
)PY";
}

}  // namespace

}  // namespace fflab
