#include <CLI11.hpp>
#include <json.hpp>

#include <bhset/bhset.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitFailed = 2;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bhs_status st) {
  if (st != BHS_OK) throw CliError(std::string(bhs_status_name(st)) + ": " + bhs_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  bhs_string_free(s);
  return out;
}

// accepts plain integers and forms like 1e6
std::uint64_t parse_count(const std::string& text) {
  std::size_t used = 0;
  if (text.find_first_of("eE") != std::string::npos) {
    const double v = std::stod(text, &used);
    if (used != text.size() || v < 0 || v != std::floor(v) || v > 1.8e19) throw CliError("not an integer: " + text);
    return static_cast<std::uint64_t>(v);
  }
  const auto v = std::stoull(text, &used);
  if (used != text.size()) throw CliError("not an integer: " + text);
  return v;
}

// "a:b" is an inclusive range, otherwise a comma separated list
std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    const auto lo = parse_count(text.substr(0, colon)), hi = parse_count(text.substr(colon + 1));
    if (lo > hi) throw CliError("empty range " + text);
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(parse_count(item));
  return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CliError("window must be lo:hi");
  return {parse_count(text.substr(0, colon)), parse_count(text.substr(colon + 1))};
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw CliError("cannot write " + path.string());
}

struct Output {
  std::string dir;
  std::string format = "json";

  bool csv() const { return format == "csv"; }

  fs::path path(const std::string& name) const {
    fs::create_directories(dir);
    return fs::path(dir) / name;
  }

  // writes to the output directory when one is set, stdout otherwise
  void emit(const std::string& name, const std::string& text) const {
    if (dir.empty())
      std::cout << text;
    else
      write_file(path(name), text);
  }
};

struct Common {
  int h = 2;
  std::string n = "100000";
  std::string seeds = "1";
  std::string window;
  unsigned threads = 0;
  Output out;
};

void add_common(CLI::App* app, Common& c, bool many_seeds) {
  app->add_option("--h", c.h, "order h >= 2")->capture_default_str();
  app->add_option("--n", c.n, "window upper bound N")->capture_default_str();
  if (many_seeds)
    app->add_option("--seeds,--seed", c.seeds, "seed list 1,2,5 or range 1:20")->capture_default_str();
  else
    app->add_option("--seed", c.seeds, "seed")->capture_default_str();
  app->add_option("--window", c.window, "lo:hi");
  app->add_option("--out", c.out.dir, "output directory");
  app->add_option("--format", c.out.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app->add_option("--threads", c.threads, "worker threads, 0 = all cores");
}

std::uint64_t single_seed(const Common& c) {
  const auto s = parse_list(c.seeds);
  if (s.size() != 1) throw CliError("expected one seed");
  return s[0];
}

struct SetHandle {
  bhs_set* p = nullptr;
  ~SetHandle() { bhs_set_free(p); }
  std::vector<std::uint64_t> elements() const {
    std::vector<std::uint64_t> v(bhs_set_size(p));
    bhs_set_elements(p, v.data(), v.size());
    return v;
  }
};

int cmd_sample(const Common& c) {
  const auto N = parse_count(c.n);
  const auto seed = single_seed(c);
  SetHandle b;
  check(bhs_sample(c.h, N, seed, &b.p));
  if (c.out.csv()) {
    std::ostringstream os;
    os << "n\n";
    for (auto x : b.elements()) os << x << '\n';
    c.out.emit("sample.csv", os.str());
  } else {
    char* j = nullptr;
    check(bhs_set_to_json(b.p, c.h, N, seed, &j));
    c.out.emit("sample.json", take(j));
  }
  return 0;
}

json config_json(const Common& c, std::uint64_t N) {
  json cfg = {{"h", c.h}, {"N", N}, {"seeds", parse_list(c.seeds)}};
  if (!c.window.empty()) {
    const auto [lo, hi] = parse_window(c.window);
    cfg["basis_window"] = {lo, hi};
  }
  return cfg;
}

bool report_passes(const json& report) {
  const auto& g = report.at("aggregate");
  return g.at("bh1_passes") == g.at("runs") && g.at("audit_violations") == 0;
}

int cmd_construct(const Common& c, const std::string& config_path) {
  json cfg = config_path.empty() ? config_json(c, parse_count(c.n)) : json::parse(read_file(config_path));
  char* r = nullptr;
  check(bhs_run_experiment(cfg.dump().c_str(), c.threads, &r));
  const std::string text = take(r);
  const json report = json::parse(text);
  c.out.emit("report.json", text);
  if (c.out.csv()) {
    if (c.out.dir.empty()) throw CliError("--format csv needs --out");
    const auto& win = report.at("config").at("basis_window");
    for (const auto& rec : report.at("records")) {
      const auto seed = rec.at("seed").get<std::uint64_t>();
      const auto file = c.out.path("series_" + std::to_string(seed) + ".csv").string();
      check(bhs_series_csv(report.at("config").at("h").get<int>(), report.at("config").at("N").get<std::uint64_t>(),
                           seed, win[0].get<std::uint64_t>(), win[1].get<std::uint64_t>(), file.c_str()));
    }
  }
  const auto& g = report.at("aggregate");
  std::cerr << "runs " << g.at("runs") << ", B_h[1] passes " << g.at("bh1_passes") << ", audit violations "
            << g.at("audit_violations") << ", median coverage(A) " << g.at("median_coverage_A") << '\n';
  return report_passes(report) ? 0 : kExitFailed;
}

int cmd_verify(const Common& c) {
  const auto N = parse_count(c.n);
  const auto seed = single_seed(c);
  SetHandle b, a;
  check(bhs_sample(c.h, N, seed, &b.p));
  check(bhs_construct_a(b.p, c.h, &a.p));
  int holds = 0, limited = 0;
  std::uint64_t witness = 0;
  check(bhs_is_bhg(a.p, c.h, 1, static_cast<std::uint64_t>(c.h) * N, &holds, &witness, &limited));

  std::uint64_t lo = std::min<std::uint64_t>(N, 1000), hi = N;
  if (!c.window.empty()) std::tie(lo, hi) = parse_window(c.window);
  char *basis = nullptr, *audit = nullptr, *coll = nullptr;
  check(bhs_basis_window(a.p, 2 * c.h, lo, hi, &basis));
  check(bhs_audit(b.p, c.h, std::min<std::uint64_t>(N, 1000000), 0, &audit));
  check(bhs_collisions_jsonl(b.p, c.h, &coll));
  const json audit_j = json::parse(take(audit));
  json out = {{"h", c.h},
              {"N", N},
              {"seed", seed},
              {"size_B", bhs_set_size(b.p)},
              {"size_A", bhs_set_size(a.p)},
              {"bh1", {{"holds", holds != 0}, {"witness", holds ? json(nullptr) : json(witness)}}},
              {"basis_A", json::parse(take(basis))},
              {"audit", audit_j}};
  c.out.emit("verify.json", out.dump(2) + "\n");
  const std::string records = take(coll);
  if (!c.out.dir.empty()) write_file(c.out.path("collisions.jsonl"), records);
  return holds && audit_j.at("violations") == 0 ? 0 : kExitFailed;
}

int cmd_sweep(const Common& c) {
  const auto windows = parse_list(c.n);
  json rows = json::array();
  bool ok = true;
  std::ostringstream csv;
  csv << "N,expected_B,median_B,median_C,median_A,bh1_passes,runs\n";
  for (auto N : windows) {
    Common local = c;
    local.window.clear();
    char* r = nullptr;
    check(bhs_run_experiment(config_json(local, N).dump().c_str(), c.threads, &r));
    const json report = json::parse(take(r));
    ok = ok && report_passes(report);
    const auto& g = report.at("aggregate");
    rows.push_back({{"N", N},
                    {"expected_size_B", report.at("expected_size_B")},
                    {"size_B_sd", report.at("size_B_sd")},
                    {"median_size_B", g.at("median_size_B")},
                    {"median_size_C", g.at("median_size_C")},
                    {"median_size_A", g.at("median_size_A")},
                    {"median_coverage_A", g.at("median_coverage_A")},
                    {"bh1_passes", g.at("bh1_passes")},
                    {"runs", g.at("runs")}});
    csv << N << ',' << report.at("expected_size_B") << ',' << g.at("median_size_B") << ',' << g.at("median_size_C")
        << ',' << g.at("median_size_A") << ',' << g.at("bh1_passes") << ',' << g.at("runs") << '\n';
  }
  if (c.out.csv())
    c.out.emit("sweep.csv", csv.str());
  else
    c.out.emit("sweep.json", json({{"h", c.h}, {"rows", rows}}).dump(2) + "\n");
  return ok ? 0 : kExitFailed;
}

struct Lemma4Args {
  std::string part = "iii";
  double alpha = 5.0 / 7.0;
  double beta = 5.0 / 7.0;
  int l = 1, s = 0, t = 1;
  std::int64_t mmin = 0;
  std::int64_t mmax = 10000;
  double tail_eps = 1e-6;
  bool points = false;
};

int cmd_lemma4(const Common& c, const Lemma4Args& a) {
  std::string csv_file;
  if (c.out.csv()) {
    if (c.out.dir.empty()) throw CliError("--format csv needs --out");
    csv_file = c.out.path("ratio.csv").string();
  }
  const std::int64_t lo = a.mmin != 0 ? a.mmin : (a.part == "ii" || a.part == "iv" ? -a.mmax : 0);
  char* r = nullptr;
  check(bhs_lemma4(a.part.c_str(), a.alpha, a.beta, a.l, a.s, a.t, c.h, lo, a.mmax, a.tail_eps, a.points ? 1 : 0,
                   csv_file.empty() ? nullptr : csv_file.c_str(), &r));
  const std::string text = take(r);
  c.out.emit("lemma4.json", text);
  const json j = json::parse(text);
  bool ok = true;
  for (const auto& st : j.at("stability")) {
    std::cerr << "branch " << st.at("sign") << ": ratio(100) " << st.at("ratio_at_anchor") << ", sup "
              << st.at("sup_beyond") << ", slope " << st.at("slope") << '\n';
    ok = ok && st.at("bounded").get<bool>() && st.at("flat").get<bool>();
  }
  return ok ? 0 : kExitFailed;
}

int cmd_lemma568(const Common& c, const std::string& windows_text, const std::string& n_lo_text) {
  const auto windows = parse_list(windows_text);
  const auto seeds = parse_list(c.seeds);
  if (windows.empty()) throw CliError("no windows");
  const auto top = *std::max_element(windows.begin(), windows.end());
  const std::uint64_t n_lo = n_lo_text.empty() ? 0 : parse_count(n_lo_text);

  char *l5 = nullptr, *l68 = nullptr;
  check(bhs_lemma5(c.h, top, seeds.data(), seeds.size(), n_lo, c.threads, &l5));
  check(bhs_lemma568(c.h, windows.data(), windows.size(), seeds.data(), seeds.size(), nullptr, c.threads, &l68));
  const std::string t5 = take(l5), t68 = take(l68);
  if (c.out.dir.empty()) {
    std::cout << t5 << t68;
  } else {
    write_file(c.out.path("lemma5.json"), t5);
    write_file(c.out.path("lemma68.json"), t68);
  }
  const json j5 = json::parse(t5), j68 = json::parse(t68);
  const auto& ws = j68.at("windows");
  const double first = ws.front().at("lemma8_total_median"), last = ws.back().at("lemma8_total_median");
  const bool lemma5_ok = j5.at("median").get<double>() > 0;
  const bool lemma8_ok = last <= first + 2 * c.h;
  std::cerr << "lemma 5 median min " << j5.at("median") << "; lemma 8 median totals " << first << " -> " << last
            << '\n';
  return lemma5_ok && lemma8_ok ? 0 : kExitFailed;
}

int cmd_replay(const std::string& file, unsigned threads, const Output& out) {
  const std::string original = read_file(file);
  char* fresh = nullptr;
  int identical = 0;
  check(bhs_replay(original.c_str(), threads, &fresh, &identical));
  const std::string text = take(fresh);
  if (!out.dir.empty()) write_file(out.path("replay.json"), text);
  std::cerr << (identical ? "identical" : "DIFFERS") << '\n';
  return identical ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bhlab: random B_h[1]-set construction and verification"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  Common c;
  auto* sample = app.add_subcommand("sample", "draw a random set B");
  add_common(sample, c, false);

  std::string config_path;
  auto* construct = app.add_subcommand("construct", "run the construction over seeds and write a report");
  add_common(construct, c, true);
  construct->add_option("--config", config_path, "JSON config file (overrides --h/--n/--seeds/--window)");

  auto* verify = app.add_subcommand("verify", "verify one seed in detail");
  add_common(verify, c, false);

  auto* sweep = app.add_subcommand("sweep", "set sizes across several N (--n takes a list)");
  add_common(sweep, c, true);

  Lemma4Args l4;
  auto* lemma4 = app.add_subcommand("lemma4", "evaluate a ratio curve");
  add_common(lemma4, c, false);
  lemma4->add_option("--part", l4.part, "i, ii, iii or iv")->check(CLI::IsMember({"i", "ii", "iii", "iv"}));
  lemma4->add_option("--alpha", l4.alpha);
  lemma4->add_option("--beta", l4.beta);
  lemma4->add_option("--l", l4.l);
  lemma4->add_option("--s", l4.s);
  lemma4->add_option("--t", l4.t);
  lemma4->add_option("--mmin", l4.mmin, "lower end of M (parts ii, iv; default -mmax)");
  lemma4->add_option("--mmax", l4.mmax)->capture_default_str();
  lemma4->add_option("--tail-eps", l4.tail_eps)->capture_default_str();
  lemma4->add_flag("--points", l4.points, "include every point in the JSON");

  std::string windows_text = "10000,100000,1000000", n_lo_text;
  auto* lemma568 = app.add_subcommand("lemma568", "Lemma 5 minima and Lemma 6/8 counts on nested windows");
  add_common(lemma568, c, true);
  lemma568->add_option("--windows", windows_text, "nested windows")->capture_default_str();
  lemma568->add_option("--n-lo", n_lo_text, "lower cutoff for the Lemma 5 minimum");

  std::string replay_file;
  auto* replay = app.add_subcommand("replay", "re-run a report and compare byte for byte");
  replay->add_option("report", replay_file, "report JSON")->required();
  replay->add_option("--threads", c.threads);
  replay->add_option("--out", c.out.dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) return cmd_sample(c);
    if (*construct) return cmd_construct(c, config_path);
    if (*verify) return cmd_verify(c);
    if (*sweep) return cmd_sweep(c);
    if (*lemma4) return cmd_lemma4(c, l4);
    if (*lemma568) return cmd_lemma568(c, windows_text, n_lo_text);
    if (*replay) return cmd_replay(replay_file, c.threads, c.out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
