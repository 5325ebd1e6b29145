// hecke_lab: build, verify and query truncated Hecke graphs on P^1.

#include <openssl/evp.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hecke/edges.hpp"
#include "hecke/errors.hpp"
#include "hecke/groups.hpp"
#include "hecke/spectral.hpp"
#include "hecke/structure.hpp"
#include "json.hpp"

namespace {

using namespace hecke;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kConfig = 2, kHypothesis = 3, kInvariant = 4 };

struct RunConfig {
  unsigned q = 2;
  std::string div = "x:1";
  std::string x = "x";
  int n_max = -1;  // -1: command default
  std::string builder = "hybrid";
  unsigned threads = 0;
  std::string out;
  std::string format = "json";
  std::string graph_file;
  // command options
  std::vector<std::string> lambdas;
  int depth = -1;
  std::string seed_a;
  int seed_vertex = -1;
  std::vector<std::string> seeds;
  std::vector<std::string> rhs;
  std::vector<std::string> checks;
  std::string d2;
  bool d2_given = false;
  std::string manifest;
  bool detail = false;
};

struct Setup {
  FieldPtr F;
  Divisor D;
  Point x;
};

Setup resolve(const RunConfig& c) {
  Setup s;
  s.F = FieldCtx::make(c.q);
  s.D = parse_divisor(*s.F, c.div);
  s.x = parse_point_name(*s.F, c.x);
  return s;
}

// ---- output ----

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InvariantError("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::string& path, const std::string& data) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot write " + tmp.string());
    os.write(data.data(), static_cast<std::streamsize>(data.size()));
    os.flush();
    if (!os) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot rename onto " + path + ": " + ec.message());
  }
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_atomic(c.out, text);
}

void emit(const RunConfig& c, const Json& j) { emit(c, j.dump() + "\n"); }

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Json config_echo(const HeckeGraph& G) {
  const auto& m = G.meta();
  const FieldCtx& F = *G.field_ptr();
  Json j;
  j["q"] = m.q;
  j["divisor"] = format_divisor(F, m.divisor);
  j["x"] = format_point(F, m.x);
  j["n_max"] = m.n_max;
  j["builder"] = m.builder;
  return j;
}

// ---- graphs ----

int default_window(const Setup& s, int depth) {
  const int b = s.D.degree() - 2;
  return std::max(0, b) + s.x.degree() * (depth + 3);
}

HeckeGraph build_for(const RunConfig& c, const Setup& s, const Divisor& D, int n_max) {
  return build_graph(s.F, D, s.x, n_max, parse_builder(c.builder), c.threads);
}

std::shared_ptr<const HeckeGraph> load_or_build(const RunConfig& c, int default_n) {
  if (!c.graph_file.empty()) return std::make_shared<const HeckeGraph>(parse_json(read_file(c.graph_file)));
  const Setup s = resolve(c);
  const int n = c.n_max >= 0 ? c.n_max : default_n;
  return std::make_shared<const HeckeGraph>(build_for(c, s, s.D, n));
}

Setup setup_of(const HeckeGraph& G) { return {G.field_ptr(), G.meta().divisor, G.meta().x}; }

// ---- build ----

int cmd_build(const RunConfig& c) {
  if (c.format != "json" && c.format != "dot") throw ConfigError("unknown format '" + c.format + "' (json, dot)");
  const Setup s = resolve(c);
  const int n = c.n_max >= 0 ? c.n_max : 6;
  const HeckeGraph G = build_for(c, s, s.D, n);
  const std::string body = c.format == "json" ? export_json(G) : export_dot(G);
  emit(c, body);

  if (c.out.empty() && c.manifest.empty()) return kOk;
  long long multiplicity = 0;
  for (const auto& e : G.edges()) multiplicity += e.mult;
  Json m;
  m["tool"] = "hecke_lab";
  m["version"] = kVersion;
  m["command"] = "build";
  m["config"] = config_echo(G);
  m["format"] = c.format;
  m["vertices"] = G.num_vertices();
  m["edges"] = G.edges().size();
  m["edge_multiplicity"] = multiplicity;
  m["boundary_vertices"] = G.boundary().size();
  m["thresholds"] = {{"d_cusp_bound", G.space().d_cusp_bound()},
                     {"deep_bound", G.space().deep_bound()},
                     {"covering_threshold", covering_threshold(s.D, s.x)}};
  m["output"] = {{"file", c.out.empty() ? std::string("-") : fs::path(c.out).filename().string()},
                 {"bytes", body.size()},
                 {"sha256", sha256_hex(body)}};
  const std::string path = !c.manifest.empty() ? c.manifest : c.out + ".manifest.json";
  write_atomic(path, m.dump(2) + "\n");
  return kOk;
}

// ---- verify ----

struct CheckResult {
  std::string status = "pass";  // pass, fail, skipped
  Json detail = Json::object();
  Json witness;
};

Json to_json(const std::string& name, const CheckResult& r) {
  Json j;
  j["name"] = name;
  j["status"] = r.status;
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (!r.witness.is_null()) j["witness"] = r.witness;
  return j;
}

CheckResult skipped(std::string why) {
  CheckResult r;
  r.status = "skipped";
  r.detail["reason"] = std::move(why);
  return r;
}

CheckResult check_degree_law(const HeckeGraph& G) {
  CheckResult r;
  const auto bad = check_degrees(G);
  r.detail["expected"] = expected_out_degree(G.meta().q, G.meta().x.degree(), G.meta().divisor.mult(G.meta().x));
  r.detail["violations"] = bad.size();
  if (!bad.empty()) {
    r.status = "fail";
    const auto& v = bad.front();
    r.witness = {{"vertex", v.vertex}, {"label", vertex_label(G.vertex(v.vertex))}, {"total", v.total},
                 {"expected", v.expected}};
  }
  return r;
}

Divisor default_d2(const RunConfig& c, const Setup& s) {
  if (c.d2_given) return parse_divisor(*s.F, c.d2);
  const int dx = s.D.mult(s.x);
  if (dx == 0) return Divisor();
  return Divisor({DivisorEntry{s.x, dx}});
}

CheckResult check_cover(const HeckeGraph& G, const HeckeGraph& G2) {
  CheckResult r;
  const auto w = check_covering(G, G2);
  r.detail["d2"] = format_divisor(*G.field_ptr(), G2.meta().divisor);
  r.detail["threshold"] = w.threshold;
  if (w.degree) r.detail["degree"] = *w.degree;
  if (!w.ok) {
    r.status = "fail";
    r.witness = w.counterexample;
  }
  return r;
}

CheckResult check_split(const HeckeGraph& G, const HeckeGraph& G2) {
  CheckResult r;
  SplitReport s;
  try {
    s = split_components(G, G2);
  } catch (const HypothesisError& e) {
    return skipped(e.what());
  }
  r.detail["d2"] = format_divisor(*G.field_ptr(), G2.meta().divisor);
  r.detail["expected_components"] = s.expected;
  r.detail["components"] = s.components.size();
  r.detail["per_base"] = s.per_base;
  r.detail["cross_edges"] = s.cross_edges;
  if (!s.ok) {
    r.status = "fail";
    r.witness = s.failure;
  }
  return r;
}

CheckResult check_fibers(const HeckeGraph& G, const HeckeGraph& G2) {
  CheckResult r;
  const Setup s = setup_of(G);
  const Divisor D1 = complement_divisor(s.D, G2.meta().divisor, s.x);
  const mpz_class expected = fiber_count(G.meta().q, D1, G2.meta().divisor.empty());
  const int thr = covering_threshold(s.D, s.x);
  const auto p = forgetful_map(G, G2);
  std::vector<long long> count(G2.num_vertices(), 0);
  for (size_t v = 0; v < p.size(); ++v)
    if (p[v] >= 0) ++count[p[v]];
  long long checked = 0;
  for (size_t w = 0; w < G2.num_vertices(); ++w) {
    if (G2.vertex(static_cast<int>(w)).gap <= thr) continue;
    ++checked;
    if (mpz_class(static_cast<long>(count[w])) != expected && r.status == "pass") {
      r.status = "fail";
      r.witness = {{"base_vertex", w}, {"label", vertex_label(G2.vertex(static_cast<int>(w)))},
                   {"fiber", count[w]}, {"expected", expected.get_str()}};
    }
  }
  r.detail["d1"] = format_divisor(*G.field_ptr(), D1);
  r.detail["expected"] = expected.get_str();
  r.detail["base_vertices"] = checked;
  return r;
}

// Transport rule applies to D = [x] + [y] with x = t and y finite of degree 1.
bool transport_rule_applies(const Setup& s) {
  if (s.D.entries().size() != 2 || s.x.inf || s.x.poly != Poly{0, 1}) return false;
  for (const auto& e : s.D.entries())
    if (e.mult != 1 || e.point.inf || e.point.degree() != 1) return false;
  return s.D.mult(s.x) == 1;
}

CheckResult check_monodromy(const RunConfig& c, const HeckeGraph& G) {
  const Setup s = setup_of(G);
  const FieldCtx& F = *s.F;
  const int dx = s.D.mult(s.x);
  if (dx == 0) return skipped("x is not in supp D");
  const Divisor base_div({DivisorEntry{s.x, dx}});
  if (base_div == s.D) return skipped("D is supported at x only");
  const HeckeGraph base = build_graph(s.F, base_div, s.x, G.meta().n_max, parse_builder(G.meta().builder), c.threads);
  const auto loops = fundamental_loops(base, covering_threshold(s.D, s.x));
  CheckResult r;
  std::vector<Fq> all;
  std::set<Fq> nontrivial;
  long long open = 0;
  for (const auto& L : loops) {
    MonodromyRecord rec;
    try {
      rec = monodromy(G, base, L);
    } catch (const InvariantError& e) {
      r.status = "fail";
      r.witness = {{"loop_start", vertex_label(base.vertex(L.start))}, {"length", L.steps.size()}, {"error", e.what()}};
      break;
    }
    if (!rec.closes) ++open;
    for (Fq t : rec.t_values) {
      all.push_back(t);
      if (t != 1) nontrivial.insert(t);
    }
  }
  Json nt = Json::array();
  for (Fq t : nontrivial) nt.push_back(F.format(t));
  Json sub = Json::array();
  for (Fq t : generated_subgroup(F, all)) sub.push_back(F.format(t));
  r.detail["loops"] = loops.size();
  r.detail["open_lifts"] = open;
  r.detail["nontrivial_t"] = nt;
  r.detail["subgroup"] = sub;
  if (transport_rule_applies(s)) {
    const auto rule = check_transport_rule(G, G.space().deep_bound());
    r.detail["transport_rule"] = {{"vertices", rule.vertices}, {"edges", rule.edges},
                                  {"mismatches", rule.mismatches.size()}};
    if (!rule.mismatches.empty() && r.status == "pass") {
      r.status = "fail";
      r.witness = rule.mismatches.front();
    }
  }
  return r;
}

bool same_edges(const std::vector<Neighbor>& a, const std::vector<Neighbor>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].target != b[i].target || a[i].mult != b[i].mult) return false;
  return true;
}

CheckResult check_oracle(const HeckeGraph& G) {
  CheckResult r;
  const HeckeOperator op(G.space_ptr(), G.meta().x);
  const int deep = G.space().deep_bound();
  long long compared = 0;
  for (const auto& v : G.vertices()) {
    if (v.gap <= deep) continue;
    ++compared;
    auto brute = op.bruteforce(v.gap, v.level);
    auto rule = op.cusp_rule(v.gap, v.level);
    auto by_target = [](const Neighbor& a, const Neighbor& b) { return a.target < b.target; };
    std::sort(brute.begin(), brute.end(), by_target);
    std::sort(rule.begin(), rule.end(), by_target);
    if (!same_edges(brute, rule)) {
      r.status = "fail";
      auto list = [](const std::vector<Neighbor>& ns) {
        Json j = Json::array();
        for (const auto& n : ns) j.push_back({{"target", vertex_label(n.target)}, {"mult", n.mult}});
        return j;
      };
      r.witness = {{"vertex", vertex_label(v)}, {"bruteforce", list(brute)}, {"cusp_rule", list(rule)}};
      break;
    }
  }
  r.detail["deep_bound"] = deep;
  r.detail["vertices"] = compared;
  return r;
}

CheckResult check_qbinom() {
  CheckResult r;
  long long cases = 0;
  for (int Q : {2, 3, 4, 5})
    for (int n = 0; n <= 6; ++n)
      for (int k = 0; k <= n; ++k) {
        ++cases;
        const mpz_class lhs = qbinom(n, k, Q), rhs = qbinom_degree_sum(n, k, Q);
        if (lhs != rhs && r.status == "pass") {
          r.status = "fail";
          r.witness = {{"Q", Q}, {"n", n}, {"r", k}, {"qbinom", lhs.get_str()}, {"degree_sum", rhs.get_str()}};
        }
      }
  r.detail["cases"] = cases;
  return r;
}

const std::vector<std::string> kChecks = {"degrees", "covering", "splitting", "monodromy", "oracle", "qbinom", "fibers"};

int cmd_verify(const RunConfig& c) {
  const auto G = load_or_build(c, 6);
  const Setup s = setup_of(*G);
  const std::vector<std::string> checks = c.checks.empty() ? kChecks : c.checks;

  std::optional<HeckeGraph> G2;
  auto base = [&]() -> const HeckeGraph& {
    if (!G2) G2.emplace(build_graph(s.F, default_d2(c, s), s.x, G->meta().n_max, parse_builder(G->meta().builder),
                                    c.threads));
    return *G2;
  };

  Json report;
  report["config"] = config_echo(*G);
  Json list = Json::array();
  bool ok = true;
  for (const auto& name : checks) {
    CheckResult r;
    try {
      if (name == "degrees") r = check_degree_law(*G);
      else if (name == "covering") r = check_cover(*G, base());
      else if (name == "splitting") r = check_split(*G, base());
      else if (name == "monodromy") r = check_monodromy(c, *G);
      else if (name == "oracle") r = check_oracle(*G);
      else if (name == "qbinom") r = check_qbinom();
      else if (name == "fibers") r = check_fibers(*G, base());
      else throw ConfigError("unknown check '" + name + "'");
    } catch (const InvariantError& e) {
      r.status = "fail";
      r.witness = e.what();
    }
    if (r.status == "fail") ok = false;
    list.push_back(to_json(name, r));
  }
  report["checks"] = list;
  report["ok"] = ok;
  emit(c, report);
  return ok ? kOk : kInvariant;
}

// ---- spectral commands ----

std::string part_name(const LayeredDecomposition& L, int v) {
  const int p = L.part.at(v);
  if (p == 0) return "nucleus";
  if (p == LayeredDecomposition::kSide) return "side";
  if (p == LayeredDecomposition::kBeyond) return "beyond";
  return "layer " + std::to_string(p);
}

Json table_json(const ValueTable& t, const LayeredDecomposition& L) {
  Json rows = Json::array();
  for (const auto& [v, val] : t)
    rows.push_back({{"vertex", v}, {"label", vertex_label(L.graph->vertex(v))}, {"part", part_name(L, v)},
                    {"value", val.str()}});
  return rows;
}

// "id:value" pairs; values in the p/q or minpoly:residue syntax.
ValueTable parse_assignments(const std::vector<std::string>& items, const LayeredDecomposition& L) {
  ValueTable t;
  for (const auto& it : items) {
    const auto colon = it.find(':');
    if (colon == std::string::npos) throw ConfigError("expected vertex:value, got '" + it + "'");
    int v = -1;
    try {
      v = std::stoi(it.substr(0, colon));
    } catch (const std::exception&) {
      throw ConfigError("bad vertex id in '" + it + "'");
    }
    if (v < 0 || v >= static_cast<int>(L.graph->num_vertices())) throw ConfigError("vertex id out of range in '" + it + "'");
    t[v] = parse_exact(it.substr(colon + 1));
  }
  return t;
}

AlgNum single_lambda(const RunConfig& c) {
  if (c.lambdas.size() != 1) throw ConfigError("exactly one --lambda is required");
  return parse_exact(c.lambdas.front());
}

LayeredDecomposition decompose(const RunConfig& c, int depth) {
  std::shared_ptr<const HeckeGraph> G;
  if (!c.graph_file.empty()) {
    G = load_or_build(c, 0);
  } else {
    const Setup s = resolve(c);
    G = load_or_build(c, default_window(s, depth));
  }
  return layer_decompose(G);
}

int cmd_spectrum(const RunConfig& c) {
  const auto L = decompose(c, c.depth >= 0 ? c.depth : 3);
  const auto sp = nucleus_spectrum(L);
  Json j;
  j["config"] = config_echo(*L.graph);
  j["nucleus"] = L.nucleus.size();
  Json sizes = Json::array();
  for (const auto& l : L.layers) sizes.push_back(l.size());
  j["layers"] = sizes;
  j["side"] = L.side.size();
  j["beyond"] = L.beyond.size();
  j["stationary"] = L.stationary;
  j["propagativity"] = to_string(check_propagative(L));
  j["charpoly"] = zpoly::format(sp.charpoly, "t");
  Json factors = Json::array();
  const auto dims = nucleus_eigenspace_dims(L);
  for (const auto& [f, m] : sp.irreducible) {
    Json e{{"factor", zpoly::format(f, "t")}, {"multiplicity", m}};
    for (const auto& [g, d] : dims)
      if (g == f) e["eigenspace_dim"] = d;
    factors.push_back(e);
  }
  j["factors"] = factors;
  j["components"] = sp.component_sizes;
  j["row_sums"] = {{"max", sp.max_row_sum}, {"bound", sp.row_sum_bound}, {"ok", sp.gershgorin_ok}};
  emit(c, j);
  return kOk;
}

int cmd_dims(const RunConfig& c) {
  if (c.lambdas.empty()) throw ConfigError("--lambda is required");
  std::vector<AlgNum> lambdas;
  for (const auto& s : c.lambdas) lambdas.push_back(parse_exact(s));
  const auto L = decompose(c, c.depth >= 0 ? c.depth : 3);
  auto row = [&](const AlgNum& lam, bool with_lambda) {
    const auto b = dim_bounds(lam, L);
    Json j;
    if (with_lambda) j["lambda"] = lam.str();
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["exact"] = b.exact;
    if (c.detail) {
      j["nucleus_dim"] = b.nucleus_dim;
      j["boundary_dim"] = b.boundary_dim;
      j["window_limited"] = b.window_limited;
    }
    return j;
  };
  if (lambdas.size() == 1) {
    emit(c, row(lambdas.front(), false));
  } else {
    Json arr = Json::array();
    for (const auto& lam : lambdas) arr.push_back(row(lam, true));
    emit(c, arr);
  }
  return kOk;
}

int cmd_propagate(const RunConfig& c) {
  const int depth = c.depth >= 0 ? c.depth : 4;
  const AlgNum lam = single_lambda(c);
  const auto L = decompose(c, depth);
  ValueTable constraints = parse_assignments(c.seeds, L);
  if (!c.seed_a.empty()) {
    int v = c.seed_vertex;
    if (v < 0) {
      const auto& first = L.nucleus.empty() ? L.layers.front() : L.nucleus;
      v = *std::min_element(first.begin(), first.end());
    }
    constraints[v] = parse_exact(c.seed_a);
  }
  if (constraints.empty()) throw ConfigError("give --seed-a or --seed");
  const ValueTable seed = complete_seed(lam, constraints, L);
  const auto pr = propagate_eigenform(lam, seed, L, depth);
  Json j;
  j["lambda"] = lam.str();
  j["depth"] = depth;
  j["layers_reached"] = pr.layers_reached;
  j["checked"] = pr.checked;
  j["values"] = table_json(pr.values, L);
  emit(c, j);
  return kOk;
}

int cmd_solve(const RunConfig& c) {
  const int depth = c.depth >= 0 ? c.depth : 4;
  const AlgNum lam = single_lambda(c);
  const auto L = decompose(c, depth);
  const ValueTable g = parse_assignments(c.rhs, L);
  const auto sol = solve_resolvent(lam, g, L, depth);
  Json j;
  j["lambda"] = lam.str();
  j["depth"] = depth;
  j["particular"] = table_json(sol.particular.values, L);
  Json hom = Json::array();
  for (const auto& h : sol.homogeneous) hom.push_back(table_json(h.values, L));
  j["homogeneous_dim"] = sol.homogeneous.size();
  j["homogeneous"] = hom;
  emit(c, j);
  return kOk;
}

// ---- wiring ----

void add_setup(CLI::App* sub, RunConfig& c) {
  sub->add_option("--q", c.q, "field size, a prime power <= 256");
  sub->add_option("--div", c.div, "divisor, e.g. x:1,t^2+t+1:2 (empty string for 0)");
  sub->add_option("--x", c.x, "Hecke point (x = t, y = t-1, inf or a monic irreducible in t)");
  sub->add_option("--n-max", c.n_max, "largest gap in the window");
  sub->add_option("--builder", c.builder, "bruteforce, cusp_rule or hybrid");
  sub->add_option("--threads", c.threads, "worker threads for the builder (0 = hardware)");
  sub->add_option("--out", c.out, "output file (written atomically); stdout when absent");
}

void add_graph_input(CLI::App* sub, RunConfig& c) {
  sub->add_option("--graph", c.graph_file, "read the graph from a JSON file instead of building it (not for build)");
}

int run(int argc, char** argv) {
  CLI::App app{"Hecke graphs of PGL2 over P^1 with level structure"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);
  // Shared options live on the root so that config files can set them at top level;
  // subcommands fall through to them.
  app.fallthrough();
  RunConfig c;
  add_setup(&app, c);
  add_graph_input(&app, c);

  auto* build = app.add_subcommand("build", "build a graph and write JSON or DOT plus a manifest");
  build->add_option("--format", c.format, "json or dot");
  build->add_option("--manifest", c.manifest, "manifest path (default <out>.manifest.json)");

  auto* verify = app.add_subcommand("verify", "run structural checks and report pass/fail");
  verify->add_option("--checks", c.checks, "subset of degrees,covering,splitting,monodromy,oracle,qbinom,fibers")
      ->delimiter(',')
      ->check(CLI::IsMember(kChecks));
  verify->add_option("--d2", c.d2, "sub-divisor for covering, splitting and fibers (default: the part at x)")
      ->each([&](const std::string&) { c.d2_given = true; });

  auto* spectrum = app.add_subcommand("spectrum", "nucleus characteristic polynomial and layering");
  spectrum->add_option("--depth", c.depth, "layers to fit in the default window");

  auto* dims = app.add_subcommand("dims", "eigenspace dimension bounds for a list of lambda");
  dims->add_option("--lambda", c.lambdas, "p/q or minpoly:residue; repeat or comma-separate")->delimiter(',');
  dims->add_option("--depth", c.depth, "layers to fit in the default window");
  dims->add_flag("--detail", c.detail, "include nucleus and boundary dimensions");

  auto* propagate = app.add_subcommand("propagate", "extend an eigenform seed layer by layer");
  propagate->add_option("--lambda", c.lambdas, "eigenvalue");
  propagate->add_option("--depth", c.depth, "number of layers");
  propagate->add_option("--seed-a", c.seed_a, "value at the seed vertex");
  propagate->add_option("--seed-vertex", c.seed_vertex, "seed vertex id (default: smallest nucleus vertex)");
  propagate->add_option("--seed", c.seeds, "extra constraints id:value")->delimiter(',');

  auto* solve = app.add_subcommand("solve", "solve (Phi - lambda) f = g for finitely supported g");
  solve->add_option("--lambda", c.lambdas, "lambda outside the nucleus spectrum");
  solve->add_option("--depth", c.depth, "number of layers");
  solve->add_option("--g", c.rhs, "right-hand side entries id:value")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  if (*build) return cmd_build(c);
  if (*verify) return cmd_verify(c);
  if (*spectrum) return cmd_spectrum(c);
  if (*dims) return cmd_dims(c);
  if (*propagate) return cmd_propagate(c);
  return cmd_solve(c);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << " (raise HECKE_LAB_BUDGET)\n";
    return kConfig;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kHypothesis;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
}
