#include "rsm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "rsm/certificates.hpp"
#include "rsm/chord_moments.hpp"
#include "rsm/errors.hpp"
#include "rsm/geometry.hpp"
#include "rsm/lifting.hpp"
#include "rsm/lp.hpp"
#include "rsm/monte_carlo.hpp"
#include "rsm/tetra_moments.hpp"

namespace rsm::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Raised by handlers whose computation finished but whose claim did not hold.
struct Outcome {
  json result;
  int code = kOk;
};

struct Context {
  std::vector<std::string> argv;
  unsigned threads = 1;
  std::string out_path;
  std::string tables_dir;
  std::string format = "json";
  std::vector<std::uint64_t> seeds;
  json inputs = json::array();
  json outputs = json::array();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void input(const fs::path& p) { inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p.string())}}); }
  void output(const fs::path& p) { outputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p.string())}}); }
};

// Closed-form float: deterministic, so its statistical error is zero.
json closed_form(double v) { return {{"value", v}, {"std_error", 0.0}, {"method", "closed-form"}}; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<ExactRational> parse_rationals(const std::string& s) {
  std::vector<ExactRational> out;
  for (const auto& t : split(s, ',')) out.push_back(ExactRational::parse(t));
  return out;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& r : parse_rationals(s)) out.push_back(r.to_double());
  return out;
}

std::optional<Point> parse_fixed(const std::string& s, const Body& body) {
  if (s.empty() || s == "none") return std::nullopt;
  if (s == "c2" || s == "midpoint-hypotenuse") return Point{0.5, 0.5};
  if (s == "c3" || s == "centroid") return Point{1.0 / 3, 1.0 / 3, 1.0 / 3};
  if (s == "origin") return Point(body.dim(), 0.0);
  return parse_reals(s);
}

json rationals_json(const std::vector<ExactRational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

std::string sha_of(const json& j) { return sha256_hex(j.dump()); }

json manifest(const Context& ctx, const json& result) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - ctx.start);
  return {{"schema_version", kSchemaVersion},
          {"tool", "rsm"},
          {"version", kVersion},
          {"command_line", ctx.argv},
          {"seeds", ctx.seeds},
          {"threads", ctx.threads},
          {"rng", RngStream::kAlgorithm},
          {"inputs", ctx.inputs},
          {"outputs", ctx.outputs},
          {"result_sha256", sha_of(result)},
          {"wall_time_ms", ms.count()}};
}

// Loads a table from `file` when present, computing and saving missing entries.
MomentTable table_with_checkpoint(Context& ctx, TetraCase c, unsigned k_max, bool extend_existing = true) {
  TableOptions opts;
  opts.moments.threads = ctx.threads;
  if (ctx.tables_dir.empty()) return moment_table(c, k_max, opts);
  const fs::path file = MomentTable::default_file(ctx.tables_dir, c);
  if (fs::exists(file)) {
    ctx.input(file);
    if (!extend_existing) {
      const MomentTable saved = MomentTable::load(file);
      if (saved.k_max() >= k_max) return saved;
      return saved;  // caller reports the shortfall
    }
  }
  opts.checkpoint = file;
  MomentTable t = moment_table(c, k_max, opts);
  ctx.output(file);
  return t;
}

// ---------------------------------------------------------------- chords

Outcome cmd_chords(Context&, const std::string& triangle, int k, const std::string& fixed) {
  TriangleSpec t = TriangleSpec::t2();
  const bool is_t2 = triangle == "T2";
  if (!is_t2) {
    if (triangle.rfind("sides:", 0) != 0) throw UsageError("--triangle expects T2 or sides:a,b,c");
    const auto s = parse_reals(triangle.substr(6));
    if (s.size() != 3) throw UsageError("sides:a,b,c needs three lengths");
    t = TriangleSpec::from_sides(s[0], s[1], s[2]);
  }
  json r{{"triangle", triangle}, {"k", k},
         {"sides", {{"a", closed_form(t.a())}, {"b", closed_form(t.b())}, {"c", closed_form(t.c())}}}};
  const double chord = chord_moment(t, k);
  r["chord_moment"] = closed_form(chord);
  if (is_t2 && k % 2 == 0) r["chord_moment"]["exact"] = exact_even_chord_moment_t2(k / 2).to_string();

  if (fixed != "none") {
    double v = 0.0;
    std::optional<std::array<ExactRational, 2>> exact_point;
    if (fixed == "midpoint-hypotenuse") {
      v = edgepoint_moment(t, t.c() / 2.0, k);
      if (is_t2) exact_point = {{ExactRational(1, 2), ExactRational(1, 2)}};
    } else if (fixed.rfind("vertex:", 0) == 0) {
      const std::string which = fixed.substr(7);
      const TriangleVertex vx = which == "A" ? TriangleVertex::kA
                                : which == "B" ? TriangleVertex::kB
                                : which == "C" ? TriangleVertex::kC
                                               : throw UsageError("vertex must be A, B or C");
      v = vertex_moment(t, vx, k);
      // T2 places A = (1,0), B = (0,1), C = (0,0).
      if (is_t2)
        exact_point = vx == TriangleVertex::kA   ? std::array<ExactRational, 2>{1, 0}
                      : vx == TriangleVertex::kB ? std::array<ExactRational, 2>{0, 1}
                                                 : std::array<ExactRational, 2>{0, 0};
    } else if (fixed.rfind("edge:", 0) == 0) {
      v = edgepoint_moment(t, ExactRational::parse(fixed.substr(5)).to_double(), k);
    } else {
      throw UsageError("--fixed expects none, midpoint-hypotenuse, vertex:A|B|C or edge:<distance from A>");
    }
    r["fixed"] = fixed;
    r["fixed_moment"] = closed_form(v);
    if (exact_point && k % 2 == 0) r["fixed_moment"]["exact"] = exact_even_point_moment_t2(*exact_point, k / 2).to_string();
    r["ratio"] = closed_form(v / chord);
    if (is_t2 && fixed == "midpoint-hypotenuse" && k >= 1) r["ratio_formula"] = closed_form(ratio_r(k));
  }
  return {r};
}

// ---------------------------------------------------------- tetra-moments

json table_json(const MomentTable& t) {
  json entries = json::array();
  for (unsigned k = 0; k <= t.k_max(); ++k)
    entries.push_back({{"k", k}, {"order", 2 * k}, {"value", t.at(k).to_string()}, {"approx", approx_string(t.at(k).to_double())}});
  return {{"case", to_string(t.tetra_case())}, {"k_max", t.k_max()}, {"entries", entries},
          {"strictly_decreasing", t.strictly_decreasing()}};
}

Outcome cmd_tetra(Context& ctx, const std::string& cs, unsigned kmax, const std::string& method) {
  const TetraCase c = parse_tetra_case(cs);
  if (method != "separable" && method != "expansion") throw UsageError("--method expects separable or expansion");
  MomentTable t;
  if (method == "expansion") {
    TableOptions o;
    o.moments.method = MomentMethod::kExpansion;
    t = moment_table(c, kmax, o);
  } else {
    t = table_with_checkpoint(ctx, c, kmax);
  }
  json r = table_json(t);
  r["method"] = method;
  return {r};
}

// ------------------------------------------------------------------ nodes

json node_json(const NodeSearchResult& nr, long max_den) {
  json cands = json::array();
  for (double x : nr.candidate_nodes) cands.push_back({{"t", approx_string(x)}, {"rational", rationalize(x, max_den).to_string()}});
  return {{"side", to_string(nr.side)},
          {"degree", nr.degree},
          {"grid", nr.grid},
          {"interval_end", nr.interval_end.to_string()},
          {"objective", nr.objective.to_string()},
          {"objective_approx", approx_string(nr.objective.to_double())},
          {"coefficients", rationals_json(nr.coefficients)},
          {"active_grid", nr.active_grid},
          {"candidate_nodes", cands},
          {"max_den", max_den},
          {"lp", {{"status", to_string(nr.lp.status)}, {"pivots", nr.lp.pivots}, {"dual_certificate_verified", true}}}};
}

Outcome cmd_nodes(Context& ctx, const std::string& cs, unsigned degree, unsigned grid, const std::string& end, long max_den) {
  const TetraCase c = parse_tetra_case(cs);
  const BoundSide side = c == TetraCase::kFree ? BoundSide::kLower : BoundSide::kUpper;
  const ExactRational E = end.empty() ? default_interval_end(c) : ExactRational::parse(end);
  const MomentTable t = table_with_checkpoint(ctx, c, degree);
  json r = node_json(node_search(t, degree, grid, E, side), max_den);
  r["case"] = to_string(c);
  return {r};
}

// ---------------------------------------------------------------- certify

Outcome cmd_certify(Context& ctx, const std::string& side_s, const std::string& cs, const std::string& nodes_s,
                    const std::string& B_s, const std::string& table_file, const std::string& save) {
  if (side_s != "lower" && side_s != "upper") throw UsageError("--side expects lower or upper");
  const BoundSide side = side_s == "lower" ? BoundSide::kLower : BoundSide::kUpper;
  const TetraCase c = cs.empty() ? case_for_side(side) : parse_tetra_case(cs);
  CertificateNodes nodes = default_nodes(side);
  if (!nodes_s.empty()) {
    // "<singles>|<doubles>", each a comma list of rationals.
    const auto bar = nodes_s.find('|');
    nodes.single = parse_rationals(nodes_s.substr(0, bar));
    nodes.dbl = bar == std::string::npos ? std::vector<ExactRational>{} : parse_rationals(nodes_s.substr(bar + 1));
  }
  const ExactRational B = B_s.empty() ? default_interval_B(c) : ExactRational::parse(B_s);
  const unsigned degree = static_cast<unsigned>(nodes.single.size() + 2 * nodes.dbl.size()) - 1;
  MomentTable t;
  if (!table_file.empty()) {
    t = MomentTable::load(table_file);
    ctx.input(table_file);
    if (t.tetra_case() != c) throw UsageError("table " + table_file + " holds the " + to_string(t.tetra_case()) + " case");
  } else {
    t = table_with_checkpoint(ctx, c, degree);
  }
  const Certificate cert = build_certificate(side, nodes, B, t);
  json r = cert.to_json();
  const ExactRational thr = separation_threshold();
  r["threshold"] = thr.to_string();
  r["bound_vs_threshold"] = side == BoundSide::kLower ? (cert.bound > thr ? "bound > threshold" : "bound <= threshold")
                                                      : (cert.bound < thr ? "bound < threshold" : "bound >= threshold");
  if (!save.empty()) {
    std::ofstream f(save);
    if (!f) throw UsageError("cannot write " + save);
    f << cert.to_json().dump(2) << '\n';
    f.close();
    ctx.output(save);
  }
  return {r, cert.verified ? kOk : kVerificationFailed};
}

// ------------------------------------------------- verify-counterexample

Outcome cmd_verify(Context& ctx, bool extend) {
  const unsigned need_free = 7, need_fixed = 15;
  MomentTable free_t, fixed_t;
  if (ctx.tables_dir.empty()) {
    free_t = table_with_checkpoint(ctx, TetraCase::kFree, need_free);
    fixed_t = table_with_checkpoint(ctx, TetraCase::kFixedCentroid, need_fixed);
  } else {
    // Existing tables are used as they are unless --extend is given.
    free_t = table_with_checkpoint(ctx, TetraCase::kFree, need_free, extend);
    fixed_t = table_with_checkpoint(ctx, TetraCase::kFixedCentroid, need_fixed, extend);
  }
  const CounterexampleReport rep = verify_counterexample(free_t, fixed_t);
  json r = rep.to_json();
  r["summary"] = {
      {"second_moment", rep.second_fixed.to_string() + (rep.second_holds ? " < " : " >= ") + rep.second_free.to_string()},
      {"bounds", rep.verified ? "lower > 0.046942 > upper" : "inequality chain not verified"}};
  return {r, rep.verified ? kOk : kVerificationFailed};
}

// --------------------------------------------------------------------- mc

Outcome cmd_mc(Context& ctx, const std::string& body_s, unsigned n, double k, const std::string& fixed_s,
               std::uint64_t samples, std::uint64_t seed, const std::string& mode, bool surface) {
  const Body body = Body::parse(body_s);
  ctx.seeds.push_back(seed);
  json r{{"body", body.to_json()}, {"n", n}, {"k", exact_double_string(k)}};
  if (surface) {
    r["quantity"] = "surface";
    r["estimate"] = estimate_surface_moment(body, n, samples, seed, ctx.threads, k).to_json();
    return {r};
  }
  if (mode != "interior" && mode != "boundary") throw UsageError("--mode expects interior or boundary");
  MomentQuery q;
  q.body = body;
  q.n = n;
  q.k = k;
  q.fixed = parse_fixed(fixed_s, body);
  q.mode = mode == "interior" ? SampleMode::kInterior : SampleMode::kBoundary;
  q.samples = samples;
  q.seed = seed;
  q.threads = ctx.threads;
  const MomentEstimate m = estimate_moment(q);
  r["quantity"] = "volume";
  r["mode"] = mode;
  if (q.fixed || body.fixed_point()) r["fixed_point"] = q.fixed ? *q.fixed : *body.fixed_point();
  r["estimate"] = m.estimate.to_json();
  if (q.mode == SampleMode::kBoundary) {
    const double N = static_cast<double>(m.estimate.samples);
    const double p = static_cast<double>(m.all_flat) / N;
    r["all_flat"] = {{"count", m.all_flat}, {"mean", p}, {"std_error", std::sqrt(p * (1 - p) / N)}};
  }
  return {r};
}

// ------------------------------------------------------------- lift-sweep

Outcome cmd_lift(Context& ctx, const std::string& mode, const std::string& body_s, const std::string& other_s,
                 unsigned n, double k, const std::string& eps_s, std::uint64_t samples, std::uint64_t seed,
                 const std::optional<double>& reference, std::string& csv) {
  const Body K = Body::parse(body_s);
  const auto eps = parse_reals(eps_s);
  ctx.seeds.push_back(seed);
  SweepOptions o;
  o.samples = samples;
  o.seed = seed;
  o.threads = ctx.threads;
  o.reference = reference;
  if (mode == "eps0") {
    if (other_s.empty()) throw UsageError("--mode eps0 needs --other <body>");
    const EpsilonSearch es = find_epsilon0(K, Body::parse(other_s), n, k, eps, o);
    json r = es.to_json();
    r["K"] = K.to_json();
    r["L"] = Body::parse(other_s).to_json();
    return {r};
  }
  if (mode != "interior" && mode != "boundary") throw UsageError("--mode expects interior, boundary or eps0");
  const SweepResult sr = mode == "interior" ? interior_convergence_sweep(K, n, k, eps, o)
                                            : boundary_convergence_sweep(K, n, k, eps, o);
  csv = sr.to_csv();
  return {sr.to_json()};
}

// -------------------------------------------------------- reproduce-paper

json published(const std::string& quantity, const ExactRational& computed, const std::string& printed) {
  const ExactRational p = ExactRational::parse(printed);
  json j{{"quantity", quantity}, {"computed", computed.to_string()}, {"published", printed}, {"equal", computed == p}};
  if (computed != p) j["ratio_published_over_computed"] = (p / computed).to_string();
  return j;
}

// `printed` is a four-digit truncation, so the target is the interval [printed, printed + 1e-4).
json mc_check(const std::string& label, const Body& body, const std::optional<Point>& fixed, double printed,
              std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  const auto e = estimate_moment(body, 3, 1.0, fixed, samples, seed, threads);
  const double hi = printed + 1e-4;
  const double dist = e.mean < printed ? printed - e.mean : e.mean > hi ? e.mean - hi : 0.0;
  return {{"quantity", label}, {"estimate", e.to_json()}, {"published_approx", approx_string(printed)},
          {"z_from_published_interval", approx_string(dist / e.std_error)}, {"within_3sigma", dist <= 3 * e.std_error}};
}

Outcome cmd_reproduce(Context& ctx, const std::string& level, std::uint64_t seed, std::uint64_t samples) {
  if (level != "fast" && level != "full") throw UsageError("--level expects fast or full");
  const bool full = level == "full";
  ctx.seeds.push_back(seed);
  json r{{"level", level}};
  json mismatches = json::array();
  bool claims = true;

  // Chord formulas in T2.
  const TriangleSpec t2 = TriangleSpec::t2();
  json chords = json::array();
  // Printed decimals are truncated to four places; even orders are printed exactly.
  const double printed_chord[] = {0.4142, 0.0, 0.1405};
  const double printed_mid[] = {0.3825, 0.0, 0.0783};
  const char* exact_chord[] = {"2/9", "1/10"};
  const char* exact_mid[] = {"1/6", "7/180"};
  auto truncates_to = [](double v, double printed) { return std::floor(v * 1e4) == std::round(printed * 1e4); };
  for (int k = 1; k <= 4; ++k) {
    const double ch = chord_moment(t2, k), mid = edgepoint_moment(t2, t2.c() / 2, k);
    json row{{"k", k}, {"chord", closed_form(ch)}, {"midpoint", closed_form(mid)}};
    bool ok;
    if (k % 2 == 0) {
      const ExactRational ec = exact_even_chord_moment_t2(k / 2);
      const ExactRational em = exact_even_point_moment_t2({ExactRational(1, 2), ExactRational(1, 2)}, k / 2);
      row["chord_exact"] = ec.to_string();
      row["midpoint_exact"] = em.to_string();
      ok = ec == ExactRational::parse(exact_chord[k / 2 - 1]) && em == ExactRational::parse(exact_mid[k / 2 - 1]);
    } else {
      ok = truncates_to(ch, printed_chord[k - 1]) && truncates_to(mid, printed_mid[k - 1]);
    }
    row["matches_published"] = ok;
    claims &= ok;
    chords.push_back(row);
  }
  r["chords_T2"] = chords;
  double worst = 0.0;
  for (int k = 1; k <= 12; ++k)
    worst = std::max(worst, std::abs(edgepoint_moment(t2, t2.c() / 2, k) / chord_moment(t2, k) - ratio_r(k)));
  bool decreasing = true;
  for (int k = 1; k < 50; ++k) decreasing &= ratio_r(k + 1) < ratio_r(k);
  r["ratio_law"] = {{"max_abs_deviation_k1_12", closed_form(worst)}, {"r1_below_one", ratio_r(1) < 1}, {"strictly_decreasing_k1_50", decreasing}};
  claims &= worst < 1e-10 && ratio_r(1) < 1 && decreasing;

  // Moment tables.
  const MomentTable free_t = table_with_checkpoint(ctx, TetraCase::kFree, full ? 7 : 5);
  const MomentTable fixed_t = table_with_checkpoint(ctx, TetraCase::kFixedCentroid, full ? 15 : 5);
  r["moments_free"] = table_json(free_t);
  r["moments_fixed"] = table_json(fixed_t);
  json pubs = json::array();
  const char* free_printed[] = {"9/1600", "27/196000", "3161/379330560", "93957/106247680000", "209022679/1551386124288000"};
  const char* fixed_printed[] = {"7/2400", "11/529200", "2839/10973491200", "29419/622402704000", "4134139/363523012905600"};
  for (unsigned k = 1; k <= 5; ++k) {
    pubs.push_back(published("free E V^" + std::to_string(2 * k), free_t.at(k), free_printed[k - 1]));
    pubs.push_back(published("fixed-centroid E V^" + std::to_string(2 * k), fixed_t.at(k), fixed_printed[k - 1]));
  }
  for (const auto& p : pubs)
    if (!p["equal"].get<bool>()) mismatches.push_back(p["quantity"]);
  r["published_moment_comparison"] = pubs;

  const ExactRational f2 = fixed_t.at(1), g2 = free_t.at(1);
  r["second_moment_comparison"] = {{"statement", f2.to_string() + (f2 < g2 ? " < " : " >= ") + g2.to_string()},
                                   {"gap", (g2 - f2).to_string()}};
  claims &= f2 < g2;

  const Body T3 = Body::tetrahedron_t3();
  const std::uint64_t N = samples ? samples : (full ? 1000000 : 200000);
  r["monte_carlo"] = json::array({mc_check("E V free", T3, std::nullopt, 0.0592, N, seed, ctx.threads),
                                  mc_check("E V fixed-centroid", T3, Point{1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.0466, N, seed, ctx.threads)});

  if (full) {
    const NodeSearchResult lo6 = node_search(free_t, 6, 200, default_interval_end(TetraCase::kFree), BoundSide::kLower);
    const NodeSearchResult up14 = node_search(fixed_t, 14, 200, default_interval_end(TetraCase::kFixedCentroid), BoundSide::kUpper);
    const NodeSearchResult lo7 = node_search(free_t, 7, 1000, default_interval_end(TetraCase::kFree), BoundSide::kLower);
    const bool lo6_ok = lo6.objective < ExactRational(BigInt(4647), BigInt(100000));
    const bool up14_ok = up14.objective > ExactRational(BigInt(4699), BigInt(100000));
    r["lp"] = {{"lower_degree6", node_json(lo6, 20)}, {"lower_degree6_below_0.04647", lo6_ok},
               {"upper_degree14", node_json(up14, 64)}, {"upper_degree14_above_0.04699", up14_ok},
               {"lower_degree7_nodes", node_json(lo7, 20)}};
    claims &= lo6_ok && up14_ok;
    const CounterexampleReport rep = verify_counterexample(free_t, fixed_t);
    r["counterexample"] = rep.to_json();
    r["verdict"] = rep.verified ? "lower > 0.046942 > upper" : "inequality chain not verified";
    claims &= rep.verified;
    SweepOptions o;
    o.samples = 200000;
    o.seed = seed;
    o.threads = ctx.threads;
    const std::vector<double> eps{0.5, 0.125, 1.0 / 32};
    const SweepResult in = interior_convergence_sweep(Body::triangle_t2(), 2, 2, eps, o);
    const SweepResult bd = boundary_convergence_sweep(Body::triangle_t2(), 2, 2, eps, o);
    r["lifting"] = {{"interior", in.to_json()}, {"boundary", bd.to_json()}};
  }
  r["published_value_mismatches"] = mismatches;
  r["claims_verified"] = claims;
  return {r, claims ? kOk : kVerificationFailed};
}

void emit(Context& ctx, json result, const std::string& csv, std::ostream& out) {
  std::string text;
  if (ctx.format == "csv" && !csv.empty()) {
    text = "# manifest: " + manifest(ctx, result).dump() + "\n" + csv;
  } else {
    result["manifest"] = manifest(ctx, result);
    text = result.dump(2) + "\n";
  }
  if (ctx.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(ctx.out_path);
  if (!f) throw UsageError("cannot write " + ctx.out_path);
  f << text;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream s;
  for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return s.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.argv = args;
  ctx.threads = std::max(1u, std::thread::hardware_concurrency());

  CLI::App app{"Exact moments, certificates and Monte Carlo for random simplices", "rsm"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.add_option("--threads", ctx.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", ctx.out_path, "Write the report to this file instead of stdout");
  app.add_option("--tables", ctx.tables_dir, "Directory for moment-table checkpoints")->envname("RSM_TABLES");
  app.add_option("--format", ctx.format, "json or csv (csv only for lift-sweep)")->check(CLI::IsMember({"json", "csv"}));

  std::function<Outcome()> action;
  std::string csv;

  auto* chords = app.add_subcommand("chords", "Chord and fixed-point distance moments in a triangle");
  std::string triangle = "T2", fixed = "none";
  int ck = 2;
  chords->add_option("--triangle", triangle, "T2 or sides:a,b,c");
  chords->add_option("--k", ck, "Moment order")->check(CLI::NonNegativeNumber);
  chords->add_option("--fixed", fixed, "none | midpoint-hypotenuse | vertex:A|B|C | edge:<c1>");
  chords->callback([&] { action = [&] { return cmd_chords(ctx, triangle, ck, fixed); }; });

  auto* tetra = app.add_subcommand("tetra-moments", "Exact even moments of the random triangle area in T3");
  std::string tcase = "free", method = "separable";
  unsigned kmax = 5;
  tetra->add_option("--case", tcase, "free | fixed-centroid");
  tetra->add_option("--kmax", kmax, "Largest k (moment order 2k)");
  tetra->add_option("--method", method, "separable | expansion");
  tetra->callback([&] { action = [&] { return cmd_tetra(ctx, tcase, kmax, method); }; });

  auto* nodes = app.add_subcommand("nodes", "Node-search linear program");
  std::string ncase = "free", nend;
  unsigned degree = 7, grid = 1000;
  long max_den = 20;
  nodes->add_option("--case", ncase, "free (lower) | fixed-centroid (upper)");
  nodes->add_option("--degree", degree, "Polynomial degree")->required();
  nodes->add_option("--grid", grid, "Grid size L");
  nodes->add_option("--end", nend, "Interval end E (default 7/8 free, 3/10 fixed)");
  nodes->add_option("--max-den", max_den, "Denominator bound for rationalized nodes")->check(CLI::PositiveNumber);
  nodes->callback([&] { action = [&] { return cmd_nodes(ctx, ncase, degree, grid, nend, max_den); }; });

  auto* certify = app.add_subcommand("certify", "Build and verify a certificate polynomial");
  std::string side = "lower", ccase, cnodes, cB, ctable, csave;
  certify->add_option("--side", side, "lower | upper");
  certify->add_option("--case", ccase, "free | fixed-centroid (default from side)");
  certify->add_option("--nodes", cnodes, "singles|doubles, e.g. 0,47/54|2/19,4/15,8/17");
  certify->add_option("--B", cB, "x-domain bound B; t is certified on [0, sqrt(B)]");
  certify->add_option("--table", ctable, "Moment table JSON file");
  certify->add_option("--save", csave, "Also write the certificate JSON here");
  certify->callback([&] { action = [&] { return cmd_certify(ctx, side, ccase, cnodes, cB, ctable, csave); }; });

  auto* verify = app.add_subcommand("verify-counterexample", "Full exact verification: second moments and both bounds");
  bool extend = false;
  verify->add_flag("--extend", extend, "Extend short tables in --tables instead of failing");
  verify->callback([&] { action = [&] { return cmd_verify(ctx, extend); }; });

  auto* mc = app.add_subcommand("mc", "Monte Carlo moment of the random simplex volume");
  std::string body = "T3", mfixed = "none", mmode = "interior";
  unsigned mn = 3;
  double mk = 1.0;
  std::uint64_t msamples = 1000000, mseed = 1;
  bool surface = false;
  mc->add_option("--body", body, "T2, T3, segment, simplex:d, cube:d[:side], ball:d, halfball:d, prism(<body>,h) or JSON");
  mc->add_option("--n", mn, "Number of vertices");
  mc->add_option("--k", mk, "Moment order");
  mc->add_option("--fixed", mfixed, "none | c2 | c3 | origin | x1,x2,...");
  mc->add_option("--samples", msamples, "Sample count");
  mc->add_option("--seed", mseed, "Seed");
  mc->add_option("--mode", mmode, "interior | boundary");
  mc->add_flag("--surface", surface, "Estimate the surface (sum of facet volumes) instead");
  mc->callback([&] { action = [&] { return cmd_mc(ctx, body, mn, mk, mfixed, msamples, mseed, mmode, surface); }; });

  auto* lift = app.add_subcommand("lift-sweep", "Convergence sweeps over K x [0, eps]");
  std::string lmode = "interior", lbody = "T2", lother, leps = "1/2,1/8,1/32";
  unsigned ln = 2;
  double lk = 2.0;
  std::uint64_t lsamples = 200000, lseed = 1;
  std::optional<double> lref;
  lift->add_option("--mode", lmode, "interior | boundary | eps0");
  lift->add_option("--body", lbody, "Base body K");
  lift->add_option("--other", lother, "Body L for --mode eps0");
  lift->add_option("--n", ln, "Number of vertices");
  lift->add_option("--k", lk, "Moment order");
  lift->add_option("--eps", leps, "Comma list of decreasing heights");
  lift->add_option("--samples", lsamples, "Samples per eps");
  lift->add_option("--seed", lseed, "Seed");
  lift->add_option("--reference", lref, "Override the reference value");
  lift->callback([&] {
    action = [&] { return cmd_lift(ctx, lmode, lbody, lother, ln, lk, leps, lsamples, lseed, lref, csv); };
  });

  auto* repro = app.add_subcommand("reproduce-paper", "Run every reproduction step at the chosen level");
  std::string level = "fast";
  std::uint64_t rseed = 20240601, rsamples = 0;
  repro->add_option("--level", level, "fast | full");
  repro->add_option("--seed", rseed, "Seed for Monte Carlo steps");
  repro->add_option("--samples", rsamples, "Monte Carlo samples (default 2e5 fast, 1e6 full)");
  repro->callback([&] { action = [&] { return cmd_reproduce(ctx, level, rseed, rsamples); }; });

  try {
    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    Outcome o = action();
    emit(ctx, std::move(o.result), csv, out);
    if (o.code == kVerificationFailed) err << "verification failed\n";
    return o.code;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "usage error: malformed JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace rsm::cli
