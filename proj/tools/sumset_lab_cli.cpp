// sumset-lab: batch front end for the sumset_lab library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumset_lab/sumset_lab.hpp"

namespace sl = sumset_lab;
using sl::Json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool timing = false;
};

std::vector<std::string> split(const std::string& text, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (seps.find(c) != std::string::npos) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    sl::fail(sl::ErrorKind::invalid_input, what + ": expected a non-negative integer, got '" + s + "'");
  return std::stoull(s);
}

// "3", "2x2", "Z2xZ3", "2,3"
sl::FiniteAbelianGroup parse_group(const std::string& spec) {
  std::string cleaned;
  for (char c : spec)
    if (c != 'Z' && c != 'z') cleaned.push_back(c);
  std::vector<std::uint32_t> orders;
  for (const auto& part : split(cleaned, "x,*"))
    orders.push_back(static_cast<std::uint32_t>(parse_uint(part, "group factor")));
  return sl::make_group(orders);
}

std::vector<std::uint32_t> parse_list(const std::string& text, const std::string& what) {
  std::vector<std::uint32_t> out;
  if (text.empty()) return out;
  for (const auto& part : split(text, ","))
    out.push_back(static_cast<std::uint32_t>(parse_uint(part, what)));
  return out;
}

sl::GroupSubset parse_subset(const sl::FiniteAbelianGroup& g, const std::string& text, const std::string& what) {
  const auto elems = parse_list(text, what);
  for (auto e : elems)
    sl::require(g.contains(e), sl::ErrorKind::invalid_element, what + ": element " + std::to_string(e) + " is outside G");
  return sl::GroupSubset::of(g, std::span<const sl::Element>(elems));
}

std::vector<sl::TensorSet> load_sets(const std::vector<std::string>& paths) {
  std::vector<sl::TensorSet> sets;
  for (const auto& p : paths) {
    try {
      sets.push_back(sl::read_set_file(p));
    } catch (const sl::Error& e) {
      sl::fail(e.kind(), p + ": " + e.what());
    }
  }
  return sets;
}

void check_over_group(const sl::FiniteAbelianGroup& g, const std::vector<sl::TensorSet>& sets) {
  sl::require(!sets.empty(), sl::ErrorKind::invalid_input, "no set files given");
  for (std::size_t j = 0; j < sets.size(); ++j) {
    sl::require(sets[j].alphabet() == g.order(), sl::ErrorKind::shape,
                "set " + std::to_string(j + 1) + " has alphabet " + std::to_string(sets[j].alphabet()) +
                    " but |G| = " + std::to_string(g.order()));
    sl::require(sets[j].dimension() == sets[0].dimension(), sl::ErrorKind::shape,
                "set " + std::to_string(j + 1) + " has n = " + std::to_string(sets[j].dimension()) +
                    " but set 1 has n = " + std::to_string(sets[0].dimension()));
  }
}

std::string format_rho(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json rationals(const std::vector<sl::Rational>& qs) {
  Json out = Json::array();
  for (const auto& q : qs) out.push_back(sl::format_rational(q));
  return out;
}

Json coords_json(const sl::CoordinateSet& c) { return c.elements(); }

Json set_summary(const sl::TensorSet& e) {
  return {{"alphabet", e.alphabet()},
          {"n", e.dimension()},
          {"size", e.count()},
          {"density", sl::format_rational(sl::density(e))}};
}

class Report {
 public:
  Report(std::string command, const Globals& globals) : globals_(globals), start_(std::chrono::steady_clock::now()) {
    json_["command"] = std::move(command);
    json_["seed"] = globals.seed;
    json_["parameters"] = Json::object();
    json_["outputs"] = Json::object();
  }
  Json& params() { return json_["parameters"]; }
  Json& outputs() { return json_["outputs"]; }
  void emit(std::ostream& out) {
    if (globals_.timing) {
      const auto us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start_);
      json_["timing_us"] = us.count();
    }
    out << json_.dump(2) << "\n";
  }

 private:
  Json json_;
  const Globals& globals_;
  std::chrono::steady_clock::time_point start_;
};

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("SUMSET_LAB_THREADS"); env && *env)
    return static_cast<unsigned>(std::max<std::uint64_t>(1, parse_uint(env, "SUMSET_LAB_THREADS")));
  return 1;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  sl::require(static_cast<bool>(out), sl::ErrorKind::invalid_input, "cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::vector<std::string> files;
  std::size_t r = 1;
  std::string beta = "1/10", alpha = "1/10";
};

void run_decompose(const DecomposeArgs& a, const Globals& globals) {
  const auto sets = load_sets(a.files);
  sl::require(!sets.empty(), sl::ErrorKind::invalid_input, "no set files given");
  sl::RegularityParams params{a.r, sl::parse_rational(a.beta), sl::parse_rational(a.alpha)};
  Report report("decompose", globals);
  report.params() = {{"files", a.files}, {"r", a.r}, {"beta", sl::format_rational(params.beta)},
                     {"alpha", sl::format_rational(params.alpha)}};
  Json notes = Json::array();
  for (std::size_t j = 0; j < sets.size(); ++j)
    if (sets[j].empty())
      notes.push_back("set " + std::to_string(j + 1) + " is empty; it is trivially pseudorandom (sparse case)");
  const auto result = sl::decompose(sets, params);
  Json trace = Json::array();
  for (const auto& step : result.trace) {
    trace.push_back({{"I", coords_json(step.coords)},
                     {"energies", rationals(step.energies)},
                     {"bad_fractions", rationals(step.bad_fractions)},
                     {"trigger", step.trigger ? Json(*step.trigger + 1) : Json(nullptr)},
                     {"forced", step.forced},
                     {"added", coords_json(step.added)}});
  }
  auto& out = report.outputs();
  out["I"] = coords_json(result.coords);
  out["trace"] = trace;
  out["final_energies"] = rationals(result.final_energies);
  out["fiber_psr_fractions"] = rationals(result.fiber_report);
  out["exhausted"] = result.exhausted;
  out["step_bound"] = sl::format_rational(sl::regularity_step_bound(sets[0].alphabet(), sets.size(), params));
  out["notes"] = notes;
  report.emit(std::cout);
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
  std::string group, z0;
  std::vector<std::string> files;
  std::string epsilon = "1/10", beta = "1/10", alpha;
  std::size_t r = 1;
  std::string out;
  bool verify = false;
};

Json coset_json(const sl::StrictCosetVerdict& v) {
  Json j = {{"in_strict_coset", v.in_strict_coset}};
  if (v.in_strict_coset) {
    j["subgroup"] = v.subgroup.elements();
    j["shift"] = v.shift;
  }
  return j;
}

void run_extract(const ExtractArgs& a, const Globals& globals) {
  const auto g = parse_group(a.group);
  const auto z0 = parse_subset(g, a.z0, "Z0");
  sl::require(!z0.empty(), sl::ErrorKind::invalid_input, "Z0 must be non-empty");
  const auto sets = load_sets(a.files);
  check_over_group(g, sets);
  sl::StructureParams params;
  params.epsilon = sl::parse_rational(a.epsilon);
  params.beta = sl::parse_rational(a.beta);
  params.r = a.r;
  if (!a.alpha.empty()) params.alpha = sl::parse_rational(a.alpha);

  const auto coset = sl::is_in_strict_coset(g, z0);
  if (coset.in_strict_coset)
    std::cerr << "WARNING: hypothesis fails: Z0 must be not contained in any strict coset, but Z0 lies in "
              << coset.subgroup.describe() << " + {" << coset.shift
              << "}; the structure conclusion is not guaranteed\n";

  sl::CountOptions options{sl::CountMethod::automatic, resolve_threads(globals.threads)};
  const auto cert = sl::extract_structure(g, z0, sets, params, options);
  const Json cert_json = sl::certificate_to_json(cert);

  Report report("extract", globals);
  report.params() = {{"group", g.describe()},       {"Z0", z0.elements()},
                     {"files", a.files},            {"epsilon", sl::format_rational(params.epsilon)},
                     {"r", params.r},               {"beta", sl::format_rational(params.beta)},
                     {"alpha", sl::format_rational(params.effective_alpha())}};
  report.outputs()["coset_test"] = coset_json(coset);
  report.outputs()["certificate"] = cert_json;
  if (a.verify) {
    const auto check = sl::verify_certificate(g, z0, sets, cert, params.epsilon);
    report.outputs()["verification"] = {{"passed", check.passed}, {"consistent", check.consistent}};
    std::cerr << (check.passed && check.consistent ? "PASS" : "FAIL") << "\n";
  }
  if (!a.out.empty()) write_text(a.out, cert_json.dump(2) + "\n");
  report.emit(std::cout);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string group, z0, cert;
  std::vector<std::string> files;
  std::string epsilon;
};

int run_verify(const VerifyArgs& a, const Globals& globals) {
  const auto g = parse_group(a.group);
  const auto z0 = parse_subset(g, a.z0, "Z0");
  const auto sets = load_sets(a.files);
  check_over_group(g, sets);
  std::ifstream in(a.cert);
  sl::require(static_cast<bool>(in), sl::ErrorKind::invalid_input, "cannot open " + a.cert);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    sl::fail(sl::ErrorKind::invalid_input, a.cert + ": " + e.what());
  }
  const auto cert = sl::certificate_from_json(j);
  const sl::Rational eps = a.epsilon.empty() ? cert.params.epsilon : sl::parse_rational(a.epsilon);
  const auto check = sl::verify_certificate(g, z0, sets, cert, eps);
  Report report("verify", globals);
  report.params() = {{"group", g.describe()}, {"Z0", z0.elements()}, {"files", a.files},
                     {"certificate", a.cert}, {"epsilon", sl::format_rational(eps)}};
  report.outputs() = {{"error_masses", rationals(check.error_masses)},
                      {"avoidance_on_I", check.avoidance},
                      {"consistent", check.consistent},
                      {"passed", check.passed}};
  report.emit(std::cout);
  std::cerr << (check.passed && check.consistent ? "PASS" : "FAIL") << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct RhoArgs {
  std::string group, z0;
  std::size_t d = 2;
};

void run_rho(const RhoArgs& a, const Globals& globals) {
  const auto g = parse_group(a.group);
  const auto z0 = parse_subset(g, a.z0, "Z0");
  sl::require(!z0.empty(), sl::ErrorKind::invalid_input, "Z0 must be non-empty");
  sl::require(a.d >= 2, sl::ErrorKind::invalid_input, "d must be at least 2");
  const auto p = sl::avoidance_coupling(g, z0, a.d);
  const auto w = sl::rho(p);
  const auto coset = sl::is_in_strict_coset(g, z0);
  Report report("rho", globals);
  report.params() = {{"group", g.describe()}, {"Z0", z0.elements()}, {"d", a.d}};
  auto& out = report.outputs();
  out["rho"] = format_rho(w.value);
  out["achieving_j"] = w.index + 1;
  out["coset_test"] = coset_json(coset);
  if (a.d == 2) {
    const auto verdict = sl::is_rho_one(p);
    out["rho_one"] = verdict.rho_one;
    out["support_components"] = verdict.components;
  }
  report.emit(std::cout);
}

// ---------------------------------------------------------------------------

struct CountArgs {
  std::string group, z0;
  std::vector<std::string> files;
  std::string method = "auto";
};

void run_count(const CountArgs& a, const Globals& globals) {
  const auto g = parse_group(a.group);
  const auto z0 = parse_subset(g, a.z0, "Z0");
  sl::require(!z0.empty(), sl::ErrorKind::invalid_input, "Z0 must be non-empty");
  const auto sets = load_sets(a.files);
  check_over_group(g, sets);
  sl::CountOptions options;
  options.threads = resolve_threads(globals.threads);
  if (a.method == "direct") options.method = sl::CountMethod::direct;
  else if (a.method == "transform") options.method = sl::CountMethod::transform;
  else if (a.method != "auto") sl::fail(sl::ErrorKind::invalid_input, "unknown method '" + a.method + "'");
  const auto count = sl::exact_tuple_count(g, sets, z0, options);
  const auto space = sl::tuple_space_size(g, z0, sets[0].dimension(), sets.size());
  Report report("count", globals);
  report.params() = {{"group", g.describe()}, {"Z0", z0.elements()}, {"files", a.files}, {"method", a.method}};
  report.outputs() = {{"count", count.str()},
                      {"space", space.str()},
                      {"ratio", sl::format_rational(sl::Rational(count, space))},
                      {"avoids", count == 0}};
  report.emit(std::cout);
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  std::string out_dir = ".";
  std::string prefix;
  // tribes
  std::string a = "2/3", b = "2/3", epsilon;
  std::size_t r = 0, s = 0;
  // optimality
  std::uint32_t p = 3;
  std::size_t k = 1, n = 2;
  // level-set / coset
  std::string group, h, z0, levels, ek, fk;
  std::uint32_t x = 0;
  // random
  std::uint32_t q = 2;
  double density = 0.5;
};

constexpr sl::PointIndex kMaterializeLimit = sl::PointIndex{1} << 20;

std::string out_path(const ConstructArgs& a, const std::string& name) {
  std::filesystem::create_directories(a.out_dir);
  return (std::filesystem::path(a.out_dir) / (a.prefix + name + ".set")).string();
}

Json emit_implicit(const ConstructArgs& a, const sl::ImplicitSet& s, const std::string& name) {
  Json j = {{"tag", s.tag()},
            {"alphabet", s.alphabet()},
            {"n", s.dimension()},
            {"closed_form_density", sl::format_rational(s.closed_form_density())}};
  const bool small = s.dimension() * std::log2(double(s.alphabet())) <= 20.0 &&
                     sl::ipow(s.alphabet(), s.dimension()) <= kMaterializeLimit;
  if (small) {
    const auto e = s.materialize();
    const auto path = out_path(a, name);
    sl::write_set_file(path, e);
    j["file"] = path;
    j["materialized_density"] = sl::format_rational(sl::density(e));
  } else {
    j["file"] = nullptr;
  }
  return j;
}


void run_construct(const std::string& name, const ConstructArgs& a, const Globals& globals) {
  Report report("construct " + name, globals);
  auto& out = report.outputs();
  if (name == "tribes") {
    const auto ra = sl::parse_rational(a.a), rb = sl::parse_rational(a.b);
    sl::require(ra > 0 && ra < 1 && rb > 0 && rb < 1, sl::ErrorKind::invalid_input, "a and b must lie in (0, 1)");
    // |X| = |Y| = common denominator; A and B are the top elements; f = min.
    const auto den_a = boost::multiprecision::denominator(ra), den_b = boost::multiprecision::denominator(rb);
    const sl::BigInt q_big = boost::multiprecision::lcm(den_a, den_b);
    sl::require(q_big <= 64, sl::ErrorKind::invalid_input, "denominators of a and b are too large");
    const auto q = static_cast<std::uint32_t>(q_big);
    const auto size_a = static_cast<std::uint32_t>(boost::multiprecision::numerator(ra) * (q_big / den_a));
    const auto size_b = static_cast<std::uint32_t>(boost::multiprecision::numerator(rb) * (q_big / den_b));
    std::vector<std::uint32_t> set_a, set_b, z0;
    for (std::uint32_t v = q - size_a; v < q; ++v) set_a.push_back(v);
    for (std::uint32_t v = q - size_b; v < q; ++v) set_b.push_back(v);
    for (std::uint32_t v = 0; v < std::min(q - size_a, q - size_b); ++v) z0.push_back(v);
    std::size_t r = a.r, s = a.s;
    if (!a.epsilon.empty()) {
      const auto tp = sl::tribes_parameters(ra, rb, sl::parse_rational(a.epsilon));
      r = tp.r;
      s = tp.s;
    }
    sl::require(r >= 1 && s >= 1, sl::ErrorKind::invalid_input, "give --r and --s, or --epsilon");
    const auto f = sl::CombinerTable::minimum(q);
    const auto [e, fset] = sl::tribes(f, set_a, set_b, z0, r, s);
    report.params() = {{"a", sl::format_rational(ra)}, {"b", sl::format_rational(rb)}, {"r", r}, {"s", s},
                       {"X", q}, {"A", set_a}, {"B", set_b}, {"Z0", z0}, {"f", "min"}};
    if (!a.epsilon.empty()) report.params()["epsilon"] = a.epsilon;
    out["E"] = emit_implicit(a, e, "E");
    out["F"] = emit_implicit(a, fset, "F");
    if (!out["E"]["file"].is_null())
      out["avoids"] = sl::generic_avoids(f, e.materialize(), fset.materialize(), z0);
  } else if (name == "optimality") {
    const auto [e, f] = sl::optimality_example(a.p, a.k, a.n);
    report.params() = {{"p", a.p}, {"k", a.k}, {"n", a.n}, {"Z0", {0, 1}}};
    out["E"] = emit_implicit(a, e, "E");
    out["F"] = emit_implicit(a, f, "F");
    if (!out["E"]["file"].is_null()) {
      const auto g = sl::make_group({a.p});
      const std::vector<sl::TensorSet> sets{e.materialize(), f.materialize()};
      out["avoids"] = sl::avoids(g, sets, sl::GroupSubset::of(g, {0, 1}));
    }
  } else if (name == "level-set") {
    const auto g = parse_group(a.group);
    const auto h = parse_subset(g, a.h, "H");
    const auto z0 = parse_subset(g, a.z0, "Z0");
    const auto levels = parse_list(a.levels, "levels");
    const auto family = sl::level_set_family(g, h, a.x, z0, levels, a.n);
    report.params() = {{"group", g.describe()}, {"H", h.elements()}, {"x", a.x},
                       {"Z0", z0.elements()},   {"levels", levels}, {"n", a.n}};
    out["sets"] = Json::array();
    std::vector<sl::TensorSet> materialized;
    for (std::size_t i = 0; i < family.size(); ++i) {
      out["sets"].push_back(emit_implicit(a, family[i], "E" + std::to_string(i + 1)));
      if (!out["sets"].back()["file"].is_null()) materialized.push_back(family[i].materialize());
    }
    if (materialized.size() == family.size()) out["avoids"] = sl::avoids(g, materialized, z0);
  } else if (name == "coset") {
    const auto g = parse_group(a.group);
    const auto h = parse_subset(g, a.h, "H");
    const auto z0 = parse_subset(g, a.z0, "Z0");
    const auto ek = sl::read_set_file(a.ek);
    const auto fk = sl::read_set_file(a.fk);
    const auto [e, f] = sl::coset_counterexample(g, h, a.x, z0, ek, fk);
    report.params() = {{"group", g.describe()}, {"H", h.elements()}, {"x", a.x},
                       {"Z0", z0.elements()},   {"E_K", a.ek},      {"F_K", a.fk}};
    const auto pe = out_path(a, "E"), pf = out_path(a, "F");
    sl::write_set_file(pe, e);
    sl::write_set_file(pf, f);
    out["E"] = set_summary(e);
    out["E"]["file"] = pe;
    out["F"] = set_summary(f);
    out["F"]["file"] = pf;
    out["avoids"] = true;
  } else if (name == "random") {
    std::mt19937_64 rng(globals.seed);
    const auto e = sl::random_set(a.q, a.n, a.density, rng);
    report.params() = {{"q", a.q}, {"n", a.n}, {"density", a.density}};
    const auto path = out_path(a, "R");
    sl::write_set_file(path, e);
    out["R"] = set_summary(e);
    out["R"]["file"] = path;
  } else {
    sl::fail(sl::ErrorKind::invalid_input, "unknown construction '" + name + "'");
  }
  report.emit(std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments on sumsets avoiding Z0^n in powers of finite abelian groups"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads for counting (default: $SUMSET_LAB_THREADS or 1)");
  app.add_flag("--timing", globals.timing, "Add wall-clock timing to the report");

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "Regularity decomposition of set files");
  c_dec->add_option("files", dec.files, "Set files")->required();
  c_dec->add_option("--r", dec.r)->capture_default_str();
  c_dec->add_option("--beta", dec.beta)->capture_default_str();
  c_dec->add_option("--alpha", dec.alpha)->capture_default_str();

  ExtractArgs ext;
  auto* c_ext = app.add_subcommand("extract", "Structure certificate for sets avoiding Z0^n");
  c_ext->add_option("--group", ext.group, "Group, e.g. 3, 2x2, Z2xZ4")->required();
  c_ext->add_option("--z0", ext.z0, "Comma-separated elements of Z0")->required();
  c_ext->add_option("files", ext.files, "Set files")->required();
  c_ext->add_option("--epsilon", ext.epsilon)->capture_default_str();
  c_ext->add_option("--r", ext.r)->capture_default_str();
  c_ext->add_option("--beta", ext.beta)->capture_default_str();
  c_ext->add_option("--alpha", ext.alpha, "Default: epsilon/2");
  c_ext->add_option("--out", ext.out, "Also write the certificate JSON here");
  c_ext->add_flag("--verify", ext.verify, "Re-check the certificate; prints PASS or FAIL on stderr");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Re-check a certificate against set files");
  c_ver->add_option("--group", ver.group)->required();
  c_ver->add_option("--z0", ver.z0)->required();
  c_ver->add_option("--cert", ver.cert)->required();
  c_ver->add_option("--epsilon", ver.epsilon, "Default: the certificate's epsilon");
  c_ver->add_option("files", ver.files)->required();

  RhoArgs rh;
  auto* c_rho = app.add_subcommand("rho", "Maximal correlation of the avoidance coupling");
  c_rho->add_option("--group", rh.group)->required();
  c_rho->add_option("--z0", rh.z0)->required();
  c_rho->add_option("--d", rh.d)->capture_default_str();

  CountArgs cnt;
  auto* c_cnt = app.add_subcommand("count", "Exact count of tuples summing into Z0^n");
  c_cnt->add_option("--group", cnt.group)->required();
  c_cnt->add_option("--z0", cnt.z0)->required();
  c_cnt->add_option("files", cnt.files)->required();
  c_cnt->add_option("--method", cnt.method, "auto, direct or transform")->capture_default_str();

  ConstructArgs con;
  std::string con_name;
  auto* c_con = app.add_subcommand("construct", "Write an explicit construction as set files");
  c_con->add_option("name", con_name, "tribes, optimality, level-set, coset or random")->required();
  c_con->add_option("--out-dir", con.out_dir)->capture_default_str();
  c_con->add_option("--prefix", con.prefix);
  c_con->add_option("--a", con.a)->capture_default_str();
  c_con->add_option("--b", con.b)->capture_default_str();
  c_con->add_option("--r", con.r);
  c_con->add_option("--s", con.s);
  c_con->add_option("--epsilon", con.epsilon, "tribes: pick r and s from epsilon");
  c_con->add_option("--p", con.p)->capture_default_str();
  c_con->add_option("--k", con.k)->capture_default_str();
  c_con->add_option("--n", con.n)->capture_default_str();
  c_con->add_option("--group", con.group);
  c_con->add_option("--subgroup", con.h, "Comma-separated elements of H");
  c_con->add_option("--x", con.x);
  c_con->add_option("--z0", con.z0);
  c_con->add_option("--levels", con.levels);
  c_con->add_option("--ek", con.ek);
  c_con->add_option("--fk", con.fk);
  c_con->add_option("--q", con.q)->capture_default_str();
  c_con->add_option("--density", con.density)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_dec) run_decompose(dec, globals);
    else if (*c_ext) run_extract(ext, globals);
    else if (*c_ver) return run_verify(ver, globals);
    else if (*c_rho) run_rho(rh, globals);
    else if (*c_cnt) run_count(cnt, globals);
    else if (*c_con) run_construct(con_name, con, globals);
  } catch (const sl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == sl::ErrorKind::invariant_violation ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
