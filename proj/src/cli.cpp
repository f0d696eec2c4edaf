#include "penta/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

#include "penta/barcx.hpp"
#include "penta/cache.hpp"
#include "penta/dshuffle.hpp"
#include "penta/equations.hpp"
#include "penta/io.hpp"
#include "penta/mlvnum.hpp"
#include "penta/ncseries.hpp"

namespace penta::cli {

namespace {

using io::Json;

struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  bool json = false;
  std::string report;
};

struct Opts {
  int N = 1, a = 1, D = 3, W = 4, weight = 3, digits = 12, count = 20, steps = 256;
  std::string mu = "1", policy = "zero", input, output;
  std::uint64_t seed = 1;
  std::vector<std::string> eqs, indices;
  std::vector<int> which{3, 4, 5, 6};
  double tol = 1e-5;
};

// Accumulates result lines for both the summary and the JSON report.
class Report {
 public:
  Report(std::string verb, Json options) : verb_(std::move(verb)), options_(std::move(options)) {}

  void line(const std::string& name, bool ok, Json detail, const std::string& human) {
    ok_ = ok_ && ok;
    detail["name"] = name;
    detail["pass"] = ok;
    results_.push_back(std::move(detail));
    human_.push_back((ok ? "PASS  " : "FAIL  ") + name + (human.empty() ? "" : "  " + human));
  }
  void info(const std::string& name, Json detail, const std::string& human) {
    detail["name"] = name;
    results_.push_back(std::move(detail));
    human_.push_back("      " + name + "  " + human);
  }
  void set_cache_keys(std::vector<std::string> k) { keys_ = std::move(k); }
  bool ok() const { return ok_; }

  Json json() const {
    Json cache = {{"keys", keys_}};
    auto root = cache::root();
    cache["root"] = root ? Json(root->string()) : Json(nullptr);
    return {{"schema", io::kSchema}, {"kind", "report"}, {"verb", verb_}, {"options", options_},
            {"cache", cache}, {"results", results_}, {"pass", ok_}};
  }
  void emit(const Common& c, std::ostream& out) const {
    if (!c.report.empty()) io::write_file(c.report, json());
    if (c.json) {
      out << io::dump(json());
      return;
    }
    for (const auto& h : human_) out << h << "\n";
    out << (ok_ ? "all checks passed" : "some checks FAILED") << "\n";
  }

 private:
  std::string verb_;
  Json options_;
  std::vector<std::string> keys_;
  Json results_ = Json::array();
  std::vector<std::string> human_;
  bool ok_ = true;
};

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(2) << std::scientific << x;
  return os.str();
}

std::string count_by_degree(const std::vector<double>& v) {
  std::string s;
  for (std::size_t d = 1; d < v.size(); ++d) s += (d > 1 ? " " : "") + std::to_string(d) + ":" + (v[d] == 0 ? "0" : "nz");
  return s;
}

Json degree_zero_list(const std::vector<double>& v) {
  Json j = Json::array();
  for (std::size_t d = 1; d < v.size(); ++d) j.push_back({{"degree", d}, {"zero", v[d] == 0}});
  return j;
}

Rational parse_mu(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("--mu: ") + e.what());
  }
}

std::vector<int> proper_divisors(int N) {
  std::vector<int> d;
  for (int k = 1; k < N; ++k)
    if (N % k == 0) d.push_back(k);
  return d;
}

std::vector<std::string> cache_keys(int N) {
  std::vector<std::string> k{build_t0(4, N).hash()};
  if (N != 1) k.push_back(build_t0(4, 1).hash());
  return k;
}

void progress_to(std::ostream& err, const DegreeStats& s) {
  err << "degree " << s.degree << ": unknowns " << s.unknowns << ", equations " << s.equations
      << ", rank " << s.rank << ", free " << s.free << "\n";
}

AssociatorPair solve(const Opts& o, std::set<Eq> eqs, std::ostream& err, std::vector<DegreeStats>* st) {
  SolverConfig cfg;
  cfg.N = o.N;
  cfg.mu = parse_mu(o.mu);
  cfg.a = o.a;
  cfg.D = o.D;
  cfg.imposed = std::move(eqs);
  if (o.policy == "zero")
    cfg.policy = FreeParams::Zero;
  else if (o.policy == "seeded")
    cfg.policy = FreeParams::Seeded;
  else
    throw std::invalid_argument("--policy must be zero or seeded");
  cfg.seed = o.seed;
  cfg.validate();
  return solve_degreewise(cfg, [&](const DegreeStats& s) { progress_to(err, s); }, st);
}

// Exact residual of one equation on a pair.
void residual_lines(Report& r, Eq e, const AssociatorPair& p) {
  const int D = p.D;
  auto add = [&](const std::string& name, const Residual<Rational>& res) {
    auto v = res.max_by_degree();
    r.line(name, res.is_zero(), {{"by_degree", degree_zero_list(v)}}, "residual by degree " + count_by_degree(v));
  };
  switch (e) {
    case Eq::Pentagon: add("pentagon", residual_pentagon(p.g, D)); break;
    case Eq::Hexagons: add("hexagons", residual_hexagons(p.g, p.mu, D)); break;
    case Eq::MixedPentagon: add("mixed_pentagon", residual_mixed_pentagon(p.g, p.h, p.N, D)); break;
    case Eq::Octagon: add("octagon", residual_octagon(p.h, p.mu, p.a, p.N, D)); break;
    case Eq::SpecialAction: add("special_action", residual_special_action(p.h, p.N, D)); break;
    case Eq::Distribution:
      for (int Np : proper_divisors(p.N))
        add("distribution[N'=" + std::to_string(Np) + "]", residual_distribution(p.h, p.N, Np, D));
      break;
  }
}

void double_shuffle_line(Report& r, const Series& h, int D) {
  auto res = residual_double_shuffle(h, D);
  auto v = res.max_by_degree();
  r.line("double_shuffle", res.is_zero(), {{"by_weight", degree_zero_list(v)}},
         "residual by weight " + count_by_degree(v));
}

Json pair_options(const Opts& o) {
  return {{"N", o.N}, {"mu", o.mu}, {"a", o.a}, {"D", o.D}, {"policy", o.policy}, {"seed", o.seed}};
}

void stats_lines(Report& r, const std::vector<DegreeStats>& st) {
  for (const auto& s : st)
    r.info("degree " + std::to_string(s.degree),
           {{"unknowns", s.unknowns}, {"equations", s.equations}, {"rank", s.rank}, {"free", s.free}},
           "unknowns " + std::to_string(s.unknowns) + ", rank " + std::to_string(s.rank) + ", free " +
               std::to_string(s.free));
}

std::set<Eq> parse_eqs(const std::vector<std::string>& v) {
  std::set<Eq> s;
  for (const auto& x : v) s.insert(parse_eq(x));
  return s;
}

// --- verbs ---

Report do_solve(const Opts& o, std::ostream& err) {
  std::set<Eq> eqs = o.eqs.empty() ? std::set<Eq>{Eq::Pentagon, Eq::Hexagons} : parse_eqs(o.eqs);
  Json opt = pair_options(o);
  for (Eq e : eqs) opt["eq"].push_back(eq_name(e));
  opt["output"] = o.output;
  Report r("solve", opt);
  r.set_cache_keys(cache_keys(o.N));
  std::vector<DegreeStats> st;
  AssociatorPair p = solve(o, eqs, err, &st);
  stats_lines(r, st);
  for (Eq e : p.imposed) residual_lines(r, e, p);
  if (!o.output.empty()) io::write_file(o.output, io::pair_to_json(p));
  return r;
}

Report do_theorem1(const Opts& o, std::ostream& err) {
  for (const auto& e : o.eqs)
    if (parse_eq(e) == Eq::Octagon) throw std::invalid_argument("verify-theorem1 does not use the octagon");
  Report r("verify-theorem1", pair_options(o));
  r.set_cache_keys(cache_keys(o.N));
  std::set<Eq> eqs{Eq::Pentagon, Eq::MixedPentagon};
  if (parse_mu(o.mu) != 0) eqs.insert(Eq::Hexagons);
  std::vector<DegreeStats> st;
  AssociatorPair p = solve(o, eqs, err, &st);
  stats_lines(r, st);
  for (Eq e : p.imposed) residual_lines(r, e, p);
  r.line("c_B(0)(h) = 0", p.h.coeff({letter_B(0, o.N)}) == 0, Json::object(), "");
  double_shuffle_line(r, p.h, o.D);
  if (!o.output.empty()) io::write_file(o.output, io::pair_to_json(p));
  return r;
}

Report do_theorem2(const Opts& o, std::ostream& err) {
  Report r("verify-theorem2", pair_options(o));
  r.set_cache_keys(cache_keys(o.N));
  const Rational mu = parse_mu(o.mu);
  std::set<Eq> eqs{Eq::Pentagon, Eq::MixedPentagon, Eq::Octagon};
  if (mu != 0) eqs.insert(Eq::Hexagons);
  std::vector<DegreeStats> st;
  AssociatorPair p = solve(o, eqs, err, &st);
  stats_lines(r, st);
  for (Eq e : p.imposed) residual_lines(r, e, p);
  for (const auto& l : check_dmr_normalizations(p.h, o.a, mu, o.N))
    r.line(l.name, l.holds, {{"lhs", l.lhs.get_str()}, {"rhs", l.rhs.get_str()}},
           l.lhs.get_str() + " vs " + l.rhs.get_str());
  double_shuffle_line(r, p.h, o.D);
  if (!o.output.empty()) io::write_file(o.output, io::pair_to_json(p));
  return r;
}

Report do_check(const Opts& o) {
  if (o.input.empty()) throw std::invalid_argument("check: --input is required");
  if (o.eqs.empty()) throw std::invalid_argument("check: give at least one --eq");
  AssociatorPair p = io::pair_from_json(io::read_file(o.input));
  Json opt = {{"input", o.input}};
  for (const auto& e : o.eqs) opt["eq"].push_back(eq_name(parse_eq(e)));
  Report r("check", opt);
  r.set_cache_keys(cache_keys(p.N));
  for (const auto& e : o.eqs) {
    const Eq eq = parse_eq(e);
    if (eq == Eq::Distribution && p.N == 1)
      throw std::invalid_argument("check: distribution needs N >= 2");
    residual_lines(r, eq, p);
  }
  return r;
}

Report do_lemmas(const Opts& o, std::ostream& err) {
  Json opt = {{"N", o.N}, {"D", o.D}, {"count", o.count}, {"seed", o.seed}, {"which", o.which},
              {"input", o.input}};
  Report r("lemmas", opt);
  r.set_cache_keys(cache_keys(o.N));
  AssociatorPair p;
  if (!o.input.empty()) {
    p = io::pair_from_json(io::read_file(o.input));
    if (p.N != o.N) throw std::invalid_argument("lemmas: --N differs from the input pair");
  } else {
    Opts so = o;
    so.policy = "seeded";
    p = solve(so, {Eq::Pentagon, Eq::MixedPentagon}, err, nullptr);
  }
  for (int w : o.which) {
    if (w < 3 || w > 6) throw std::invalid_argument("lemmas: --which takes 3..6");
    if (w == 3 || w == 5) {
      int checked = 0, failed = 0;
      for (int t = 0; t < o.count; ++t) {
        auto rep = verify_lemma_all(w, Series(), random_lemma_input(o.N, o.D, o.seed + t), o.D);
        checked += rep.checked;
        failed += static_cast<int>(rep.failures.size());
        for (const auto& f : rep.failures) err << "lemma " << w << ": " << f << "\n";
      }
      r.line("lemma " + std::to_string(w), failed == 0, {{"checked", checked}, {"failed", failed}},
             std::to_string(checked) + " identities on " + std::to_string(o.count) + " random inputs");
    } else {
      auto rep = verify_lemma_all(w, p.g, p.h, o.D);
      for (const auto& f : rep.failures) err << "lemma " << w << ": " << f << "\n";
      r.line("lemma " + std::to_string(w), rep.ok(),
             {{"checked", rep.checked}, {"failed", rep.failures.size()}},
             std::to_string(rep.checked) + " identities on the solver pair");
    }
  }
  return r;
}

Report do_barcheck(const Opts& o) {
  Report r("barcheck", {{"N", o.N}, {"W", o.W}});
  int n = 0, bad = 0, cert = 0, uncert = 0;
  bool mixed = false;
  auto idx = enumerate_indices(o.N, o.W, true);
  for (const auto& p : idx)
    for (const auto& q : idx) {
      if (p.weight() + q.weight() > o.W) continue;
      ++n;
      if (!series_shuffle_bar_check(p, q)) {
        ++bad;
        r.line("series shuffle " + p.to_string() + " x " + q.to_string(), false, Json::object(), "");
      }
      for (std::size_t i = 0; i < p.e.size(); ++i)
        for (std::size_t j = 0; j < q.e.size(); ++j) mixed = mixed || (p.e[i] != q.e[j]);
      for (const auto& b : {build_l_twovar(p, q), build_l_twovar_yx(q, p)}) (b.certified() ? cert : uncert)++;
    }
  r.line("series shuffle on the bar side", bad == 0,
         {{"pairs", n}, {"failed", bad}, {"mixed_roots", mixed}},
         std::to_string(n) + " admissible pairs" + (mixed ? ", mixed roots included" : ""));
  r.line("d2 certification of two-variable elements", uncert == 0,
         {{"certified", cert}, {"uncertified", uncert}}, std::to_string(cert) + " elements");
  return r;
}

Report do_mlv(const Opts& o) {
  if (o.indices.empty()) throw std::invalid_argument("mlv: give at least one --index");
  if (o.digits < 1 || o.digits > 200) throw std::invalid_argument("mlv: --digits in 1..200");
  Report r("mlv", {{"index", o.indices}, {"digits", o.digits}});
  std::vector<IndexPair> ps;
  for (const auto& s : o.indices) {
    IndexPair p = parse_index(s);
    if (!p.admissible()) throw std::invalid_argument("mlv: index " + s + " is not admissible");
    ps.push_back(p);
  }
  for (const auto& p : ps) {
    ApproxValue v = mlv(p, o.digits + 5);
    const std::string txt = v.to_string(o.digits);
    r.info("L(" + p.to_string() + ")",
           {{"re", v.value.re.str(o.digits, std::ios_base::fixed)},
            {"im", v.value.im.str(o.digits, std::ios_base::fixed)},
            {"err", v.err}},
           txt);
  }
  return r;
}

Report do_phikz(const Opts& o) {
  if (o.N < 1 || o.N > 6) throw std::invalid_argument("phikz: --N in 1..6");
  if (o.weight < 1 || o.weight > 5) throw std::invalid_argument("phikz: --weight in 1..5");
  Report r("phikz", {{"N", o.N}, {"weight", o.weight}, {"tol", o.tol}, {"steps", o.steps}});
  PathSpec spec;
  spec.steps = o.steps;
  KZResult k = phi_kz(o.N, o.weight, spec);
  const int W = o.weight;
  auto num = [&](const std::string& name, double v) {
    r.line(name, v < o.tol, {{"residual", v}, {"tol", o.tol}}, sci(v) + " (tol " + sci(o.tol) + ")");
  };
  r.info("integration error estimate", {{"err", k.err}}, sci(k.err));
  auto F = alphabet_fn1(o.N);
  for (int l = 0; l <= o.N; ++l) {
    auto c = k.phi.coeff({static_cast<Letter>(l)});
    r.info("c_" + F->letter(l), {{"re", c.real()}, {"im", c.imag()}}, sci(c.real()) + " + " + sci(c.imag()) + "i");
  }
  const Complex tpi(0, 2 * M_PI);
  num("group-like defect", (coproduct(k.phi) - tensor_product(k.phi, k.phi)).max_abs());
  ComplexSeries g = kz_associator(W, spec);
  if (o.N == 1) {
    num("pentagon", residual_pentagon(g, W).max_abs());
    num("hexagons (mu = 2 pi i)", residual_hexagons(g, tpi, W).max_abs());
  } else {
    num("mixed_pentagon", residual_mixed_pentagon(g, k.phi, o.N, W).max_abs());
    num("double_shuffle", residual_double_shuffle(k.phi, W, 1e-9).max_abs());
    for (int Np : proper_divisors(o.N))
      num("distribution[N'=" + std::to_string(Np) + "]", residual_distribution(k.phi, o.N, Np, W).max_abs());
  }
  if (o.N <= 2) num("octagon (mu = 2 pi i, a = -1)", residual_octagon(k.phi, tpi, -1, o.N, W).max_abs());
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"penta: associator equations, double shuffle and bar-complex checks"};
  app.require_subcommand(1);
  Common c;
  Opts o;
  app.add_flag("--json", c.json, "print the JSON report instead of the summary");
  app.add_option("--report", c.report, "also write the JSON report to this file");

  auto pair_opts = [&](CLI::App* s) {
    s->add_option("--N", o.N, "level")->check(CLI::Range(1, 12));
    s->add_option("--mu", o.mu, "rational parameter");
    s->add_option("--D", o.D, "truncation degree")->check(CLI::Range(1, 12));
    s->add_option("--policy", o.policy, "free parameters: zero or seeded");
    s->add_option("--seed", o.seed);
    s->add_option("--output", o.output, "write the solved pair here");
  };
  auto* s_solve = app.add_subcommand("solve", "solve the imposed equations degree by degree");
  pair_opts(s_solve);
  s_solve->add_option("--a", o.a, "octagon parameter");
  s_solve->add_option("--eq", o.eqs, "equations to impose");
  auto* s_t1 = app.add_subcommand("verify-theorem1", "pentagon + mixed pentagon => double shuffle");
  pair_opts(s_t1);
  s_t1->add_option("--eq", o.eqs, "rejected if it names the octagon");
  auto* s_t2 = app.add_subcommand("verify-theorem2", "with the octagon: normalizations");
  pair_opts(s_t2);
  s_t2->add_option("--a", o.a, "octagon parameter");
  auto* s_check = app.add_subcommand("check", "residuals of a stored pair");
  s_check->add_option("--eq", o.eqs, "equations")->required();
  s_check->add_option("--input", o.input, "pair document")->required();
  auto* s_lem = app.add_subcommand("lemmas", "bar-side lemma identities");
  s_lem->add_option("--N", o.N)->check(CLI::Range(1, 4));
  s_lem->add_option("--D", o.D)->check(CLI::Range(1, 5));
  s_lem->add_option("--which", o.which);
  s_lem->add_option("--count", o.count, "random inputs for lemmas 3 and 5");
  s_lem->add_option("--seed", o.seed);
  s_lem->add_option("--input", o.input, "pair document for lemmas 4 and 6");
  auto* s_bar = app.add_subcommand("barcheck", "series shuffle and d2 certification");
  s_bar->add_option("--N", o.N)->check(CLI::Range(1, 4));
  s_bar->add_option("--W", o.W, "total weight bound")->check(CLI::Range(1, 6));
  auto* s_mlv = app.add_subcommand("mlv", "multiple L-values");
  s_mlv->add_option("--index", o.indices, "\"a1,..,ak;e1,..,ek@N\"")->required();
  s_mlv->add_option("--digits", o.digits);
  auto* s_kz = app.add_subcommand("phikz", "numeric KZ holonomy and its residuals");
  s_kz->add_option("--N", o.N);
  s_kz->add_option("--weight", o.weight);
  s_kz->add_option("--tol", o.tol);
  s_kz->add_option("--steps", o.steps)->check(CLI::Range(4, 100000));

  std::vector<const char*> argv{"penta"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    std::optional<Report> r;
    if (*s_solve) r = do_solve(o, err);
    else if (*s_t1) r = do_theorem1(o, err);
    else if (*s_t2) r = do_theorem2(o, err);
    else if (*s_check) r = do_check(o);
    else if (*s_lem) r = do_lemmas(o, err);
    else if (*s_bar) r = do_barcheck(o);
    else if (*s_mlv) r = do_mlv(o);
    else r = do_phikz(o);
    r->emit(c, out);
    return r->ok() ? kPass : kFail;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const InconsistentSystem& e) {
    err << "internal inconsistency: " << e.what() << "\n";
    return kInternal;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace penta::cli
