#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "coleman/colemanint.hpp"
#include "coleman/json_io.hpp"
#include "coleman/verify.hpp"

using namespace coleman;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Usage(path + ": " + e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Usage("cannot write " + path);
  out << j.dump(2) << "\n";
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct Common {
  std::string curve, points, out, data;
  bool naive = false, auto_bump = false, teichmuller = false;
  int threads = 1;
  std::size_t memory_mb = 3072;
  std::size_t cutoff = 256;

  DataOptions data_options() const {
    DataOptions o;
    o.threads = threads;
    o.products.threads = threads;
    o.products.cutoff = cutoff;
    o.products.memory_budget = memory_mb << 20;
    return o;
  }
};

void add_common(CLI::App* sub, Common& c, bool points) {
  sub->add_option("--curve", c.curve, "curve JSON file")->required()->check(CLI::ExistingFile);
  if (points) sub->add_option("--points", c.points, "points JSON file")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--memory-mb", c.memory_mb, "memory for baby-step values, MiB")->check(CLI::PositiveNumber);
  sub->add_option("--cutoff", c.cutoff, "intervals shorter than this are multiplied directly");
}

std::vector<RationalPoint> load_points(const Common& c) {
  if (c.points.empty()) return {};
  return points_from_json(read_json(c.points));
}

ColemanData compute(const Curve& curve, const std::vector<PointMod>& pts, const Common& c) {
  return c.naive ? coleman_data_naive(curve, pts, c.data_options()) : coleman_data(curve, pts, c.data_options());
}

int cmd_data(const Common& c) {
  Curve curve = curve_from_json(read_json(c.curve));
  auto rpts = load_points(c);
  std::vector<PointMod> pts;
  if (c.teichmuller) {
    pts = teichmuller_points(curve, rpts);
  } else {
    for (const auto& P : rpts) {
      if (P.at_infinity) throw InvalidPoint("evaluation points must be finite");
      pts.push_back(lift_point(curve, P, curve.working_exponent()));
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  ColemanData d = compute(curve, pts, c);
  const double t_data = ms_since(t0);
  json out = data_to_json(d, det_valuation(d));
  out["timings_ms"] = json{{"data", t_data}};
  write_json(out, c.out);
  return 0;
}

int cmd_integrate(const Common& c) {
  Curve curve = curve_from_json(read_json(c.curve));
  auto rpts = load_points(c);
  if (rpts.empty()) throw Usage("integrate needs --points");
  if (rpts.size() % 2 != 0) throw InvalidPoint("integrate takes an even number of points (consecutive pairs)");
  std::vector<std::pair<RationalPoint, RationalPoint>> pairs;
  for (std::size_t i = 0; i < rpts.size(); i += 2) pairs.emplace_back(rpts[i], rpts[i + 1]);

  auto t0 = std::chrono::steady_clock::now();
  json timings;
  IntegrationRun run{curve, {}, {}};
  if (!c.data.empty()) {
    run.data = data_from_json(read_json(c.data));
    if (run.data.p != curve.p || run.data.genus != curve.genus)
      throw Usage("cached data does not belong to this curve");
    if (run.data.N != curve.N) run.curve = curve.with_precision(run.data.N);
    for (const auto& [P, Q] : pairs) run.results.push_back(integrate(run.curve, run.data, P, Q));
  } else {
    IntegrateOptions opt;
    opt.data = c.data_options();
    opt.naive = c.naive;
    opt.auto_bump = c.auto_bump;
    run = integrate_pairs(curve, pairs, opt);
  }
  timings["integrate"] = ms_since(t0);
  json out = data_to_json(run.data, det_valuation(run.data));
  json ints = json::array();
  for (const auto& r : run.results) ints.push_back(integral_to_json(r));
  out["integrals"] = ints;
  out["timings_ms"] = timings;
  write_json(out, c.out);
  return 0;
}

json strings(const std::vector<mpz_class>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

int cmd_zeta(const Common& c) {
  Curve curve = curve_from_json(read_json(c.curve));
  ColemanData d = compute(curve, {}, c);
  ZetaReport r = zeta_consistency(curve, d);
  json counts = json::array();
  for (auto n : r.counts) counts.push_back(std::to_string(n));
  json concl = json::array();
  for (bool b : r.conclusive) concl.push_back(b);
  json out{{"p", curve.p.get_str()},
           {"N", curve.N},
           {"genus", curve.genus},
           {"charpoly_mod_pN", strings(r.charpoly)},
           {"expected", strings(r.expected)},
           {"point_counts", counts},
           {"conclusive", concl},
           {"lifted", strings(r.lifted)},
           {"residues_match", r.residues_match},
           {"lifted_match", r.lifted_match},
           {"pass", r.pass()}};
  write_json(out, c.out);
  if (!r.pass()) {
    std::cerr << "zeta-check: Frobenius matrix disagrees with point counts\n";
    return 1;
  }
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    failures += ok ? 0 : 1;
  };
  struct Case {
    long p;
    int N;
    std::vector<mpq_class> Q;
  };
  const std::vector<Case> cases{{11, 2, {3, 1, 0, 1}},
                                {13, 2, {5, -2, 0, 1}},
                                {17, 2, {1, 2, 3, 4, 0, 1}},
                                {101, 3, {1, 2, 3, 4, 0, 1}},
                                {37, 1, {mpq_class(1, 3), 2, -1, 5, 0, 7, 0, 1}}};
  for (const auto& cs : cases) {
    Curve curve = Curve::make(cs.p, cs.N, cs.Q);
    const std::string tag = "p=" + std::to_string(cs.p) + " g=" + std::to_string(curve.genus) + " N=" +
                            std::to_string(cs.N);
    DataOptions o;
    o.products.cutoff = 8;
    ColemanData fast = coleman_data(curve, {}, o), slow = coleman_data_naive(curve, {}, o);
    report("fast path matches naive path, " + tag, fast.frobenius == slow.frobenius);
    if (cs.p <= 17) report("zeta consistency, " + tag, zeta_consistency(curve, fast).pass());
  }
  Curve e = Curve::make(11, 2, {3, 1, 0, 1});  // y^2 = x^3 + x + 3
  RationalPoint P{6, 15};  // 6^3 + 6 + 3 = 15^2
  RationalPoint Q{6, -15};
  auto run = integrate_pairs(e, {{P, P}, {P, Q}});
  bool zero = true;
  for (const auto& v : run.results[0].values) zero = zero && v.is_zero();
  report("integral from P to P vanishes", zero);
  auto run2 = integrate_pairs(e, {{Q, P}});
  bool anti = true;
  for (std::size_t i = 0; i < run2.results[0].values.size(); ++i)
    anti = anti && congruent(run2.results[0].values[i], negate(run.results[1].values[i], e.p), e.p);
  report("integral reverses sign with endpoints", anti);
  std::cout << (failures ? "selftest failed\n" : "selftest passed\n");
  return failures ? 1 : 0;
}

int cmd_bench(const Common& c) {
  Curve curve = curve_from_json(read_json(c.curve));
  json t;
  auto t0 = std::chrono::steady_clock::now();
  DataStats st;
  (void)coleman_data(curve, {}, c.data_options(), &st);
  t["data"] = ms_since(t0);
  if (c.naive) {
    t0 = std::chrono::steady_clock::now();
    (void)coleman_data_naive(curve, {}, c.data_options());
    t["naive"] = ms_since(t0);
  }
  json out{{"p", curve.p.get_str()},
           {"N", curve.N},
           {"genus", curve.genus},
           {"ring_ops", std::to_string(st.products.ring_ops.load())},
           {"timings_ms", t}};
  write_json(out, c.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coleman data and Coleman integrals on odd-degree hyperelliptic curves"};
  app.require_subcommand(1);
  Common c;

  auto* data = app.add_subcommand("data", "matrix of Frobenius and primitive evaluations");
  add_common(data, c, true);
  data->add_flag("--naive", c.naive, "use the step-by-step reduction");
  data->add_flag("--teichmuller", c.teichmuller, "evaluate at the Teichmuller points of the given disks");

  auto* integ = app.add_subcommand("integrate", "Coleman integrals between consecutive point pairs");
  add_common(integ, c, true);
  integ->add_flag("--naive", c.naive, "use the step-by-step reduction");
  integ->add_flag("--auto-bump-precision", c.auto_bump, "rerun with N + v_p(det(M - I)) when that is lost");
  integ->add_option("--data", c.data, "reuse Coleman data written by `data --teichmuller` or `integrate`")
      ->check(CLI::ExistingFile);

  auto* zeta = app.add_subcommand("zeta-check", "compare det(1 - T M) with brute-force point counts");
  add_common(zeta, c, false);
  zeta->add_flag("--naive", c.naive, "use the step-by-step reduction");

  auto* self = app.add_subcommand("selftest", "run built-in consistency checks");

  auto* bench = app.add_subcommand("bench", "time the data computation");
  add_common(bench, c, false);
  bench->add_flag("--naive", c.naive, "also time the step-by-step reduction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*data) return cmd_data(c);
    if (*integ) return cmd_integrate(c);
    if (*zeta) return cmd_zeta(c);
    if (*self) return cmd_selftest();
    if (*bench) return cmd_bench(c);
  } catch (const InvalidCurve& e) {
    std::cerr << "invalid curve: " << e.what() << "\n";
    return 2;
  } catch (const NotSquarefree& e) {
    std::cerr << "invalid curve: " << e.what() << "\n";
    return 2;
  } catch (const InvalidPoint& e) {
    std::cerr << "invalid point: " << e.what() << "\n";
    return 3;
  } catch (const WeierstrassDisk& e) {
    std::cerr << "invalid point: " << e.what() << "\n";
    return 3;
  } catch (const NonWeierstrassRequired& e) {
    std::cerr << "invalid point: " << e.what() << "\n";
    return 3;
  } catch (const DifferentDisks& e) {
    std::cerr << "invalid point: " << e.what() << "\n";
    return 3;
  } catch (const SingularSystem& e) {
    std::cerr << "singular system: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
