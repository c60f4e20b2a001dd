#include "merodiff/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "merodiff/contour.hpp"
#include "merodiff/counterexample.hpp"
#include "merodiff/diffops.hpp"
#include "merodiff/kernels.hpp"
#include "merodiff/nevanlinna.hpp"
#include "merodiff/serialize.hpp"
#include "merodiff/stats.hpp"
#include "merodiff/wiman.hpp"

namespace merodiff {

using nlohmann::json;

bool ExperimentReport::all_pass() const {
  if (checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json ExperimentReport::to_json(bool include_timing) const {
  json j;
  j["experiment"] = id;
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"detail", c.detail}});
  j["checks"] = cs;
  j["all_pass"] = all_pass();
  j["series"] = series;
  j["metadata"] = metadata;
  if (include_timing) j["timing"] = timing;
  return j;
}

namespace {

void add_check(ExperimentReport& rep, const std::string& name, bool pass, double value,
               const std::string& detail) {
  rep.checks.push_back({name, pass, value, detail});
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json make_series(const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  json s;
  s["columns"] = columns;
  json r = json::array();
  for (const auto& row : rows) r.push_back(row);
  s["rows"] = r;
  return s;
}

void write_series_csv(const std::string& path, const json& series) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ConfigError, "cannot write " + path);
  const auto& cols = series["columns"];
  for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].get<std::string>();
  out << "\n";
  for (const auto& row : series["rows"]) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << fmt(row[i].get<double>());
    out << "\n";
  }
}

std::vector<double> grid_from(const Config& cfg, const std::string& sect, double dmin, double dmax,
                              int dpts) {
  return geometric_grid(cfg.get_double(sect + ".r_min", dmin), cfg.get_double(sect + ".r_max", dmax),
                        static_cast<int>(cfg.get_long(sect + ".points", dpts)));
}

std::vector<std::string> with_globals(std::vector<std::string> keys) {
  for (const char* k : {"experiment", "seed", "precision_bits", "output.report"})
    keys.push_back(k);
  return keys;
}

double top_med(const std::vector<double>& v) { return top_decile_median(v); }
double bot_med(const std::vector<double>& v) { return bottom_decile_median(v); }

// ---------------- corpus builders ----------------

}  // namespace

ExprPtr build_cube_product(int K) {
  std::vector<Complex> as;
  for (int k = 1; k <= K; ++k) as.push_back({static_cast<double>(k) * k * k, 0.0});
  return make_factor_product(as);
}

ExprPtr build_linear_product(int K) {
  std::vector<Complex> as;
  for (int k = 1; k <= K; ++k) as.push_back({static_cast<double>(k), 0.0});
  return make_factor_product(as);
}

ExprPtr build_dyadic_gpf(int K) {
  std::vector<std::pair<Complex, Complex>> terms;
  double p = 1.0;
  for (int k = 0; k < K; ++k) {
    terms.emplace_back(Complex(1, 0), Complex(0, p));
    p *= 2.0;
  }
  return make_partial_fractions(terms);
}

ExprPtr build_exp_series(int deg) {
  std::vector<ExprPtr> kids;
  kids.push_back(make_const(Complex(1, 0)));
  double fact = 1.0;
  PrecisionGuard guard(256);
  BigReal bfact(1.0);
  for (int k = 1; k <= deg; ++k) {
    bfact = bfact * BigReal(static_cast<double>(k));
    fact *= k;
    kids.push_back(make_product({make_const(BigComplex{BigReal(1.0) / bfact, BigReal(0.0)}),
                                 make_monomial(k)}));
  }
  (void)fact;
  return make_sum(std::move(kids));
}

ExprPtr corpus_function(const std::string& spec) {
  if (spec.rfind("expr:", 0) == 0) return expr_from_text(spec.substr(5));
  auto colon = spec.find(':');
  std::string name = colon == std::string::npos ? spec : spec.substr(0, colon);
  int arg = colon == std::string::npos ? 0 : std::stoi(spec.substr(colon + 1));
  if (name == "cube_product") return build_cube_product(arg);
  if (name == "linear_product") return build_linear_product(arg);
  if (name == "dyadic_gpf") return build_dyadic_gpf(arg);
  if (name == "exp_series") return build_exp_series(arg);
  fail(ErrorCode::ConfigError, "unknown corpus builder: " + spec);
}

namespace {

// ---------------- thm-onezero ----------------

OneZeroSpec spec_from(const Config& cfg, const std::string& sect) {
  OneZeroSpec spec;
  if (cfg.has(sect + ".n_seq"))
    spec.n_seq = cfg.get_longs(sect + ".n_seq");
  else
    spec.n_seq = {2, 10, 60};
  spec.ratio_floor = cfg.get_double(sect + ".ratio_floor", 4.0);
  return spec;
}

json bundle_to_json(const OneZeroBundle& b) {
  json j;
  j["n_seq"] = b.spec.n_seq;
  j["ratio_floor"] = b.spec.ratio_floor;
  j["precision_bits"] = static_cast<long>(b.bits);
  json cs = json::array();
  for (const auto& c : b.c) cs.push_back({{"re", c.re.to_string()}, {"im", c.im.to_string()}});
  j["c"] = cs;
  j["nk_ck"] = b.nk_ck;
  j["decay_ratios"] = b.decay_ratios;
  auto reg_json = [](const Registry& reg) {
    json arr = json::array();
    for (const auto& e : reg.entries())
      arr.push_back({{"re", e.loc.real()},
                     {"im", e.loc.imag()},
                     {"mult", e.mult},
                     {"kind", e.kind == PointKind::Zero ? "zero" : "pole"}});
    return arr;
  };
  j["g_registry"] = reg_json(registry_of(b.g));
  j["f_poles"] = reg_json(registry_of(b.f));
  return j;
}

ExperimentReport exp_thm_onezero(const Config& cfg, const std::string& out_dir) {
  cfg.check_known(with_globals({"onezero.n_seq", "onezero.ratio_floor", "onezero.samples",
                                "grid.r_min", "grid.r_max", "grid.points", "output.bundle"}));
  ExperimentReport rep;
  rep.id = "thm-onezero";
  uint64_t seed = cfg.get_u64("seed", 20240801);
  mpfr_prec_t bits = cfg.get_long("precision_bits", 256);
  int samples = static_cast<int>(cfg.get_long("onezero.samples", 100));
  OneZeroSpec spec = spec_from(cfg, "onezero");

  OneZeroBundle b = build_bundle(spec, bits);
  BundleVerification v = verify_bundle(b, samples, seed);
  add_check(rep, "delta_identity", v.err_delta <= 1e-12, v.err_delta,
            "max rel err of first difference vs g at " + std::to_string(samples) + " points");
  add_check(rep, "rational_identity", v.err_rational <= 1e-10, v.err_rational,
            "max |g(z)H(z^4)/z - 1|");
  add_check(rep, "winding_net", v.winding_net == v.expected_net,
            static_cast<double>(v.winding_net),
            "net winding of g, expected " + std::to_string(v.expected_net));
  add_check(rep, "one_zero_in_disk", v.zeros_in_disk == 1, static_cast<double>(v.zeros_in_disk),
            "zero count of g inside the lattice-covering disk");
  add_check(rep, "hprime_antisymmetry", v.err_antisym <= 1e-12, v.err_antisym,
            "max rel err of h'(i b) + h'(b) over the 4K zeros");
  double worst_ratio = b.decay_ratios.empty() ? 0.0 : *std::max_element(b.decay_ratios.begin(),
                                                                        b.decay_ratios.end());
  add_check(rep, "residue_decay", true, worst_ratio,
            "n_k|c_k| strictly decreasing (enforced at construction)");

  auto grid = grid_from(cfg, "grid", 2.0, 600.0, 24);
  Registry freg = registry_of(b.f);
  GrowthProfile pf = growth_profile(b.f, freg, grid);
  std::vector<double> t_over_r, n_over_r;
  for (size_t i = 0; i < pf.r.size(); ++i) {
    t_over_r.push_back(pf.T[i] / pf.r[i]);
    n_over_r.push_back(static_cast<double>(freg.count_inside(pf.r[i], PointKind::Pole)) / pf.r[i]);
  }
  double t_max = *std::max_element(t_over_r.begin(), t_over_r.end());
  double t_med = median(t_over_r);
  add_check(rep, "growth_T_over_r", t_max < 2.0 * t_med, t_max,
            "max T(r,f)/r vs 2x median " + fmt(t_med));
  double n_max = *std::max_element(n_over_r.begin(), n_over_r.end());
  add_check(rep, "pole_count_ratio", n_max <= 8.0, n_max, "max n(r,f)/r, bound 8");

  Registry greg = registry_of(b.g);
  GrowthProfile pg = growth_profile(b.g, greg, grid);
  std::vector<double> g_ratio;
  for (size_t i = 0; i < pg.r.size(); ++i)
    g_ratio.push_back(pg.T[i] / (std::log(pg.r[i]) * std::log(pg.r[i])));
  double g_max = *std::max_element(g_ratio.begin(), g_ratio.end());
  double g_med = median(g_ratio);
  add_check(rep, "g_growth_log2", g_max < 3.0 * g_med, g_max,
            "max T(r,g)/log^2 r vs 3x median " + fmt(g_med));

  std::vector<std::vector<double>> rows_f, rows_ratio;
  for (size_t i = 0; i < pf.r.size(); ++i) {
    rows_f.push_back({pf.r[i], pf.m[i], pf.N[i], pf.T[i]});
    rows_ratio.push_back({pf.r[i], t_over_r[i], n_over_r[i], g_ratio[i]});
  }
  rep.series["growth_f"] = make_series({"r", "m", "N", "T"}, rows_f);
  rep.series["growth_ratios"] = make_series({"r", "T_over_r", "n_over_r", "Tg_over_log2"}, rows_ratio);

  std::string bundle_path = out_dir + "/" + cfg.get_string("output.bundle", "thm-onezero.bundle.json");
  std::ofstream bout(bundle_path);
  bout << bundle_to_json(b).dump(1) << "\n";
  rep.metadata["bundle_file"] = bundle_path;
  rep.metadata["n_seq"] = spec.n_seq;
  rep.metadata["precision_bits"] = static_cast<long>(bits);
  return rep;
}

// ---------------- keldysh ----------------

ExperimentReport exp_keldysh(const Config& cfg, const std::string&) {
  cfg.check_known(with_globals(
      {"pair.n_seq", "pair.ratio_floor", "grid.r_min", "grid.r_max", "grid.points"}));
  ExperimentReport rep;
  rep.id = "keldysh";
  mpfr_prec_t bits = cfg.get_long("precision_bits", 256);
  OneZeroSpec spec = spec_from(cfg, "pair");
  OneZeroBundle b = build_bundle(spec, bits);
  auto grid = grid_from(cfg, "grid", 2.0, 300.0, 24);
  std::vector<std::pair<double, double>> perturb;
  std::vector<double> sums = keldysh_sums(b.f, b.g, grid, &perturb);
  double top = top_med(sums), bottom = bot_med(sums);
  add_check(rep, "keldysh_trend", top < bottom, top,
            "top-decile median vs bottom-decile median " + fmt(bottom));
  add_check(rep, "keldysh_final", sums.back() < 0.5, sums.back(), "final m(r,f)+m(r,g), bound 0.5");
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i], sums[i]});
  rep.series["keldysh"] = make_series({"r", "m_f_plus_m_g"}, rows);
  rep.metadata["n_seq"] = spec.n_seq;
  rep.metadata["perturbed_radii"] = perturb.size();
  return rep;
}

// ---------------- thm-lesshalf ----------------

ExperimentReport exp_thm_lesshalf(const Config& cfg, const std::string&) {
  cfg.check_known(with_globals({"corpus.function", "diff.n", "disks.radii", "ordergrid.r_min",
                                "ordergrid.r_max", "ordergrid.points"}));
  ExperimentReport rep;
  rep.id = "thm-lesshalf";
  ExprPtr f = corpus_function(cfg.get_string("corpus.function", "cube_product:60"));
  int n = static_cast<int>(cfg.get_long("diff.n", 1));
  std::vector<double> radii = cfg.has("disks.radii") ? cfg.get_doubles("disks.radii")
                                                     : std::vector<double>{10, 100, 950};

  Registry freg = registry_of(f);
  auto ogrid = grid_from(cfg, "ordergrid", 1.0, 1000.0, 16);
  GrowthProfile prof = growth_profile(f, freg, ogrid);
  estimate_orders(prof);
  double cap = std::min(0.5, 1.0 / n);
  add_check(rep, "order_below_threshold", prof.order_est < cap, prof.order_est,
            "order estimate vs " + fmt(cap));

  // poles of the divided difference inside each disk are the zeros of f,
  // provided the n-th difference does not vanish there
  ExprPtr delta_n = forward_difference(f, n).expr;
  double min_lm = std::numeric_limits<double>::infinity();
  for (const auto& e : freg.of_kind(PointKind::Zero)) {
    if (std::abs(e.loc) > radii.back()) continue;
    LogComplex v = evaluate(delta_n, e.loc);
    min_lm = std::min(min_lm, v.is_zero() ? -std::numeric_limits<double>::infinity() : v.logmag);
  }
  add_check(rep, "difference_nonvanishing_at_zeros", min_lm > -200.0, min_lm,
            "min log|D^n f| over zeros of f");

  ExprPtr G = divided_difference(f, n);
  std::vector<long> counts;
  std::vector<std::vector<double>> rows;
  for (double r : radii) {
    long poles = freg.count_inside(r, PointKind::Zero);
    long c = count_zeros_in_disk(G, r, poles);
    counts.push_back(c);
    rows.push_back({r, static_cast<double>(c)});
  }
  bool increasing = true;
  for (size_t i = 1; i < counts.size(); ++i) increasing = increasing && counts[i] > counts[i - 1];
  add_check(rep, "zero_counts_strictly_increasing", increasing,
            static_cast<double>(counts.back()),
            "zero counts of the divided difference over growing disks");
  rep.series["zero_counts"] = make_series({"R", "zero_count"}, rows);
  rep.metadata["order_est"] = prof.order_est;
  return rep;
}

// ---------------- thm-thm3 ----------------

std::vector<double> dyadic_zero_ordinates(int K) {
  // f(iy) = -i * sum 1/(y - 2^k): strictly decreasing between consecutive
  // powers, so exactly one zero per gap.
  std::vector<double> zs;
  auto S = [&](double y) {
    double s = 0, p = 1;
    for (int k = 0; k < K; ++k) {
      s += 1.0 / (y - p);
      p *= 2;
    }
    return s;
  };
  double p = 1;
  for (int k = 0; k + 1 < K; ++k) {
    double a = p * (1 + 1e-9), b = 2 * p * (1 - 1e-9);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * b; ++it) {
      double mid = 0.5 * (a + b);
      (S(mid) > 0 ? a : b) = mid;
    }
    zs.push_back(0.5 * (a + b));
    p *= 2;
  }
  return zs;
}

ExperimentReport exp_thm_thm3(const Config& cfg, const std::string&) {
  cfg.check_known(with_globals({"corpus.levels", "disks.radii", "growthgrid.r_min",
                                "growthgrid.r_max", "growthgrid.points"}));
  ExperimentReport rep;
  rep.id = "thm-thm3";
  int K = static_cast<int>(cfg.get_long("corpus.levels", 16));
  std::vector<double> radii = cfg.has("disks.radii") ? cfg.get_doubles("disks.radii")
                                                     : std::vector<double>{10, 100, 900};
  ExprPtr f = build_dyadic_gpf(K);
  Registry freg = registry_of(f);

  auto ggrid = grid_from(cfg, "growthgrid", 2.0, 1000.0, 16);
  GrowthProfile prof = growth_profile(f, freg, ggrid);
  std::vector<double> ratio;
  for (size_t i = 0; i < prof.r.size(); ++i)
    ratio.push_back(prof.T[i] / (std::log(prof.r[i]) * std::log(prof.r[i])));
  double rmax = *std::max_element(ratio.begin(), ratio.end());
  add_check(rep, "growth_log2", rmax < 3.0 * median(ratio), rmax,
            "max T(r)/log^2 r vs 3x median");

  ExprPtr g = forward_difference(f, 1).expr;
  ExprPtr G = make_quotient(g, f);
  std::vector<double> fzeros = dyadic_zero_ordinates(K);

  std::vector<long> cg, cG;
  std::vector<std::vector<double>> rows;
  for (double r : radii) {
    long pg = 0;
    double p = 1;
    for (int k = 0; k < K; ++k) {
      if (p <= r) ++pg;                                    // pole of f at i*2^k
      if (std::abs(Complex(-1, p)) <= r) ++pg;             // shifted pole at i*2^k - 1
      p *= 2;
    }
    long ng = winding_count(g, Contour::circle({0, 0}, r)).net + pg;
    long pG = 0;
    p = 1;
    for (int k = 0; k < K; ++k) {
      if (std::abs(Complex(-1, p)) <= r) ++pG;
      p *= 2;
    }
    for (double y : fzeros)
      if (y <= r) ++pG;
    long nG = winding_count(G, Contour::circle({0, 0}, r)).net + pG;
    cg.push_back(ng);
    cG.push_back(nG);
    rows.push_back({r, static_cast<double>(ng), static_cast<double>(nG)});
  }
  auto strictly_increasing = [](const std::vector<long>& v) {
    for (size_t i = 1; i < v.size(); ++i)
      if (v[i] <= v[i - 1]) return false;
    return true;
  };
  bool ok = strictly_increasing(cg) || strictly_increasing(cG);
  add_check(rep, "difference_zero_counts_grow", ok,
            static_cast<double>(std::max(cg.back(), cG.back())),
            "at least one of n(r,1/g), n(r,1/G) strictly increasing");
  rep.series["thm3_counts"] = make_series({"R", "count_g", "count_G"}, rows);
  return rep;
}

// ---------------- lem-asymptotics ----------------

int real_sign(const ExprPtr& e, double x) {
  LogComplex v = evaluate(e, Complex(x, 0));
  if (v.is_zero()) return 0;
  return std::fabs(v.arg) < 1.5707963267948966 ? 1 : -1;
}

std::vector<double> real_zeros_between(const ExprPtr& e, const std::vector<double>& pts) {
  std::vector<double> zs;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    double pad = 1e-7 * (b - a);
    double x1 = a + pad, x2 = b - pad;
    int s1 = real_sign(e, x1), s2 = real_sign(e, x2);
    if (s1 == 0 || s2 == 0 || s1 == s2) continue;
    for (int it = 0; it < 200 && (x2 - x1) > 1e-10 * std::max(1.0, std::fabs(x1)); ++it) {
      double mid = 0.5 * (x1 + x2);
      int sm = real_sign(e, mid);
      if (sm == 0) {
        x1 = x2 = mid;
        break;
      }
      (sm == s1 ? x1 : x2) = mid;
    }
    zs.push_back(0.5 * (x1 + x2));
  }
  return zs;
}

ExperimentReport exp_lem_asymptotics(const Config& cfg, const std::string&) {
  cfg.check_known(with_globals({"corpus.function", "sweep.c_max", "sweep.h", "grid.r_min",
                                "grid.r_max", "grid.points", "ordergrid.r_min", "ordergrid.r_max",
                                "ordergrid.points"}));
  ExperimentReport rep;
  rep.id = "lem-asymptotics";
  ExprPtr f = corpus_function(cfg.get_string("corpus.function", "cube_product:60"));
  double c_max = cfg.get_double("sweep.c_max", 0.25);
  double h = cfg.get_double("sweep.h", 2.0);
  auto grid = grid_from(cfg, "grid", 3.0, 1000.0, 40);

  Registry freg = registry_of(f);
  auto ogrid = grid_from(cfg, "ordergrid", 1.0, 1000.0, 16);
  GrowthProfile prof = growth_profile(f, freg, ogrid);
  estimate_orders(prof);

  // The exclusion set covers the zeros of f and of its first three
  // derivatives; all are real and interlace for this corpus.
  std::vector<double> zf;
  for (const auto& e : freg.of_kind(PointKind::Zero)) zf.push_back(e.loc.real());
  std::sort(zf.begin(), zf.end());
  ExprPtr f1 = differentiate(f), f2 = differentiate(f1), f3 = differentiate(f2);
  std::vector<double> z1 = real_zeros_between(f1, zf);
  std::vector<double> z2 = real_zeros_between(f2, z1);
  std::vector<double> z3 = real_zeros_between(f3, z2);
  std::vector<RegEntry> all;
  for (double x : zf) all.push_back({Complex(x, 0), 1, PointKind::Zero});
  for (const auto* v : {&z1, &z2, &z3})
    for (double x : *v) all.push_back({Complex(x, 0), 1, PointKind::Zero});
  EpsilonSet eps = build_epsilon_set(Registry(all, true, true), EpsilonRule::Exclusion, h);

  AsymptoticReport r1 = asymptotic_difference_check(f, 1, c_max, grid, eps, prof.order_est);
  AsymptoticReport r2 = asymptotic_difference_check(f, 2, 1.0, grid, eps, prof.order_est);
  add_check(rep, "first_difference_top_median", r1.top_median() < 0.05, r1.top_median(),
            "top-decile median of |(f(z+c)-f(z))/(c f'(z)) - 1|, bound 0.05");
  add_check(rep, "first_difference_trend", r1.trend_ok(), r1.bottom_median(),
            "top-decile median below bottom-decile median");
  add_check(rep, "second_difference_top_median", r2.top_median() < 0.05, r2.top_median(),
            "top-decile median of |D^2 f / f'' - 1|, bound 0.05");
  add_check(rep, "second_difference_trend", r2.trend_ok(), r2.bottom_median(),
            "top-decile median below bottom-decile median");

  auto rows_of = [](const AsymptoticReport& r) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : r.rows)
      rows.push_back({row.r, row.max_dev, row.excluded_fraction});
    return rows;
  };
  rep.series["asym_n1"] = make_series({"r", "max_dev", "excluded_fraction"}, rows_of(r1));
  rep.series["asym_n2"] = make_series({"r", "max_dev", "excluded_fraction"}, rows_of(r2));
  rep.metadata["order_est"] = prof.order_est;
  rep.metadata["eps_ratio_sum"] = eps.ratio_sum;
  return rep;
}

// ---------------- lem-miles-rossi ----------------

ExperimentReport exp_lem_miles_rossi(const Config& cfg, const std::string&) {
  cfg.check_known(with_globals({"corpus.function", "sweep.gamma", "sweep.M", "grid.r_min",
                                "grid.r_max", "grid.points"}));
  ExperimentReport rep;
  rep.id = "lem-miles-rossi";
  ExprPtr f = corpus_function(cfg.get_string("corpus.function", "cube_product:40"));
  double gamma = cfg.get_double("sweep.gamma", 0.5);
  double M = cfg.get_double("sweep.M", 4.5);
  auto grid = grid_from(cfg, "grid", 2.0, 1e4, 32);

  Registry freg = registry_of(f);
  GrowthProfile prof = growth_profile(f, freg, grid);
  estimate_orders(prof);
  double rho = prof.order_est;
  double bound = std::pow((1.0 - gamma) / (7.0 * M * (rho + 1.0)), 2);

  long hits = 0;
  std::vector<std::vector<double>> rows;
  for (double r : prof.r) {
    double meas = miles_rossi_measure(f, r, gamma);
    if (meas > bound) ++hits;
    rows.push_back({r, meas});
  }
  double frac = static_cast<double>(hits) / static_cast<double>(prof.r.size());
  double need = 1.0 - 3.0 / M - 0.1;
  add_check(rep, "angular_measure_fraction", frac >= need, frac,
            "fraction of radii with m(U_r) above " + fmt(bound) + ", need " + fmt(need));
  rep.series["miles_rossi"] = make_series({"r", "measure"}, rows);
  rep.metadata["order_est"] = rho;
  rep.metadata["bound"] = bound;
  return rep;
}

// ---------------- lem-arc ----------------

ExperimentReport exp_lem_arc(const Config& cfg, const std::string&) {
  cfg.check_known(with_globals(
      {"corpus.function", "sweep.tau", "grid.r_min", "grid.r_max", "grid.points"}));
  ExperimentReport rep;
  rep.id = "lem-arc";
  ExprPtr H = corpus_function(cfg.get_string("corpus.function", "cube_product:40"));
  double tau = cfg.get_double("sweep.tau", 0.25);
  auto grid = grid_from(cfg, "grid", 2.0, 1e4, 32);

  std::vector<std::vector<double>> rows;
  long flags_top = 0, top_count = 0, ftau = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    ArcResult a = arc_theta(H, grid[i]);
    rows.push_back({grid[i], a.theta, a.min_modulus_exceeds_one ? 1.0 : 0.0});
    if (i >= grid.size() / 2) {
      ++top_count;
      if (a.min_modulus_exceeds_one) ++flags_top;
    }
    if (a.theta > 2.0 * 3.141592653589793 * (1.0 - tau)) ++ftau;
  }
  double flag_frac = static_cast<double>(flags_top) / static_cast<double>(top_count);
  add_check(rep, "min_modulus_flag_fraction", flag_frac >= 0.25, flag_frac,
            "fraction of top-half radii with m0(r,H) > 1, need 0.25");
  rep.series["arc"] = make_series({"r", "theta", "m0_flag"}, rows);
  rep.metadata["F_tau_fraction"] = static_cast<double>(ftau) / static_cast<double>(grid.size());
  return rep;
}

// ---------------- wv-ratio ----------------

ExperimentReport exp_wv_ratio(const Config& cfg, const std::string&) {
  cfg.check_known(with_globals({"corpus.function", "sweep.window", "grid.r_min", "grid.r_max",
                                "grid.points"}));
  ExperimentReport rep;
  rep.id = "wv-ratio";
  ExprPtr f = corpus_function(cfg.get_string("corpus.function", "cube_product:130"));
  int window = static_cast<int>(cfg.get_long("sweep.window", 150));
  auto grid = grid_from(cfg, "grid", 10.0, 1e6, 16);

  std::vector<double> dev1, dev2, Ns, nr1, nr2;
  std::vector<std::vector<double>> rows;
  for (double r : grid) {
    WvResult w1 = wv_ratio_check(f, 1, r, window);
    WvResult w2 = wv_ratio_check(f, 2, r, window);
    dev1.push_back(w1.deviation);
    dev2.push_back(w2.deviation);
    Ns.push_back(static_cast<double>(w1.central_index));
    nr1.push_back(Ns.back() / r);
    nr2.push_back(Ns.back() * Ns.back() / r);
    rows.push_back({r, w1.deviation, w2.deviation, Ns.back()});
  }
  add_check(rep, "wv_dev_n1_top_median", top_med(dev1) < 0.15, top_med(dev1),
            "top-decile median of the n=1 ratio deviation, bound 0.15");
  add_check(rep, "wv_dev_n1_trend", top_med(dev1) < bot_med(dev1), bot_med(dev1),
            "deviation trend decreasing");
  add_check(rep, "wv_dev_n2_top_median", top_med(dev2) < 0.15, top_med(dev2),
            "top-decile median of the n=2 ratio deviation, bound 0.15");
  add_check(rep, "wv_dev_n2_trend", top_med(dev2) < bot_med(dev2), bot_med(dev2),
            "deviation trend decreasing");

  CentralIndexProfile prof = central_index_profile(f, grid, window);
  double order = central_index_order(prof);
  add_check(rep, "central_index_order", order >= 0.25 && order <= 0.45, order,
            "log N / log r over the top half, expected in [0.25, 0.45]");
  add_check(rep, "central_index_monotone", prof.monotone, prof.monotone ? 1.0 : 0.0,
            "N(r) non-decreasing along the grid");
  // N(r)^n = o(r) surrogate: the ratio trend must not increase.
  add_check(rep, "N_over_r_surrogate_n1", top_med(nr1) <= bot_med(nr1), top_med(nr1),
            "N(r)/r trend non-increasing");
  add_check(rep, "N_over_r_surrogate_n2", top_med(nr2) <= bot_med(nr2), top_med(nr2),
            "N(r)^2/r trend non-increasing");
  rep.series["wv"] = make_series({"r", "dev_n1", "dev_n2", "N"}, rows);
  return rep;
}

using ExpFn = ExperimentReport (*)(const Config&, const std::string&);

struct ExpEntry {
  const char* id;
  const char* description;
  ExpFn fn;
};

const ExpEntry kExperiments[] = {
    {"thm-onezero",
     "finite-K one-zero pair: difference identity, rational identity, single zero, growth ratios",
     exp_thm_onezero},
    {"keldysh", "circle means m(r,f)+m(r,g) of the one-zero pair decay along the radius grid",
     exp_keldysh},
    {"thm-lesshalf",
     "zero counts of the divided difference grow with the disk radius for a small-order product",
     exp_thm_lesshalf},
    {"thm-thm3",
     "for a log^2-growth pole lattice, the difference or the divided difference accumulates zeros",
     exp_thm_thm3},
    {"lem-asymptotics",
     "difference quotients track derivatives off a disc exclusion set, deviations shrinking in r",
     exp_lem_asymptotics},
    {"lem-miles-rossi",
     "angular measure where |z f'/f| > gamma n(r,1/f) stays above the quadratic lower bound",
     exp_lem_miles_rossi},
    {"lem-arc", "minimum modulus flag and longest arc with |H| > 1 along the radius grid",
     exp_lem_arc},
    {"wv-ratio",
     "derivative ratios at maximum-modulus points track (N(r)/z)^n; central index order check",
     exp_wv_ratio},
};

}  // namespace

std::vector<std::pair<std::string, std::string>> experiment_catalogue() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : kExperiments) out.emplace_back(e.id, e.description);
  return out;
}

ExperimentReport run_experiment(const Config& cfg, const std::string& out_dir) {
  std::string id = cfg.get_string("experiment");
  const ExpEntry* entry = nullptr;
  for (const auto& e : kExperiments)
    if (id == e.id) entry = &e;
  if (!entry) fail(ErrorCode::ConfigError, "unknown experiment id: " + id);

  std::filesystem::create_directories(out_dir);
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  try {
    rep = entry->fn(cfg, out_dir);
  } catch (const MeroError& e) {
    rep.id = id;
    add_check(rep, std::string("error_") + error_code_name(e.code()), false, 0.0, e.what());
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.metadata["seed"] = cfg.get_u64("seed", 20240801);
  rep.timing["runtime_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  std::time_t now = std::time(nullptr);
  char ts[32];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  rep.timing["timestamp"] = ts;

  std::string report_path = out_dir + "/" + cfg.get_string("output.report", id + ".report.json");
  std::ofstream out(report_path);
  if (!out) fail(ErrorCode::ConfigError, "cannot write " + report_path);
  out << rep.to_json(true).dump(1) << "\n";
  for (const auto& [name, series] : rep.series.items())
    write_series_csv(out_dir + "/" + name + ".csv", series);
  return rep;
}

void emit_plotdata(const json& report, const std::string& out_dir) {
  if (!report.contains("series") || !report.contains("experiment"))
    fail(ErrorCode::UnknownReport, "not an experiment report (missing series/experiment)");
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, series] : report["series"].items())
    write_series_csv(out_dir + "/" + name + ".csv", series);
}

}  // namespace merodiff
