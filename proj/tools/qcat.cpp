// qcat: command line front end for the quantized cat map toolkit.
//
// Subcommands: que-scan, good-primes, good-integers, q-count, mordell,
// moment-check, crt-check, egorov-check, scar-demo, verify. Output is JSON
// lines by default (one metadata object, then one object per row) or CSV
// with --format csv. Exit codes: 0 ok, 1 property failure, 2 invalid input,
// 3 resource guard.

#include <CLI11.hpp>
#include <json.hpp>

#include "qcat/counting.hpp"
#include "qcat/goodness.hpp"
#include "qcat/orders.hpp"
#include "qcat/polyz.hpp"
#include "qcat/primes.hpp"
#include "qcat/propagator.hpp"
#include "qcat/serialize.hpp"
#include "qcat/spectral.hpp"
#include "qcat/sympl.hpp"
#include "qcat/tensor.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace qcat;
using nlohmann::json;

namespace {

// ------------------------------------------------------------- options ---

struct Options {
  std::string matrix;  // inline rows or a file path; empty = built-in default
  int g = 0;           // 0 = infer from the matrix
  long N = 0;
  std::string N_range;  // "lo:hi"
  i64 r = 1;
  int nu = 1;
  std::vector<std::string> freqs;
  std::string window_override;  // "V:W"
  double D_override = 0;
  double z_override = 0;
  double tol = 0;  // uniform tolerance override, 0 = library defaults
  std::string cache_dir;
  int jobs = 1;
  std::string format = "json";
  u64 seed = 1;
  u64 p = 0;
  u64 p_max = 0;
  u64 x = 0;
  u64 T = 0;
  std::vector<u64> alphas, lambdas;
};

double now_secs() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// ------------------------------------------------------------- parsing ---

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

i64 parse_i64(const std::string& s) {
  std::size_t pos = 0;
  i64 v = std::stoll(s, &pos);
  if (pos != s.size()) throw invalid_input("not an integer: '" + s + "'");
  return v;
}

FrequencyVector parse_freq(const std::string& s) {
  FrequencyVector n;
  for (const std::string& part : split(s, ',')) n.push_back(parse_i64(part));
  if (n.empty() || n.size() % 2 != 0)
    throw invalid_input("frequency must have an even number of entries: '" + s + "'");
  return n;
}

std::pair<long, long> parse_range(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() != 2) throw invalid_input("range must be lo:hi, got '" + s + "'");
  long lo = parse_i64(parts[0]), hi = parse_i64(parts[1]);
  if (lo > hi) throw invalid_input("empty range '" + s + "'");
  return {lo, hi};
}

SymplecticMatrix parse_matrix(const std::string& text, int g_hint) {
  std::string body = text;
  if (text.find(';') == std::string::npos && text.find('[') == std::string::npos) {
    std::ifstream in(text);
    if (!in) throw invalid_input("matrix is neither inline rows nor a readable file: " + text);
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  std::vector<std::vector<long>> rows;
  if (body.find('[') != std::string::npos) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw invalid_input("matrix file is not a JSON array");
    for (const auto& row : j) rows.emplace_back(row.get<std::vector<long>>());
  } else {
    for (const std::string& row : split(body, ';')) {
      std::vector<long> r;
      for (const std::string& e : split(row, ',')) r.push_back(parse_i64(e));
      rows.push_back(std::move(r));
    }
  }
  if (rows.empty() || rows.size() % 2 != 0)
    throw invalid_input("matrix must have an even number of rows");
  int g = int(rows.size()) / 2;
  if (g_hint != 0 && g_hint != g)
    throw invalid_input("--g disagrees with the matrix size");
  return validate(rows, g);
}

SymplecticMatrix pick_matrix(const Options& opt, const char* fallback) {
  if (!opt.matrix.empty()) return parse_matrix(opt.matrix, opt.g);
  return parse_matrix(fallback, 0);
}

const char* kBase = "1,2;2,5";
const char* kScar = "3,2,0,0;4,3,0,0;0,0,3,-4;0,0,-2,3";

Tolerances effective_tol(const Options& opt) {
  Tolerances t;
  if (opt.tol > 0) {
    t.egorov = t.unitarity = t.scalar_detect = t.spectral_sum = t.eigen_label = opt.tol;
    t.algebra = t.tensor_trans = t.tensor_prop = opt.tol;
    t.power_egorov = t.twisted_id = t.kr_slack = t.moment_rel = opt.tol;
  }
  return t;
}

GoodnessOverrides goodness_overrides(const Options& opt) {
  GoodnessOverrides ov;
  if (!opt.window_override.empty()) {
    auto parts = split(opt.window_override, ':');
    if (parts.size() != 2) throw invalid_input("--window-override must be V:W");
    ov.V = std::stod(parts[0]);
    ov.W = std::stod(parts[1]);
  }
  if (opt.D_override > 0) ov.D = opt.D_override;
  return ov;
}

// -------------------------------------------------------------- output ---

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

struct Sink {
  std::string format;
  std::vector<std::string> columns;  // csv column order
  bool header_done = false;

  void meta(const json& j) {
    if (format == "json") std::cout << j.dump() << "\n";
    // csv: metadata goes to stderr so the stream stays machine-readable
    else
      std::cerr << j.dump() << "\n";
  }

  void row(const json& j) {
    if (format == "json") {
      std::cout << j.dump() << "\n";
      return;
    }
    if (!header_done) {
      if (columns.empty())
        for (auto it = j.begin(); it != j.end(); ++it) columns.push_back(it.key());
      for (std::size_t i = 0; i < columns.size(); ++i)
        std::cout << (i ? "," : "") << columns[i];
      std::cout << "\n";
      header_done = true;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) std::cout << ",";
      if (!j.contains(columns[i])) continue;
      const json& v = j.at(columns[i]);
      std::cout << csv_field(v.is_string() ? v.get<std::string>() : v.dump());
    }
    std::cout << "\n";
  }
};

json cx_json(Cx z) { return json::array({z.real(), z.imag()}); }

// ------------------------------------------------------------ commands ---

std::vector<long> n_values(const Options& opt) {
  if (opt.N != 0) return {opt.N};
  if (!opt.N_range.empty()) {
    auto [lo, hi] = parse_range(opt.N_range);
    std::vector<long> v;
    for (long n = lo; n <= hi; ++n) v.push_back(n);
    return v;
  }
  throw invalid_input("need --N or --N-range");
}

std::vector<FrequencyVector> freq_list(const Options& opt, int g) {
  std::vector<FrequencyVector> out;
  for (const std::string& s : opt.freqs) {
    FrequencyVector n = parse_freq(s);
    if ((int)n.size() != 2 * g) throw invalid_input("frequency length does not match g");
    out.push_back(std::move(n));
  }
  if (!out.empty()) return out;
  // default test list: every nonzero |n|_inf <= 3 (a fixed desk-scale
  // stand-in for a slowly growing mode family)
  i64 lim = g == 1 ? 3 : 1;
  FrequencyVector cur(std::size_t(2 * g), -lim);
  while (true) {
    bool zero = true;
    for (i64 v : cur)
      if (v != 0) zero = false;
    if (!zero) out.push_back(cur);
    std::size_t i = 0;
    while (i < cur.size() && cur[i] == lim) cur[i++] = -lim;
    if (i == cur.size()) break;
    ++cur[i];
  }
  return out;
}

void cmd_q_count(const Options& opt) {
  SymplecticMatrix A = pick_matrix(opt, kBase);
  if (opt.freqs.empty()) throw invalid_input("q-count needs --freq");
  Sink out{opt.format, {"N", "freq", "nu", "tau", "value", "method", "crosschecked"}, false};
  out.meta(json{{"command", "q-count"}, {"g", A.g}, {"nu", opt.nu}});
  for (long N : n_values(opt))
    for (const std::string& fs : opt.freqs) {
      CountResult q = q_count_vector(A, N, parse_freq(fs), opt.nu);
      out.row(json{{"N", N},
                   {"freq", fs},
                   {"nu", q.nu},
                   {"tau", q.tau},
                   {"value", q.value.get_str()},
                   {"method", q.method == CountMethod::convolution ? "convolution" : "exhaustive"},
                   {"crosschecked", q.crosschecked}});
    }
}

void cmd_mordell(const Options& opt) {
  if (opt.p == 0 || opt.T == 0) throw invalid_input("mordell needs --p and --T");
  MordellSum s = mordell_partial_sum(opt.p, opt.alphas, opt.lambdas, opt.T);
  Sink out{opt.format, {}, false};
  out.row(json{{"p", s.p},
               {"alphas", s.alphas},
               {"lambdas", s.lambdas},
               {"T", s.T},
               {"value", cx_json(s.value)},
               {"abs", std::abs(s.value)},
               {"trivial_bound", double(s.T)}});
}

void cmd_moment(const Options& opt) {
  if (opt.p == 0) throw invalid_input("moment-check needs --p");
  SymplecticMatrix A = pick_matrix(opt, kBase);
  MomentReport m = moment_identity_check(A, opt.p, opt.nu, {}, effective_tol(opt));
  Sink out{opt.format, {}, false};
  out.row(json{{"p", opt.p},
               {"nu", opt.nu},
               {"lhs", m.lhs},
               {"rhs", m.rhs.get_str()},
               {"T", m.T},
               {"match", m.match}});
  if (!m.match) throw property_failure("moment identity mismatch");
}

void cmd_egorov(const Options& opt) {
  SymplecticMatrix A = pick_matrix(opt, kBase);
  Tolerances tol = effective_tol(opt);
  DiskCache cache(opt.cache_dir);
  Sink out{opt.format,
           {"N", "r", "intertwiner_dim", "period", "unitarity", "egorov_max", "cache"},
           false};
  out.meta(json{{"command", "egorov-check"}, {"g", A.g}, {"r", opt.r}});
  for (long N : n_values(opt)) {
    std::string hit = "off";
    std::optional<Propagator> P;
    if (cache.enabled()) {
      P = cache.load(A, N, opt.r, tol);
      hit = P ? "hit" : "miss";
    }
    if (!P) {
      P = solve_propagator(A, N, opt.r, {}, tol);
      quantum_period(*P, 0, {}, tol);
      if (cache.enabled()) cache.store(*P, tol);
    }
    double worst = 0;
    for (const FrequencyVector& n : freq_list(opt, A.g))
      worst = std::max(worst, egorov_residual(*P, n));
    if (worst > tol.egorov)
      throw property_failure("egorov residual " + std::to_string(worst) + " at N=" +
                             std::to_string(N));
    out.row(json{{"N", N},
                 {"r", opt.r},
                 {"intertwiner_dim", P->intertwiner_dim},
                 {"period", P->period},
                 {"unitarity", P->unitarity_residual},
                 {"egorov_max", worst},
                 {"cache", hit}});
  }
}

void cmd_crt(const Options& opt) {
  SymplecticMatrix A = pick_matrix(opt, kBase);
  Tolerances tol = effective_tol(opt);
  Sink out{opt.format,
           {"N", "N1", "N2", "translation_max", "propagator_residual", "overlap"},
           false};
  out.meta(json{{"command", "crt-check"}, {"g", A.g}});
  for (long N : n_values(opt)) {
    Factorization f = factorize(u64(N));
    if (f.factors.size() < 2)
      throw invalid_input("crt-check: N=" + std::to_string(N) + " is a prime power");
    // peel prime powers off the front, as the factor planner does
    long rest = N;
    for (std::size_t i = 0; i + 1 < f.factors.size(); ++i) {
      long N1 = 1;
      for (int k = 0; k < f.factors[i].second; ++k) N1 *= long(f.factors[i].first);
      long N2 = rest / N1;
      double wt = 0;
      for (const FrequencyVector& n : freq_list(opt, A.g))
        wt = std::max(wt, verify_tensor_translation(N1, N2, n, opt.r));
      TensorPropagatorReport rep = verify_tensor_propagator(A, N1, N2, {}, tol);
      if (wt > tol.tensor_trans || rep.residual > tol.tensor_prop)
        throw property_failure("crt factorization residual too large at N=" + std::to_string(N));
      out.row(json{{"N", N},
                   {"N1", N1},
                   {"N2", N2},
                   {"translation_max", wt},
                   {"propagator_residual", rep.residual},
                   {"overlap", rep.overlap_abs}});
      rest = N2;
    }
  }
}

void cmd_good_primes(const Options& opt) {
  if (opt.p_max == 0) throw invalid_input("good-primes needs --p-max");
  SymplecticMatrix A = pick_matrix(opt, kBase);
  Int disc = char_poly_info(A).discriminant;
  Sink out{opt.format,
           {"p", "splits", "roots", "root_orders", "ratio_orders", "threshold", "is_good"},
           false};
  out.meta(json{{"command", "good-primes"}, {"p_max", opt.p_max}});
  u64 good = 0, total = 0;
  for (u64 p : primes_up_to(opt.p_max)) {
    if (p == 2 || mpz_divisible_ui_p(disc.get_mpz_t(), (unsigned long)p)) continue;
    GoodPrimeReport rep = is_good_prime(A, p);
    ++total;
    if (rep.is_good) ++good;
    out.row(json{{"p", p},
                 {"splits", rep.splits},
                 {"roots", rep.roots},
                 {"root_orders", rep.root_orders},
                 {"ratio_orders", rep.ratio_orders},
                 {"threshold", rep.threshold},
                 {"is_good", rep.is_good}});
  }
  out.meta(json{{"summary", "good-primes"}, {"good", good}, {"tested", total}});
}

void cmd_good_integers(const Options& opt) {
  if (opt.x == 0) throw invalid_input("good-integers needs --x");
  SymplecticMatrix A = pick_matrix(opt, kBase);
  GoodnessOverrides ov = goodness_overrides(opt);
  bool full_override = ov.V && ov.W && ov.D;
  u64 lo = full_override ? 2 : 16;
  OrderCache ocache;
  Sink out{opt.format, {"N", "is_good", "witness_p", "M", "ord_A_M", "gcd", "D_used"}, false};
  out.meta(json{{"command", "good-integers"},
                {"x", opt.x},
                {"start", lo},
                {"note", "thresholds are undefined below 16 unless fully overridden"}});
  u64 good = 0;
  for (u64 N = lo; N <= opt.x; ++N) {
    GoodIntegerReport rep = is_good_integer(A, N, ov, &ocache);
    if (rep.is_good) ++good;
    json row{{"N", N},        {"is_good", rep.is_good}, {"witness_p", rep.witness_p},
             {"M", rep.M},    {"ord_A_M", rep.ord_A_M}, {"gcd", rep.gcd_value},
             {"D_used", rep.D_used}};
    if (!rep.is_good && opt.format == "json") {
      json rej = json::array();
      for (const auto& [p, why] : rep.rejected) rej.push_back(json{{"p", p}, {"why", why}});
      row["rejected"] = rej;
    }
    out.row(row);
  }
  out.meta(json{{"summary", "good-integers"}, {"good", good}, {"scanned", opt.x - lo + 1}});
}

void cmd_que_scan(const Options& opt) {
  SymplecticMatrix A = pick_matrix(opt, kBase);
  Tolerances tol = effective_tol(opt);
  GoodnessOverrides ov = goodness_overrides(opt);
  std::vector<FrequencyVector> freqs = freq_list(opt, A.g);
  std::vector<long> Ns = n_values(opt);

  OrderCache ocache;
  PropagatorCache pcache;
  Sink out{opt.format,
           {"N", "is_good", "witness_p", "d", "tau", "Q", "bound", "delta_max", "secs"},
           false};
  json fj = json::array();
  for (const FrequencyVector& n : freqs) fj.push_back(n);
  out.meta(json{{"command", "que-scan"},
                {"g", A.g},
                {"r", opt.r},
                {"nu", opt.nu},
                {"freqs", fj},
                {"jobs", opt.jobs},
                {"seed", opt.seed},
                {"frequency_list_note",
                 "fixed finite mode list; a desk-scale stand-in for a slowly growing family"}});

  for (long N : Ns) {
    double t0 = now_secs();
    json row{{"N", N}};
    try {
      bool thresholds_ok = N >= 16 || (ov.V && ov.W && ov.D);
      if (thresholds_ok) {
        GoodIntegerReport rep = is_good_integer(A, u64(N), ov, &ocache);
        row["is_good"] = rep.is_good;
        row["witness_p"] = rep.witness_p;
        if (rep.witness_p != 0) {
          u64 d = std::gcd(matrix_order(A.A, rep.witness_p).order, rep.ord_A_M);
          row["d"] = d;
          if ((rep.witness_p - 1) % d != 0)
            throw property_failure("witness order does not divide p-1");
        }
      } else {
        row["is_good"] = false;
        row["witness_p"] = 0;
        row["threshold_note"] = "N below 16 with partial overrides; goodness skipped";
      }

      u64 tau = ocache.order(A.A, u64(N));
      row["tau"] = tau;
      CountResult q = q_count_vector(A, N, freqs.front(), opt.nu);
      row["Q"] = q.value.get_str();
      double rhs = std::pow(std::pow(double(N), double(A.g)) * q.value.get_d() /
                                std::pow(double(tau), 4.0 * opt.nu),
                            1.0 / (4.0 * opt.nu));
      row["bound"] = rhs;

      double dmax = 0;
      json per = json::object();
      for (std::size_t i = 0; i < freqs.size(); ++i) {
        ObservableSpec f = make_observable({{freqs[i], Cx(1, 0)}});
        DeltaResult d = delta_A(A, N, f, opt.r, DeltaMethod::automatic, {}, tol, &pcache);
        dmax = std::max(dmax, d.delta);
        if (opt.format == "json")
          per[json(freqs[i]).dump()] = json{{"delta", d.delta},
                                            {"max_element", d.max_element},
                                            {"spaces", d.spaces},
                                            {"tensor", d.used_tensor}};
      }
      row["delta_max"] = dmax;
      if (opt.format == "json") row["deltas"] = per;

      if (N <= 60) {
        Factorization f = factorize(u64(N));
        if (f.factors.size() >= 2) {
          long N1 = 1;
          for (int k = 0; k < f.factors[0].second; ++k) N1 *= long(f.factors[0].first);
          TensorPropagatorReport rep = verify_tensor_propagator(A, N1, N / N1, {}, tol);
          row["tensor_residual"] = rep.residual;
        }
      }
    } catch (const std::exception& e) {
      row["error"] = e.what();
    }
    row["secs"] = now_secs() - t0;
    out.row(row);
  }
}

void cmd_scar_demo(const Options& opt) {
  SymplecticMatrix A = pick_matrix(opt, kScar);
  SubspaceSplit split = invariant_subspace_split(A);
  if (!split.scar_prone)
    throw invalid_input(
        "scar-demo: matrix has no invariant rational isotropic subspace; nothing to demonstrate");
  CharPolyInfo info = char_poly_info(A);
  SymplecticMatrix control = parse_matrix(kBase, 0);
  FrequencyVector n_scar =
      opt.freqs.empty() ? FrequencyVector{1, 0, 0, 0} : parse_freq(opt.freqs.front());
  if ((int)n_scar.size() != 2 * A.g) throw invalid_input("--freq length does not match g");

  long iso_dim = 0;
  for (const SubspaceDescriptor& w : split.subspaces)
    if (w.isotropy == Isotropy::isotropic) {
      iso_dim = long(w.basis.size());
      break;
    }
  Sink out{opt.format, {"N", "scar_max_element", "control_max_element"}, false};
  out.meta(json{{"command", "scar-demo"},
                {"g", A.g},
                {"char_poly_separable", info.separable},
                {"isotropic_dim", iso_dim},
                {"control", kBase}});
  PropagatorCache pcache;
  for (long N : n_values(opt)) {
    if (N % 2 == 0) continue;
    DeltaResult s =
        max_translation_element(A, N, n_scar, opt.r, DeltaMethod::automatic, {}, {}, &pcache);
    DeltaResult c = max_translation_element(control, N, {1, 0}, opt.r, DeltaMethod::automatic,
                                            {}, {}, &pcache);
    out.row(json{{"N", N},
                 {"scar_max_element", s.max_element},
                 {"control_max_element", c.max_element}});
  }
}

void cmd_verify(const Options& opt) {
  Tolerances tol = effective_tol(opt);
  SymplecticMatrix A1 = parse_matrix(kBase, 0);
  SymplecticMatrix A2 = parse_matrix("1,0,2,0;0,1,0,4;2,0,5,0;0,4,0,17", 0);
  bool all = true;
  auto prop = [&](const char* name, const std::function<std::string()>& body) {
    json row{{"property", name}};
    try {
      row["detail"] = body();
      row["pass"] = true;
    } catch (const std::exception& e) {
      row["pass"] = false;
      row["detail"] = e.what();
      all = false;
    }
    std::cout << row.dump() << "\n";
  };

  prop("propagator-egorov", [&] {
    double worst = 0;
    for (long N : {5L, 7L, 15L}) {
      Propagator P = solve_propagator(A1, N, 1, {}, tol);
      for (i64 a = -2; a <= 2; ++a)
        for (i64 b = -2; b <= 2; ++b) worst = std::max(worst, egorov_residual(P, {a, b}));
    }
    if (worst > tol.egorov) throw property_failure("residual " + std::to_string(worst));
    return "max residual " + std::to_string(worst);
  });

  prop("operator-laws", [&] {
    long N = 5;
    PhaseTable w(N);
    double worst = 0;
    for (i64 a = -2; a <= 2; ++a)
      for (i64 b = -2; b <= 2; ++b)
        for (i64 c = -2; c <= 2; ++c)
          for (i64 d = -2; d <= 2; ++d) {
            Mat Tm = to_dense(make_translation(N, 1, 1, {a, b})).M;
            Mat Tn = to_dense(make_translation(N, 1, 1, {c, d})).M;
            Mat Ts = to_dense(make_translation(N, 1, 1, {a + c, b + d})).M;
            worst = std::max(worst, (Tm * Tn - w(a * d - b * c) * Ts).norm());
          }
    if (worst > tol.algebra) throw property_failure("residual " + std::to_string(worst));
    return "composition residual " + std::to_string(worst);
  });

  prop("spectral-completeness", [&] {
    Propagator P = solve_propagator(A1, 7, 1, {}, tol);
    quantum_period(P, 0, {}, tol);
    eigen_decompose(P, {}, tol);
    Mat sum = Mat::Zero(P.D, P.D);
    for (const EigenSpace& E : P.eigen) sum += E.basis * E.basis.adjoint();
    double dev = (sum - Mat::Identity(P.D, P.D)).norm();
    if (dev > tol.spectral_sum) throw property_failure("completeness " + std::to_string(dev));
    return "period " + std::to_string(P.period) + ", completeness " + std::to_string(dev);
  });

  prop("crt-factorization", [&] {
    double wt = verify_tensor_translation(3, 5, {1, 1});
    TensorPropagatorReport rep = verify_tensor_propagator(A1, 3, 5, {}, tol);
    if (wt > tol.tensor_trans || rep.residual > tol.tensor_prop)
      throw property_failure("translation " + std::to_string(wt) + ", propagator " +
                             std::to_string(rep.residual));
    return "translation " + std::to_string(wt) + ", propagator " +
           std::to_string(rep.residual);
  });

  prop("counting-oracle", [&] {
    CountResult q = q_count_vector(A1, 7, {1, 0}, 1);
    CountResult r = r_count(A1, 7, 1);
    if (q.value != 15 || r.value != 15 || !q.crosschecked)
      throw property_failure("Q=" + q.value.get_str() + " R=" + r.value.get_str());
    return "Q = R = 15, crosschecked";
  });

  prop("moment-identity", [&] {
    MomentReport m = moment_identity_check(A1, 7, 1, {}, tol);
    if (!m.match) throw property_failure("lhs " + std::to_string(m.lhs));
    return "lhs matches rhs = " + m.rhs.get_str();
  });

  prop("fourth-moment-inequality", [&] {
    KrReport rep = kr_inequality_check(A1, 13, 1, {1, 0}, 1, DeltaMethod::automatic, {}, tol);
    if (!rep.holds) throw property_failure("violated");
    return "lhs " + std::to_string(rep.lhs) + " <= rhs " + std::to_string(rep.rhs);
  });

  prop("zero-divisor-consistency", [&] {
    double v4 = zero_divisor_bound_value(A2, 7, 1, {1, 0, 0, 0}, {}, tol);
    DeltaResult d1 = max_translation_element(A1, 7, {1, 0}, 1, DeltaMethod::dense, {}, tol);
    double dev = std::abs(v4 - d1.max_element);
    if (dev > 1e-8) throw property_failure("deviation " + std::to_string(dev));
    return "g=2 equals g=1 within " + std::to_string(dev);
  });

  prop("order-algebra", [&] {
    SplitMix64 rng(opt.seed);
    for (int rep = 0; rep < 20; ++rep) {
      u64 N = 2 + rng.below(2000);
      u64 fast = matrix_order(A1.A, N).order;
      ModMat M = ModMat::from(A1.A, N);
      ModMat P = M;
      u64 brute = 1;
      while (!P.is_identity()) {
        P = mul(P, M);
        ++brute;
      }
      if (fast != brute) throw property_failure("mismatch at N=" + std::to_string(N));
    }
    return "20 random orders match brute force";
  });

  prop("anatomy-thresholds", [&] {
    if (smooth_part_s_z(77, 10) != 60) throw property_failure("s_10(77) wrong");
    AnatomyThresholds th = anatomy_thresholds(1e6, 1);
    if (std::abs(th.V - 156.9) > 1.6 || std::abs(th.W - 160.7) > 1.7)
      throw property_failure("V/W off");
    return "s_10(77) = 60, V/W/D at 1e6 as expected";
  });

  prop("serialize-roundtrip", [&] {
    Propagator P = solve_propagator(A1, 7, 1, {}, tol);
    quantum_period(P, 0, {}, tol);
    eigen_decompose(P, {}, tol);
    Propagator Q = propagator_from_json(propagator_to_json(P));
    if ((Q.U - P.U).norm() != 0.0) throw property_failure("U changed");
    std::string text = propagator_to_json(P).dump();
    if (zlib_inflate_string(zlib_deflate_string(text)) != text)
      throw property_failure("zlib roundtrip failed");
    return "json and zlib roundtrips exact";
  });

  if (!opt.cache_dir.empty())
    prop("disk-cache", [&] {
      DiskCache cache(opt.cache_dir);
      Propagator P = solve_propagator(A1, 7, 1, {}, tol);
      quantum_period(P, 0, {}, tol);
      eigen_decompose(P, {}, tol);
      cache.store(P, tol);
      auto hit = cache.load(A1, 7, 1, tol);
      if (!hit || (hit->U - P.U).norm() != 0.0) throw property_failure("cache miss after store");
      return "store/load verified at " + opt.cache_dir;
    });

  if (!all) throw property_failure("verify: at least one property failed");
  std::cout << json{{"verdict", "all properties hold"}}.dump() << "\n";
}

// ---------------------------------------------------------------- main ---

void apply_config(Options& opt, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot read config file " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw invalid_input("config file is not valid JSON");
  // accept both the flag spelling (hyphens) and the underscore spelling
  auto get = [&](std::initializer_list<const char*> keys, auto& target) {
    for (const char* key : keys)
      if (j.contains(key)) {
        target = j.at(key).get<std::decay_t<decltype(target)>>();
        return;
      }
  };
  get({"matrix"}, opt.matrix);
  get({"g"}, opt.g);
  get({"N"}, opt.N);
  get({"N_range", "N-range"}, opt.N_range);
  get({"r"}, opt.r);
  get({"nu"}, opt.nu);
  for (const char* key : {"freqs", "freq"})
    if (j.contains(key)) {
      const json& f = j.at(key);
      opt.freqs.clear();
      if (f.is_string())
        opt.freqs.push_back(f.get<std::string>());
      else
        opt.freqs = f.get<std::vector<std::string>>();
      break;
    }
  get({"window_override", "window-override"}, opt.window_override);
  get({"D_override", "D-override"}, opt.D_override);
  get({"z_override", "z-override"}, opt.z_override);
  get({"tol"}, opt.tol);
  get({"cache_dir", "cache-dir"}, opt.cache_dir);
  get({"jobs"}, opt.jobs);
  get({"format"}, opt.format);
  get({"seed"}, opt.seed);
}

} // namespace

int main(int argc, char** argv) {
  Options opt;
  // config first, so explicit flags win
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config(opt, argv[i + 1]);
      } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
      }
    }

  CLI::App app{"quantized cat map toolkit"};
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config mirroring the experiment options");
  app.add_option("--matrix", opt.matrix, "symplectic matrix, inline rows a,b;c,d or a file");
  app.add_option("--g", opt.g, "half-dimension, checked against the matrix");
  app.add_option("--N", opt.N, "single inverse Planck constant");
  app.add_option("--N-range", opt.N_range, "inclusive range lo:hi");
  app.add_option("--r", opt.r, "twist, coprime to N");
  app.add_option("--nu", opt.nu, "moment half-exponent");
  app.add_option("--freq", opt.freqs, "frequency vector a,b[,c,d]; repeatable");
  app.add_option("--window-override", opt.window_override, "prime window V:W");
  app.add_option("--D-override", opt.D_override, "gcd threshold override");
  app.add_option("--z-override", opt.z_override, "smoothness cutoff override");
  app.add_option("--tol", opt.tol, "uniform tolerance override");
  app.add_option("--cache-dir", opt.cache_dir, "propagator disk cache directory");
  app.add_option("--jobs", opt.jobs, "worker count (tasks run sequentially when 1)");
  app.add_option("--format", opt.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", opt.seed, "seed for randomized spot checks");
  app.add_option("--p", opt.p, "prime modulus");
  app.add_option("--p-max", opt.p_max, "prime scan bound");
  app.add_option("--x", opt.x, "integer scan bound");
  app.add_option("--T", opt.T, "partial sum length");
  app.add_option("--alphas", opt.alphas, "comma separated coefficients")->delimiter(',');
  app.add_option("--lambdas", opt.lambdas, "comma separated multipliers")->delimiter(',');

  std::map<std::string, std::function<void(const Options&)>> commands{
      {"que-scan", cmd_que_scan},       {"good-primes", cmd_good_primes},
      {"good-integers", cmd_good_integers}, {"q-count", cmd_q_count},
      {"mordell", cmd_mordell},         {"moment-check", cmd_moment},
      {"crt-check", cmd_crt},           {"egorov-check", cmd_egorov},
      {"scar-demo", cmd_scar_demo},     {"verify", cmd_verify}};
  CLI::App* chosen = nullptr;
  for (auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, "");
    sub->callback([&chosen, sub]() { chosen = sub; });
  }
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (opt.jobs < 1) throw invalid_input("--jobs must be at least 1");
    commands.at(chosen->get_name())(opt);
  } catch (const property_failure& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "property_failure"}}.dump() << "\n";
    return 1;
  } catch (const resource_guard& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "resource_guard"}}.dump() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "invalid_input"}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
