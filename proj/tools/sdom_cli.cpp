// sdom: experiment driver for lattices, sparse dominations and weight constants.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sdom/config.hpp"
#include "sdom/generators.hpp"
#include "sdom/io.hpp"
#include "sdom/parallel.hpp"
#include "sdom/sparse.hpp"
#include "sdom/weights.hpp"

namespace fs = std::filesystem;
using namespace sdom;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

/// Raised for inconsistent artifacts; maps to the usage exit code.
struct ArtifactMismatch : Error {
  using Error::Error;
};

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  int jobs = 1;
  std::string generator;
  long n = 0;
  std::string ftuple_path;
  std::string weights_path;
  std::string lattice_path;
  std::string domination_path;
};

struct Setup {
  Config cfg;
  ExperimentConfig ex;
};

Setup make_setup(const Options& o) {
  Setup s;
  if (!o.config_path.empty()) s.cfg = Config::load(o.config_path);
  if (o.mode) s.cfg.set("lattice.mode", *o.mode);
  if (o.seed) {
    s.cfg.set("trials.seed", std::to_string(*o.seed));
    s.cfg.set("space.seed", std::to_string(*o.seed));
  }
  if (!o.generator.empty()) s.cfg.set("space.generator", o.generator);
  if (o.n > 0) s.cfg.set("space.n", std::to_string(o.n));
  if (!o.ftuple_path.empty()) s.cfg.set("domination.ftuple", o.ftuple_path);
  if (!o.weights_path.empty()) s.cfg.set("weights.file", o.weights_path);
  s.ex = experiment_from(s.cfg);
  return s;
}

MetricMeasureSpace load_space(const ExperimentConfig& ex) {
  if (!ex.space_file.empty()) {
    std::istringstream in(io::read_file(ex.space_file));
    return io::read_space(in);
  }
  return gen::make_space(ex.generator, ex.n, ex.space_seed);
}

std::string space_hash(const MetricMeasureSpace& space) { return io::fnv1a_hex(io::space_text(space)); }

io::Meta base_meta(const Setup& s, const MetricMeasureSpace& space) {
  return {{"config", s.ex.config_hash}, {"space", space_hash(space)}};
}

void check_meta(const io::Meta& meta, const io::Meta& want, const std::string& what) {
  for (const auto& [k, v] : want) {
    const auto it = meta.find(k);
    if (it == meta.end()) throw ArtifactMismatch(what + " has no " + k + " hash");
    if (it->second != v) throw ArtifactMismatch(what + " was made with " + k + " hash " + it->second + ", expected " + v);
  }
}

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  return (fs::path(o.out_dir) / name).string();
}

Lattice make_lattice(const Setup& s, const MetricMeasureSpace& space) {
  LatticeConstants K = default_constants(space, s.ex.mode, s.ex.C0, s.ex.A0);
  if (s.ex.k_min) K.k_min = *s.ex.k_min;
  if (s.ex.k_max) K.k_max = *s.ex.k_max;
  return build_lattice(space, K, s.ex.lattice_seed);
}

Lattice obtain_lattice(const Options& o, const Setup& s, const MetricMeasureSpace& space) {
  if (o.lattice_path.empty()) return make_lattice(s, space);
  io::Meta meta;
  std::istringstream in(io::read_file(o.lattice_path));
  Lattice lat = io::read_lattice(in, &meta);
  check_meta(meta, base_meta(s, space), o.lattice_path);
  const auto rep = check_lattice(lat, space);
  if (!rep.ok()) throw ArtifactMismatch(o.lattice_path + " fails validation: " + rep.summary());
  return lat;
}

FunctionTuple obtain_ftuple(const Setup& s, const MetricMeasureSpace& space, std::uint64_t seed) {
  if (!s.ex.ftuple_file.empty()) {
    std::istringstream in(io::read_file(s.ex.ftuple_file));
    return io::read_ftuple(in, s.ex.m, space.size());
  }
  std::mt19937_64 rng(seed);
  return gen::random_ftuple(space, s.ex.m, rng);
}

WeightTuple obtain_weights(const Setup& s, const MetricMeasureSpace& space, std::uint64_t seed) {
  if (!s.ex.weights_file.empty()) {
    std::istringstream in(io::read_file(s.ex.weights_file));
    return io::read_weights(in, s.ex.m, space.size());
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  return gen::random_weights(space.size(), s.ex.m, rng);
}

DominationConfig domination_config(const ExperimentConfig& ex) {
  DominationConfig dc;
  dc.mode = ex.trunc;
  dc.M_init = ex.M_init;
  dc.K_max = ex.K_max;
  dc.max_nodes = ex.max_nodes;
  dc.eta_min = ex.eta_min;
  return dc;
}

std::string header_lines(const Setup& s, const MetricMeasureSpace& space) {
  std::ostringstream os;
  os << "mode " << to_string(s.ex.mode) << "\n";
  os << "config " << s.ex.config_hash << "\n";
  os << "space " << space_hash(space) << " points=" << space.size() << "\n";
  return os.str();
}

int cmd_gen_space(const Options& o) {
  const Setup s = make_setup(o);
  const auto space = load_space(s.ex);
  std::ostringstream os;
  io::write_space(os, space, {{"config", s.ex.config_hash}, {"generator", s.ex.generator}});
  const auto path = out_path(o, "space.txt");
  io::write_file(path, os.str());
  std::cout << path << " " << space_hash(space) << "\n";
  return kPass;
}

int cmd_lattice(const Options& o) {
  const Setup s = make_setup(o);
  const auto space = load_space(s.ex);
  const Lattice lat = make_lattice(s, space);
  const auto rep = check_lattice(lat, space);
  std::ostringstream os;
  io::write_lattice(os, lat, base_meta(s, space));
  io::write_file(out_path(o, "lattice.txt"), os.str());

  std::ostringstream csv;
  csv << "level,cells,doubling,singletons\n";
  const auto& K = lat.constants();
  for (int k = K.k_min; k <= K.k_max; ++k) {
    std::size_t cells = 0, dbl = 0, single = 0;
    for (CellId id : lat.level(k)) {
      ++cells;
      dbl += lat.cell(id).is_doubling;
      single += lat.cell(id).members.size() == 1;
    }
    csv << k << ',' << cells << ',' << dbl << ',' << single << '\n';
  }
  io::write_file(out_path(o, "lattice_levels.csv"), csv.str());

  const auto lambda = DominatingFunction::fit_power(space);
  const auto decay = theta_decay_check(lat, space, lambda, s.ex.alpha, s.ex.m);
  std::size_t single_levels = 0;
  for (int k = K.k_min; k <= K.k_max; ++k) single_levels += lat.level(k).size() == 1;

  std::ostringstream txt;
  txt << header_lines(s, space) << "levels " << K.k_min << ".." << K.k_max << " cells=" << lat.size()
      << " single_cell_levels=" << single_levels << "\n"
      << "theta sup=" << io::fmt(decay.sup_theta) << " l0=" << decay.l0 << " chains=" << decay.chains.size()
      << " decay_violations=" << decay.violations << "\n"
      << rep.summary() << "\n";
  io::write_file(out_path(o, "lattice_report.txt"), txt.str());
  std::cout << txt.str();
  return rep.ok() ? kPass : kFail;
}

struct DominationRun {
  DominationResult result;
  DominationCheck check;
  bool sparse_ok = true;
  double eta = 1.0;
};

DominationRun run_domination(const Kernel& kernel, const FunctionTuple& f, const Lattice& lat,
                             const MetricMeasureSpace& space, const DominatingFunction& lambda,
                             const ExperimentConfig& ex) {
  DominationRun run;
  run.result = build_sparse_domination(kernel, f, {}, lat, space, lambda, ex.alpha, domination_config(ex));
  run.check = verify_domination(kernel, f, run.result, lat, space, ex.trunc);
  for (const auto& fam : run.result.layers) {
    const auto rep = check_sparseness(fam, lat, space, ex.eta_min);
    run.sparse_ok = run.sparse_ok && rep.ok();
    run.eta = std::min(run.eta, rep.worst_ratio);
  }
  return run;
}

bool domination_ok(const DominationRun& r) {
  const double c = r.result.C_dom;
  return std::isfinite(c) && r.check.min_C <= c * (1.0 + 1e-9) + 1e-300 && r.sparse_ok && r.result.certificates_ok();
}

int cmd_dominate(const Options& o) {
  const Setup s = make_setup(o);
  const auto space = load_space(s.ex);
  const Lattice lat = obtain_lattice(o, s, space);
  const auto lambda = DominatingFunction::fit_power(space);
  const Kernel kernel = Kernel::builtin(s.ex.family, lambda, s.ex.m, s.ex.delta, s.ex.CK);
  const FunctionTuple f = obtain_ftuple(s, space, s.ex.trial_seed);
  const DominationRun run = run_domination(kernel, f, lat, space, lambda, s.ex);

  std::ostringstream ft;
  io::write_ftuple(ft, f, base_meta(s, space));
  io::write_file(out_path(o, "ftuple.txt"), ft.str());
  io::Meta meta = base_meta(s, space);
  meta["ftuple"] = io::fnv1a_hex(ft.str());
  std::ostringstream dom;
  io::write_domination(dom, run.result, meta);
  io::write_file(out_path(o, "domination.txt"), dom.str());

  std::ostringstream csv;
  csv << "x,t_star,sparse,ratio\n";
  for (const auto& r : run.check.rows) csv << r.x << ',' << io::fmt(r.t_star) << ',' << io::fmt(r.sparse) << ',' << io::fmt(r.ratio) << '\n';
  io::write_file(out_path(o, "domination_slack.csv"), csv.str());

  std::ostringstream txt;
  txt << header_lines(s, space) << "root " << run.result.root << " depth=" << run.result.depth
      << " nodes=" << run.result.nodes << " cells_visited=" << run.result.cells_visited
      << " merged=" << run.result.merged_cells << "\n"
      << "Cdom " << io::fmt(run.result.C_dom) << " recomputed=" << io::fmt(run.check.min_C) << " worst_x=" << run.check.worst
      << "\n"
      << "layers " << run.result.layers.size() << " eta=" << io::fmt(run.eta) << " sparse=" << (run.sparse_ok ? "ok" : "FAIL")
      << "\n"
      << "certificates " << run.result.certificates.size() << " " << (run.result.certificates_ok() ? "ok" : "FAIL") << "\n"
      << (domination_ok(run) ? "PASS" : "FAIL") << "\n";
  io::write_file(out_path(o, "domination_report.txt"), txt.str());
  std::cout << txt.str();
  return domination_ok(run) ? kPass : kFail;
}

int cmd_weights(const Options& o) {
  const Setup s = make_setup(o);
  const auto space = load_space(s.ex);
  const Lattice lat = obtain_lattice(o, s, space);
  const auto lambda = DominatingFunction::fit_power(space);
  const Kernel kernel = Kernel::builtin(s.ex.family, lambda, s.ex.m, s.ex.delta, s.ex.CK);
  const ExponentTuple P(s.ex.exponents);
  const WeightTuple w = obtain_weights(s, space, s.ex.trial_seed);
  w.validate(space.size());

  const auto ap = ap_characteristic(w, P, s.ex.rho, space);
  std::ostringstream txt;
  txt << header_lines(s, space) << "p " << io::fmt(P.p()) << " regime " << to_string(P.regime()) << "\n"
      << "A_P " << io::fmt(ap.value) << " power_normalized=" << io::fmt(ap.power_normalized(P)) << " balls=" << ap.balls
      << " skipped=" << ap.skipped << (ap.infinite ? " infinite" : "") << "\n";
  bool ok = true;
  std::ostringstream csv;
  csv << "slot,lhs,rhs,max_rel_err,ok\n";
  if (P.p() > 1.0) {
    for (int i = 0; i < P.m(); ++i) {
      const auto d = check_duality_identity(w, P, i, s.ex.rho, space, s.ex.tolerance);
      csv << i + 1 << ',' << io::fmt(d.lhs) << ',' << io::fmt(d.rhs) << ',' << io::fmt(d.max_rel_err) << ',' << d.ok << '\n';
      ok = ok && d.ok;
    }
  }
  io::write_file(out_path(o, "duality.csv"), csv.str());
  if (P.all_greater_than_one()) {
    std::vector<SparseFamily> layers;
    if (P.regime() != Regime::Case1) {
      const FunctionTuple f = obtain_ftuple(s, space, s.ex.trial_seed);
      layers = build_sparse_domination(kernel, f, {}, lat, space, lambda, s.ex.alpha, domination_config(s.ex)).layers;
    }
    const auto c = c_omega(w, P, s.ex.alpha, space, lat, layers);
    txt << "C_omega " << io::fmt(c.value) << " cells=" << c.cells << " skipped=" << c.skipped << " argmax="
        << (c.argmax ? std::to_string(*c.argmax) : "-") << "\n";
  }
  txt << "duality " << (ok ? "ok" : "FAIL") << "\n" << (ok ? "PASS" : "FAIL") << "\n";
  io::write_file(out_path(o, "weights_report.txt"), txt.str());
  std::cout << txt.str();
  return ok ? kPass : kFail;
}

struct TrialRow {
  std::uint64_t seed = 0;
  double C_dom = 0.0;
  double recomputed = 0.0;
  int depth = 0;
  std::size_t nodes = 0;
  double eta = 1.0;
  bool certificates = false;
  bool sparse = false;
  double comparison = 0.0;
  double sparse_ratio = 0.0;
  double T_ratio = 0.0;
  double duality_err = 0.0;
  bool pass = false;
  std::string error;
};

int cmd_verify(const Options& o) {
  const Setup s = make_setup(o);
  const auto space = load_space(s.ex);
  const Lattice lat = obtain_lattice(o, s, space);
  const auto lattice_rep = check_lattice(lat, space);
  const auto lambda = DominatingFunction::fit_power(space);
  const Kernel kernel = Kernel::builtin(s.ex.family, lambda, s.ex.m, s.ex.delta, s.ex.CK);
  const ExponentTuple P(s.ex.exponents);
  const bool weighted = P.all_greater_than_one();

  if (!o.domination_path.empty()) {
    io::Meta meta;
    std::istringstream in(io::read_file(o.domination_path));
    const DominationResult replay = io::read_domination(in, &meta);
    check_meta(meta, base_meta(s, space), o.domination_path);
    for (const auto& fam : replay.layers)
      for (CellId id : fam.cells)
        if (id >= lat.size()) throw ArtifactMismatch(o.domination_path + " cites unknown cell " + std::to_string(id));
  }

  std::vector<TrialRow> rows(static_cast<std::size_t>(s.ex.trials));
  parallel_for(rows.size(), o.jobs, [&](std::size_t t) {
    TrialRow& row = rows[t];
    row.seed = s.ex.trial_seed + t;
    try {
      std::mt19937_64 rng(row.seed);
      const FunctionTuple f = gen::random_ftuple(space, s.ex.m, rng);
      const WeightTuple w = gen::random_weights(space.size(), s.ex.m, rng);
      const DominationRun run = run_domination(kernel, f, lat, space, lambda, s.ex);
      row.C_dom = run.result.C_dom;
      row.recomputed = run.check.min_C;
      row.depth = run.result.depth;
      row.nodes = run.result.nodes;
      row.eta = run.eta;
      row.certificates = run.result.certificates_ok();
      row.sparse = run.sparse_ok;
      const auto cmp = check_pointwise_comparison(kernel, space, f, run.result.root, lat, lambda, s.ex.trunc);
      row.comparison = cmp.finite ? cmp.sup_ratio : INFINITY;
      bool ok = domination_ok(run) && cmp.finite;
      if (weighted) {
        const auto sb = verify_sparse_weighted_bound(run.result.layers, f, w, P, s.ex.alpha, space, lat, s.ex.slack);
        const auto tb = verify_T_weighted_bound(kernel, f, w, P, run.result, lat, space, s.ex.trunc, s.ex.slack);
        row.sparse_ratio = sb.ratio;
        row.T_ratio = tb.ratio;
        ok = ok && sb.ok && tb.ok;
      }
      if (P.p() > 1.0)
        for (int i = 0; i < P.m(); ++i) {
          const auto d = check_duality_identity(w, P, i, s.ex.rho, space, s.ex.tolerance);
          row.duality_err = std::max(row.duality_err, d.max_rel_err);
          ok = ok && d.ok;
        }
      row.pass = ok;
    } catch (const BudgetExceeded& e) {
      row.error = e.what();
    }
  });

  std::ostringstream csv;
  csv << "trial,seed,Cdom,recomputed,depth,nodes,eta,certificates,sparse,comparison,sparse_ratio,T_ratio,duality_err,pass\n";
  std::size_t passed = 0;
  double cmin = INFINITY, cmax = 0.0, smax = 0.0, tmax = 0.0, cmpmax = 0.0, dmax = 0.0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& r = rows[t];
    csv << t << ',' << r.seed << ',' << io::fmt(r.C_dom) << ',' << io::fmt(r.recomputed) << ',' << r.depth << ','
        << r.nodes << ',' << io::fmt(r.eta) << ',' << r.certificates << ',' << r.sparse << ',' << io::fmt(r.comparison)
        << ',' << io::fmt(r.sparse_ratio) << ',' << io::fmt(r.T_ratio) << ',' << io::fmt(r.duality_err) << ','
        << r.pass << '\n';
    passed += r.pass;
    cmin = std::min(cmin, r.C_dom);
    cmax = std::max(cmax, r.C_dom);
    smax = std::max(smax, r.sparse_ratio);
    tmax = std::max(tmax, r.T_ratio);
    cmpmax = std::max(cmpmax, r.comparison);
    dmax = std::max(dmax, r.duality_err);
  }
  io::write_file(out_path(o, "verify.csv"), csv.str());

  const bool all = passed == rows.size() && lattice_rep.ok();
  std::ostringstream txt;
  txt << header_lines(s, space) << "lattice " << (lattice_rep.ok() ? "ok" : "FAIL") << " cells=" << lat.size() << "\n"
      << "trials " << rows.size() << " passed=" << passed << "\n"
      << "Cdom min=" << io::fmt(rows.empty() ? 0.0 : cmin) << " max=" << io::fmt(cmax) << "\n"
      << "comparison sup=" << io::fmt(cmpmax) << "\n"
      << "p " << io::fmt(P.p()) << " regime " << to_string(P.regime()) << " slack=" << io::fmt(s.ex.slack) << "\n"
      << "sparse_ratio max=" << io::fmt(smax) << "\n"
      << "T_ratio max=" << io::fmt(tmax) << "\n"
      << "duality max_rel_err=" << io::fmt(dmax) << "\n";
  for (std::size_t t = 0; t < rows.size(); ++t)
    if (!rows[t].error.empty()) txt << "trial " << t << " error: " << rows[t].error << "\n";
  txt << (all ? "PASS" : "FAIL") << "\n";
  io::write_file(out_path(o, "verify_report.txt"), txt.str());
  std::cout << txt.str();
  return all ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sdom: lattices, sparse domination and weighted bounds on finite metric measure spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::uint64_t seed = 0;
  std::string mode;
  app.add_option("--config", o.config_path, "Experiment config file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for generators and trials");
  auto* mode_opt = app.add_option("--mode", mode, "Lattice mode")->check(CLI::IsMember({"strict", "lab"}));
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen-space", "Write a generated space file");
  gen->add_option("--generator", o.generator, "Generator name");
  gen->add_option("--n", o.n, "Number of points")->check(CLI::PositiveNumber);
  auto* lat = app.add_subcommand("lattice", "Build and validate a lattice");
  auto* dom = app.add_subcommand("dominate", "Build a sparse domination");
  dom->add_option("--ftuple", o.ftuple_path, "Function tuple file")->check(CLI::ExistingFile);
  dom->add_option("--lattice", o.lattice_path, "Lattice file")->check(CLI::ExistingFile);
  auto* wts = app.add_subcommand("weights", "A_P characteristic, duality and C_omega");
  wts->add_option("--weights", o.weights_path, "Weight file")->check(CLI::ExistingFile);
  wts->add_option("--ftuple", o.ftuple_path, "Function tuple file")->check(CLI::ExistingFile);
  wts->add_option("--lattice", o.lattice_path, "Lattice file")->check(CLI::ExistingFile);
  auto* ver = app.add_subcommand("verify", "Run the full randomized verification");
  ver->add_option("--lattice", o.lattice_path, "Lattice file")->check(CLI::ExistingFile);
  ver->add_option("--domination", o.domination_path, "Domination file to replay")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kPass : kUsage;
  }
  if (*seed_opt) o.seed = seed;
  if (*mode_opt) o.mode = mode;

  try {
    if (*gen) return cmd_gen_space(o);
    if (*lat) return cmd_lattice(o);
    if (*dom) return cmd_dominate(o);
    if (*wts) return cmd_weights(o);
    if (*ver) return cmd_verify(o);
  } catch (const ArtifactMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasibleConstants& e) {
    std::cerr << "error: " << e.what() << " (level " << e.level() << ")\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
