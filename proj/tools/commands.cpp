#include "gerbelab/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "gerbelab/cech.hpp"
#include "gerbelab/cli/io.hpp"
#include "gerbelab/connection.hpp"
#include "gerbelab/examples.hpp"
#include "gerbelab/lifting.hpp"
#include "gerbelab/schwinger.hpp"

namespace gerbelab::cli {

namespace {

std::string simplex_text(const Simplex& s) {
  std::vector<std::string> parts;
  for (int v : s) parts.push_back(std::to_string(v));
  return "[" + fmt::format("{}", fmt::join(parts, ", ")) + "]";
}

std::vector<long long> to_list(const IntCochain& c) { return {c.values.begin(), c.values.end()}; }

std::vector<long long> to_list(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::string big_list(const std::vector<BigInt>& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) parts.push_back(to_string(x));
  return "[" + fmt::format("{}", fmt::join(parts, ", ")) + "]";
}

void record_inputs(Report& r, const io::Inputs& inputs) {
  for (const auto& [path, digest] : inputs.digests) r.input(path, digest);
}

void describe_nerve(Report& r, const Nerve& n) {
  r.begin("nerve");
  r.put("vertices", n.vertex_count());
  r.put("dimension", n.dimension());
  std::vector<long long> counts;
  for (int k = 0; k <= std::max(n.dimension(), 0); ++k) counts.push_back(static_cast<long long>(n.count(k)));
  r.put("simplices", counts);
  r.put("euler characteristic", static_cast<long long>(n.euler_characteristic()));
  r.end();
}

/// d_{k+1} d_k vanishes, modulo n for Z/n coefficients.
bool coboundary_squares_to_zero(const TwistedLocalSystem& sys, int k) {
  const IntMatrix d0 = coboundary_matrix(sys, k), d1 = coboundary_matrix(sys, k + 1);
  if (d0.rows() == 0 || d1.rows() == 0) return true;
  const IntMatrix p = d1 * d0;
  const std::int64_t n = sys.coefficients().kind() == CoeffKind::IntegersMod ? sys.coefficients().modulus() : 0;
  for (std::size_t r = 0; r < p.rows(); ++r)
    for (std::size_t c = 0; c < p.cols(); ++c) {
      const BigInt v = n ? BigInt(p(r, c) % n) : p(r, c);
      if (v != 0) return false;
    }
  return true;
}

}  // namespace

int exit_code(Errc code) {
  switch (code) {
    case Errc::NotACocycle:
    case Errc::NotU1Cocycle:
    case Errc::LiftNotIntegral:
    case Errc::ValueNotInKernel:
    case Errc::CocycleIdentityViolated:
    case Errc::TruncationTooSmall:
      return kExitViolation;
    default:
      return kExitInvalidInput;
  }
}

// ---------------------------------------------------------------- cohomology

Report cmd_cohomology(const std::string& echo, const Options& opt, const std::string& system_path,
                      std::optional<int> degree) {
  (void)opt;
  Report r(echo);
  io::Inputs inputs;
  io::Document doc = io::load(system_path, "system");
  inputs.record(doc);
  TwistedLocalSystem sys = io::read_system(doc, inputs);
  record_inputs(r, inputs);

  const Nerve& n = sys.nerve();
  describe_nerve(r, n);
  r.put("coefficients", sys.coefficients().name());
  r.put("negative edges", static_cast<long long>(std::count(sys.twist().begin(), sys.twist().end(), -1)));

  int lo = 0, hi = std::max(n.dimension(), 0);
  if (degree) {
    if (*degree < 0 || *degree > Nerve::kMaxDimension)
      throw Error(Errc::DegreeOverflow, fmt::format("degree {} outside [0, {}]", *degree, Nerve::kMaxDimension));
    lo = hi = *degree;
  }
  r.begin("cohomology");
  for (int k = lo; k <= hi; ++k) {
    CohomologyGroup g = cohomology(sys, k);
    r.begin(fmt::format("H^{}", k));
    r.put("group", g.describe());
    if (g.dimension) {
      r.put("dimension", *g.dimension);
    } else {
      r.put("free rank", g.free_rank);
      r.put("torsion", big_list(g.torsion));
    }
    r.end();
  }
  r.end();

  bool squares = true;
  for (int k = 0; k + 1 < std::max(n.dimension(), 0); ++k) squares = squares && coboundary_squares_to_zero(sys, k);
  r.verdict("coboundary squares to zero", squares);
  return r;
}

// ---------------------------------------------------------------- obstruction

Report cmd_obstruction(const std::string& echo, const Options& opt, const std::string& transition_path,
                       const std::string& extension_path, const std::optional<std::string>& lifts_path) {
  (void)opt;
  Report r(echo);
  io::Inputs inputs;
  io::Document tdoc = io::load(transition_path, "transition");
  inputs.record(tdoc);
  TransitionData td = io::read_transition(tdoc, inputs);
  io::Document edoc = io::load(extension_path, "extension");
  inputs.record(edoc);
  CentralExtension ext = io::read_extension(edoc);

  ExtensionReport er = verify_extension(ext);
  if (!er.ok()) throw Error(Errc::InvalidGroup, fmt::format("extension: {}: {}", to_string(er.defect), er.detail));
  if (!(ext.base == td.group)) throw Error(Errc::ShapeMismatch, "the extension's base is not the transition group");
  if (ext.sigma.permutation() != td.sigma.permutation())
    throw Error(Errc::ShapeMismatch, "the extension's sigma differs from the transition sigma");

  LiftChoice lifts = section_lifts(td, ext);
  if (lifts_path) {
    io::Document ldoc = io::load(*lifts_path, "lifts");
    inputs.record(ldoc);
    lifts = io::read_lifts(ldoc, td, ext);
  }
  record_inputs(r, inputs);
  describe_nerve(r, td.nerve);
  r.put("group order", td.group.order());
  r.put("extension order", ext.hat.order());
  r.put("kernel", ext.kernel_coefficients().name());

  CocycleReport cr = check_twisted_cocycle(td);
  if (!cr.ok) {
    r.verdict("transition cocycle", false,
              fmt::format("triangle {}: {}", cr.triangle ? simplex_text(*cr.triangle) : "?", cr.detail));
    return r;
  }
  r.verdict("transition cocycle", true);

  Obstruction ob = obstruction(td, ext, lifts);
  r.put("lifts", to_list(lifts.hat));
  r.put("cocycle", to_list(ob.cocycle));
  r.put("nonzero entries",
        static_cast<long long>(std::count_if(ob.cocycle.values.begin(), ob.cocycle.values.end(),
                                             [](std::int64_t v) { return v != 0; })));
  r.put("tetrahedra checked", ob.tetrahedra_checked);
  r.put("rearranged identity", ob.rearranged_identity_holds);

  Trivialization t = trivialize(ob);
  if (t.trivial()) {
    r.put("class", "TRIVIAL");
    r.put("correction", to_list(*t.correction));
    r.put("strict lifts", to_list(t.lifts->hat));
    CocycleReport strict = check_strict_lift(td, ext, *t.lifts);
    r.verdict("strict lift", strict.ok,
              strict.ok ? std::string{} : fmt::format("triangle {}", simplex_text(strict.triangle.value_or(Simplex{}))));
  } else {
    r.put("class", t.order ? fmt::format("NONTRIVIAL (order {})", to_string(*t.order)) : "NONTRIVIAL (infinite order)");
    r.begin("certificate");
    r.put("functional", big_list(t.certificate->functional));
    r.put("modulus", to_string(t.certificate->modulus));
    r.end();
    r.verdict("certificate", verify_certificate(*t.certificate, ob.cocycle, ob.system));
  }

  auto module = rank_one_module(ob);
  r.put("rank-one gerbe module", module.has_value());
  if (module) {
    GerbeModuleReport gm = check_gerbe_module(td.nerve, *module, obstruction_phases(ob));
    r.put("gerbe module deviation", gm.max_deviation);
    r.verdict("gerbe module", gm.ok, gm.ok ? std::string{} : simplex_text(gm.worst.value_or(Simplex{})));
  }
  return r;
}

// ---------------------------------------------------------------- schwinger

std::optional<SchwingerMode> parse_schwinger_mode(const std::string& name) {
  if (name == "trace") return SchwingerMode::Trace;
  if (name == "residue") return SchwingerMode::Residue;
  if (name == "identity") return SchwingerMode::Identity;
  if (name == "jacobi") return SchwingerMode::Jacobi;
  if (name == "defect") return SchwingerMode::Defect;
  if (name == "curvature") return SchwingerMode::Curvature;
  return std::nullopt;
}

namespace {

const char* mode_name(SchwingerMode m) {
  switch (m) {
    case SchwingerMode::Trace: return "trace";
    case SchwingerMode::Residue: return "residue";
    case SchwingerMode::Identity: return "identity";
    case SchwingerMode::Jacobi: return "jacobi";
    case SchwingerMode::Defect: return "defect";
    case SchwingerMode::Curvature: return "curvature";
  }
  return "?";
}

std::size_t loops_needed(SchwingerMode m) {
  switch (m) {
    case SchwingerMode::Defect: return 1;
    case SchwingerMode::Identity:
    case SchwingerMode::Jacobi: return 3;
    default: return 2;
  }
}

/// Cyclic sum of the truncated trace form, defined once K covers the bands
/// of the brackets.
std::optional<double> trace_identity_defect(const LoopPolynomial& x, const LoopPolynomial& y, const LoopPolynomial& z,
                                            int k) {
  const LoopPolynomial xy = bracket(x, y), yz = bracket(y, z), zx = bracket(z, x);
  if (k < std::max({xy.band(), yz.band(), zx.band(), 1})) return std::nullopt;
  return std::abs(schwinger_trace(xy, z, k) + schwinger_trace(yz, x, k) + schwinger_trace(zx, y, k));
}

std::string window_text(ModeWindow w) { return fmt::format("[{}, {}]", w.lo, w.hi); }

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Report cmd_schwinger(const std::string& echo, const Options& opt, const SchwingerArgs& args) {
  Report r(echo);
  const std::size_t need = loops_needed(args.mode);
  if (args.loop_paths.size() > need)
    throw Error(Errc::Parse, fmt::format("mode {} takes at most {} loop files", mode_name(args.mode), need));

  std::vector<LoopPolynomial> loops;
  std::vector<std::string> sources;
  io::Inputs inputs;
  for (const auto& p : args.loop_paths) {
    io::Document doc = io::load(p, "loop");
    inputs.record(doc);
    loops.push_back(io::read_loop(doc));
    sources.push_back(p);
  }
  record_inputs(r, inputs);
  int size = loops.empty() ? args.size : loops.front().size();
  if (size < 1 || size > 64) throw Error(Errc::ShapeMismatch, fmt::format("loop size {}", size));
  if (args.band < 0 || args.band > 64) throw Error(Errc::ShapeMismatch, fmt::format("band {}", args.band));
  std::mt19937_64 rng(opt.seed);
  while (loops.size() < need) {
    loops.push_back(LoopPolynomial::random(rng, size, args.band, args.skew_hermitian));
    sources.push_back(fmt::format("random (seed {})", opt.seed));
  }
  for (const auto& l : loops)
    if (l.size() != size) throw Error(Errc::ShapeMismatch, "loops of different sizes");

  const double tol = opt.tolerance.value_or(1e-10);
  r.put("mode", mode_name(args.mode));
  r.put("tolerance", tol);
  std::vector<std::vector<Report::Cell>> rows;
  static constexpr const char* kNames[] = {"X", "Y", "Z"};
  for (std::size_t i = 0; i < loops.size(); ++i)
    rows.push_back({kNames[i], sources[i], loops[i].size(), loops[i].band(), loops[i].norm(),
                    loops[i].skew_hermitian() ? "yes" : "no"});
  r.table("loops", {"loop", "source", "size", "band", "norm", "skew"}, rows);

  int band = 0;
  for (const auto& l : loops) band = std::max(band, l.band());

  const LoopPolynomial& x = loops[0];
  switch (args.mode) {
    case SchwingerMode::Trace:
    case SchwingerMode::Residue: {
      const LoopPolynomial& y = loops[1];
      const int k0 = opt.truncation.value_or(std::max(band, 1));
      if (k0 < 1) throw Error(Errc::TruncationTooSmall, fmt::format("truncation {} < 1", k0));
      if (k0 < std::max(band, 1) && !args.allow_small)
        throw Error(Errc::TruncationTooSmall, fmt::format("truncation {} below band {}", k0, band));
      const double scale = tolerance_scale({&x, &y});
      const Complex residue = schwinger_residue(x, y);
      r.put("scale", scale);
      r.put("residue re", residue.real());
      r.put("residue im", residue.imag());
      rows.clear();
      double worst = 0.0, spread = 0.0;
      std::optional<Complex> first;
      Complex headline{};
      for (int k : {k0, k0 + 1, k0 + 5}) {
        const Complex t = schwinger_trace(x, y, k, true);
        const bool exact = k >= std::max(band, 1);
        const double dev = std::abs(t - residue);
        if (k == k0) headline = t;
        if (exact) {
          worst = std::max(worst, dev);
          if (!first) first = t;
          spread = std::max(spread, std::abs(t - *first));
        }
        rows.push_back({k, t.real(), t.imag(), dev, exact ? "yes" : "no"});
      }
      r.put("trace re", headline.real());
      r.put("trace im", headline.imag());
      r.table("convergence", {"K", "trace re", "trace im", "|trace - residue|", "K >= band"}, rows);
      r.verdict("trace = residue", worst <= tol * scale, fmt::format("max {} vs {}", Report::format(worst),
                                                                     Report::format(tol * scale)));
      r.verdict("flat across K", spread <= tol * scale, fmt::format("spread {}", Report::format(spread)));
      break;
    }
    case SchwingerMode::Identity:
    case SchwingerMode::Jacobi: {
      const LoopPolynomial &y = loops[1], &z = loops[2];
      const double scale = tolerance_scale({&x, &y, &z});
      r.put("scale", scale);
      double value;
      if (args.mode == SchwingerMode::Identity) {
        value = cocycle_identity_defect(x, y, z);
        r.put("cocycle identity defect", value);
      } else {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        CentralElement a{x, Complex(u(rng), u(rng))}, b{y, Complex(u(rng), u(rng))}, c{z, Complex(u(rng), u(rng))};
        value = jacobi_defect(a, b, c);
        r.put("jacobi defect", value);
      }
      const int k0 = opt.truncation.value_or(2 * std::max(band, 1));
      if (k0 < 1) throw Error(Errc::TruncationTooSmall, fmt::format("truncation {} < 1", k0));
      rows.clear();
      double worst = value;
      for (int k : {k0, k0 + 1, k0 + 5}) {
        auto d = trace_identity_defect(x, y, z, k);
        if (d) worst = std::max(worst, *d);
        rows.push_back({k, d ? Report::Cell(*d) : Report::Cell("n/a")});
      }
      r.table("convergence", {"K", "trace-form cyclic defect"}, rows);
      r.verdict(args.mode == SchwingerMode::Identity ? "cocycle identity" : "jacobi identity", worst <= tol * scale,
                fmt::format("max {} vs {}", Report::format(worst), Report::format(tol * scale)));
      break;
    }
    case SchwingerMode::Defect: {
      const int k0 = opt.truncation.value_or(band + 1);
      const double scale = std::max(1.0, x.norm());
      r.put("scale", scale);
      rows.clear();
      double worst = 0.0;
      for (int k : {k0, k0 + 1, k0 + 5}) {
        DiracDefect d = dirac_defect(x, k);
        const double edge = max_abs(d.computed - d.predicted);
        worst = std::max(worst, d.interior_deviation);
        rows.push_back({k, window_text(d.window), d.interior_deviation, edge});
      }
      r.table("convergence", {"K", "window", "interior deviation", "full deviation"}, rows);
      r.verdict("[D, M_X] = -i M_X'", worst <= tol * scale,
                fmt::format("max {} vs {}", Report::format(worst), Report::format(tol * scale)));
      break;
    }
    case SchwingerMode::Curvature: {
      const LoopPolynomial& y = loops[1];
      const int k0 = opt.truncation.value_or(2 * band + 1);
      const double scale = tolerance_scale({&x, &y}) * std::pow(band + 1, 2);
      r.put("scale", scale);
      rows.clear();
      double worst = 0.0;
      for (int k : {k0, k0 + 1, k0 + 5}) {
        DefectCurvature c = defect_curvature(x, y, k);
        worst = std::max(worst, c.deviation);
        rows.push_back({k, window_text(c.window), max_abs(c.interior), c.deviation});
      }
      r.table("convergence", {"K", "window", "curvature max", "deviation from closed form"}, rows);
      r.verdict("closed form", worst <= tol * scale,
                fmt::format("max {} vs {}", Report::format(worst), Report::format(tol * scale)));
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------- chern

namespace {

/// Minimum residual reduction under one halving of h, and the floor below
/// which a residual counts as exact.
constexpr double kMinConvergenceFactor = 2.5;
constexpr double kExactResidual = 1e-12;

}  // namespace

Report cmd_chern(const std::string& echo, const Options& opt, const std::string& bundle_path) {
  Report r(echo);
  io::Document doc = io::load(bundle_path, "bundle");
  r.input(doc.path.generic_string(), doc.digest);
  io::BundleSpec spec = io::read_bundle(doc);
  const int grid = opt.grid.value_or(spec.grid);
  if (grid < 3 || grid > 2001) throw Error(Errc::GridTooCoarse, fmt::format("grid {} outside [3, 2001]", grid));
  const int fine = 2 * grid - 1;
  const double tol = opt.tolerance.value_or(1e-2);

  r.put("rank", spec.model.rank);
  r.put("grid", grid);
  r.put("refined grid", fine);
  r.put("partition inner", spec.model.partition.inner);
  r.put("partition outer", spec.model.partition.outer);
  r.put("perturbations", spec.perturbations.size());
  r.put("tolerance", tol);

  struct Level {
    SampledBundle data;
    GaugeResidual forward, backward;
    ChernEstimate chern;
  };
  auto run = [&](int points) {
    Level l{io::sample_bundle(spec, points), {}, {}, {}};
    l.forward = gauge_residual(l.data, 0, 1);
    l.backward = gauge_residual(l.data, 1, 0);
    l.chern = chern_number(l.data);
    return l;
  };
  const Level coarse = run(grid), refined = run(fine);
  r.put("unitarity drift", std::max(coarse.data.max_unitarity_drift, refined.data.max_unitarity_drift));

  std::vector<std::vector<Report::Cell>> rows;
  for (const Level* l : {&coarse, &refined}) {
    const int n = l->data.model.base.resolution();
    for (auto [label, g] : {std::pair{"0 -> 1", &l->forward}, std::pair{"1 -> 0", &l->backward}})
      rows.push_back({n, label, g->connection, g->curvature, static_cast<long long>(g->points), g->worst[0], g->worst[1]});
  }
  r.table("gauge residuals", {"grid", "charts", "connection", "curvature", "points", "worst x", "worst y"}, rows);

  auto worst_of = [](const Level& l) { return std::max(l.forward.max(), l.backward.max()); };
  const double before = worst_of(coarse), after = worst_of(refined);
  const double factor = after > 0.0 ? before / after : std::numeric_limits<double>::infinity();
  r.put("residual factor", factor);
  const bool converges = after <= kExactResidual || factor >= kMinConvergenceFactor;
  const GaugeResidual& bad = refined.forward.max() >= refined.backward.max() ? refined.forward : refined.backward;
  const int bad_chart = &bad == &refined.forward ? 1 : 0;
  r.verdict("gauge law", converges,
            converges ? fmt::format("factor >= {}", kMinConvergenceFactor)
                      : fmt::format("factor {} at chart {} ({}, {})", Report::format(factor), bad_chart,
                                    Report::format(bad.worst[0]), Report::format(bad.worst[1])));

  rows.clear();
  for (const Level* l : {&coarse, &refined})
    rows.push_back({l->data.model.base.resolution(), l->chern.value, l->chern.imaginary,
                    static_cast<long long>(l->chern.nearest)});
  r.table("chern estimates", {"grid", "value", "imaginary", "nearest"}, rows);
  const ChernEstimate& c = refined.chern;
  r.put("chern", fmt::format("{:.3f}", c.value == 0.0 ? 0.0 : c.value));
  r.put("nearest", static_cast<long long>(c.nearest));
  const double off = std::abs(c.value - static_cast<double>(c.nearest));
  r.verdict("integrality", off <= tol && std::abs(c.imaginary) <= tol,
            fmt::format("|chern - nearest| = {}", Report::format(off)));
  return r;
}

// ---------------------------------------------------------------- verify

namespace {

TwistedLocalSystem random_system(std::mt19937_64& rng, const Nerve& n, const CoefficientGroup& coeff) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<int> vs(static_cast<std::size_t>(n.vertex_count()));
  for (auto& s : vs) s = coin(rng) ? 1 : -1;
  std::vector<int> eps;
  for (const auto& e : n.simplices(1)) eps.push_back(vs[static_cast<std::size_t>(e[0])] * vs[static_cast<std::size_t>(e[1])]);
  return TwistedLocalSystem(n, coeff, std::move(eps));
}

IntCochain random_cochain(std::mt19937_64& rng, const Nerve& n, int k, std::int64_t modulus) {
  std::uniform_int_distribution<std::int64_t> u(0, modulus - 1);
  IntCochain c = zero_cochain(n, k);
  for (auto& v : c.values) v = u(rng);
  return c;
}

void verify_nerve(Report& r) {
  const bool ok = complexes::rp2_six().euler_characteristic() == 1 && complexes::sphere(2).euler_characteristic() == 2 &&
                  complexes::sphere(3).euler_characteristic() == 0 && complexes::circle().euler_characteristic() == 0 &&
                  complexes::rp2_times_circle().euler_characteristic() == 0;
  r.verdict("nerve: euler characteristics", ok);
}

void verify_cech(Report& r, std::mt19937_64& rng) {
  const std::vector<Nerve> nerves{complexes::circle(), complexes::sphere(2), complexes::rp2_six()};
  int trials = 0;
  bool dd = true;
  for (int t = 0; t < 60; ++t) {
    const Nerve& n = nerves[static_cast<std::size_t>(t) % nerves.size()];
    const std::int64_t mod = 2 + t % 5;
    TwistedLocalSystem sys =
        random_system(rng, n, CoefficientGroup::integers_mod(mod, t % 2 ? Involution::Negation : Involution::Identity));
    for (int k = 0; k + 2 <= n.dimension(); ++k) {
      IntCochain c = random_cochain(rng, n, k, mod);
      IntCochain dd_c = coboundary(coboundary(c, sys), sys);
      dd = dd && std::all_of(dd_c.values.begin(), dd_c.values.end(), [](std::int64_t v) { return v == 0; });
      ++trials;
    }
  }
  r.verdict("cech: coboundary squares to zero", dd, fmt::format("{} cochains", trials));

  auto rp2 = TwistedLocalSystem::untwisted(complexes::rp2_six(), CoefficientGroup::integers_mod(2));
  bool dims = true;
  for (int k = 0; k <= 2; ++k) dims = dims && cohomology(rp2, k).describe() == "dim 1";
  r.verdict("cech: RP2 mod 2 dims (1, 1, 1)", dims);

  const Nerve circle = complexes::circle();
  std::vector<int> mobius(circle.count(1), 1);
  mobius.back() = -1;
  TwistedLocalSystem m(circle, CoefficientGroup::integers(Involution::Negation), mobius);
  r.verdict("cech: Mobius circle H0 = 0, H1 = Z/2",
            cohomology(m, 0).trivial() && cohomology(m, 1).describe() == "free 0, torsion [2]");

  auto s4 = TwistedLocalSystem::untwisted(complexes::sphere(3), CoefficientGroup::circle());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool bock = true;
  for (int t = 0; t < 20; ++t) {
    RealCochain phi = zero_real_cochain(s4.nerve(), 1);
    for (auto& v : phi.values) v = u(rng);
    RealCochain a = coboundary(phi, s4);
    bock = bock && bockstein_dd(a, s4).trivial;
  }
  r.verdict("cech: Bockstein of U(1) coboundaries is trivial", bock, "20 cases");
}

void verify_lifting(Report& r, std::mt19937_64& rng) {
  const CentralExtension z4 = examples::z2_z4_z2();
  const TransitionData rp2 = examples::rp2_z2();
  Obstruction ob = obstruction(rp2, z4, section_lifts(rp2, z4));
  Trivialization t = trivialize(ob);
  r.verdict("lifting: RP2 obstruction has order 2", !t.trivial() && t.order && *t.order == 2 &&
                                                         verify_certificate(*t.certificate, ob.cocycle, ob.system));

  const TransitionData s2 = examples::sphere_z2();
  Obstruction sob = obstruction(s2, z4, section_lifts(s2, z4));
  Trivialization st = trivialize(sob);
  r.verdict("lifting: sphere obstruction trivializes strictly",
            st.trivial() && check_strict_lift(s2, z4, *st.lifts).ok);

  CohomologyDecomposition dec(ob.system, 2);
  bool same = true;
  for (int i = 0; i < 20; ++i) {
    IntCochain b = random_cochain(rng, rp2.nerve, 1, 2);
    same = same && dec.class_coordinates(change_lifts(ob.cocycle, b, ob.system)) == dec.class_coordinates(ob.cocycle);
  }
  r.verdict("lifting: class independent of lifts", same, "20 perturbations");

  const CentralExtension q8 = examples::q8_v4();
  const TransitionData v4 = examples::rp2_circle_v4();
  bool identity = true;
  for (int i = 0; i < 5; ++i) {
    LiftChoice lifts = section_lifts(v4, q8);
    for (auto& h : lifts.hat)
      if (rng() % 2) h = q8.hat.mul(q8.kernel[1], h);
    Obstruction o = obstruction(v4, q8, lifts);
    identity = identity && o.rearranged_identity_holds && o.tetrahedra_checked == v4.nerve.count(3);
  }
  r.verdict("lifting: quadruple identity on RP2 x S1", identity);
}

void verify_schwinger(Report& r, std::mt19937_64& rng, double tol) {
  std::uniform_int_distribution<int> size(1, 4), band(0, 8);
  double trace = 0.0, cyc = 0.0, jac = 0.0, dirac = 0.0;
  for (int t = 0; t < 40; ++t) {
    const int n = size(rng), m = band(rng);
    auto x = LoopPolynomial::random(rng, n, m), y = LoopPolynomial::random(rng, n, m),
         z = LoopPolynomial::random(rng, n, m);
    const double s2 = tolerance_scale({&x, &y}), s3 = tolerance_scale({&x, &y, &z});
    trace = std::max(trace, std::abs(schwinger_trace(x, y, std::max(m, 1)) - schwinger_residue(x, y)) / s2);
    cyc = std::max(cyc, cocycle_identity_defect(x, y, z) / s3);
    jac = std::max(jac, jacobi_defect({x, {}}, {y, {}}, {z, {}}) / s3);
    dirac = std::max(dirac, dirac_defect(x, m + 3).interior_deviation / std::max(1.0, x.norm()));
  }
  r.verdict("schwinger: trace = residue", trace <= tol, Report::format(trace));
  r.verdict("schwinger: cocycle identity", cyc <= tol, Report::format(cyc));
  r.verdict("schwinger: jacobi", jac <= tol, Report::format(jac));
  r.verdict("schwinger: dirac defect", dirac <= tol, Report::format(dirac));
}

void verify_connection(Report& r, int grid) {
  for (int n : {-1, 1}) {
    SampledBundle data = sample(BundleModel::sphere_clutching(n, grid));
    ChernEstimate c = chern_number(data);
    r.verdict(fmt::format("connection: chern of degree {} at grid {}", n, grid),
              c.nearest == n && std::abs(c.value - n) <= 1e-2, Report::format(c.value - n));
  }
  SampledBundle coarse = sample(BundleModel::sphere_clutching(1, grid));
  SampledBundle fine = sample(BundleModel::sphere_clutching(1, 2 * grid - 1));
  const double factor = gauge_residual(coarse, 0, 1).max() / gauge_residual(fine, 0, 1).max();
  r.verdict("connection: gauge residual is second order", factor >= kMinConvergenceFactor, Report::format(factor));
}

}  // namespace

Report cmd_verify(const std::string& echo, const Options& opt, const std::string& module) {
  static const std::vector<std::string> kModules{"all", "nerve", "cech", "lifting", "schwinger", "connection"};
  if (std::find(kModules.begin(), kModules.end(), module) == kModules.end())
    throw Error(Errc::Parse, fmt::format("unknown module '{}'", module));
  Report r(echo);
  r.put("seed", static_cast<long long>(opt.seed));
  std::mt19937_64 rng(opt.seed);
  auto want = [&](const char* m) { return module == "all" || module == m; };
  if (want("nerve")) verify_nerve(r);
  if (want("cech")) verify_cech(r, rng);
  if (want("lifting")) verify_lifting(r, rng);
  if (want("schwinger")) verify_schwinger(r, rng, opt.tolerance.value_or(1e-10));
  if (want("connection")) verify_connection(r, opt.grid.value_or(201));
  return r;
}

}  // namespace gerbelab::cli
