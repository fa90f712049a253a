#include "gerbelab/cli/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "gerbelab/error.hpp"
#include "gerbelab/examples.hpp"

namespace gerbelab::io {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::Parse, msg); }

const Json& field(const Json& node, const char* key) {
  if (!node.is_object()) fail(fmt::format("expected an object holding '{}'", key));
  auto it = node.find(key);
  if (it == node.end()) fail(fmt::format("missing field '{}'", key));
  return *it;
}

const Json* optional_field(const Json& node, const char* key) {
  auto it = node.find(key);
  return it == node.end() ? nullptr : &*it;
}

long long integer(const Json& v, const char* what) {
  if (!v.is_number_integer()) fail(fmt::format("'{}' must be an integer", what));
  return v.get<long long>();
}

int small_int(const Json& v, const char* what) {
  long long x = integer(v, what);
  if (x < std::numeric_limits<int>::min() / 2 || x > std::numeric_limits<int>::max() / 2)
    fail(fmt::format("'{}' is out of range", what));
  return static_cast<int>(x);
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) fail(fmt::format("'{}' must be a number", what));
  double x = v.get<double>();
  if (!std::isfinite(x)) fail(fmt::format("'{}' must be finite", what));
  return x;
}

bool boolean(const Json& v, const char* what) {
  if (!v.is_boolean()) fail(fmt::format("'{}' must be true or false", what));
  return v.get<bool>();
}

std::string text(const Json& v, const char* what) {
  if (!v.is_string()) fail(fmt::format("'{}' must be a string", what));
  return v.get<std::string>();
}

const Json& array(const Json& v, const char* what) {
  if (!v.is_array()) fail(fmt::format("'{}' must be an array", what));
  return v;
}

std::vector<int> int_list(const Json& v, const char* what) {
  std::vector<int> out;
  for (const auto& x : array(v, what)) out.push_back(small_int(x, what));
  return out;
}

void check_range(const std::vector<int>& xs, int bound, const char* what) {
  for (int x : xs)
    if (x < 0 || x >= bound) throw Error(Errc::ShapeMismatch, fmt::format("{} entry {} outside [0, {})", what, x, bound));
}

void check_size(const std::vector<int>& xs, int size, const char* what) {
  if (static_cast<int>(xs.size()) != size)
    throw Error(Errc::ShapeMismatch, fmt::format("{} has {} entries, expected {}", what, xs.size(), size));
}

/// Ascending edge index plus whether the file listed it descending.
std::pair<std::size_t, bool> edge_of(const Nerve& nerve, const Json& v) {
  std::vector<int> e = int_list(v, "edge");
  if (e.size() != 2) fail("an edge has exactly two vertices");
  if (e[0] == e[1]) throw Error(Errc::DegenerateSimplex, fmt::format("edge [{}, {}]", e[0], e[1]));
  for (int x : e)
    if (x < 0 || x >= nerve.vertex_count())
      throw Error(Errc::VertexOutOfRange, fmt::format("vertex {} of a nerve with {} vertices", x, nerve.vertex_count()));
  const bool descending = e[0] > e[1];
  if (descending) std::swap(e[0], e[1]);
  auto idx = nerve.index_of(e);
  if (!idx) throw Error(Errc::ShapeMismatch, fmt::format("edge [{}, {}] is not in the nerve", e[0], e[1]));
  return {*idx, descending};
}

Nerve named_nerve(const std::string& name) {
  if (name == "empty") return Nerve{};
  if (name == "circle") return complexes::circle();
  if (name == "sphere1") return complexes::sphere(1);
  if (name == "sphere2") return complexes::sphere(2);
  if (name == "sphere3") return complexes::sphere(3);
  if (name == "rp2_six") return complexes::rp2_six();
  if (name == "rp2_times_circle") return complexes::rp2_times_circle();
  fail(fmt::format("unknown named nerve '{}'", name));
}

Nerve nerve_body(const Json& node) {
  if (const Json* named = optional_field(node, "named")) return named_nerve(text(*named, "named"));
  const int vertices = small_int(field(node, "vertices"), "vertices");
  if (vertices < 0) fail("'vertices' must be non-negative");
  if (vertices > 4096) throw Error(Errc::ShapeMismatch, fmt::format("{} vertices; at most 4096 are supported", vertices));
  std::vector<Simplex> maximal;
  for (const auto& s : array(field(node, "maximal"), "maximal")) maximal.push_back(int_list(s, "maximal"));
  if (vertices == 0 && maximal.empty()) return Nerve{};
  return build_nerve(vertices, maximal);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t digest) { return fmt::format("{:016x}", digest); }

Document parse(std::string_view bytes, const fs::path& origin, std::string_view expected) {
  Document doc;
  doc.path = origin;
  doc.digest = hex_digest(fnv1a(bytes));
  try {
    doc.body = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::exception& e) {
    fail(fmt::format("{}: {}", origin.string(), e.what()));
  }
  doc.kind = text(field(doc.body, "kind"), "kind");
  const std::string version = text(field(doc.body, "version"), "version");
  if (version != kFormatVersion) fail(fmt::format("{}: unsupported format version '{}'", origin.string(), version));
  if (!expected.empty() && doc.kind != expected)
    fail(fmt::format("{}: expected a '{}' file, found '{}'", origin.string(), expected, doc.kind));
  return doc;
}

Document load(const fs::path& path, std::string_view expected) { return parse(slurp(path), path, expected); }

void Inputs::record(const Document& doc) { digests.emplace_back(doc.path.generic_string(), doc.digest); }

Nerve read_nerve(const Json& node, const fs::path& base_dir, Inputs& inputs) {
  if (node.is_string()) {
    Document doc = load(base_dir / node.get<std::string>(), "nerve");
    inputs.record(doc);
    return nerve_body(doc.body);
  }
  return nerve_body(node);
}

CoefficientGroup read_coefficients(const Json& node) {
  const std::string ring = text(field(node, "ring"), "ring");
  Involution inv = Involution::Identity;
  if (const Json* i = optional_field(node, "involution")) {
    const std::string name = text(*i, "involution");
    if (name == "negation")
      inv = Involution::Negation;
    else if (name != "identity")
      fail(fmt::format("unknown involution '{}'", name));
  }
  double tol = 1e-9;
  if (const Json* t = optional_field(node, "tolerance")) tol = number(*t, "tolerance");
  if (ring == "Z") return CoefficientGroup::integers(inv);
  if (ring == "Z/n") {
    const long long n = integer(field(node, "modulus"), "modulus");
    if (n < 2) throw Error(Errc::InvalidGroup, fmt::format("modulus {} < 2", n));
    return CoefficientGroup::integers_mod(n, inv);
  }
  if (ring == "R") return CoefficientGroup::reals(inv, tol);
  if (ring == "R/Z") return CoefficientGroup::circle(inv, tol);
  fail(fmt::format("unknown coefficient ring '{}'", ring));
}

TwistedLocalSystem read_system(const Document& doc, Inputs& inputs) {
  const Json& b = doc.body;
  Nerve nerve = read_nerve(field(b, "nerve"), doc.path.parent_path(), inputs);
  CoefficientGroup coeff = read_coefficients(field(b, "coefficients"));
  std::vector<int> eps(nerve.count(1), 1);
  if (const Json* neg = optional_field(b, "negative_edges"))
    for (const auto& e : array(*neg, "negative_edges")) eps[edge_of(nerve, e).first] = -1;
  return TwistedLocalSystem(std::move(nerve), coeff, std::move(eps));
}

FiniteGroup read_group(const Json& node) {
  if (!node.is_object() || node.size() != 1) fail("a group is an object with exactly one of cyclic, product, table, named");
  if (const Json* n = optional_field(node, "cyclic")) {
    const int order = small_int(*n, "cyclic");
    if (order < 1 || order > 4096) throw Error(Errc::InvalidGroup, fmt::format("cyclic group of order {}", order));
    return FiniteGroup::cyclic(order);
  }
  if (const Json* p = optional_field(node, "product")) {
    const Json& factors = array(*p, "product");
    if (factors.empty()) fail("'product' needs at least one factor");
    FiniteGroup g = read_group(factors.front());
    for (std::size_t i = 1; i < factors.size(); ++i) {
      FiniteGroup h = read_group(factors[i]);
      if (static_cast<long>(g.order()) * h.order() > 4096) throw Error(Errc::InvalidGroup, "product of order above 4096");
      g = FiniteGroup::direct_product(g, h);
    }
    return g;
  }
  if (const Json* t = optional_field(node, "table")) {
    std::vector<std::vector<int>> rows;
    for (const auto& r : array(*t, "table")) rows.push_back(int_list(r, "table"));
    return FiniteGroup::from_table(std::move(rows));
  }
  if (const Json* n = optional_field(node, "named")) {
    const std::string name = text(*n, "named");
    if (name == "quaternions") return examples::quaternions();
    fail(fmt::format("unknown named group '{}'", name));
  }
  fail("a group is an object with exactly one of cyclic, product, table, named");
}

Automorphism read_automorphism(const Json& node, const FiniteGroup& g) {
  if (node.is_string()) {
    const std::string name = node.get<std::string>();
    if (name == "identity") return Automorphism::identity(g);
    if (name == "inversion") {
      if (!g.is_abelian()) throw Error(Errc::InvalidGroup, "inversion is not an automorphism of a nonabelian group");
      return Automorphism::inversion(g);
    }
    fail(fmt::format("unknown automorphism '{}'", name));
  }
  std::vector<int> perm = int_list(node, "automorphism");
  check_size(perm, g.order(), "automorphism");
  check_range(perm, g.order(), "automorphism");
  return Automorphism::from_permutation(g, std::move(perm));
}

TransitionData read_transition(const Document& doc, Inputs& inputs) {
  const Json& b = doc.body;
  TransitionData td;
  td.nerve = read_nerve(field(b, "nerve"), doc.path.parent_path(), inputs);
  td.group = read_group(field(b, "group"));
  td.sigma = read_automorphism(b.contains("sigma") ? b["sigma"] : Json("identity"), td.group);
  if (!td.sigma.is_involution()) throw Error(Errc::InvalidTwist, "sigma is not an involution");
  td.g.assign(td.nerve.count(1), td.group.identity());
  td.eps.assign(td.nerve.count(1), 1);
  std::set<std::size_t> seen;
  for (const auto& item : array(field(b, "edges"), "edges")) {
    auto [idx, descending] = edge_of(td.nerve, field(item, "edge"));
    if (!seen.insert(idx).second) fail("an edge is listed twice");
    SemidirectElement h{small_int(field(item, "g"), "g"), 1};
    if (h.g < 0 || h.g >= td.group.order())
      throw Error(Errc::InvalidGroup, fmt::format("element {} of a group of order {}", h.g, td.group.order()));
    if (const Json* e = optional_field(item, "eps")) h.eps = small_int(*e, "eps");
    if (h.eps != 1 && h.eps != -1) throw Error(Errc::InvalidTwist, fmt::format("sign {}", h.eps));
    if (descending) h = semidirect_inverse(td.group, td.sigma, h);
    td.g[idx] = h.g;
    td.eps[idx] = h.eps;
  }
  validate(td);
  return td;
}

CentralExtension read_extension(const Document& doc) {
  const Json& b = doc.body;
  CentralExtension e;
  e.hat = read_group(field(b, "hat"));
  e.base = read_group(field(b, "base"));
  e.projection = int_list(field(b, "projection"), "projection");
  check_size(e.projection, e.hat.order(), "projection");
  check_range(e.projection, e.base.order(), "projection");
  e.kernel = int_list(field(b, "kernel"), "kernel");
  if (e.kernel.empty()) throw Error(Errc::ShapeMismatch, "kernel is empty");
  check_range(e.kernel, e.hat.order(), "kernel");
  e.section = int_list(field(b, "section"), "section");
  check_size(e.section, e.base.order(), "section");
  check_range(e.section, e.hat.order(), "section");
  e.sigma_hat = read_automorphism(b.contains("sigma_hat") ? b["sigma_hat"] : Json("identity"), e.hat);
  e.sigma = read_automorphism(b.contains("sigma") ? b["sigma"] : Json("identity"), e.base);
  return e;
}

LiftChoice read_lifts(const Document& doc, const TransitionData& td, const CentralExtension& ext) {
  LiftChoice lifts = section_lifts(td, ext);
  std::set<std::size_t> seen;
  for (const auto& item : array(field(doc.body, "edges"), "edges")) {
    auto [idx, descending] = edge_of(td.nerve, field(item, "edge"));
    if (descending) fail("lifts are given on ascending edges");
    if (!seen.insert(idx).second) fail("an edge is listed twice");
    const int h = small_int(field(item, "lift"), "lift");
    if (h < 0 || h >= ext.hat.order())
      throw Error(Errc::ShapeMismatch, fmt::format("lift {} outside a group of order {}", h, ext.hat.order()));
    lifts.hat[idx] = h;
  }
  return lifts;
}

LoopPolynomial read_loop(const Document& doc) {
  const Json& b = doc.body;
  const int size = small_int(field(b, "size"), "size");
  if (size < 1 || size > 64) throw Error(Errc::ShapeMismatch, fmt::format("loop size {}", size));
  LoopPolynomial loop(size, 0);
  std::set<int> seen;
  for (const auto& item : array(field(b, "coefficients"), "coefficients")) {
    const int m = small_int(field(item, "mode"), "mode");
    if (std::abs(m) > 256) throw Error(Errc::ShapeMismatch, fmt::format("mode {} beyond 256", m));
    if (!seen.insert(m).second) fail(fmt::format("mode {} listed twice", m));
    const Json& entries = array(field(item, "entries"), "entries");
    if (entries.size() != static_cast<std::size_t>(size) * size)
      throw Error(Errc::ShapeMismatch, fmt::format("mode {} has {} entries, expected {}", m, entries.size(), size * size));
    Eigen::MatrixXcd c(size, size);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const Json& v = entries[k];
      Complex z;
      if (v.is_array()) {
        if (v.size() != 2) fail("a complex entry is [re, im]");
        z = Complex(number(v[0], "entries"), number(v[1], "entries"));
      } else {
        z = Complex(number(v, "entries"), 0.0);
      }
      c(static_cast<Eigen::Index>(k) / size, static_cast<Eigen::Index>(k) % size) = z;
    }
    loop.set(m, c);
  }
  if (const Json* s = optional_field(b, "skew_hermitian")) loop.set_skew_hermitian(boolean(*s, "skew_hermitian"));
  loop.validate();
  return loop;
}

BundleSpec read_bundle(const Document& doc) {
  const Json& b = doc.body;
  BundleSpec spec;
  double half_width = 2.0;
  const Json& base = field(b, "base");
  const std::string kind = base.is_string() ? base.get<std::string>() : text(field(base, "kind"), "base.kind");
  if (kind != "sphere") fail(fmt::format("unsupported base '{}'; bundle files describe the two-chart sphere", kind));
  if (base.is_object())
    if (const Json* w = optional_field(base, "half_width")) half_width = number(*w, "half_width");
  if (half_width <= 1.0) throw Error(Errc::ShapeMismatch, "half_width must exceed 1 so the charts overlap");
  if (const Json* g = optional_field(b, "grid")) spec.grid = small_int(*g, "grid");
  if (spec.grid < 3 || spec.grid > 2001) throw Error(Errc::GridTooCoarse, fmt::format("grid {} outside [3, 2001]", spec.grid));
  int rank = 1;
  if (const Json* r = optional_field(b, "rank")) rank = small_int(*r, "rank");
  if (rank < 1 || rank > 8) throw Error(Errc::ShapeMismatch, fmt::format("rank {} outside [1, 8]", rank));
  int degree = 0;
  double deformation = 0.0, rotation = 0.0;
  if (const Json* c = optional_field(b, "clutching")) {
    if (const Json* d = optional_field(*c, "degree")) degree = small_int(*d, "degree");
    if (const Json* d = optional_field(*c, "deformation")) deformation = number(*d, "deformation");
    if (const Json* r = optional_field(*c, "rotation")) rotation = number(*r, "rotation");
  }
  if (std::abs(degree) > 64) throw Error(Errc::DegreeOverflow, fmt::format("clutching degree {}", degree));
  spec.model = BundleModel::sphere_clutching(degree, spec.grid, rank, deformation, rotation);
  spec.model.base = ChartedBase::sphere(spec.grid, half_width);
  if (const Json* p = optional_field(b, "partition")) {
    spec.model.partition.inner = number(field(*p, "inner"), "inner");
    spec.model.partition.outer = number(field(*p, "outer"), "outer");
    const auto& pp = spec.model.partition;
    if (!(pp.inner > 0.0 && pp.inner < 1.0 && pp.outer > 1.0 && pp.outer < half_width))
      throw Error(Errc::ShapeMismatch, "partition needs 0 < inner < 1 < outer < half_width");
  }
  if (const Json* r = optional_field(b, "reorthonormalize")) spec.reorthonormalize = boolean(*r, "reorthonormalize");
  if (const Json* ps = optional_field(b, "perturbations")) {
    for (const auto& item : array(*ps, "perturbations")) {
      BundleSpec::Perturbation p;
      p.chart = small_int(field(item, "chart"), "chart");
      if (p.chart != 0 && p.chart != 1) throw Error(Errc::PointOutsideCharts, fmt::format("chart {}", p.chart));
      std::vector<double> xy;
      for (const auto& v : array(field(item, "point"), "point")) xy.push_back(number(v, "point"));
      if (xy.size() != 2) fail("'point' has two coordinates");
      p.point = {xy[0], xy[1]};
      p.phase = number(field(item, "phase"), "phase");
      if (!spec.model.defined(p.chart, 1 - p.chart, p.point))
        throw Error(Errc::PointOutsideCharts, fmt::format("({}, {}) is not on the overlap", xy[0], xy[1]));
      spec.perturbations.push_back(p);
    }
  }
  return spec;
}

SampledBundle sample_bundle(const BundleSpec& spec, int points) {
  BundleModel model = spec.model;
  model.base = spec.model.base.with_resolution(points);
  SampledBundle data = sample(model, spec.reorthonormalize);
  for (const auto& p : spec.perturbations) {
    const Chart& c = data.model.base.charts()[static_cast<std::size_t>(p.chart)];
    const long i = std::lround((p.point[0] - c.lo[0]) / c.spacing(0));
    const long j = std::lround((p.point[1] - c.lo[1]) / c.spacing(1));
    const std::size_t idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(c.points[1]) + static_cast<std::size_t>(j);
    auto& samples = data.charts[static_cast<std::size_t>(p.chart)];
    auto& h = samples.transition[static_cast<std::size_t>(1 - p.chart)];
    if (idx < h.size() && samples.defined[static_cast<std::size_t>(1 - p.chart)][idx]) h[idx] *= std::polar(1.0, p.phase);
  }
  return data;
}

}  // namespace gerbelab::io
