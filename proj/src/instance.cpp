#include "bdsim/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "bdsim/expression.hpp"

namespace bdsim {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  double v;
  while (is >> v) out.push_back(v);
  if (!is.eof()) throw StructuralError("malformed number list: " + s);
  return out;
}

// 1-based in files, 0-based in memory
std::vector<int> parse_indices(const std::string& s, int limit) {
  std::vector<int> out;
  std::istringstream is(s);
  long v;
  while (is >> v) {
    if (v < 1 || v > limit) throw StructuralError("index out of range: " + s);
    out.push_back(static_cast<int>(v - 1));
  }
  if (!is.eof()) throw StructuralError("malformed index list: " + s);
  return out;
}

const Section* find_section(const Sections& ss, const std::string& name) {
  for (const Section& s : ss)
    if (s.name == name) return &s;
  return nullptr;
}

const Section& need_section(const Sections& ss, const std::string& name) {
  const Section* s = find_section(ss, name);
  if (!s) throw StructuralError("missing section [" + name + "]");
  return *s;
}

const std::string* find_key(const Section& s, const std::string& key) {
  for (const KeyValue& kv : s.entries)
    if (kv.key == key) return &kv.value;
  return nullptr;
}

const std::string& need_key(const Section& s, const std::string& key) {
  const std::string* v = find_key(s, key);
  if (!v) throw StructuralError("[" + s.name + "] is missing key " + key);
  return *v;
}

std::string value_or(const Section& s, const std::string& key, const std::string& fallback) {
  const std::string* v = find_key(s, key);
  return v ? *v : fallback;
}

std::vector<std::string> all_values(const Section& s, const std::string& key) {
  std::vector<std::string> out;
  for (const KeyValue& kv : s.entries)
    if (kv.key == key) out.push_back(kv.value);
  return out;
}

double need_double(const Section& s, const std::string& key) {
  auto v = parse_doubles(need_key(s, key));
  if (v.size() != 1) throw StructuralError("[" + s.name + "] key " + key + " wants one number");
  return v[0];
}

long need_long(const Section& s, const std::string& key) {
  double v = need_double(s, key);
  long l = std::lround(v);
  if (double(l) != v) throw StructuralError("[" + s.name + "] key " + key + " wants an integer");
  return l;
}

CMat parse_cmat(const std::string& text, int dim, const std::string& what) {
  auto v = parse_doubles(text);
  if (static_cast<int>(v.size()) != 2 * dim * dim)
    throw StructuralError(what + " wants " + std::to_string(2 * dim * dim) + " numbers: " + text);
  CMat m(dim, dim);
  int k = 0;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c, k += 2) m(r, c) = cplx(v[k], v[k + 1]);
  return m;
}

CVec parse_cvec(const std::string& text, int dim, const std::string& what) {
  auto v = parse_doubles(text);
  if (static_cast<int>(v.size()) != 2 * dim)
    throw StructuralError(what + " wants " + std::to_string(2 * dim) + " numbers: " + text);
  CVec m(dim);
  for (int r = 0; r < dim; ++r) m[r] = cplx(v[2 * r], v[2 * r + 1]);
  return m;
}

std::vector<std::string> x_names(int nb) {
  std::vector<std::string> out;
  for (int i = 1; i <= nb; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

struct IndexedText {
  std::vector<int> idx;  // 0-based
  std::string rest;
};

IndexedText split_indexed(const std::string& value, int n_indices, int limit,
                          const std::string& what) {
  std::istringstream is(value);
  IndexedText out;
  for (int k = 0; k < n_indices; ++k) {
    long v;
    if (!(is >> v) || v < 1 || v > limit)
      throw StructuralError(what + " entry has a bad index: " + value);
    out.idx.push_back(static_cast<int>(v - 1));
  }
  std::getline(is, out.rest);
  out.rest = trim(out.rest);
  if (out.rest.empty()) throw StructuralError(what + " entry is missing its expression: " + value);
  return out;
}

void set_triple(LieAlgebraSpec& s, int a, int b, int c, double v) {
  const int p[6][3] = {{a, b, c}, {b, c, a}, {c, a, b}, {b, a, c}, {a, c, b}, {c, b, a}};
  const double sg[6] = {1, 1, 1, -1, -1, -1};
  for (int k = 0; k < 6; ++k) s.fc(p[k][2], p[k][0], p[k][1]) = sg[k] * v;
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

}  // namespace

Sections parse_ini(std::istream& is) {
  Sections out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw StructuralError("unterminated section header at line " + std::to_string(lineno));
      out.push_back({trim(t.substr(1, t.size() - 2)), {}});
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos || out.empty())
      throw StructuralError("stray line " + std::to_string(lineno) + ": " + t);
    out.back().entries.push_back({trim(t.substr(0, eq)), trim(t.substr(eq + 1))});
  }
  return out;
}

std::string dump_ini(const Sections& sections) {
  std::string out;
  bool first = true;
  for (const Section& s : sections) {
    if (!first) out += "\n";
    first = false;
    out += "[" + s.name + "]\n";
    for (const KeyValue& kv : s.entries) out += kv.key + " = " + kv.value + "\n";
  }
  return out;
}

InstanceConfig realize(const Sections& sections) {
  InstanceConfig cfg;
  cfg.name = need_key(need_section(sections, "instance"), "name");

  const Section& alg = need_section(sections, "algebra");
  auto spec = std::make_shared<LieAlgebraSpec>();
  int dg = static_cast<int>(need_long(alg, "dim_g"));
  if (dg < 1 || dg > kMaxDim) throw StructuralError("dim_g out of range");
  spec->dim_G = dg;
  spec->f.assign(static_cast<size_t>(dg) * dg * dg, 0.0);
  for (const std::string& t : all_values(alg, "f")) {
    std::istringstream is(t);
    long A, B, C;
    double v;
    if (!(is >> A >> B >> C >> v)) throw StructuralError("malformed f entry: " + t);
    if (A < 1 || A > dg || B < 1 || B > dg || C < 1 || C > dg)
      throw StructuralError("f entry index out of range: " + t);
    set_triple(*spec, static_cast<int>(A - 1), static_cast<int>(B - 1), static_cast<int>(C - 1),
               v);
  }
  spec->H_idx = parse_indices(value_or(alg, "h_idx", ""), dg);
  spec->Khat_idx = parse_indices(value_or(alg, "khat_idx", ""), dg);
  spec->Lbar_idx = parse_indices(value_or(alg, "lbar_idx", ""), dg);
  auto gens = all_values(alg, "generator");
  if (gens.empty()) throw StructuralError("[algebra] needs generator entries");
  size_t counted = parse_doubles(gens[0]).size();
  int rep_dim = static_cast<int>(std::lround(std::sqrt(double(counted) / 2.0)));
  if (2 * static_cast<size_t>(rep_dim) * rep_dim != counted)
    throw StructuralError("generator entries must hold a square complex matrix");
  for (const std::string& t : gens) spec->generators.push_back(parse_cmat(t, rep_dim, "generator"));
  if (static_cast<int>(spec->generators.size()) != dg)
    throw StructuralError("expected one generator entry per algebra index");
  spec->inner_product = LieAlgebraSpec::normalized_killing_form(*spec);
  cfg.spec = spec;
  cfg.model.spec = spec.get();

  const Section& ch = need_section(sections, "chart");
  double safe = need_double(ch, "safe_radius");
  double cutoff = need_double(ch, "cutoff");
  if (!(safe > 0.0) || !(cutoff > 0.0) || cutoff > safe)
    throw StructuralError("chart radii must satisfy 0 < cutoff <= safe_radius");
  cfg.model.chart = make_chart(*spec, safe, cutoff / safe);

  const int nc = spec->coset_dim();
  const int nk = static_cast<int>(spec->Khat_idx.size());

  const Section& bs = need_section(sections, "base");
  int nb = static_cast<int>(need_long(bs, "dim"));
  if (nb < 0 || nb > kMaxDim) throw StructuralError("base dim out of range");
  cfg.model.base.dim = nb;
  auto vars = x_names(nb);
  if (nb > 0) {
    auto lo = parse_doubles(need_key(bs, "lo"));
    auto hi = parse_doubles(need_key(bs, "hi"));
    if (static_cast<int>(lo.size()) != nb || static_cast<int>(hi.size()) != nb)
      throw StructuralError("[base] lo/hi must list dim numbers");
    for (int i = 0; i < nb; ++i)
      if (!(lo[i] < hi[i])) throw StructuralError("[base] box is empty in some direction");
    cfg.model.base.domain.lo = to_vec(lo);
    cfg.model.base.domain.hi = to_vec(hi);
    if (const std::string* b = find_key(bs, "builtin")) {
      if (*b == "stereographic_sphere") {
        if (nb != 2) throw StructuralError("stereographic_sphere wants a two-dimensional base");
        cfg.model.base.h = [](const Vec& x) {
          double w = 1.0 + x.squaredNorm();
          return Mat(Mat::Identity(2, 2) * (4.0 / (w * w)));
        };
      } else {
        throw StructuralError("unknown base builtin: " + *b);
      }
    } else {
      auto hs = all_values(bs, "h");
      if (hs.empty()) throw StructuralError("[base] needs h entries or a builtin");
      auto table = std::make_shared<std::vector<std::tuple<int, int, Expression>>>();
      for (const std::string& t : hs) {
        IndexedText e = split_indexed(t, 2, nb, "[base] h");
        table->emplace_back(e.idx[0], e.idx[1], Expression::parse(e.rest, vars));
      }
      cfg.model.base.h = [table, nb](const Vec& x) {
        Mat out = Mat::Zero(nb, nb);
        for (const auto& [i, j, e] : *table) {
          double v = e.eval(x);
          out(i, j) = v;
          out(j, i) = v;
        }
        return out;
      };
    }
  }

  if (nk > 0 && nb > 0) {
    const Section& cs = need_section(sections, "connection");
    if (const std::string* b = find_key(cs, "builtin")) {
      if (*b == "monopole") {
        if (nb != 2 || nk != 1)
          throw StructuralError("monopole wants a two-dimensional base and one vertical channel");
        double q = need_double(cs, "charge");
        cfg.model.conn.A = [q](const Vec& x) {
          double w = 1.0 + x.squaredNorm();
          Mat A(1, 2);
          A << -2.0 * q * x[1] / w, 2.0 * q * x[0] / w;
          return A;
        };
        cfg.model.conn.div_callback = [](const Vec&) { return Vec(Vec::Zero(1)); };
      } else {
        throw StructuralError("unknown connection builtin: " + *b);
      }
    } else {
      auto as = all_values(cs, "a");
      if (as.empty()) throw StructuralError("[connection] needs a entries or a builtin");
      auto table = std::make_shared<std::vector<std::tuple<int, int, Expression>>>();
      for (const std::string& t : as) {
        std::istringstream is(t);
        long k, i;
        if (!(is >> k >> i) || k < 1 || k > nk || i < 1 || i > nb)
          throw StructuralError("[connection] a entry has a bad index: " + t);
        std::string rest;
        std::getline(is, rest);
        rest = trim(rest);
        if (rest.empty()) throw StructuralError("[connection] a entry is missing its expression");
        table->emplace_back(static_cast<int>(k - 1), static_cast<int>(i - 1),
                            Expression::parse(rest, vars));
      }
      cfg.model.conn.A = [table, nk, nb](const Vec& x) {
        Mat A = Mat::Zero(nk, nb);
        for (const auto& [k, i, e] : *table) A(k, i) = e.eval(x);
        return A;
      };
      auto ds = all_values(cs, "div");
      if (!ds.empty()) {
        auto dtable = std::make_shared<std::vector<std::pair<int, Expression>>>();
        for (const std::string& t : ds) {
          IndexedText e = split_indexed(t, 1, nk, "[connection] div");
          dtable->emplace_back(e.idx[0], Expression::parse(e.rest, vars));
        }
        cfg.model.conn.div_callback = [dtable, nk](const Vec& x) {
          Vec d = Vec::Zero(nk);
          for (const auto& [k, e] : *dtable) d[k] = e.eval(x);
          return d;
        };
      }
    }
  }

  const Section& mg = need_section(sections, "metric_g");
  MatA g = MatA::Zero(nc, nc);
  for (const std::string& t : all_values(mg, "g")) {
    std::istringstream is(t);
    long i, j;
    double v;
    if (!(is >> i >> j >> v) || i < 1 || i > nc || j < 1 || j > nc)
      throw StructuralError("malformed metric_g entry: " + t);
    g(i - 1, j - 1) = v;
    g(j - 1, i - 1) = v;
  }
  {
    Eigen::LLT<Mat> llt((Mat(g)));
    if (llt.info() != Eigen::Success)
      throw StructuralError("[metric_g] is not positive definite");
  }
  cfg.model.gmet.g = [g](const Vec&) { return g; };

  if (const Section* pot = find_section(sections, "potential")) {
    Expression e = Expression::parse(need_key(*pot, "v"), vars);
    cfg.model.potential = [e](const Vec& x) { return e.eval(x); };
  }

  const Section& init = need_section(sections, "initial");
  auto x0 = parse_doubles(value_or(init, "x0", ""));
  if (static_cast<int>(x0.size()) != nb)
    throw StructuralError("[initial] x0 must list base dim numbers");
  cfg.x0 = to_vec(x0);
  auto y0 = parse_doubles(value_or(init, "y0", ""));
  if (static_cast<int>(y0.size()) != nc)
    throw StructuralError("[initial] y0 must list coset dim numbers");
  cfg.observable.y0 = VecA(to_vec(y0));

  struct CoeffTable {
    int dim = 0, nsph = 0;
    std::vector<Expression> re, im;  // column-major i + dim * rho
  };
  auto tables = std::make_shared<std::vector<CoeffTable>>();
  for (const Section& s : sections) {
    if (s.name != "irrep") continue;
    IrrepSpec ir;
    ir.label = need_key(s, "label");
    ir.dim = static_cast<int>(need_long(s, "dim"));
    if (ir.dim < 1 || ir.dim > kMaxDim) throw StructuralError("irrep dim out of range");
    for (const std::string& t : all_values(s, "j")) ir.J.push_back(parse_cmat(t, ir.dim, "j"));
    if (static_cast<int>(ir.J.size()) != dg)
      throw StructuralError("irrep " + ir.label + " needs one j entry per algebra index");
    for (const std::string& t : all_values(s, "spherical"))
      ir.spherical.push_back(parse_cvec(t, ir.dim, "spherical"));
    if (ir.spherical.empty())
      throw StructuralError("irrep " + ir.label + " needs at least one spherical entry");
    CoeffTable ct;
    ct.dim = ir.dim;
    ct.nsph = static_cast<int>(ir.spherical.size());
    ct.re.assign(static_cast<size_t>(ct.dim) * ct.nsph, Expression::constant(0.0));
    ct.im.assign(static_cast<size_t>(ct.dim) * ct.nsph, Expression::constant(0.0));
    for (const std::string& t : all_values(s, "c")) {
      std::istringstream is(t);
      long i, rho;
      if (!(is >> i >> rho) || i < 1 || i > ir.dim || rho < 1 || rho > ct.nsph)
        throw StructuralError("irrep " + ir.label + " c entry has a bad index: " + t);
      std::string rest;
      std::getline(is, rest);
      size_t semi = rest.find(';');
      if (semi == std::string::npos)
        throw StructuralError("c entry wants 're ; im' expressions: " + t);
      size_t slot = static_cast<size_t>(i - 1) + static_cast<size_t>(ct.dim) * (rho - 1);
      ct.re[slot] = Expression::parse(trim(rest.substr(0, semi)), vars);
      ct.im[slot] = Expression::parse(trim(rest.substr(semi + 1)), vars);
    }
    tables->push_back(std::move(ct));
    cfg.observable.irreps.push_back(std::move(ir));
  }
  if (cfg.observable.irreps.empty()) throw StructuralError("at least one [irrep] is required");
  cfg.observable.coefficients = [tables](int idx, const Vec& x) {
    const CoeffTable& t = tables->at(static_cast<size_t>(idx));
    CMat c(t.dim, t.nsph);
    for (int rho = 0; rho < t.nsph; ++rho)
      for (int i = 0; i < t.dim; ++i) {
        size_t slot = static_cast<size_t>(i) + static_cast<size_t>(t.dim) * rho;
        c(i, rho) = cplx(t.re[slot].eval(x), t.im[slot].eval(x));
      }
    return c;
  };

  const Section& pa = need_section(sections, "params");
  cfg.params.dt = need_double(pa, "dt");
  cfg.params.T = need_double(pa, "T");
  if (find_key(pa, "mu2_kappa")) cfg.params.mu2_kappa = need_double(pa, "mu2_kappa");
  cfg.params.seed = static_cast<uint64_t>(need_long(pa, "seed"));
  cfg.params.paths = static_cast<int>(need_long(pa, "paths"));
  if (cfg.params.paths < 1) throw StructuralError("[params] paths must be positive");
  if (find_key(pa, "checkpoints"))
    cfg.params.checkpoints = parse_doubles(need_key(pa, "checkpoints"));
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw StructuralError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

InstanceConfig load_instance(const std::string& path) {
  std::istringstream is(read_file(path));
  return realize(parse_ini(is));
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

LieAlgebraSpec builder_su2() {
  LieAlgebraSpec s;
  s.dim_G = 3;
  s.f.assign(27, 0.0);
  set_triple(s, 0, 1, 2, 1.0);
  const cplx i(0, 1);
  CMat s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  s.generators = {-0.5 * i * s1, -0.5 * i * s2, -0.5 * i * s3};
  s.H_idx = {2};
  s.Khat_idx = {};
  s.Lbar_idx = {0, 1};
  s.inner_product = LieAlgebraSpec::normalized_killing_form(s);
  return s;
}

LieAlgebraSpec builder_su3() {
  LieAlgebraSpec s;
  s.dim_G = 8;
  s.f.assign(8 * 8 * 8, 0.0);
  const double r3 = std::sqrt(3.0) / 2.0;
  set_triple(s, 0, 1, 2, 1.0);
  set_triple(s, 0, 3, 6, 0.5);
  set_triple(s, 0, 4, 5, -0.5);
  set_triple(s, 1, 3, 5, 0.5);
  set_triple(s, 1, 4, 6, 0.5);
  set_triple(s, 2, 3, 4, 0.5);
  set_triple(s, 2, 5, 6, -0.5);
  set_triple(s, 3, 4, 7, r3);
  set_triple(s, 5, 6, 7, r3);
  const cplx i(0, 1);
  const double q3 = 1.0 / std::sqrt(3.0);
  std::vector<CMat> lam(8, CMat::Zero(3, 3));
  lam[0] << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  lam[1] << 0, -i, 0, i, 0, 0, 0, 0, 0;
  lam[2] << 1, 0, 0, 0, -1, 0, 0, 0, 0;
  lam[3] << 0, 0, 1, 0, 0, 0, 1, 0, 0;
  lam[4] << 0, 0, -i, 0, 0, 0, i, 0, 0;
  lam[5] << 0, 0, 0, 0, 0, 1, 0, 1, 0;
  lam[6] << 0, 0, 0, 0, 0, -i, 0, i, 0;
  lam[7] << q3, 0, 0, 0, q3, 0, 0, 0, -2 * q3;
  s.generators.resize(8);
  for (int A = 0; A < 8; ++A) s.generators[A] = -0.5 * i * lam[A];
  s.H_idx = {0, 1, 2};
  s.Khat_idx = {7};
  s.Lbar_idx = {3, 4, 5, 6};
  s.inner_product = LieAlgebraSpec::normalized_killing_form(s);
  return s;
}

std::string cmat_text(const CMat& m) {
  std::string out;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      if (!out.empty()) out += ' ';
      out += fmt(m(r, c).real());
      out += ' ';
      out += fmt(m(r, c).imag());
    }
  return out;
}

std::string cvec_text(const CVec& v) {
  std::string out;
  for (int r = 0; r < v.size(); ++r) {
    if (!out.empty()) out += ' ';
    out += fmt(v[r].real());
    out += ' ';
    out += fmt(v[r].imag());
  }
  return out;
}

Section su3_algebra_section() {
  LieAlgebraSpec s = builder_su3();
  const std::string r3 = fmt(std::sqrt(3.0) / 2.0);
  Section alg{"algebra", {}};
  alg.entries.push_back({"dim_g", "8"});
  alg.entries.push_back({"h_idx", "1 2 3"});
  alg.entries.push_back({"khat_idx", "8"});
  alg.entries.push_back({"lbar_idx", "4 5 6 7"});
  alg.entries.push_back({"f", "1 2 3 1"});
  alg.entries.push_back({"f", "1 4 7 0.5"});
  alg.entries.push_back({"f", "1 5 6 -0.5"});
  alg.entries.push_back({"f", "2 4 6 0.5"});
  alg.entries.push_back({"f", "2 5 7 0.5"});
  alg.entries.push_back({"f", "3 4 5 0.5"});
  alg.entries.push_back({"f", "3 6 7 -0.5"});
  alg.entries.push_back({"f", "4 5 8 " + r3});
  alg.entries.push_back({"f", "6 7 8 " + r3});
  for (const CMat& Q : s.generators) alg.entries.push_back({"generator", cmat_text(Q)});
  return alg;
}

Section su3_fund_irrep_section(std::vector<KeyValue> c_entries) {
  LieAlgebraSpec s = builder_su3();
  IrrepSpec ir = su3_fundamental_irrep(s);
  Section sec{"irrep", {}};
  sec.entries.push_back({"label", "fund"});
  sec.entries.push_back({"dim", "3"});
  for (const CMat& J : ir.J) sec.entries.push_back({"j", cmat_text(J)});
  for (const CVec& v : ir.spherical) sec.entries.push_back({"spherical", cvec_text(v)});
  for (KeyValue& kv : c_entries) sec.entries.push_back(std::move(kv));
  return sec;
}

Section block_metric_section() {
  Section mg{"metric_g", {}};
  mg.entries.push_back({"g", "1 1 1.3"});
  mg.entries.push_back({"g", "2 2 0.9"});
  mg.entries.push_back({"g", "3 3 0.9"});
  mg.entries.push_back({"g", "4 4 0.9"});
  mg.entries.push_back({"g", "5 5 0.9"});
  return mg;
}

}  // namespace

Sections su2_coset_sections() {
  LieAlgebraSpec s = builder_su2();
  IrrepSpec ir = su2_ladder_irrep(s, 2);
  Sections out;
  out.push_back({"instance", {{"name", "su2_coset"}}});
  Section alg{"algebra", {}};
  alg.entries.push_back({"dim_g", "3"});
  alg.entries.push_back({"h_idx", "3"});
  alg.entries.push_back({"khat_idx", ""});
  alg.entries.push_back({"lbar_idx", "1 2"});
  alg.entries.push_back({"f", "1 2 3 1"});
  for (const CMat& Q : s.generators) alg.entries.push_back({"generator", cmat_text(Q)});
  out.push_back(alg);
  out.push_back({"chart", {{"safe_radius", fmt(M_PI)}, {"cutoff", fmt(0.9 * M_PI)}}});
  out.push_back({"base", {{"dim", "0"}}});
  Section mg{"metric_g", {}};
  mg.entries.push_back({"g", "1 1 1"});
  mg.entries.push_back({"g", "2 2 1"});
  out.push_back(mg);
  out.push_back({"initial", {{"x0", ""}, {"y0", "0 0"}}});
  Section irs{"irrep", {}};
  irs.entries.push_back({"label", "spin1"});
  irs.entries.push_back({"dim", "3"});
  for (const CMat& J : ir.J) irs.entries.push_back({"j", cmat_text(J)});
  for (const CVec& v : ir.spherical) irs.entries.push_back({"spherical", cvec_text(v)});
  irs.entries.push_back({"c", "1 1 0.3 ; 0.1"});
  irs.entries.push_back({"c", "2 1 1 ; 0"});
  irs.entries.push_back({"c", "3 1 -0.2 ; 0.4"});
  out.push_back(irs);
  out.push_back({"params",
                 {{"dt", "0.001"},
                  {"T", "1"},
                  {"mu2_kappa", "1"},
                  {"seed", "1"},
                  {"paths", "10000"},
                  {"checkpoints", "0.25 0.5 1"}}});
  return out;
}

Sections flat_const_sections() {
  Sections out;
  out.push_back({"instance", {{"name", "flat_const"}}});
  out.push_back(su3_algebra_section());
  out.push_back({"chart", {{"safe_radius", "3"}, {"cutoff", "2.7"}}});
  Section bs{"base", {}};
  bs.entries.push_back({"dim", "2"});
  bs.entries.push_back({"lo", "-8 -8"});
  bs.entries.push_back({"hi", "8 8"});
  bs.entries.push_back({"h", "1 1 1"});
  bs.entries.push_back({"h", "2 2 1"});
  out.push_back(bs);
  Section cs{"connection", {}};
  cs.entries.push_back({"a", "1 1 0.3+0.2*x1-0.1*x2"});
  cs.entries.push_back({"a", "1 2 -0.2+0.15*x1+0.25*x2"});
  cs.entries.push_back({"div", "1 0.45"});
  out.push_back(cs);
  out.push_back(block_metric_section());
  out.push_back({"potential", {{"v", "0.05*(x1^2+x2^2)"}}});
  out.push_back({"initial", {{"x0", "0.5 -0.3"}, {"y0", "0.4 0.3 -0.2 0.1 0.25"}}});
  out.push_back(su3_fund_irrep_section({{"c", "1 1 0.5+0.3*x1 ; 0.1"},
                                        {"c", "2 1 -0.2 ; 0.4*x2"},
                                        {"c", "3 1 0.8 ; -0.3*x1"}}));
  out.push_back({"params",
                 {{"dt", "0.001"},
                  {"T", "0.5"},
                  {"mu2_kappa", "1"},
                  {"seed", "1"},
                  {"paths", "10000"},
                  {"checkpoints", "0.25 0.5"}}});
  return out;
}

Sections hopf_sections() {
  Sections out;
  out.push_back({"instance", {{"name", "hopf"}}});
  out.push_back(su3_algebra_section());
  out.push_back({"chart", {{"safe_radius", "3"}, {"cutoff", "2.7"}}});
  Section bs{"base", {}};
  bs.entries.push_back({"dim", "2"});
  bs.entries.push_back({"lo", "-50 -50"});
  bs.entries.push_back({"hi", "50 50"});
  bs.entries.push_back({"builtin", "stereographic_sphere"});
  out.push_back(bs);
  Section cs{"connection", {}};
  cs.entries.push_back({"builtin", "monopole"});
  cs.entries.push_back({"charge", "0.8"});
  out.push_back(cs);
  out.push_back(block_metric_section());
  out.push_back({"initial", {{"x0", "0.6 -0.4"}, {"y0", "0 0 0 0 0"}}});
  out.push_back(su3_fund_irrep_section({{"c", "1 1 0.4+x1/(1+x1^2+x2^2) ; 0"},
                                        {"c", "2 1 0.7 ; 0.2*x2/(1+x1^2+x2^2)"},
                                        {"c", "3 1 -0.3 ; 0.15"}}));
  out.push_back({"params",
                 {{"dt", "0.001"},
                  {"T", "0.5"},
                  {"mu2_kappa", "1"},
                  {"seed", "1"},
                  {"paths", "4000"},
                  {"checkpoints", "0.25 0.5"}}});
  return out;
}

}  // namespace bdsim
