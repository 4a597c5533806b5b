#include "fcat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fcat/serialize.hpp"
#include "fcat/suite.hpp"

#ifndef FCAT_VERSION
#define FCAT_VERSION "0.0.0"
#endif

namespace fcat::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kPass = 0, kFail = 1, kUsage = 2;
constexpr int kInstances = 20;

struct Options {
  std::string command;
  std::string file;
  std::optional<double> tol;
  std::uint64_t seed = 0x5EED;
  std::string out;
  std::optional<std::string> x, y;
  bool timing = false;
};

// exit-2 failures detected after parsing
struct UsageError : Error {
  using Error::Error;
};

ojson complex_json(Scalar z) { return ojson::array({z.real(), z.imag()}); }

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (long r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (long q = 0; q < m.cols(); ++q) row.push_back(complex_json(m(r, q)));
    rows.push_back(row);
  }
  return rows;
}

ojson vector_json(const Vector& v) {
  ojson out = ojson::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

ojson check_json(const CheckEntry& e) {
  ojson j;
  j["name"] = e.name;
  if (e.integer)
    j["value"] = static_cast<long>(e.value);
  else
    j["value"] = e.value;
  j["pass"] = e.pass;
  return j;
}

std::shared_ptr<const CategorySpec> load_spec(const Options& o) { return CategorySpec::load(o.file, o.tol); }

nlohmann::json read_doc(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw SchemaError("cannot open " + file);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

struct Outcome {
  std::string spec;
  std::optional<double> tol;
  std::vector<CheckEntry> checks;
  ojson result = ojson::object();

  void describe(const CategorySpec& s) {
    spec = s.name;
    tol = s.tol;
  }
};

Outcome cmd_validate(const Options& o) {
  auto doc = read_doc(o.file);
  if (o.tol) doc["tol"] = *o.tol;
  auto spec = CategorySpec::from_json_unchecked(doc);
  Outcome r;
  r.describe(*spec);
  r.checks = fusion_checks(*spec);
  try {
    spec->validate();
    r.checks.push_back({"load_validation", 0.0, false, true});
  } catch (const ConsistencyError& e) {
    r.checks.push_back({"load_validation", e.residual(), false, false});
  }
  r.result["valid"] = all_pass(r.checks);
  return r;
}

Outcome cmd_info(const Options& o) {
  auto spec = load_spec(o);
  const auto& s = *spec;
  Outcome r;
  r.describe(*spec);
  r.result["name"] = s.name;
  r.result["rank"] = s.rank();
  r.result["labels"] = s.labels;
  r.result["unit"] = s.id(s.unit);
  ojson dual = ojson::object(), dims = ojson::object();
  for (int a = 0; a < s.rank(); ++a) {
    dual[s.id(a)] = s.id(s.dual[a]);
    dims[s.id(a)] = complex_json(s.d(a));
  }
  r.result["dual"] = dual;
  r.result["dims"] = dims;
  r.result["global_dimension"] = complex_json(s.D2);
  ojson fusion = ojson::array();
  for (int a = 0; a < s.rank(); ++a)
    for (int b = 0; b < s.rank(); ++b)
      for (int k = 0; k < s.rank(); ++k)
        if (s.N(a, b, k)) fusion.push_back({s.id(a), s.id(b), s.id(k), s.N(a, b, k)});
  r.result["fusion"] = fusion;
  r.result["braided"] = s.braided();
  r.result["unitary"] = s.unitary;
  return r;
}

Outcome cmd_tube_dim(const Options& o) {
  if (o.x.has_value() != o.y.has_value()) throw UsageError("--x and --y must be given together");
  auto spec = load_spec(o);
  Outcome r;
  r.describe(*spec);
  if (o.x) {
    Word x = parse_word(*spec, *o.x), y = parse_word(*spec, *o.y);
    r.result["x"] = word_to_json(*spec, x);
    r.result["y"] = word_to_json(*spec, y);
    r.result["dim"] = tube_hom_dim(*spec, x, y);
    return r;
  }
  ojson table = ojson::array();
  long total = 0;
  for (int i = 0; i < spec->rank(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < spec->rank(); ++j) {
      const int d = tube_hom_dim(*spec, make_word({i}), make_word({j}));
      row.push_back(d);
      total += d;
    }
    table.push_back(row);
  }
  r.result["labels"] = spec->labels;
  r.result["dims"] = table;
  r.result["total"] = total;
  return r;
}

Outcome cmd_tube_algebra(const Options& o) {
  auto spec = load_spec(o);
  Calculus c(spec);
  const auto& s = *spec;
  auto alg = tube_algebra(c);
  Outcome r;
  r.describe(*spec);

  long expected = 0;
  for (int i = 0; i < s.rank(); ++i)
    for (int j = 0; j < s.rank(); ++j) expected += tube_hom_dim(s, make_word({i}), make_word({j}));
  r.checks.push_back({"tube_algebra_dim", double(alg.dim()), true, alg.dim() == expected});
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> nd;
  auto rnd = [&] {
    Vector v(alg.dim());
    for (auto& e : v) e = Scalar(nd(rng), nd(rng));
    return v;
  };
  double assoc = 0, unit = 0;
  for (int n = 0; n < kInstances; ++n) {
    Vector a = rnd(), b = rnd(), d = rnd();
    assoc = std::max(assoc, (alg.multiply(alg.multiply(a, b), d) - alg.multiply(a, alg.multiply(b, d))).norm());
    unit = std::max({unit, (alg.multiply(alg.unit, a) - a).norm(), (alg.multiply(a, alg.unit) - a).norm()});
  }
  r.checks.push_back({"associativity", assoc, false, assoc < s.tol});
  r.checks.push_back({"unit", unit, false, unit < s.tol});

  ojson basis = ojson::array();
  for (const auto& e : alg.basis)
    basis.push_back({{"source", s.id(e.source)},
                     {"target", s.id(e.target)},
                     {"grade", s.id(e.grade)},
                     {"channel", s.id(e.channel)},
                     {"row", e.row},
                     {"col", e.col}});
  const double cut = 1e-3 * s.tol;
  ojson structure = ojson::array();
  for (int k = 0; k < alg.dim(); ++k)
    for (int a = 0; a < alg.dim(); ++a)
      for (int b = 0; b < alg.dim(); ++b) {
        const Scalar v = alg.structure[k](a, b);
        if (std::abs(v) > cut) structure.push_back({k, a, b, v.real(), v.imag()});
      }
  r.result["dim"] = alg.dim();
  r.result["basis"] = basis;
  r.result["structure"] = structure;
  r.result["unit"] = vector_json(alg.unit);
  return r;
}

Outcome cmd_centre(const Options& o) {
  auto spec = load_spec(o);
  Calculus c(spec);
  const double tol = spec->tol;
  auto alg = tube_algebra(c);
  auto blocks = decompose_tube_algebra(c, alg, o.seed);
  Outcome r;
  r.describe(*spec);
  ojson list = ojson::array();
  long sq = 0;
  double idem = 0, trip = 0;
  long not_primitive = 0;
  for (const auto& b : blocks) {
    long size = 0;
    for (int m : b.mults) size += m;
    sq += size * size;
    ojson entry;
    entry["size"] = size;
    entry["mults"] = b.mults;
    if (b.twist) entry["twist"] = complex_json(*b.twist);
    list.push_back(entry);
    idem = std::max(idem, idempotency_residual(c, b.eps));
    not_primitive += hom_between_idempotents(c, b.eps, b.eps).size() != 1;
    trip = std::max(trip, half_braiding_from_idempotent(c, b).residual);
  }
  r.checks.push_back({"block_dimensions", double(sq), true, sq == alg.dim()});
  r.checks.push_back({"block_idempotency", idem, false, idem < tol});
  r.checks.push_back({"block_primitive", double(not_primitive), true, not_primitive == 0});
  r.checks.push_back({"half_braiding_round_trip", trip, false, trip < 1e3 * tol});
  r.result["blocks"] = list;
  r.result["total_dim"] = alg.dim();
  return r;
}

Outcome cmd_modular(const Options& o) {
  auto spec = load_spec(o);
  if (!spec->braided()) throw UsageError("modular data needs a braided category (no R data in " + o.file + ")");
  Calculus c(spec);
  const double tol = spec->tol;
  auto md = modular_data(c);
  Outcome r;
  r.describe(*spec);
  const double sdual = (md.S - s_matrix_dual(c)).cwiseAbs().maxCoeff();
  const double tdual = (md.T - t_matrix_dual(c)).cwiseAbs().maxCoeff();
  const double sym = (md.S - md.S.transpose()).cwiseAbs().maxCoeff();
  r.checks.push_back({"s_dual_strands", sdual, false, sdual < tol});
  r.checks.push_back({"t_dual_strands", tdual, false, tdual < tol});
  r.checks.push_back({"s_symmetric", sym, false, sym < tol});

  std::vector<CentreIdempotent> idems;
  for (int i = 0; i < c.rank(); ++i)
    for (int j = 0; j < c.rank(); ++j) idems.push_back(eps_XY(c, make_word({i}), make_word({j})));
  auto v = completeness_check(c, idems);

  r.result["labels"] = spec->labels;
  r.result["S"] = matrix_json(md.S);
  r.result["T"] = vector_json(md.T);
  r.result["singular"] = md.singular;
  r.result["min_singular_value"] = md.min_singular_value;
  r.result["is_modular"] = !md.singular;
  r.result["completeness"] = {{"lhs", v.lhs},
                              {"rhs", v.rhs},
                              {"complete", v.complete},
                              {"orthogonal", v.orthogonal},
                              {"primitive", v.primitive}};
  return r;
}

Outcome cmd_check(const Options& o) {
  auto spec = load_spec(o);
  Calculus c(spec);
  Outcome r;
  r.describe(*spec);
  r.checks = identity_suite(c, kInstances, o.seed);
  const long passed = std::count_if(r.checks.begin(), r.checks.end(), [](const CheckEntry& e) { return e.pass; });
  r.result["passed"] = passed;
  r.result["failed"] = static_cast<long>(r.checks.size()) - passed;
  r.result["instances"] = kInstances;
  return r;
}

Outcome dispatch(const Options& o) {
  if (o.command == "validate") return cmd_validate(o);
  if (o.command == "info") return cmd_info(o);
  if (o.command == "tube-dim") return cmd_tube_dim(o);
  if (o.command == "tube-algebra") return cmd_tube_algebra(o);
  if (o.command == "centre") return cmd_centre(o);
  if (o.command == "modular") return cmd_modular(o);
  return cmd_check(o);
}

int emit(const Options& o, const ojson& report, std::ostream& out, std::ostream& err) {
  const std::string text = report.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
    return 0;
  }
  std::ofstream file(o.out);
  if (!file) {
    err << "fcat: cannot write " << o.out << "\n";
    return kUsage;
  }
  file << text;
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Computations in spherical fusion categories, their tube algebras and Drinfeld centres", "fcat"};
  app.set_version_flag("--version", FCAT_VERSION);
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--tol", o.tol, "absolute tolerance on residuals (overrides the file)")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "seed for random instances and block decomposition");
  app.add_option("--out", o.out, "write the report here instead of stdout");
  app.add_option("--x", o.x, "source word, comma-separated label ids");
  app.add_option("--y", o.y, "target word, comma-separated label ids");
  app.add_flag("--timing", o.timing, "record wall time in the report");

  const std::pair<const char*, const char*> commands[] = {
      {"validate", "check the category data (pentagon, hexagon, dimensions)"},
      {"info", "summarise a category file"},
      {"tube-dim", "dimensions of tube Hom spaces"},
      {"tube-algebra", "basis and structure constants of the tube algebra"},
      {"centre", "block decomposition of the tube algebra"},
      {"modular", "S and T matrices and completeness of the centre idempotents"},
      {"check", "run the full identity suite"}};
  for (auto [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", o.file, "category file")->required();
    sub->callback([&o, n = std::string(name)] { o.command = n; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << FCAT_VERSION << "\n";
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "fcat: " << e.what() << "\n";
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    result = dispatch(o);
  } catch (const ConsistencyError& e) {
    result.spec = std::filesystem::path(o.file).stem().string();
    result.tol = o.tol;
    result.checks.push_back({e.kind(), e.residual(), false, false});
    err << "fcat: " << e.what() << "\n";
  } catch (const SchemaError& e) {
    err << "fcat: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownLabel& e) {
    err << "fcat: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "fcat: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "fcat: " << e.what() << "\n";
    return kFail;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  ojson report;
  report["version"] = FCAT_VERSION;
  report["command"] = o.command;
  report["spec"] = result.spec;
  report["tol"] = result.tol ? ojson(*result.tol) : ojson(nullptr);
  report["seed"] = o.seed;
  ojson checks = ojson::array();
  for (const auto& e : result.checks) checks.push_back(check_json(e));
  report["checks"] = checks;
  report["result"] = result.result;
  report["elapsed_ms"] = o.timing ? ojson(ms) : ojson(nullptr);

  if (int code = emit(o, report, out, err)) return code;
  return all_pass(result.checks) ? kPass : kFail;
}

}  // namespace fcat::cli
