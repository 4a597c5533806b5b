#include "fcat/fusion_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace fcat {

using nlohmann::json;

int FMatrix::left_index(int e, int alpha, int beta) const {
  for (std::size_t i = 0; i < left.size(); ++i)
    if (left[i] == std::array<int, 3>{e, alpha, beta}) return static_cast<int>(i);
  return -1;
}

int FMatrix::right_index(int f, int gamma, int delta) const {
  for (std::size_t i = 0; i < right.size(); ++i)
    if (right[i] == std::array<int, 3>{f, gamma, delta}) return static_cast<int>(i);
  return -1;
}

int CategorySpec::index(const std::string& id) const {
  auto it = std::find(labels.begin(), labels.end(), id);
  if (it == labels.end()) throw UnknownLabel(id);
  return static_cast<int>(it - labels.begin());
}

std::vector<int> CategorySpec::channels(int a, int b) const {
  std::vector<int> out;
  for (int c = 0; c < rank(); ++c)
    if (N(a, b, c) > 0) out.push_back(c);
  return out;
}

const FMatrix& CategorySpec::F(int a, int b, int c, int d) const {
  int r = rank();
  return f_[((a * r + b) * r + c) * r + d];
}

const Matrix& CategorySpec::R(int a, int b, int c) const {
  if (r_.empty()) throw NotBraided();
  int r = rank();
  return r_[(a * r + b) * r + c];
}

Scalar CategorySpec::zigzag(int a) const {
  const FMatrix& f = F(a, dual[a], a, a);
  return f.value(f.left_index(unit, 0, 0), f.right_index(unit, 0, 0));
}

Scalar CategorySpec::zigzag_dual(int a) const {
  int b = dual[a];
  const FMatrix& f = F(b, a, b, b);
  return f.inverse(f.right_index(unit, 0, 0), f.left_index(unit, 0, 0));
}

namespace {

std::string str_field(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string())
    throw SchemaError(std::string("missing or non-string field '") + key + "'");
  return doc[key].get<std::string>();
}

int label_of(const CategorySpec& spec, const json& v) {
  if (!v.is_string()) throw SchemaError("label entries must be strings");
  auto it = std::find(spec.labels.begin(), spec.labels.end(), v.get<std::string>());
  if (it == spec.labels.end()) throw SchemaError("unknown label '" + v.get<std::string>() + "'");
  return static_cast<int>(it - spec.labels.begin());
}

int int_of(const json& v) {
  if (!v.is_number_integer()) throw SchemaError("expected an integer");
  return v.get<int>();
}

double num_of(const json& v) {
  if (!v.is_number()) throw SchemaError("expected a number");
  return v.get<double>();
}

double cond(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  auto s = svd.singularValues();
  if (s(s.size() - 1) == 0.0) return INFINITY;
  return s(0) / s(s.size() - 1);
}

}  // namespace

struct SpecBuilder {
  static std::shared_ptr<CategorySpec> parse(const json& doc) {
    if (!doc.is_object()) throw SchemaError("category document must be a JSON object");
    auto spec = std::make_shared<CategorySpec>();
    CategorySpec& s = *spec;
    s.name = str_field(doc, "name");

    if (!doc.contains("labels") || !doc["labels"].is_array() || doc["labels"].empty())
      throw SchemaError("'labels' must be a non-empty array");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw SchemaError("labels must be strings");
      s.labels.push_back(l.get<std::string>());
    }
    if (std::set<std::string>(s.labels.begin(), s.labels.end()).size() != s.labels.size())
      throw SchemaError("duplicate label ids");
    const int r = s.rank();
    s.unit = label_of(s, json(str_field(doc, "unit")));

    if (!doc.contains("dual") || !doc["dual"].is_object()) throw SchemaError("'dual' must be an object");
    s.dual.assign(r, -1);
    for (auto it = doc["dual"].begin(); it != doc["dual"].end(); ++it)
      s.dual[label_of(s, json(it.key()))] = label_of(s, it.value());
    for (int a = 0; a < r; ++a)
      if (s.dual[a] < 0) throw SchemaError("dual missing for '" + s.labels[a] + "'");

    s.fusion_.assign(static_cast<std::size_t>(r) * r * r, 0);
    if (!doc.contains("N") || !doc["N"].is_array()) throw SchemaError("'N' must be an array");
    for (const auto& e : doc["N"]) {
      if (!e.is_array() || e.size() != 4) throw SchemaError("N entries are [a,b,c,m]");
      int a = label_of(s, e[0]), b = label_of(s, e[1]), c = label_of(s, e[2]);
      int m = int_of(e[3]);
      if (m < 1) throw SchemaError("N multiplicities must be >= 1");
      int& slot = s.fusion_[(a * r + b) * r + c];
      if (slot) throw SchemaError("duplicate N entry");
      slot = m;
    }

    // associator bases
    s.f_.assign(static_cast<std::size_t>(r) * r * r * r, FMatrix{});
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c)
          for (int d = 0; d < r; ++d) {
            FMatrix& f = s.f_[((a * r + b) * r + c) * r + d];
            for (int e = 0; e < r; ++e)
              for (int al = 0; al < s.N(a, b, e); ++al)
                for (int be = 0; be < s.N(e, c, d); ++be) f.left.push_back({e, al, be});
            for (int g = 0; g < r; ++g)
              for (int ga = 0; ga < s.N(b, c, g); ++ga)
                for (int de = 0; de < s.N(a, g, d); ++de) f.right.push_back({g, ga, de});
            f.value = Matrix::Zero(static_cast<long>(f.left.size()), static_cast<long>(f.right.size()));
          }

    if (!doc.contains("F") || !doc["F"].is_array()) throw SchemaError("'F' must be an array");
    std::set<std::array<int, 10>> seen;
    for (const auto& e : doc["F"]) {
      if (!e.is_array() || e.size() != 12) throw SchemaError("F entries have 12 fields");
      std::array<int, 10> k{};
      for (int i = 0; i < 6; ++i) k[i] = label_of(s, e[i]);
      for (int i = 6; i < 10; ++i) k[i] = int_of(e[i]);
      if (!seen.insert(k).second) throw SchemaError("duplicate F entry");
      FMatrix& f = s.f_[((k[0] * r + k[1]) * r + k[2]) * r + k[3]];
      int row = f.left_index(k[4], k[6], k[7]);
      int col = f.right_index(k[5], k[8], k[9]);
      if (row < 0 || col < 0) throw SchemaError("F entry on a forbidden fusion channel");
      f.value(row, col) = Scalar(num_of(e[10]), num_of(e[11]));
    }

    if (doc.contains("R")) {
      if (!doc["R"].is_array()) throw SchemaError("'R' must be an array");
      s.r_.assign(static_cast<std::size_t>(r) * r * r, Matrix{});
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
          for (int c = 0; c < r; ++c)
            s.r_[(a * r + b) * r + c] = Matrix::Zero(s.N(a, b, c), s.N(b, a, c));
      std::set<std::array<int, 5>> rseen;
      for (const auto& e : doc["R"]) {
        if (!e.is_array() || e.size() != 7) throw SchemaError("R entries have 7 fields");
        std::array<int, 5> k{label_of(s, e[0]), label_of(s, e[1]), label_of(s, e[2]), int_of(e[3]),
                             int_of(e[4])};
        if (!rseen.insert(k).second) throw SchemaError("duplicate R entry");
        Matrix& m = s.r_[(k[0] * r + k[1]) * r + k[2]];
        if (k[3] < 0 || k[4] < 0 || k[3] >= m.rows() || k[4] >= m.cols())
          throw SchemaError("R entry on a forbidden fusion channel");
        m(k[3], k[4]) = Scalar(num_of(e[5]), num_of(e[6]));
      }
    }

    if (!doc.contains("dims")) throw MissingData("quantum dimensions ('dims') are required");
    if (!doc["dims"].is_object()) throw SchemaError("'dims' must be an object");
    s.dims.assign(r, Scalar(NAN, NAN));
    for (auto it = doc["dims"].begin(); it != doc["dims"].end(); ++it) {
      const auto& v = it.value();
      if (!v.is_array() || v.size() != 2) throw SchemaError("dims entries are [re,im]");
      s.dims[label_of(s, json(it.key()))] = Scalar(num_of(v[0]), num_of(v[1]));
    }
    for (int a = 0; a < r; ++a)
      if (std::isnan(s.dims[a].real())) throw MissingData("no dimension for '" + s.labels[a] + "'");

    if (doc.contains("tol")) {
      s.tol = num_of(doc["tol"]);
      if (!(s.tol > 0)) throw SchemaError("'tol' must be positive");
    }
    if (doc.contains("unitary")) {
      if (!doc["unitary"].is_boolean()) throw SchemaError("'unitary' must be a boolean");
      s.unitary = doc["unitary"].get<bool>();
    }

    s.D2 = 0.0;
    for (int a = 0; a < r; ++a) s.D2 += s.dims[a] * s.dims[a];
    return spec;
  }

  static void invert(CategorySpec& s) {
    for (auto& f : s.f_) {
      if (f.value.rows() != f.value.cols())
        throw ConsistencyError("invertibility", INFINITY, "non-square F block");
      if (f.value.size() == 0) {
        f.inverse = f.value;
        continue;
      }
      if (cond(f.value) > 1e12) throw ConsistencyError("invertibility", cond(f.value), "singular F block");
      f.inverse = f.value.inverse();
    }
  }
};

std::shared_ptr<const CategorySpec> CategorySpec::from_json(const json& doc, std::optional<double> tol) {
  auto spec = SpecBuilder::parse(doc);
  if (tol) spec->tol = *tol;
  SpecBuilder::invert(*spec);
  spec->validate();
  return spec;
}

std::shared_ptr<const CategorySpec> CategorySpec::from_json_unchecked(const json& doc) {
  auto spec = SpecBuilder::parse(doc);
  SpecBuilder::invert(*spec);
  return spec;
}

std::shared_ptr<const CategorySpec> CategorySpec::load(const std::filesystem::path& file,
                                                       std::optional<double> tol) {
  std::ifstream in(file);
  if (!in) throw SchemaError("cannot open " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc, tol);
}

void CategorySpec::validate() const {
  const int r = rank();
  const int u = unit;

  for (int a = 0; a < r; ++a)
    for (int c = 0; c < r; ++c) {
      int want = a == c ? 1 : 0;
      if (N(a, u, c) != want || N(u, a, c) != want) throw ConsistencyError("unit_law", 1.0, labels[a]);
    }
  if (dual[u] != u) throw ConsistencyError("duality", 1.0, "dual of the unit");
  for (int a = 0; a < r; ++a) {
    if (dual[dual[a]] != a) throw ConsistencyError("duality", 1.0, "dual is not an involution");
    for (int b = 0; b < r; ++b)
      if (N(a, b, u) != (b == dual[a] ? 1 : 0)) throw ConsistencyError("duality", 1.0, labels[a]);
  }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d) {
          long lhs = 0, rhs = 0;
          for (int e = 0; e < r; ++e) {
            lhs += N(a, b, e) * N(e, c, d);
            rhs += N(b, c, e) * N(a, e, d);
          }
          if (lhs != rhs) throw ConsistencyError("associativity", std::abs(double(lhs - rhs)));
        }

  if (std::abs(dims[u] - 1.0) > tol) throw ConsistencyError("dimension", std::abs(dims[u] - 1.0), "d(1)");
  for (int a = 0; a < r; ++a) {
    if (std::abs(dims[a]) <= tol) throw ConsistencyError("degenerate_dimension", std::abs(dims[a]), labels[a]);
    double s = std::abs(dims[a] - dims[dual[a]]);
    if (s > tol) throw ConsistencyError("sphericality", s, labels[a]);
    for (int b = 0; b < r; ++b) {
      Scalar sum = 0;
      for (int c = 0; c < r; ++c) sum += double(N(a, b, c)) * dims[c];
      double res = std::abs(sum - dims[a] * dims[b]);
      if (res > tol) throw ConsistencyError("dimension", res, labels[a] + "," + labels[b]);
    }
  }
  if (std::abs(D2) <= tol) throw ConsistencyError("dimension", std::abs(D2), "global dimension vanishes");

  // associators with a unit leg must be trivial in the file's gauge
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        if (a != u && b != u && c != u) continue;
        for (int d = 0; d < r; ++d) {
          const FMatrix& f = F(a, b, c, d);
          for (std::size_t i = 0; i < f.left.size(); ++i)
            for (std::size_t j = 0; j < f.right.size(); ++j) {
              auto [e, al, be] = f.left[i];
              auto [g, ga, de] = f.right[j];
              bool same;
              if (a == u)
                same = be == ga;
              else if (b == u)
                same = be == de;
              else
                same = al == de;
              (void)e;
              (void)g;
              double res = std::abs(f.value(i, j) - (same ? 1.0 : 0.0));
              if (res > tol) throw ConsistencyError("unit_normalization", res, "F with a unit leg");
            }
        }
      }

  auto pent = validate_pentagon(*this);
  if (pent.max_residual > tol) throw ConsistencyError("pentagon", pent.max_residual);

  for (const auto& f : f_) {
    if (f.value.size() == 0) continue;
    if (unitary) {
      double res = (f.value * f.value.adjoint() - Matrix::Identity(f.value.rows(), f.value.rows()))
                       .cwiseAbs()
                       .maxCoeff();
      if (res > tol) throw ConsistencyError("unitarity", res);
    }
  }

  for (int a = 0; a < r; ++a) {
    double rig = std::abs(zigzag(a) - zigzag_dual(a));
    if (rig > tol) throw ConsistencyError("rigidity", rig, labels[a]);
    double loop = std::abs(zigzag(a) * zigzag(dual[a]) * dims[a] * dims[a] - 1.0);
    if (loop > tol) throw ConsistencyError("sphericality", loop, "loop value of " + labels[a]);
  }

  if (braided()) {
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c) {
          const Matrix& m = R(a, b, c);
          if (m.size() == 0) continue;
          if (m.rows() != m.cols() || cond(m) > 1e12) throw ConsistencyError("invertibility", INFINITY, "R block");
          if (a == u || b == u) {
            double res = (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
            if (res > tol) throw ConsistencyError("unit_normalization", res, "R with a unit leg");
          }
        }
    auto hex = validate_hexagon(*this);
    if (hex.max_residual > tol) throw ConsistencyError("hexagon", hex.max_residual);
  }
}

namespace {

Scalar fget(const FMatrix& f, int e, int al, int be, int g, int ga, int de) {
  int i = f.left_index(e, al, be), j = f.right_index(g, ga, de);
  if (i < 0 || j < 0) return 0.0;
  return f.value(i, j);
}

}  // namespace

PentagonReport validate_pentagon(const CategorySpec& s) {
  PentagonReport rep;
  const int r = s.rank();
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d)
          for (int e = 0; e < r; ++e)
            for (int f = 0; f < r; ++f)
              for (int g = 0; g < r; ++g)
                for (int k = 0; k < r; ++k)
                  for (int l = 0; l < r; ++l) {
                    int nal = s.N(a, b, f), nbe = s.N(f, c, g), nga = s.N(g, d, e);
                    int nx = s.N(c, d, l), ny = s.N(b, l, k), nz = s.N(a, k, e);
                    if (!nal || !nbe || !nga || !nx || !ny || !nz) continue;
                    for (int al = 0; al < nal; ++al)
                      for (int be = 0; be < nbe; ++be)
                        for (int ga = 0; ga < nga; ++ga)
                          for (int x = 0; x < nx; ++x)
                            for (int y = 0; y < ny; ++y)
                              for (int z = 0; z < nz; ++z) {
                                Scalar lhs = 0;
                                for (int j2 = 0; j2 < s.N(f, l, e); ++j2)
                                  lhs += fget(s.F(f, c, d, e), g, be, ga, l, x, j2) *
                                         fget(s.F(a, b, l, e), f, al, j2, k, y, z);
                                Scalar rhs = 0;
                                for (int h = 0; h < r; ++h)
                                  for (int h1 = 0; h1 < s.N(b, c, h); ++h1)
                                    for (int h2 = 0; h2 < s.N(a, h, g); ++h2)
                                      for (int m1 = 0; m1 < s.N(h, d, k); ++m1)
                                        rhs += fget(s.F(a, b, c, g), f, al, be, h, h1, h2) *
                                               fget(s.F(a, h, d, e), g, h2, ga, k, m1, z) *
                                               fget(s.F(b, c, d, k), h, h1, m1, l, x, y);
                                double res = std::abs(lhs - rhs);
                                if (res > rep.max_residual) {
                                  rep.max_residual = res;
                                  rep.worst = {a, b, c, d, e, f, g, k, l};
                                }
                              }
                  }
  return rep;
}

namespace {

// Braiding applied to the first two legs of left trees of (x,y,z;d): maps
// left(x,y,z) -> left(y,x,z).
Matrix braid_left_legs(const CategorySpec& s, int x, int y, int z, int d) {
  const FMatrix& src = s.F(x, y, z, d);
  const FMatrix& dst = s.F(y, x, z, d);
  Matrix m = Matrix::Zero(static_cast<long>(dst.left.size()), static_cast<long>(src.left.size()));
  for (std::size_t j = 0; j < src.left.size(); ++j) {
    auto [e, al, be] = src.left[j];
    const Matrix& rm = s.R(x, y, e);
    for (int al2 = 0; al2 < rm.cols(); ++al2) m(dst.left_index(e, al2, be), static_cast<long>(j)) = rm(al, al2);
  }
  return m;
}

// Braiding applied to the last two legs of right trees of (x,y,z;d): maps
// right(x,y,z) -> right(x,z,y).
Matrix braid_right_legs(const CategorySpec& s, int x, int y, int z, int d) {
  const FMatrix& src = s.F(x, y, z, d);
  const FMatrix& dst = s.F(x, z, y, d);
  Matrix m = Matrix::Zero(static_cast<long>(dst.right.size()), static_cast<long>(src.right.size()));
  for (std::size_t j = 0; j < src.right.size(); ++j) {
    auto [f, ga, de] = src.right[j];
    const Matrix& rm = s.R(y, z, f);
    for (int ga2 = 0; ga2 < rm.cols(); ++ga2) m(dst.right_index(f, ga2, de), static_cast<long>(j)) = rm(ga, ga2);
  }
  return m;
}

}  // namespace

HexagonReport validate_hexagon(const CategorySpec& s) {
  if (!s.braided()) throw NotBraided();
  HexagonReport rep;
  const int r = s.rank();
  auto note = [&](double res, int a, int b, int c, int d) {
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.worst = {a, b, c, d};
    }
  };
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d) {
          const FMatrix& abc = s.F(a, b, c, d);
          if (abc.empty()) continue;
          {
            // a braided past b⊗c: right(a,b,c) -> left(b,c,a)
            const FMatrix& bca = s.F(b, c, a, d);
            const FMatrix& bac = s.F(b, a, c, d);
            Matrix lhs = Matrix::Zero(static_cast<long>(bca.left.size()), static_cast<long>(abc.right.size()));
            for (std::size_t j = 0; j < abc.right.size(); ++j) {
              auto [f, ga, de] = abc.right[j];
              const Matrix& rm = s.R(a, f, d);
              for (int de2 = 0; de2 < rm.cols(); ++de2) lhs(bca.left_index(f, ga, de2), static_cast<long>(j)) = rm(de, de2);
            }
            Matrix rhs = bca.inverse.transpose() * braid_right_legs(s, b, a, c, d) * bac.value.transpose() *
                         braid_left_legs(s, a, b, c, d) * abc.inverse.transpose();
            note((lhs - rhs).cwiseAbs().maxCoeff(), a, b, c, d);
          }
          {
            // a⊗b braided past c: left(a,b,c) -> right(c,a,b)
            const FMatrix& cab = s.F(c, a, b, d);
            const FMatrix& acb = s.F(a, c, b, d);
            Matrix lhs = Matrix::Zero(static_cast<long>(cab.right.size()), static_cast<long>(abc.left.size()));
            for (std::size_t j = 0; j < abc.left.size(); ++j) {
              auto [e, al, be] = abc.left[j];
              const Matrix& rm = s.R(e, c, d);
              for (int be2 = 0; be2 < rm.cols(); ++be2) lhs(cab.right_index(e, al, be2), static_cast<long>(j)) = rm(be, be2);
            }
            Matrix rhs = cab.value.transpose() * braid_left_legs(s, a, c, b, d) * acb.inverse.transpose() *
                         braid_right_legs(s, a, b, c, d) * abc.value.transpose();
            note((lhs - rhs).cwiseAbs().maxCoeff(), a, b, c, d);
          }
        }
  return rep;
}

std::vector<long> channel_counts(const CategorySpec& s, const Word& w) {
  std::vector<long> v(s.rank(), 0);
  v[s.unit] = 1;
  for (const auto& x : w) {
    std::vector<long> next(s.rank(), 0);
    for (int a = 0; a < s.rank(); ++a) {
      if (!v[a]) continue;
      for (int j = 0; j < s.rank(); ++j) {
        int m = x.multiplicity(j);
        if (!m) continue;
        for (int c = 0; c < s.rank(); ++c) next[c] += v[a] * m * s.N(a, j, c);
      }
    }
    v = std::move(next);
  }
  return v;
}

long hom_dim(const CategorySpec& s, const Word& a, const Word& b) {
  for (const Word* w : {&a, &b})
    for (const auto& x : *w)
      if (x.is_simple() && (x.label() < 0 || x.label() >= s.rank()))
        throw UnknownLabel(std::to_string(x.label()));
  auto ca = channel_counts(s, a), cb = channel_counts(s, b);
  long total = 0;
  for (int k = 0; k < s.rank(); ++k) total += ca[k] * cb[k];
  return total;
}

Scalar global_dimension(const CategorySpec& s) { return s.D2; }

Scalar double_decompose_residual(const CategorySpec& s, int r) {
  Scalar sum = 0;
  for (int a = 0; a < s.rank(); ++a)
    for (int b = 0; b < s.rank(); ++b)
      sum += double(hom_dim(s, make_word({a, b}), make_word({r}))) * s.d(a) * s.d(b);
  return sum - s.d(r) * s.D2;
}

}  // namespace fcat
