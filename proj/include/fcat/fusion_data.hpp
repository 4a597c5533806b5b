#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fcat/types.hpp"
#include "fcat/word.hpp"

namespace fcat {

// One associator block F[a,b,c;d]. Rows are left trees ((ab)_e c)_d indexed by
// (e, alpha, beta); columns are right trees (a(bc)_f)_d indexed by (f, gamma, delta).
struct FMatrix {
  std::vector<std::array<int, 3>> left;
  std::vector<std::array<int, 3>> right;
  Matrix value;
  Matrix inverse;

  int left_index(int e, int alpha, int beta) const;
  int right_index(int f, int gamma, int delta) const;
  bool empty() const { return left.empty(); }
};

struct PentagonReport {
  double max_residual = 0.0;
  std::array<int, 9> worst{};  // a,b,c,d,e,f,g,k,l
};

struct HexagonReport {
  double max_residual = 0.0;
  std::array<int, 4> worst{};  // a,b,c,d
};

class CategorySpec {
 public:
  std::string name;
  std::vector<std::string> labels;
  int unit = 0;
  std::vector<int> dual;
  std::vector<Scalar> dims;
  Scalar D2 = 1.0;
  double tol = 1e-9;
  bool unitary = false;

  int rank() const { return static_cast<int>(labels.size()); }
  int index(const std::string& id) const;
  const std::string& id(int label) const { return labels.at(label); }

  int N(int a, int b, int c) const { return fusion_[(a * rank() + b) * rank() + c]; }
  std::vector<int> channels(int a, int b) const;

  const FMatrix& F(int a, int b, int c, int d) const;
  bool braided() const { return !r_.empty(); }
  // R[a,b;c] as an N_ab^c x N_ba^c matrix [mu][nu]
  const Matrix& R(int a, int b, int c) const;

  Scalar d(int a) const { return dims[a]; }

  // coefficient of the bare zig-zag a -> a a* a -> a
  Scalar zigzag(int a) const;
  // coefficient of the opposite bare zig-zag a* -> a* a a* -> a*
  Scalar zigzag_dual(int a) const;

  static std::shared_ptr<const CategorySpec> from_json(const nlohmann::json& doc,
                                                       std::optional<double> tol = {});
  static std::shared_ptr<const CategorySpec> load(const std::filesystem::path& file,
                                                  std::optional<double> tol = {});
  // Parses and checks the schema only; the identity validators are not run.
  static std::shared_ptr<const CategorySpec> from_json_unchecked(const nlohmann::json& doc);

  // throws ConsistencyError on the first failed invariant
  void validate() const;

 private:
  std::vector<int> fusion_;
  std::vector<FMatrix> f_;
  std::vector<Matrix> r_;
  friend struct SpecBuilder;
};

PentagonReport validate_pentagon(const CategorySpec& spec);
HexagonReport validate_hexagon(const CategorySpec& spec);

// number of fusion channels of each simple in the tensor word
std::vector<long> channel_counts(const CategorySpec& spec, const Word& w);
long hom_dim(const CategorySpec& spec, const Word& a, const Word& b);
Scalar global_dimension(const CategorySpec& spec);

// Σ_{S,T} N_{ST}^R d(S) d(T) - d(R) D2
Scalar double_decompose_residual(const CategorySpec& spec, int r);

}  // namespace fcat
