#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <tuple>
#include <vector>

#include "fcat/fusion_data.hpp"

namespace fcat {

// Left-nested splitting tree ((..(w1 w2)_e2 w3)_e3 ..)_en.
// leaves/copies pick a simple summand of every letter; edges holds e2..en
// (en is the channel); vertices holds the multiplicity index of each vertex.
struct FusionTree {
  std::vector<int> leaves;
  std::vector<int> copies;
  std::vector<int> edges;
  std::vector<int> vertices;

  auto operator<=>(const FusionTree&) const = default;
  bool operator==(const FusionTree&) const = default;

  // fused label of the first m letters
  int prefix(int m, int unit) const;
};

struct ChannelBasis {
  Word word;
  std::vector<std::vector<FusionTree>> trees;  // per channel
  std::vector<std::map<FusionTree, int>> position;

  int size(int k) const { return static_cast<int>(trees[k].size()); }
  int index(int k, const FusionTree& t) const { return position[k].at(t); }
};

// One (a, b, mu) block of the product basis of A++B at a fixed channel:
// columns ordered (tree of A at a) major, (tree of B at b) minor.
struct ProductGroup {
  int a, b, mu;
  int offset, na, nb;
};

// Binary bracketing of a word; leaves are letter positions.
struct Bracketing {
  int leaf = -1;
  std::shared_ptr<const Bracketing> left, right;

  static Bracketing leaf_at(int i);
  static Bracketing node(Bracketing l, Bracketing r);
  static Bracketing left_nested(int n);
  int first() const;
  int last() const;
  bool operator==(const Bracketing& o) const;
};

// Spec plus memoised bases and recoupling matrices.
class Calculus {
 public:
  explicit Calculus(std::shared_ptr<const CategorySpec> spec);

  const CategorySpec& spec() const { return *spec_; }
  std::shared_ptr<const CategorySpec> spec_ptr() const { return spec_; }
  int rank() const { return spec_->rank(); }

  const ChannelBasis& basis(const Word& w) const;
  std::vector<ProductGroup> product_groups(const Word& a, const Word& b, int k) const;
  // product basis of (A, B) at k -> canonical basis of A++B at k
  const Matrix& recoupling(const Word& a, const Word& b, int k) const;
  const Matrix& recoupling_inverse(const Word& a, const Word& b, int k) const;

  // bare zig-zag coefficient a -> a a* a -> a with unit-normalised cup and cap
  Scalar zigzag(int a) const;
  Scalar pivot(int a) const;

 private:
  Matrix build_recoupling(const Word& a, const Word& b, int k) const;

  std::shared_ptr<const CategorySpec> spec_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Word, std::unique_ptr<ChannelBasis>> bases_;
  mutable std::map<std::tuple<Word, Word, int>, std::unique_ptr<Matrix>> recoupling_;
  mutable std::map<std::tuple<Word, Word, int>, std::unique_ptr<Matrix>> recoupling_inv_;
  std::vector<Scalar> zigzag_;
};

struct Morphism {
  Word source;
  Word target;
  std::vector<Matrix> blocks;  // per channel: |trees_target(k)| x |trees_source(k)|

  Morphism& operator+=(const Morphism& o);
  Morphism& operator-=(const Morphism& o);
  Morphism& operator*=(Scalar s);
};

Morphism operator+(Morphism a, const Morphism& b);
Morphism operator-(Morphism a, const Morphism& b);
Morphism operator*(Scalar s, Morphism a);

double max_abs(const Morphism& m);
double distance(const Morphism& a, const Morphism& b);

Morphism zero(const Calculus& c, const Word& source, const Word& target);
Morphism identity(const Calculus& c, const Word& w);
Morphism compose(const Morphism& g, const Morphism& f);
Morphism tensor(const Calculus& c, const Morphism& f, const Morphism& g);
Morphism inverse(const Morphism& f);
Morphism random_morphism(const Calculus& c, const Word& source, const Word& target, std::mt19937_64& rng);

// Coefficients of the canonical basis re-expressed in another bracketing:
// column j of the returned matrix expands the j-th tree of `shape` in the
// canonical (left-nested) basis.
Matrix bracketing_to_canonical(const Calculus& c, const Word& w, int k, const Bracketing& shape);
// number of trees of a given bracketing at channel k
int bracketing_size(const Calculus& c, const Word& w, int k, const Bracketing& shape);

// Re-associates the target of m at internal vertex `position` (1 <= position <= n-2):
// ((.. w_position) w_{position+1}) w_{position+2} -> (.. w_position)(w_{position+1} w_{position+2}).
// Returned blocks hold the coefficients of m in the re-associated target basis.
struct ReshapedMorphism {
  Word source;
  Word target;
  Bracketing target_shape;
  std::vector<Matrix> blocks;
};
ReshapedMorphism f_move(const Calculus& c, const Morphism& m, int position);
Morphism f_move_inverse(const Calculus& c, const ReshapedMorphism& m);
// elementary move ((X Y) Z) -> (X (Y Z)) at the node reached by `path`
// (sequence of 0 = left, 1 = right); returns the matrix from old to new coefficients
Matrix elementary_f_move(const Calculus& c, const Word& w, int k, const Bracketing& shape,
                         const std::vector<int>& path, Bracketing* result);

// duality: cup(a) ∈ Hom([], [a,a*]), cap(a) ∈ Hom([a*,a], []),
// cap_right(a) ∈ Hom([a,a*], []), cup_left(a) ∈ Hom([], [a*,a])
Morphism cup(const Calculus& c, const Word& w);
Morphism cap(const Calculus& c, const Word& w);
Morphism cap_right(const Calculus& c, const Word& w);
Morphism cup_left(const Calculus& c, const Word& w);

// f ∈ Hom(X Y, Z) -> Hom(X, Z Y*), keep = |X|; unbend_right takes keep = |Z|
Morphism bend_right(const Calculus& c, const Morphism& f, std::size_t keep);
Morphism unbend_right(const Calculus& c, const Morphism& g, std::size_t keep);
// f ∈ Hom(X Y, Z) -> Hom(Y, X* Z), move = |X|
Morphism bend_left(const Calculus& c, const Morphism& f, std::size_t move);
Morphism unbend_left(const Calculus& c, const Morphism& g, std::size_t move);
// f ∈ Hom(X, Y Z) -> Hom(X Z*, Y), keep = |Y|
Morphism bend_target_right(const Calculus& c, const Morphism& f, std::size_t keep);
Morphism unbend_target_right(const Calculus& c, const Morphism& g, std::size_t keep);
// f ∈ Hom(X, Y Z) -> Hom(Y* X, Z), move = |Y|
Morphism bend_target_left(const Calculus& c, const Morphism& f, std::size_t move);
Morphism unbend_target_left(const Calculus& c, const Morphism& g, std::size_t move);

Morphism braid(const Calculus& c, int a, int b);
// σ_{A,B} : A B -> B A
Morphism braid(const Calculus& c, const Word& a, const Word& b);
// σ_{B,A}^{-1} : A B -> B A
Morphism braid_inverse(const Calculus& c, const Word& a, const Word& b);

Scalar trace(const Calculus& c, const Morphism& f);
Scalar right_closure(const Calculus& c, const Morphism& f);
Scalar left_closure(const Calculus& c, const Morphism& f);

struct Resolution {
  int channel;
  Morphism b;       // Hom([channel], A)
  Morphism b_dual;  // Hom(A, [channel])
};
std::vector<Resolution> decompose_resolution(const Calculus& c, const Word& a);
// dual family for an arbitrary basis {b_i} ⊂ Hom([r], A)
std::vector<Morphism> dual_basis(const Calculus& c, const std::vector<Morphism>& basis);
double dual_decompose_check(const Calculus& c, const Word& x, int s);

// identity-like unit shift [1] ++ W -> W ++ [1]
Morphism unit_shift(const Calculus& c, const Word& w);

}  // namespace fcat
