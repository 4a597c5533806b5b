#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fcat/tube.hpp"

namespace fcat {

struct HalfBraiding {
  Word object;
  std::vector<Morphism> tau;  // tau[s] ∈ Hom(s X, X s)
};

// τ on a word G: τ_{G1 G2} = (τ_{G1} ⊗ id)(id ⊗ τ_{G2})
Morphism half_braid_word(const Calculus& c, const HalfBraiding& hb, const Word& g);
double half_braiding_residual(const Calculus& c, const HalfBraiding& hb);
// (id_I ⊗ σ_{J,s}^{-1})(σ_{s,I} ⊗ id_J) on I J
HalfBraiding half_braiding_from_pair(const Calculus& c, const Word& i, const Word& j);

enum class Origin { half_braiding, braiding_pair, block_decomposition };

struct CentreIdempotent {
  TubeMorphism eps;
  std::vector<int> mults;
  Origin origin = Origin::half_braiding;
  std::optional<Scalar> twist;
};

std::vector<int> multiplicities(const Calculus& c, const TubeMorphism& e);
double idempotency_residual(const Calculus& c, const TubeMorphism& e);

CentreIdempotent eps_from_half_braiding(const Calculus& c, const HalfBraiding& hb);
CentreIdempotent eps_XY(const Calculus& c, const Word& i, const Word& j);

// ε_τ ∘ α against the single-diagram form, α ∈ Hom_TC(Y, X)
double handle_slide_check(const Calculus& c, const HalfBraiding& hb, const TubeMorphism& alpha);
// β ∘ ε_τ, β ∈ Hom_TC(X, Y)
double handle_slide_check_mirror(const Calculus& c, const HalfBraiding& hb, const TubeMorphism& beta);

std::vector<TubeMorphism> hom_between_idempotents(const Calculus& c, const TubeMorphism& e1, const TubeMorphism& e2);

struct CompletenessVerdict {
  bool complete = false;
  bool orthogonal = false;
  bool primitive = false;
  double max_idempotency = 0;
  int lhs = 0;
  int rhs = 0;
};
CompletenessVerdict completeness_check(const Calculus& c, const std::vector<CentreIdempotent>& idems);

struct ModularData {
  Matrix S;
  Vector T;
  bool singular = true;
  double min_singular_value = 0;
};

Matrix s_matrix(const Calculus& c);
// S with both strands replaced by their duals
Matrix s_matrix_dual(const Calculus& c);
Vector t_matrix(const Calculus& c);
Vector t_matrix_dual(const Calculus& c);
ModularData modular_data(const Calculus& c);
bool is_modular(const Calculus& c);

Scalar killing_ring_eval(const Calculus& c, int r);

struct SliceReport {
  double horizontal = 0;
  double vertical = 0;
  int instances = 0;
};
SliceReport slice_checks(const Calculus& c, int instances, std::uint64_t seed);

std::vector<CentreIdempotent> decompose_tube_algebra(const Calculus& c, const TubeAlgebra& a,
                                                     std::uint64_t seed = 0x5EED);

struct SplitHalfBraiding {
  HalfBraiding hb;
  double residual = 0;  // splitting round trip against the source idempotent
};
SplitHalfBraiding half_braiding_from_idempotent(const Calculus& c, const CentreIdempotent& e);

}  // namespace fcat
