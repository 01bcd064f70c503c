#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "foldcycle/field.hpp"

namespace foldcycle {

enum class ShiftConvention { Minus, Plus };

std::string_view to_string(ShiftConvention c);
ShiftConvention parse_shift_convention(std::string_view s);

struct UnfoldingParams {
  int k = 1;
  std::vector<double> lambda;  // a_1 … a_{2k−2}
  double epsilon = 0.1;
  double b = 0.0;
  ShiftConvention shift = ShiftConvention::Minus;
  friend bool operator==(const UnfoldingParams&, const UnfoldingParams&) = default;
};

/// Throws InvalidLambda unless lambda has 2k−2 entries, each |a_i| ≥ 1e-6 and
/// pairwise gaps ≥ 1e-6.
void validate_lambda(int k, const std::vector<double>& lambda);

/// a_1 < 0 < a_2 < … < a_{2k−2}.
bool lambda_is_ordered(const std::vector<double>& lambda);

inline constexpr double kLambdaMinGap = 1e-6;
inline constexpr double kMethodAgreementTol = 1e-7;

struct XiValues {
  std::vector<double> plus;
  std::vector<double> minus;
};

/// Interpolation targets ξ_i± = ∓δ ε^{2k−1}(a± a_i^{2k−1} + ε a_i^{2k} f±(ε a_i)).
XiValues xi_values(const PiecewiseField& z, const MonodromyData& d, const std::vector<double>& lambda, double epsilon);

struct PerturbationPolys {
  Poly1 p_plus;
  Poly1 p_minus;
  // C_j(Λ, ε) = c_j / ε^{2k−1−j}, index j−1
  std::vector<double> scaled_plus;
  std::vector<double> scaled_minus;
  double norm_plus = 0.0;
  double norm_minus = 0.0;
  double method_disagreement = 0.0;  // relative coefficient-norm gap, direct solve vs divided differences
};

/// P± of degree ≤ 2k−2 with P(0) = 0 and P(ε a_i) = ξ_i±. Built by Newton
/// divided differences in the rescaled variable u = x/ε and cross-checked
/// against a direct solve of the Vandermonde system in x.
PerturbationPolys build_perturbation(const PiecewiseField& z, const UnfoldingParams& params);

/// Y± ← Y± + X±·P±.
PiecewiseField build_unfolded(const PiecewiseField& z, const PerturbationPolys& polys);

/// Upper field composed with x ↦ x − b (Minus) or x ↦ x + b (Plus).
PiecewiseField apply_shift(const PiecewiseField& z, double b, ShiftConvention convention);

/// build_perturbation + build_unfolded + apply_shift(params.b).
PiecewiseField unfolded_field(const PiecewiseField& z, const UnfoldingParams& params);

/// Contact abscissas {0} ∪ {ε a_i}, sorted.
std::vector<double> contact_abscissas(const UnfoldingParams& params);

struct LadderEntry {
  double x0 = 0.0;
  double residual_plus = 0.0;  // |Y+(x0, 0)|
  double residual_minus = 0.0;
  int multiplicity_plus = 0;
  int multiplicity_minus = 0;
  Visibility visibility_plus = Visibility::NotApplicable;
  Visibility visibility_minus = Visibility::NotApplicable;
  Visibility expected = Visibility::NotApplicable;
  bool ok = false;
};

struct LadderReport {
  std::vector<LadderEntry> contacts;
  int extra_roots_plus = 0;  // roots of Y+(x,0) near the ladder that are not predicted
  int extra_roots_minus = 0;
  bool pass = false;
  std::vector<std::string> failures;
};

inline constexpr double kLadderResidualTol = 1e-9;

/// Checks every predicted contact for a vanishing Y±, multiplicity 2 on both
/// sides and the visibility pattern: in sorted order the contacts alternate
/// invisible, visible, invisible, … starting from the leftmost one.
LadderReport verify_contact_ladder(const PiecewiseField& unfolded, const UnfoldingParams& params);

struct Lemma1Side {
  std::vector<double> C;   // C_j(Λ, 0)
  std::vector<double> dC;  // ∂C_j/∂ε(Λ, 0)
  std::vector<double> s1, s2, s3, s4;  // per contact index
  std::vector<double> s2_residual, s4_residual;
  double T_residual = 0.0;
  double U_residual = 0.0;
};

struct Lemma1Report {
  int k = 0;
  std::vector<double> lambda;
  double alpha = 0.0;
  bool exact = false;
  Lemma1Side plus;
  Lemma1Side minus;
  // per contact index: s1, s2, s3, s4 cross-side relation residuals
  std::vector<std::array<double, 4>> cross_side_residuals;
  bool f0_ratio_checks_skipped = false;
  double max_residual = 0.0;
};

inline constexpr double kLemma1Step = 1e-2;
inline constexpr double kLemma1ResidualTol = 1e-8;

/// Numerical mode: C_j(Λ,0) and ∂C_j/∂ε(Λ,0) by quadratic extrapolation of
/// C_j(Λ,ε) over ε ∈ {h, h/2, h/4}. Exact mode: the same quantities solved in
/// rational arithmetic from the ε = 0 interpolation conditions, with all
/// double inputs converted exactly.
Lemma1Report lemma1_check(const PiecewiseField& z, int k, const std::vector<double>& lambda, bool exact = false);

struct V2LimitIndex {
  int index = 0;  // 1-based position in Λ
  double a = 0.0;
  std::vector<double> epsilons;
  std::vector<double> values;
  std::vector<double> errors;
  double order = 0.0;  // fitted log-log slope of error vs ε
  double K = 0.0;      // max error/ε
  bool ok = false;
};

struct V2LimitReport {
  double V2 = 0.0;
  double limit = 0.0;  // (2k+1)·V2/3
  std::vector<V2LimitIndex> indices;
  bool pass = false;
  std::vector<std::string> failures;
};

inline constexpr double kV2LimitMinOrder = 0.9;

/// Local V2 at every invisible contact ε a_i of the unfolded field, for
/// ε ∈ {ε0, ε0/2, ε0/4}, compared with (2k+1)·V2/3.
V2LimitReport local_V2_limit_check(const PiecewiseField& z, const UnfoldingParams& params);

/// 1-based indices of Λ whose contacts are invisible: {1} ∪ {2, 4, …, 2k−2}.
std::vector<int> invisible_indices(int k);

}  // namespace foldcycle
