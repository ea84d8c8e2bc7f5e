#pragma once

#include <string>
#include <vector>

#include "chainkit/chain_model.hpp"
#include "chainkit/linalg.hpp"

namespace chainkit {

/// T_ab: the full chain integral of m_a(x1) e^{-V_1/2} ... m_b(xm) e^{-V_m/2}
/// with all couplings in between, over the basis monomials m_a.
struct ChainMomentMatrix {
  Matrix entries;
  double condition = 1.0;
};

/// Propagates the level-1 monomial vectors through every transfer matrix and
/// pairs the result with the level-m monomials. Cost O(m n^2 N).
ChainMomentMatrix chain_moment_matrix(const ChainSpec& spec);

/// T = L D U with L unit lower, U unit upper and D diagonal, no pivoting.
struct LduFactors {
  Matrix lower;
  Vector diagonal;
  Matrix upper;
};

/// Doolittle elimination in the given order. Throws DegenerateEnsembleError
/// when a pivot falls to <= rel_tol times the largest entry of the leading
/// block (the corresponding leading minor vanishes).
LduFactors ldu_no_pivot(const Matrix& t, double rel_tol = 1e-12);

/// Biorthogonal pair (p_a, s_b) in the monomial basis of `basis`, with p monic.
struct BiorthogonalSystem {
  BasisFamily basis = BasisFamily::AllMonomials;
  int particles = 0;
  Matrix p;     // unit lower triangular; row a holds the coefficients of p_a
  Matrix s;     // upper triangular; column b holds the coefficients of s_b
  Matrix psi1;  // N x n_1 grid values of psi_a on level 1
  Matrix phim;  // N x n_m grid values of phi_a on level m
  double residual = 0.0;  // max |P T S - I|
  double condition = 1.0;
  std::vector<std::string> warnings;

  Vector monomials(double x) const;
  Vector p_values(double x) const { return p * monomials(x); }
  Vector s_values(double x) const { return s.transpose() * monomials(x); }
};

BiorthogonalSystem biorthogonalize(const ChainSpec& spec, const ChainMomentMatrix& t);

/// chain_moment_matrix followed by biorthogonalize.
BiorthogonalSystem build_biorthogonal_system(const ChainSpec& spec);

/// psi_a^{(1)}(x) = p_a(x) e^{-V_1(x)/2} for all a.
Vector psi_first(const ChainSpec& spec, const BiorthogonalSystem& bio, double x);
/// phi_a^{(m)}(x) = s_a(x) e^{-V_m(x)/2} for all a.
Vector phi_last(const ChainSpec& spec, const BiorthogonalSystem& bio, double x);

}  // namespace chainkit
