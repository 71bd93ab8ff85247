#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "coleman/colemandata.hpp"
#include "coleman/curve.hpp"

namespace coleman {

// |X(F_{p^k})| including the point at infinity, by enumeration. Needs p^k <= ~10^7.
std::uint64_t point_count(const Curve& c, int k);

// Monic irreducible polynomial of degree k over F_p, ascending coefficients.
std::vector<std::uint64_t> irreducible_poly(std::uint64_t p, int k);

// det(1 - T*M) mod p^N, coefficients a_0..a_{2g}.
std::vector<mpz_class> frobenius_charpoly(const ColemanData& data);

// L-polynomial coefficients a_0..a_{2g} from counts N_1..N_g.
std::vector<mpz_class> lpoly_from_counts(const mpz_class& p, int g, const std::vector<std::uint64_t>& counts);

// N_1..N_g implied by a full L-polynomial.
std::vector<mpz_class> counts_from_lpoly(const mpz_class& p, const std::vector<mpz_class>& a);

struct ZetaReport {
  std::vector<mpz_class> charpoly;         // mod p^N
  std::vector<mpz_class> expected;         // from brute-force counts
  std::vector<std::uint64_t> counts;       // N_1..N_g
  std::vector<bool> conclusive;            // a_i, i <= g, determined by the Weil bound
  std::vector<mpz_class> lifted;           // filled when all conclusive
  std::vector<mpz_class> lifted_counts;    // N_k from the lifted polynomial
  bool residues_match = false;
  bool fully_conclusive = false;
  bool lifted_match = false;
  bool pass() const { return residues_match && (!fully_conclusive || lifted_match); }
};

ZetaReport zeta_consistency(const Curve& c, const ColemanData& data);

}  // namespace coleman
