#pragma once

#include <gmpxx.h>

#include <vector>

#include "coleman/colemandata.hpp"
#include "coleman/curve.hpp"
#include "coleman/padic_value.hpp"

namespace coleman {

struct RationalPoint {
  mpq_class x, y;
  bool at_infinity = false;
};

enum class DiskKind { NonWeierstrass, WeierstrassFinite, Infinity };

struct Disk {
  DiskKind kind = DiskKind::Infinity;
  mpz_class xbar, ybar;  // reductions mod p
  mpz_class root;        // Weierstrass disks: root of Q in the disk, mod p^exponent
};

// Reduces a rational point mod p^exponent so that y^2 = Q(x) holds there.
// Outside Weierstrass disks y is Hensel-lifted; inside them x is adjusted
// toward the simple root. Throws InvalidPoint.
PointMod lift_point(const Curve& c, const RationalPoint& P, int exponent);

Disk classify_disk(const Curve& c, const PointMod& P, int exponent);

// Frobenius-fixed point of P's residue disk, mod p^exponent.
PointMod teichmuller(const Curve& c, const PointMod& P, int exponent);

// Exponent at which tiny integrals are evaluated so that results hold mod p^N.
int tiny_exponent(const Curve& c);

// int_P^Q omega_i for i < 2g, P and Q in one residue disk, given mod
// p^exponent; results mod p^N.
std::vector<mpz_class> tiny_integrals(const Curve& c, const PointMod& P, const PointMod& Q, int exponent);

// v_p(det(M - I)) capped at N.
int det_valuation(const ColemanData& data);

// Solves (M^T - I) v = rhs for the data's matrix (M^T is the matrix whose
// rows express phi^* omega_i). Values carry shift h and precision N - h.
std::vector<PadicValue> solve_frobenius_system(const ColemanData& data, const std::vector<mpz_class>& rhs);

struct IntegralResult {
  std::vector<PadicValue> values;
  long abs_prec = 0;
};

// int_P^infinity omega_i using data that contains the Teichmuller point of
// P's disk (when P is not in a Weierstrass disk).
IntegralResult integrals_to_infinity(const Curve& c, const ColemanData& data, const RationalPoint& P);

IntegralResult integrate(const Curve& c, const ColemanData& data, const RationalPoint& P, const RationalPoint& Q);

// Dot product with coefficients a_i.
PadicValue combine(const IntegralResult& r, const std::vector<mpq_class>& coeffs, const mpz_class& p);

// Teichmuller points (mod p^(N+1)) for the distinct non-Weierstrass disks of pts.
std::vector<PointMod> teichmuller_points(const Curve& c, const std::vector<RationalPoint>& pts);

struct IntegrateOptions {
  DataOptions data;
  bool naive = false;
  bool auto_bump = false;
};

struct IntegrationRun {
  Curve curve;  // possibly at raised precision
  ColemanData data;
  std::vector<IntegralResult> results;  // one per (P, Q) pair
};

// Computes the Coleman data once for every disk involved and integrates each pair.
IntegrationRun integrate_pairs(const Curve& c, const std::vector<std::pair<RationalPoint, RationalPoint>>& pairs,
                               const IntegrateOptions& opt = {});

}  // namespace coleman
