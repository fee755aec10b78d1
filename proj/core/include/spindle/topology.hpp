#pragma once
#include "spindle/profile.hpp"

namespace spindle {

/// Class of a closed-curve lift in pi_1 of the unit tangent bundle, which is
/// cyclic of order m+n. A closed geodesic of total winding w lifts into the
/// subgroup generated by w mod (m+n); contractible iff the class is 0.
struct HomotopyClass {
    int value = 0;  ///< in [0, m+n)
};

HomotopyClass class_of_winding(long w, const OrbifoldSignature& sig);

/// True iff the class lies in the (unique) subgroup of order k, i.e. value
/// is a multiple of (m+n)/k. Throws NotADivisor unless k | m+n.
bool in_subgroup_of_order(HomotopyClass c, int k, const OrbifoldSignature& sig);

/// Iterations after which a simple closed curve not enclosing the cone
/// points becomes contractible in the unit tangent bundle: (m+n)/gcd(m,n).
int min_contractible_iterate_nonenclosing(const OrbifoldSignature& sig);

}  // namespace spindle
