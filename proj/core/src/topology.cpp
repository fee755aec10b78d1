#include "spindle/topology.hpp"

#include <string>

#include "spindle/errors.hpp"

namespace spindle {

HomotopyClass class_of_winding(long w, const OrbifoldSignature& sig) {
    const long N = sig.order;
    long v = w % N;
    if (v < 0) v += N;
    return {static_cast<int>(v)};
}

bool in_subgroup_of_order(HomotopyClass c, int k, const OrbifoldSignature& sig) {
    if (k < 1 || sig.order % k != 0)
        throw NotADivisor("k=" + std::to_string(k) + " does not divide m+n=" +
                          std::to_string(sig.order));
    return c.value % (sig.order / k) == 0;
}

int min_contractible_iterate_nonenclosing(const OrbifoldSignature& sig) {
    return sig.nonenclosing_contractible_order();
}

}  // namespace spindle
