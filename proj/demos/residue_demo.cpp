// Walks one instance of the residue transport identity on the (3,3) model:
// the residue of the fixed-point series at z = a1 - a2 against the recursion
// coefficient times the neighbouring series.

#include <iostream>

#include "hybridwc/verify.hpp"

using namespace hybridwc;

int main() {
    ModelParams p = cc33_model(6);
    Multiplicity m = p.mult(2), mp = p.mult(2);
    ResidueReport rep = check_residue_recursion(1, 2, m, mp, 1, p, 6);
    std::cout << "pole z = (a1 - a2)/1, flags m = m' = 2/3\n";
    for (long beta = 0; beta <= 6; ++beta) {
        const RatFunc* lhs = rep.lhs.get(beta);
        const RatFunc* rhs = rep.rhs.get(beta);
        std::cout << "q^" << beta << "  residue  "
                  << (lhs ? lhs->canonical_string() : "(0)/(1)") << "\n"
                  << "     transport " << (rhs ? rhs->canonical_string() : "(0)/(1)") << "\n";
    }
    std::cout << (rep.pass ? "identity holds exactly\n" : "MISMATCH\n");
    return rep.pass ? 0 : 1;
}
