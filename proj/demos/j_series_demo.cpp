// Computes the first unstable J-function coefficients of the quintic hybrid
// model and prints them in the canonical string form.

#include <iostream>

#include "hybridwc/jfun.hpp"

using namespace hybridwc;

int main() {
    ModelParams p = quintic_model(6);
    std::cout << "quintic hybrid model, epsilon = " << p.epsilon.str() << "\n";
    for (long beta = 0; beta <= p.max_q_degree; ++beta) {
        StateClass c = unstable_coeff_noneq(beta, p);
        std::cout << "q^" << beta << "  (sector " << p.j_sector(beta).numerator() << "/"
                  << p.d() << ")";
        if (c.is_zero()) std::cout << "  0";
        for (const auto& [k, v] : c.entries())
            std::cout << "  H^" << k.second << " * " << v.canonical_string();
        std::cout << "\n";
    }
    return 0;
}
