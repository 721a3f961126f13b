#pragma once

#include <array>
#include <vector>

namespace memcell {

// Per-sub-cell reduction of the read divider: the memristor M and its equal
// resistors R collapse to the pair (r1c, r2c) and the ratio k = 2 + r1c/r2c.
// k runs from 8/3 at M = 0 up to 4 as M grows without bound.
struct SubcellAux {
    double r1c = 0.0;
    double r2c = 0.0;
    double k = 0.0;
};

SubcellAux subcell_aux(double m_ohms, double r_ohms);

// Output of the n-sub-cell read divider:
//   v_read * sum(1/(r1c_i*k_i)) / (sum((1/r1c_i)*(1 - 1/k_i)) + 1/r_load)
// Terms are sorted before compensated summation, so the result depends only
// on the multiset of (m, r) pairs. With equal r this makes digit-permuted
// patterns collapse to bit-identical outputs.
double generalized_vout(const std::vector<double> &m_ohms,
                        const std::vector<double> &r_ohms, double r_load,
                        double v_read);

// Three-sub-cell form; bit-identical to generalized_vout at n = 3.
double closed_form_vout(const std::array<double, 3> &m_ohms,
                        const std::array<double, 3> &r_ohms, double r_load,
                        double v_read);

} // namespace memcell
