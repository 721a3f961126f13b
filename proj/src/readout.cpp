#include "readout.h"

#include <algorithm>

#include "errors.h"
#include "textio.h"

namespace memcell {

SubcellAux subcell_aux(double m_ohms, double r_ohms) {
    if (!(r_ohms > 0.0))
        throw ConfigError("sub-cell resistance must be positive, got " +
                          fmt_g(r_ohms));
    if (!(m_ohms >= 0.0))
        throw ConfigError("memristance must be non-negative, got " +
                          fmt_g(m_ohms));
    SubcellAux a;
    a.r1c = r_ohms + m_ohms * r_ohms / (2.0 * r_ohms + m_ohms);
    a.r2c = r_ohms + r_ohms * r_ohms / (2.0 * r_ohms + m_ohms);
    a.k = 2.0 + a.r1c / a.r2c;
    return a;
}

static double kahan_sorted(std::vector<double> &terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0, c = 0.0;
    for (double t : terms) {
        const double y = t - c;
        const double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s;
}

double generalized_vout(const std::vector<double> &m_ohms,
                        const std::vector<double> &r_ohms, double r_load,
                        double v_read) {
    if (m_ohms.size() != r_ohms.size())
        throw ConfigError("memristance and resistance arrays differ in length");
    if (m_ohms.empty())
        throw ConfigError("readout needs at least one sub-cell");
    if (!(r_load > 0.0))
        throw ConfigError("r_load must be positive, got " + fmt_g(r_load));

    std::vector<double> num;
    std::vector<double> den;
    num.reserve(m_ohms.size());
    den.reserve(m_ohms.size() + 1);
    den.push_back(1.0 / r_load);
    for (size_t i = 0; i < m_ohms.size(); ++i) {
        const SubcellAux a = subcell_aux(m_ohms[i], r_ohms[i]);
        num.push_back(1.0 / (a.r1c * a.k));
        den.push_back((1.0 / a.r1c) * (1.0 - 1.0 / a.k));
    }
    return v_read * kahan_sorted(num) / kahan_sorted(den);
}

double closed_form_vout(const std::array<double, 3> &m_ohms,
                        const std::array<double, 3> &r_ohms, double r_load,
                        double v_read) {
    return generalized_vout({m_ohms.begin(), m_ohms.end()},
                            {r_ohms.begin(), r_ohms.end()}, r_load, v_read);
}

} // namespace memcell
