#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "grid.hpp"

namespace mixedlab {

// all CSV output uses 17 significant digits so round-trips are exact
inline std::string fmt17(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

inline void write_field_csv(std::ostream& os, const Field& f) {
    os << "t,rho,value\n";
    for (int i = 0; i < f.grid.n_t; ++i)
        for (int j = 0; j < f.grid.n_rho; ++j)
            os << fmt17(f.grid.t(i)) << ',' << fmt17(f.grid.rho(j)) << ','
               << fmt17(f.at(i, j)) << '\n';
}

inline void write_field_csv(const std::string& path, const Field& f) {
    std::ofstream os(path);
    if (!os) throw config_error("cannot open " + path);
    write_field_csv(os, f);
}

} // namespace mixedlab
