#pragma once

#include "cnduality/errors.hpp"

#include <sstream>
#include <utility>

namespace cnduality::detail {

// Runs `attempt(t)`. On a regularity violation, bisects [0, t] for the last
// time at which `attempt` still succeeds and rethrows with that time attached.
template <class Attempt>
auto run_with_collision_report(Attempt&& attempt, double t) -> decltype(attempt(t)) {
    try {
        return attempt(t);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::RegularityViolation) throw;
        double ok = 0.0;
        double bad = t;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (ok + bad);
            try {
                attempt(mid);
                ok = mid;
            } catch (const Error& inner) {
                if (inner.kind() != ErrorKind::RegularityViolation) throw;
                bad = mid;
            }
        }
        std::ostringstream os;
        os.precision(17);
        os << "spectrum became degenerate before t = " << t << " (last safe t = " << ok << "); " << e.what();
        throw Error(ErrorKind::RegularityViolation, os.str(), ok);
    }
}

}  // namespace cnduality::detail
