#pragma once

#include <limits>

namespace atmq {

/// One grid point of a parameter sweep. Rows whose selection left no
/// probability mass are kept with valid = false.
struct SweepRow {
    double param = 0.0;
    double value = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
};

}  // namespace atmq
