#pragma once

namespace driftlag::drift {

/// Symmetric absolute percentage error 2|f - a| / (a + f), in [0, 2]; 0 when both are 0.
double smape(double actual, double forecast);

}  // namespace driftlag::drift
