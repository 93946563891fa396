/*
 * Copyright 2026 The causal-calib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

namespace causal_calib::stats {

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
/// x in [0, 1]. Continued fraction evaluated with the modified Lentz
/// method, using the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) to stay in the
/// fast-converging region.
double regularized_incomplete_beta(double a, double b, double x);

/// P(F > f) for F ~ F(d1, d2).
double f_survival(double f, double d1, double d2);

/// P(F <= f) for F ~ F(d1, d2).
double f_cdf(double f, double d1, double d2);

}  // namespace causal_calib::stats
