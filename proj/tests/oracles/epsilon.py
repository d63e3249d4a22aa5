# Copyright 2026 The fedchaos Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Gaussian mechanism epsilon with strong composition, evaluated with mpmath.

Prints golden values frozen into privacy_test.cc.
"""
from mpmath import mp, mpf, sqrt, log, exp

mp.dps = 40


def epsilon(sigma, delta, q, steps):
    eps0 = sqrt(2 * log(mpf("1.25") / delta)) / sigma
    step = q * eps0
    return step * sqrt(2 * steps * log(1 / delta)) + steps * step * (exp(step) - 1)


if __name__ == "__main__":
    print("sigma=1 delta=1e-5 q=0.1 steps=50:", mp.nstr(epsilon(mpf(1), mpf("1e-5"), mpf("0.1"), 50), 20))
    print("sigma=2 delta=1e-5 q=0.1 steps=50:", mp.nstr(epsilon(mpf(2), mpf("1e-5"), mpf("0.1"), 50), 20))
    print("sigma=1 delta=1e-5 q=1 steps=1:", mp.nstr(epsilon(mpf(1), mpf("1e-5"), mpf(1), 1), 20))
