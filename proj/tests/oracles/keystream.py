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

"""Reference logistic-map keystream, written from the formula alone.

Prints golden values frozen into cipher_test.cc.
"""
import math


def keystream(r, x0, burn_in, n):
    x = x0
    for _ in range(burn_in):
        x = r * x * (1.0 - x)
    out = []
    for _ in range(n):
        x = r * x * (1.0 - x)
        frac = x - math.floor(x)
        out.append(math.floor(frac * 2**32) % 256)
    return out


if __name__ == "__main__":
    print("key(3.8, 0.123456, 1000):", keystream(3.8, 0.123456, 1000, 8))
    print("key(3.99, 0.7, 0):", keystream(3.99, 0.7, 0, 8))
    x = 0.2
    for i in range(2):
        x = 3.8 * x * (1 - x)
        print("iterate", i + 1, repr(x))
