#!/usr/bin/env python3
# Copyright 2026 The fohinf Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts a plant saved as a MATLAB .mat file into fohinf plant JSON.

COMPleib names the control blocks B and C; B2/C2 are accepted as well.
Missing feedthrough blocks are written as zeros. Export from MATLAB/Octave:

    [A,B1,B,C1,C,D11,D12,D21] = COMPleib('HE1');
    save('-v7', 'HE1.mat', 'A', 'B1', 'B', 'C1', 'C', 'D11', 'D12', 'D21');

then run:  compleib_to_json.py HE1.mat bench/suite/plants/HE1.json
"""

import argparse
import json
import sys

import numpy as np
from scipy.io import loadmat

ALIASES = {"B2": ("B2", "B"), "C2": ("C2", "C")}


def pick(data, key):
    for name in ALIASES.get(key, (key,)):
        if name in data:
            return np.atleast_2d(np.asarray(data[name], dtype=float))
    return None


def convert(data):
    a = pick(data, "A")
    if a is None:
        raise ValueError("missing A")
    n = a.shape[0]
    blocks = {k: pick(data, k) for k in ("B1", "B2", "C1", "C2", "D11", "D12", "D21", "D22")}
    for k in ("B1", "B2", "C1", "C2"):
        if blocks[k] is None:
            raise ValueError(f"missing {k}")
    m1, m2 = blocks["B1"].shape[1], blocks["B2"].shape[1]
    p1, p2 = blocks["C1"].shape[0], blocks["C2"].shape[0]
    shapes = {"D11": (p1, m1), "D12": (p1, m2), "D21": (p2, m1), "D22": (p2, m2)}
    for k, shape in shapes.items():
        if blocks[k] is None or blocks[k].size == 0:
            blocks[k] = np.zeros(shape)
    out = {"n": n, "m1": m1, "m2": m2, "p1": p1, "p2": p2, "A": a.tolist()}
    for k, v in blocks.items():
        out[k] = v.tolist()
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("mat", help="input .mat file")
    ap.add_argument("json", help="output plant JSON")
    args = ap.parse_args()
    try:
        plant = convert(loadmat(args.mat))
    except (ValueError, OSError) as e:
        sys.exit(f"{args.mat}: {e}")
    with open(args.json, "w") as f:
        json.dump(plant, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
