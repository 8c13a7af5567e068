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
"""Writes the small synthetic benchmark suite used by the test-suite.

Every plant has a single control input and a single measurement, so the best
static gain can be found by brute force: a dense scan over the gain followed
by bounded scalar refinement, with the closed-loop norm taken from a dense
frequency grid refined around its peak. The resulting norms are the suite's
reference values.
"""

import argparse
import json
from pathlib import Path

import numpy as np
from scipy import optimize


def two_state_unstable():
    return dict(
        A=[[0.0, 1.0], [2.0, -1.0]],
        B1=[[0.5], [1.0]],
        B2=[[0.0], [1.0]],
        C1=[[1.0, 0.0], [0.0, 0.0]],
        C2=[[1.0, 0.0]],
        D11=[[0.0], [0.0]],
        D12=[[0.0], [1.0]],
        D21=[[0.1]],
        D22=[[0.0]],
    )


def resonant_three_state():
    return dict(
        A=[[0.0, 1.0, 0.0], [-4.0, -0.2, 1.0], [0.0, 0.0, -3.0]],
        B1=[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        B2=[[0.0], [1.0], [0.5]],
        C1=[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
        C2=[[0.0, 1.0, 0.0]],
        D11=[[0.0, 0.0], [0.0, 0.0]],
        D12=[[0.0], [0.3]],
        D21=[[0.0, 0.2]],
        D22=[[0.0]],
    )


def as_arrays(p):
    return {k: np.array(v, dtype=float) for k, v in p.items()}


def closed_loop(p, k):
    return (p["A"] + k * p["B2"] @ p["C2"], p["B1"] + k * p["B2"] @ p["D21"],
            p["C1"] + k * p["D12"] @ p["C2"], p["D11"] + k * p["D12"] @ p["D21"])


def sigma(a, b, c, d, w):
    n = a.shape[0]
    g = c @ np.linalg.solve(1j * w * np.eye(n) - a, b) + d
    return np.linalg.norm(g, 2)


def grid_norm(a, b, c, d):
    if np.max(np.linalg.eigvals(a).real) >= 0.0:
        return np.inf
    ws = np.logspace(-4, 4, 4000)
    vals = np.array([sigma(a, b, c, d, w) for w in ws])
    best = max(vals.max(), np.linalg.norm(d, 2))
    for i in np.argsort(vals)[-3:]:
        lo, hi = np.log10(ws[max(i - 1, 0)]), np.log10(ws[min(i + 1, len(ws) - 1)])
        r = optimize.minimize_scalar(lambda t: -sigma(a, b, c, d, 10.0 ** t), bounds=(lo, hi),
                                     method="bounded", options={"xatol": 1e-10})
        best = max(best, -r.fun)
    return best


def best_static_gain(p, lo=-30.0, hi=30.0, points=3001):
    ks = np.linspace(lo, hi, points)
    vals = np.array([grid_norm(*closed_loop(p, k)) for k in ks])
    i = int(np.argmin(vals))
    step = ks[1] - ks[0]
    r = optimize.minimize_scalar(lambda k: grid_norm(*closed_loop(p, k)),
                                 bounds=(ks[i] - step, ks[i] + step), method="bounded",
                                 options={"xatol": 1e-9})
    return (r.x, r.fun) if r.fun < vals[i] else (ks[i], vals[i])


def plant_json(p):
    a = np.array(p["A"])
    return dict(n=a.shape[0], m1=len(p["B1"][0]), m2=1, p1=len(p["C1"]), p2=1, **p)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", type=Path, help="suite directory to write")
    args = ap.parse_args()
    (args.out / "plants").mkdir(parents=True, exist_ok=True)

    plants = {"SYN2": two_state_unstable(), "SYN3": resonant_three_state()}
    refs = {}
    for name, p in plants.items():
        (args.out / "plants" / f"{name}.json").write_text(json.dumps(plant_json(p), indent=1))
        k, norm = best_static_gain(as_arrays(p))
        refs[name] = float(norm)
        print(f"{name}: best static gain {k:.6f}, norm {norm:.10f}")

    # Stabilizing but untuned first-order controller for the warm-start case.
    warm = dict(nK=1, AK=[[-20.0]], BK=[[20.0]], CK=[[-3.0]], DK=[[0.0]])
    (args.out / "plants" / "SYN2_K1.json").write_text(json.dumps(warm, indent=1))

    source = "brute-force static gain"
    cases = [
        dict(name="SYN2", plant_file="plants/SYN2.json", tier="quick", orders=[0],
             tolerance=0.05, cpumax_seconds=60,
             references=[dict(source=source, order=0, norm=refs["SYN2"])]),
        # The best static gain bounds the best first-order controller from above.
        dict(name="SYN2-WARM", plant_file="plants/SYN2.json", tier="quick", orders=[1],
             tolerance=0.05, cpumax_seconds=60,
             references=[dict(source=source, order=1, norm=refs["SYN2"])],
             warm_start_files={"1": "plants/SYN2_K1.json"}),
        dict(name="SYN3", plant_file="plants/SYN3.json", tier="large", orders=[0, 1],
             tolerance=0.05, cpumax_seconds=60,
             references=[dict(source=source, order=0, norm=refs["SYN3"])]),
        dict(name="ABSENT", plant_file="plants/ABSENT.json", tier="quick", orders=[0],
             references=[dict(source="none", order=0, norm=1.0)]),
    ]
    (args.out / "cases.json").write_text(json.dumps({"cases": cases}, indent=1) + "\n")


if __name__ == "__main__":
    main()
