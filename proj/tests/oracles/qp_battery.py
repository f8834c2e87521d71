"""Random strictly convex QPs solved with the Goldfarb-Idnani dual active-set
method (quadprog). Writes tests/data/qp_battery.json."""
import json
import pathlib

import numpy as np
import quadprog

rng = np.random.default_rng(20261014)
instances = []
for k in range(10):
    n = int(rng.integers(3, 51))
    me = int(rng.integers(0, max(1, n // 4) + 1))
    mi = int(rng.integers(1, n + 1))
    R = rng.normal(size=(n, n))
    G = R.T @ R / n + 0.1 * np.eye(n)
    c = rng.normal(size=n) * 3.0
    Ae = rng.normal(size=(me, n))
    be = rng.normal(size=me)
    Ai = rng.normal(size=(mi, n))
    # rows l <= Ai x <= u; make some rows two-sided, keep x=0 region nonempty
    lo = -rng.uniform(0.1, 1.0, size=mi)
    up = rng.uniform(0.1, 1.0, size=mi)
    two = rng.uniform(size=mi) < 0.4
    up[~two] = np.inf
    xl = -2.0 * np.ones(n)
    xu = 2.0 * np.ones(n)
    # quadprog: min 1/2 x'Gx - a'x  s.t. C'x >= b, first meq equalities
    C = [Ae.T, Ai.T, -Ai[two].T, np.eye(n), -np.eye(n)]
    b = [be, lo, -up[two], xl, -xu]
    Cm = np.hstack(C)
    bm = np.concatenate(b)
    x, f, *_ = quadprog.solve_qp(G, -c, Cm, bm, me)
    instances.append({
        "n": n,
        "G": G.tolist(),
        "c": c.tolist(),
        "A": np.vstack([Ae, Ai]).tolist(),
        "lower": np.concatenate([be, lo]).tolist(),
        "upper": [float(v) if np.isfinite(v) else None for v in np.concatenate([be, up])],
        "x_lower": xl.tolist(),
        "x_upper": xu.tolist(),
        "x_opt": x.tolist(),
        "f_opt": float(f),
    })
out = pathlib.Path(__file__).resolve().parents[1] / "data" / "qp_battery.json"
out.write_text(json.dumps({"instances": instances}, indent=1))
print(out, [i["n"] for i in instances], [round(i["f_opt"], 6) for i in instances])
