"""Write a small set of CLI input files (random Lagrangians, a rotation path, a sampled pair).

    python scripts/make_inputs.py --out scripts/inputs --n 2 --seed 3
"""
from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np
import scipy.linalg as sla

from sik.io import matrix_to_json, path_to_json
from sik.paths import rotation_path
from sik.symplectic import SymplecticSpace, random_hermitian, random_lagrangian


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="scripts/inputs")
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    V = SymplecticSpace.standard(args.n)

    def write(name, obj):
        (out / name).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")

    for name in ("l1", "l2", "m1", "m2"):
        write(f"{name}.json", matrix_to_json(random_lagrangian(V, rng).cols))

    write("rotation.json", path_to_json(rotation_path(V, 2.5, 3.0), samples=65))
    write("hamiltonian.json", {
        "breaks": [0.0, 0.5, 1.0],
        "hamiltonians": [matrix_to_json(random_hermitian(V.dim, rng, 2.0)) for _ in range(2)],
    })

    A = -V.Jinv @ random_hermitian(V.dim, rng, 3.0)
    L0 = random_lagrangian(V, rng).cols
    times = np.linspace(0.0, 1.0, 65)
    write("lam_path.json", {"samples": [{"t": float(t), "matrix": matrix_to_json(sla.expm(A * t) @ L0)}
                                        for t in times]})
    print(f"wrote inputs for n={args.n} to {out}")


if __name__ == "__main__":
    main()
