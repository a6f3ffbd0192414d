#!/usr/bin/env python3
"""Regenerate fixtures/intrust_cases.json from the reference implementation.

Run from the shim directory with the nameforge package installed:

    python3 scripts/make_loss_fixture.py

The shim's loss tests replay these cases and demand agreement to 1e-5,
so the fixture is the contract between the two implementations.
"""
import json
import pathlib
import random

from nameforge.metrics import in_trust_grad_p, in_trust_loss

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "intrust_cases.json"


def normalized(rng: random.Random, n: int) -> list[float]:
    raw = [rng.uniform(0.2, 1.0) for _ in range(n)]
    total = sum(raw)
    return [x / total for x in raw]


def case(p, q, alpha, beta, delta, label):
    return {
        "label": label,
        "p": p,
        "q": q,
        "alpha": alpha,
        "beta": beta,
        "delta": delta,
        "loss": in_trust_loss(p, q, alpha=alpha, beta=beta, delta=delta),
        "grad": list(in_trust_grad_p(p, q, alpha=alpha, beta=beta, delta=delta)),
    }


def main() -> None:
    rng = random.Random(20240517)
    cases = [
        case([0.5, 0.5], [0.5, 0.5], 1.0, 1.0, 0.5, "uniform-2"),
        case([1.0], [1.0], 1.0, 1.0, 0.5, "degenerate-1"),
        case([0.0, 1.0], [0.5, 0.5], 1.0, 1.0, 0.5, "clamped-zero"),
        case([0.25, 0.75], [0.75, 0.25], 2.0, 0.0, 0.5, "ce-only"),
        case([0.25, 0.75], [0.75, 0.25], 0.0, 3.0, 0.0, "dce-only-delta-0"),
        case([0.25, 0.75], [0.75, 0.25], 0.0, 3.0, 1.0, "dce-only-delta-1"),
    ]
    for i in range(40):
        n = rng.randint(2, 6)
        cases.append(
            case(
                normalized(rng, n),
                normalized(rng, n),
                rng.uniform(0.0, 2.0),
                rng.uniform(0.0, 2.0),
                rng.uniform(0.0, 1.0),
                f"random-{i}",
            )
        )
    OUT.write_text(json.dumps(cases, indent=1) + "\n")
    print(f"wrote {len(cases)} cases to {OUT}")


if __name__ == "__main__":
    main()
