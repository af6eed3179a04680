"""Randomized self-test: fast path vs. reduction oracle, plus Euler identity."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .cubical import PersistenceDiagram, betti_at, build_complex, compute_diagram, euler_at
from .oracle import oracle_diagram


@dataclass
class CheckReport:
    total: int = 0
    matched: int = 0
    euler_ok: int = 0
    seconds: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.matched == self.total and self.euler_ok == self.total

    def summary(self) -> str:
        per = 1e3 * float(np.mean(self.seconds)) if self.seconds else 0.0
        return "\n".join(
            [
                f"{self.matched}/{self.total} diagrams match",
                f"{self.euler_ok}/{self.total} grids satisfy the Euler identity",
                f"{per:.3f} ms per diagram (fast path, wall clock)",
                "PASS" if self.ok else "FAIL",
            ]
        )


def _corrupt(d: PersistenceDiagram) -> PersistenceDiagram:
    # shift every death: simulates a broken pairing for the failure-path test
    return PersistenceDiagram(d.dim, d.birth, d.death - 0.125, d.essential)


def random_grid(rng: np.random.Generator, max_side: int = 6, levels: int = 5) -> np.ndarray:
    h, w = rng.integers(1, max_side + 1, size=2)
    return rng.integers(0, levels, size=(h, w)) / (levels - 1)


def euler_holds(g, d: PersistenceDiagram) -> bool:
    c = build_complex(g)
    for tau in np.unique(c.vertices):
        b0, b1 = betti_at(d, tau)
        if b0 - b1 != euler_at(c, tau):
            return False
    return True


def run_check(count: int = 100, seed: int = 0, corrupt: bool = False) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport()
    for k in range(count):
        g = random_grid(rng)
        t0 = time.perf_counter()
        fast = compute_diagram(g)
        report.seconds.append(time.perf_counter() - t0)
        if corrupt:
            fast = _corrupt(fast)
        report.total += 1
        if fast.multiset() == oracle_diagram(build_complex(g)).multiset():
            report.matched += 1
        else:
            report.failures.append(k)
        if euler_holds(g, fast):
            report.euler_ok += 1
    return report
