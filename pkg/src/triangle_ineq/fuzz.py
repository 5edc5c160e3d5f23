"""Seeded randomized checks of every inequality on generated triangles.

Random numbers come from SplitMix64 used as a counter-based generator: draw
``k`` of a stream with seed ``s`` is ``mix(s + (k + 1) * 0x9E3779B97F4A7C15)``
with the standard finalizer constants ``0xBF58476D1CE4E5B9`` and
``0x94D049BB133111EB``, shifts 30/27/31, all arithmetic mod 2**64.  A 64-bit
output ``z`` maps to the unit interval as ``((z >> 11) + 1) * 2**-53``, which
lies in ``(0, 1]``.  Candidate ``k`` uses draws ``3k``, ``3k + 1``, ``3k + 2``,
so the stream does not depend on batch sizes.

Violation convention: each check yields a value that is positive exactly
when it fails.  Inequality checks compare ``residual / scale**2`` with
``slack`` (scale is the longest side); identity checks compare a relative
discrepancy with ``IDENTITY_TOL``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import reductions as red
from . import triangle_core as tc
from .devilfish import eval_F

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
MASK64 = (1 << 64) - 1

GENERATORS = ("uniform-sides", "angle-based", "near-degenerate", "near-equilateral")
FUZZ_MARGIN = 1e-9
IDENTITY_TOL = 1e-10
BATCH = 65_536

CHECKS = (
    "altitude_inequality",
    "median_inequality",
    "median_regrouped",
    "corollary_a",
    "corollary_b",
    "lemma2_identity",
    "scaling_identity",
    "isosceles_reduction",
)


def splitmix64(seed: int, start: int, n: int) -> np.ndarray:
    """Draws ``start .. start + n - 1`` of the SplitMix64 stream for ``seed``."""
    k = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + k * GOLDEN
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


def unit_floats(seed: int, start: int, n: int) -> np.ndarray:
    z = splitmix64(seed, start, n)
    return ((z >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class FuzzConfig:
    count: int = 100_000
    seed: int = 0
    generator: str = "uniform-sides"
    slack: float = 1e-12

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.slack < 0:
            raise ValueError("slack must be nonnegative")
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}; choose from {GENERATORS}")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")


def _candidates(generator: str, u1, u2, u3):
    if generator == "uniform-sides":
        return u1, u2, u3
    if generator == "angle-based":
        A = math.pi * u1
        B = (math.pi - A) * u2
        C = math.pi - A - B
        return np.sin(A), np.sin(B), np.sin(C)
    if generator == "near-degenerate":
        gap = 10.0 ** (-9 + 6 * u1)
        a = 0.25 + 0.75 * u2
        b = 0.25 + 0.75 * u3
        return a, b, a + b - gap
    if generator == "near-equilateral":
        return 1 + 1e-6 * (2 * u1 - 1), 1 + 1e-6 * (2 * u2 - 1), 1 + 1e-6 * (2 * u3 - 1)
    raise ValueError(generator)


def generate_batches(config: FuzzConfig) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Accepted triangles as arrays, in stream order, ``config.count`` in total.

    Candidates failing the triangle test with margin ``FUZZ_MARGIN`` are
    skipped, so every yielded triangle validates with that margin.
    """
    remaining = config.count
    k = 0
    while remaining > 0:
        n = BATCH
        u = unit_floats(config.seed, 3 * k, 3 * n).reshape(n, 3)
        k += n
        a, b, c = _candidates(config.generator, u[:, 0], u[:, 1], u[:, 2])
        ok = tc.is_triangle(a, b, c, FUZZ_MARGIN)
        a, b, c = a[ok][:remaining], b[ok][:remaining], c[ok][:remaining]
        remaining -= len(a)
        if len(a):
            yield a, b, c


def generate(config: FuzzConfig) -> Iterator[tc.Triangle]:
    for a, b, c in generate_batches(config):
        for sides in zip(a.tolist(), b.tolist(), c.tolist()):
            yield tc.Triangle(*sides)


def acceptance_rate(config: FuzzConfig, candidates: int) -> float:
    """Fraction of the first ``candidates`` raw draws that form triangles."""
    u = unit_floats(config.seed, 0, 3 * candidates).reshape(candidates, 3)
    a, b, c = _candidates(config.generator, u[:, 0], u[:, 1], u[:, 2])
    return float(np.mean(tc.is_triangle(a, b, c, FUZZ_MARGIN)))


# -- checks -------------------------------------------------------------------


def evaluate(a, b, c, slack: float = 1e-12) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Per-check ``(residual, violation)`` arrays; ``violation > 0`` means failure.

    ``residual`` is the raw quantity in its natural units, so a witness can be
    replayed through the scalar API.
    """
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    scale2 = np.maximum(np.maximum(a, b), c) ** 2
    out: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    alt = tc.altitude_residual_abc(a, b, c)
    out["altitude_inequality"] = (alt, alt / scale2 - slack)
    m2 = tc.median_sum_residual_abc(a, b, c)
    out["median_inequality"] = (m2, m2 / scale2 - slack)
    m4 = tc.median_residual_abc(a, b, c)
    out["median_regrouped"] = (m4, m4 / scale2 - slack)
    ca = tc.corollary_a_residual_abc(a, b, c)
    out["corollary_a"] = (ca, -ca / scale2 - slack)
    ratio, bound = tc.corollary_b_abc(a, b, c)
    gap_b = np.maximum(ratio - bound, bound - 1)
    out["corollary_b"] = (gap_b, gap_b - slack)

    via = red.altitude_residual_via_lemma2_abc(a, b, c)
    mag = red.altitude_residual_magnitude_abc(a, b, c)
    rel = np.abs(alt - via) / mag
    out["lemma2_identity"] = (alt - via, rel - IDENTITY_TOL)

    sa, sb, sc = tc.sort_desc_abc(a, b, c)
    F = eval_F(sb / sa, sc / sa)
    diff = tc.median_residual_abc(sa, sb, sc) - sa * sa * F / 2
    out["scaling_identity"] = (diff, np.abs(diff) / (sa * sa * np.maximum(1, np.abs(F))) - IDENTITY_TOL)

    # Isosceles reduction on (longest, shortest): both the closed-form sides and the quintic.
    distinct = sa > sc
    safe_c = np.where(distinct, sc, sa / 2)
    lhs, rhs = red.isosceles_margin_ac(sa, safe_c)
    q = red.quintic_eval(safe_c / sa)
    iso = np.maximum((lhs - rhs) / (sa * sa) - slack, q / 64 - slack)
    out["isosceles_reduction"] = (np.where(distinct, lhs - rhs, 0.0), np.where(distinct, iso, -np.inf))
    return out


@dataclass
class CheckStats:
    passed: int = 0
    failed: int = 0
    worst_violation: float = -math.inf
    worst_residual: float = math.nan
    witness: tuple[float, float, float] | None = None

    def merge(self, other: "CheckStats") -> "CheckStats":
        """Associative merge; ties on the worst value go to the lexicographically smaller witness."""
        pick_other = other.worst_violation > self.worst_violation or (
            other.worst_violation == self.worst_violation
            and other.witness is not None
            and (self.witness is None or other.witness < self.witness)
        )
        best = other if pick_other else self
        return CheckStats(
            self.passed + other.passed,
            self.failed + other.failed,
            best.worst_violation,
            best.worst_residual,
            best.witness,
        )


@dataclass
class FuzzReport:
    config: FuzzConfig
    checks: dict[str, CheckStats]
    violations: list[dict] = field(default_factory=list)
    presquare_negative: int = 0
    presquare_checked: int = 0

    @property
    def total_failures(self) -> int:
        return sum(s.failed for s in self.checks.values())

    @property
    def clean(self) -> bool:
        return self.total_failures == 0

    def min_margin(self, check: str) -> float:
        """Smallest distance to failure observed, in the units of the violation value."""
        return -self.checks[check].worst_violation

    def to_dict(self) -> dict:
        return {
            "config": {
                "count": self.config.count,
                "seed": self.config.seed,
                "generator": self.config.generator,
                "slack": self.config.slack,
            },
            "checks": {
                name: {
                    "passed": s.passed,
                    "failed": s.failed,
                    "worst_violation": s.worst_violation,
                    "min_margin": -s.worst_violation,
                    "worst_residual": s.worst_residual,
                    "witness": list(s.witness) if s.witness else None,
                }
                for name, s in self.checks.items()
            },
            "violations": self.violations,
            "presquare_negative": self.presquare_negative,
            "presquare_checked": self.presquare_checked,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


MAX_RECORDED_VIOLATIONS = 1000


def _batch_stats(a, b, c, residual, violation) -> CheckStats:
    applicable = np.isfinite(violation)
    fail = applicable & (violation > 0)
    stats = CheckStats(int(np.sum(~fail)), int(np.sum(fail)))
    if np.any(applicable):
        v = np.where(applicable, violation, -np.inf)
        top = v.max()
        idx = np.flatnonzero(v == top)
        best = min(idx, key=lambda i: (a[i], b[i], c[i]))
        stats.worst_violation = float(top)
        stats.worst_residual = float(residual[best])
        stats.witness = (float(a[best]), float(b[best]), float(c[best]))
    return stats


def run(config: FuzzConfig) -> FuzzReport:
    """Check every generated triangle against every inequality and identity.

    Counts are per check and always sum to ``config.count`` (a check that does
    not apply to a triangle, such as the isosceles reduction on an
    equilateral one, counts as passed).
    """
    totals = {name: CheckStats() for name in CHECKS}
    violations: list[dict] = []
    neg = checked = 0
    for a, b, c in generate_batches(config):
        results = evaluate(a, b, c, config.slack)
        for name in CHECKS:
            residual, violation = results[name]
            totals[name] = totals[name].merge(_batch_stats(a, b, c, residual, violation))
            for i in np.flatnonzero(np.isfinite(violation) & (violation > 0)):
                if len(violations) < MAX_RECORDED_VIOLATIONS:
                    violations.append({
                        "check": name,
                        "triangle": [float(a[i]), float(b[i]), float(c[i])],
                        "residual": float(residual[i]),
                        "violation": float(violation[i]),
                    })
        sa, _, sc = tc.sort_desc_abc(a, b, c)
        distinct = sa > sc
        pre = red.presquare_quantity_ac(sa[distinct], sc[distinct])
        neg += int(np.sum(pre < 0))
        checked += int(np.sum(distinct))
    return FuzzReport(config, totals, violations, neg, checked)


def replay_residual(check: str, t: tc.Triangle) -> float:
    """Recompute a witness's raw residual through the scalar API."""
    if check == "altitude_inequality":
        return tc.altitude_residual(t)
    if check == "median_inequality":
        return tc.median_sum_residual(t)
    if check == "median_regrouped":
        return tc.median_residual(t)
    if check == "corollary_a":
        return tc.corollary_a_residual(t)
    if check == "corollary_b":
        ratio, bound, _ = tc.corollary_b_check(t)
        return max(ratio - bound, bound - 1)
    if check == "lemma2_identity":
        return tc.altitude_residual(t) - red.altitude_residual_via_lemma2(t)
    if check == "scaling_identity":
        s = t.sorted_desc()
        return tc.median_residual(s) - s.a * s.a * eval_F(s.b / s.a, s.c / s.a) / 2
    if check == "isosceles_reduction":
        s = t.sorted_desc()
        lhs, rhs = red.isosceles_margin(s.a, s.c)
        return lhs - rhs
    raise ValueError(f"unknown check {check!r}")
