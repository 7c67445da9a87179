"""Separators: matrix certificates that no valid walk joins source to target.

A bundle is accepted when ``M_S`` contains the identity, is closed under the
three grammar rules through the five auxiliary products, and is zero at
``(s, t)``.  The deterministic checker multiplies exactly; the randomized
checker replaces each product equality by Freivalds probes drawn from a
SplitMix64 stream keyed by ``(seed, product, repetition)``.
"""
from __future__ import annotations

import numpy as np

from .model import Bracket, Instance, SeparatorBundle, SeparatorMS, Verdict
from .solver import S, SRelation, close

MAX_N = 1 << 12  # keeps every exact product below 2**63


class NotANoInstance(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact int64 product; goes through float64 BLAS when no rounding can occur."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    bound = int(a.max()) * int(b.max()) * a.shape[1]
    if bound < 2 ** 53:
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    return a @ b


def _adj(instance: Instance):
    return {lab: instance.adjacency(lab) for lab in Bracket}


def complete_from_MS(instance: Instance, MS) -> SeparatorBundle:
    """Fill in the five auxiliary matrices as exact products of ``MS`` and the adjacencies."""
    if isinstance(MS, SeparatorMS):
        MS = MS.MS
    MS = np.asarray(MS, dtype=np.int64)
    n = instance.n
    if MS.shape != (n, n):
        raise DimensionMismatch(f"MS has shape {MS.shape}, instance needs {(n, n)}")
    if MS.size and (MS.min() < 0 or MS.max() > 1):
        raise ValueError("MS must be a 0-1 matrix")
    A = _adj(instance)
    Mo1S = exact_matmul(A[Bracket.O1], MS)
    Mo2S = exact_matmul(A[Bracket.O2], MS)
    return SeparatorBundle(
        MS=MS,
        MSS=exact_matmul(MS, MS),
        Mo1S=Mo1S,
        Mo2S=Mo2S,
        Mo1Sc1=exact_matmul(Mo1S, A[Bracket.C1]),
        Mo2Sc2=exact_matmul(Mo2S, A[Bracket.C2]),
    )


def extract_separator(instance: Instance, closure: SRelation | None = None) -> SeparatorBundle:
    if closure is None:
        closure = close(instance)
    if closure.holds(S, instance.s, instance.t):
        raise NotANoInstance(f"{instance.s} reaches {instance.t}")
    return complete_from_MS(instance, closure.facts[S].astype(np.int64))


def _first(mask: np.ndarray) -> tuple[int, int]:
    i, j = np.unravel_index(int(np.argmax(mask)), mask.shape)
    return int(i) + 1, int(j) + 1


def _products(instance: Instance, b: SeparatorBundle):
    """``(label, left, right, claimed)`` for the five product equalities, in check order."""
    A = _adj(instance)
    return (
        ("M_o1S = A_o1·M_S", A[Bracket.O1], b.MS, b.Mo1S),
        ("M_o2S = A_o2·M_S", A[Bracket.O2], b.MS, b.Mo2S),
        ("M_SS = M_S·M_S", b.MS, b.MS, b.MSS),
        ("M_o1Sc1 = M_o1S·A_c1", b.Mo1S, A[Bracket.C1], b.Mo1Sc1),
        ("M_o2Sc2 = M_o2S·A_c2", b.Mo2S, A[Bracket.C2], b.Mo2Sc2),
    )


def _shape_problem(instance: Instance, b: SeparatorBundle) -> str | None:
    if b.n != instance.n:
        return f"bundle dimension {b.n} differs from instance size {instance.n}"
    if instance.n > MAX_N:
        raise ValueError(f"n={instance.n} exceeds the exact-arithmetic limit {MAX_N}")
    return None


def _identity_problem(b: SeparatorBundle) -> str | None:
    diag = np.diagonal(b.MS)
    if not diag.all():
        i = int(np.argmin(diag)) + 1
        return f"I ≰ M_S at ({i},{i})"
    return None


def _closure_problem(instance: Instance, b: SeparatorBundle) -> str | None:
    for name, m in (("M_SS", b.MSS), ("M_o1Sc1", b.Mo1Sc1), ("M_o2Sc2", b.Mo2Sc2)):
        bad = (m > 0) & (b.MS == 0)
        if bad.any():
            return "bool(%s) ≰ M_S at (%d,%d)" % ((name,) + _first(bad))
    if b.MS[instance.s - 1, instance.t - 1] != 0:
        return "(M_S)_{s,t} ≠ 0"
    return None


def check_separator_det(instance: Instance, b: SeparatorBundle) -> Verdict:
    why = _shape_problem(instance, b) or _identity_problem(b)
    if why:
        return Verdict(False, why)
    for label, left, right, claimed in _products(instance, b):
        bad = exact_matmul(left, right) != claimed
        if bad.any():
            i, j = _first(bad)
            return Verdict(False, f"{label.replace('=', '≠', 1)} at ({i},{j})")
    why = _closure_problem(instance, b)
    return Verdict(why is None, why or "")


_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def probe_vector(seed: int, product: int, rep: int, n: int) -> np.ndarray:
    """Deterministic 0-1 probe of length ``n`` for one (seed, product, repetition) key."""
    key = _mix((seed & _MASK) ^ _mix((product << 32) | rep))
    i = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix_array(np.uint64(key) + i * np.uint64(_GOLDEN))
    return (z >> np.uint64(63)).astype(np.int64)


def freivalds_equal(left, right, claimed, seed: int, product: int, reps: int) -> tuple[bool, int]:
    """Probe ``left·right == claimed``; returns (no discrepancy seen, probes used)."""
    n = claimed.shape[1]
    for rep in range(reps):
        r = probe_vector(seed, product, rep, n)
        if not np.array_equal(left @ (right @ r), claimed @ r):
            return False, rep + 1
    return True, reps


def check_separator_rand(instance: Instance, b: SeparatorBundle, seed: int,
                         reps: int = 4) -> Verdict:
    """Like :func:`check_separator_det` with each product equality replaced by ``reps`` probes.

    Never rejects a valid bundle; ``probes`` in the verdict counts vectors drawn.
    """
    why = _shape_problem(instance, b) or _identity_problem(b)
    if why:
        return Verdict(False, why)
    probes = 0
    for k, (label, left, right, claimed) in enumerate(_products(instance, b)):
        ok, used = freivalds_equal(left, right, claimed, seed, k, reps)
        probes += used
        if not ok:
            return Verdict(False, f"{label.replace('=', '≠', 1)} (probe {used})", probes=probes)
    why = _closure_problem(instance, b)
    return Verdict(why is None, why or "", probes=probes)
