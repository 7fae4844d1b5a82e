"""Exact syndrome distribution of a compass code under uniform Z rotation.

The rotation expands as sum_v c_v Z(v) over all 2**n supports with
c_v = cos(theta/2)**(n-|v|) * (-i sin(theta/2))**|v|.  Supports sharing a
syndrome and a Z-stabilizer coset add coherently, so the channel is fully
determined by the theta-independent table counting supports per
(syndrome, coset, weight), built by the enumeration kernel.  Because
stabilizers have even weight and the logical Z odd weight, the two coset
amplitudes of a syndrome carry opposite real/imaginary parity; they are
stored as signed reals S with the phase (-i)**parity implied, which makes
the logical action

    A0 * I + A1 * Zbar  ->  exp(-i(theta_s/2) Zbar),
    theta_s = (-1)**p0 * 2*atan(S1/S0)         (pi when S0 = 0)

with p0 the recovery-weight parity.  Coset membership is read off the
logical-X overlap parity: logical X commutes with every Z stabilizer and
anticommutes with logical Z, so it is exactly the indicator functional of
the logical coset (equivalent to classifying against an F2 basis of the
Z-stabilizer row space, but O(1) per support).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .codes import CompassCode
from .decoder import build_matching_graph
from .ptm import LogicalPTM

MAX_QUBITS = 25

MIN_WEIGHT = "minweight"
ML = "ml"
_RECOVERIES = (MIN_WEIGHT, ML)


class TooLargeError(RuntimeError):
    """Exact enumeration rejected: 2**n cost beyond the supported size."""


def reduce_angle(theta: float) -> float:
    """Map an angle into (-pi, pi]; the physical channel has period 2*pi."""
    t = math.remainder(float(theta), 2.0 * math.pi)
    return math.pi if t == -math.pi else t


def _check_recovery(recovery: str) -> str:
    if recovery not in _RECOVERIES:
        raise ValueError(f"recovery must be one of {_RECOVERIES}, got {recovery!r}")
    return recovery


@dataclass(frozen=True, eq=False)
class SyndromeDistribution:
    """Per-syndrome probabilities and logical angles at a physical angle.

    Zero-probability syndromes (exact zeros, e.g. at theta=0) are dropped.
    ``amp_identity``/``amp_logical`` are the signed real amplitude parts
    (complex phase implied by ``recovery_parity``), kept for invariant
    tests and Monte Carlo scoring.
    """

    theta: float
    num_checks: int
    syndromes: np.ndarray
    p: np.ndarray
    theta_s: np.ndarray
    amp_identity: np.ndarray
    amp_logical: np.ndarray
    recovery_parity: np.ndarray

    def __len__(self) -> int:
        return len(self.syndromes)

    def syndrome_bits(self, i: int) -> str:
        s = int(self.syndromes[i])
        return "".join("1" if s >> k & 1 else "0" for k in range(self.num_checks))

    @property
    def entries(self) -> list[tuple[str, float, float]]:
        return [(self.syndrome_bits(i), float(self.p[i]), float(self.theta_s[i]))
                for i in range(len(self.syndromes))]

    def amplitudes(self, i: int) -> tuple[complex, complex]:
        """Complex (A0, A1) of entry i, phases restored from the parity."""
        par = int(self.recovery_parity[i])
        ph0 = 1.0 if par == 0 else -1.0j
        ph1 = 1.0 if par == 1 else -1.0j
        return ph0 * float(self.amp_identity[i]), ph1 * float(self.amp_logical[i])


class ExactBackend:
    """Caches the theta-independent enumeration and recovery tables of a code."""

    def __init__(self, code: CompassCode):
        if code.n > MAX_QUBITS:
            raise TooLargeError(
                f"exact backend supports n <= {MAX_QUBITS}, got n={code.n}")
        self.code = code
        self.n = code.n
        self.num_checks = len(code.x_stabilizers)
        masks = [s.mask for s in code.x_stabilizers]
        self.counts = _kernels.count_table(
            self.n, masks, code.logical_x.mask).astype(np.float64)
        self.graph = build_matching_graph(code)

        num_synd = 1 << self.num_checks
        parity = np.empty(num_synd, dtype=np.int64)
        coset = np.empty(num_synd, dtype=np.int64)
        xbar = code.logical_x.mask
        for s in range(num_synd):
            w, corr = self.graph.match(s)
            parity[s] = w & 1
            coset[s] = (corr & xbar).bit_count() & 1
        self._rec_parity = parity
        self._rec_coset = coset

    def _amplitudes(self, theta: float) -> np.ndarray:
        """Signed real coset amplitudes S[s, b] at a reduced angle."""
        n = self.n
        w = np.arange(n + 1)
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        wvec = (-1.0) ** (w // 2) * c ** (n - w) * s ** w
        return (self.counts.reshape(-1, n + 1) @ wvec).reshape(-1, 2)

    def distribution(self, theta: float, recovery: str = MIN_WEIGHT) -> SyndromeDistribution:
        _check_recovery(recovery)
        theta = reduce_angle(theta)
        S = self._amplitudes(theta)
        idx = np.arange(S.shape[0])
        s_id = S[idx, self._rec_coset]
        s_log = S[idx, 1 - self._rec_coset]
        parity = self._rec_parity.copy()
        if recovery == ML:
            swap = np.abs(s_log) > np.abs(s_id)
            s_id, s_log = np.where(swap, s_log, s_id), np.where(swap, s_id, s_log)
            parity ^= swap.astype(np.int64)

        p = s_id ** 2 + s_log ** 2
        keep = p > 0.0
        s_id, s_log, parity, p = s_id[keep], s_log[keep], parity[keep], p[keep]
        sign = 1.0 - 2.0 * parity
        with np.errstate(divide="ignore"):
            ratio = np.where(s_id != 0.0, s_log / np.where(s_id != 0.0, s_id, 1.0), np.inf)
        theta_s = np.where(s_id != 0.0, sign * 2.0 * np.arctan(ratio), math.pi)
        return SyndromeDistribution(
            theta=theta, num_checks=self.num_checks,
            syndromes=idx[keep].astype(np.uint32), p=p, theta_s=theta_s,
            amp_identity=s_id, amp_logical=s_log, recovery_parity=parity)

    def channel(self, theta: float, recovery: str = MIN_WEIGHT) -> LogicalPTM:
        d = self.distribution(theta, recovery)
        eps = float(2.0 * np.sum(d.amp_logical ** 2))
        sign = 1.0 - 2.0 * d.recovery_parity
        delta = float(2.0 * np.sum(sign * d.amp_identity * d.amp_logical))
        return LogicalPTM(eps, delta)


_CACHE: dict[CompassCode, ExactBackend] = {}


def get_backend(code: CompassCode) -> ExactBackend:
    backend = _CACHE.get(code)
    if backend is None:
        backend = ExactBackend(code)
        if len(_CACHE) >= 8:
            _CACHE.clear()
        _CACHE[code] = backend
    return backend


def syndrome_distribution(code: CompassCode, theta: float,
                          recovery: str = MIN_WEIGHT) -> SyndromeDistribution:
    """Exact (syndrome, p_s, theta_s) distribution by full 2**n enumeration."""
    return get_backend(code).distribution(theta, recovery)


def logical_channel(code: CompassCode, theta: float,
                    recovery: str = MIN_WEIGHT) -> LogicalPTM:
    """Exact logical channel: eps = sum p_s (1 - cos theta_s), delta = sum p_s sin theta_s."""
    return get_backend(code).channel(theta, recovery)
