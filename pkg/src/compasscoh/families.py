"""Closed-form logical channels for repetition-based compass code families.

The length-l phase-flip repetition code admits exact per-syndrome-class
sums: the class whose minimum-weight correction has weight w (multiplicity
C(l, w), w = 0..(l-1)/2) carries signed coset amplitudes

    S0 = (-1)**(w//2)     * cos(t/2)**(l-w) * sin(t/2)**w
    S1 = (-1)**((l-w)//2) * cos(t/2)**w     * sin(t/2)**(l-w)

from which eps, delta and the class angles follow exactly at any l (sums
run in the log domain so l ~ 10**3 stays finite).  Z-Shor codes zip onto
the repetition code at angle d_x * theta; X-Shor codes are d_x column
channels composed, i.e. a PTM power; Z-stacked codes compose block
channels at angle h * theta with leftover single rows at theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import MIN_WEIGHT, ML, _check_recovery, reduce_angle
from .ptm import IDENTITY, LogicalPTM, compose, power

REPETITION = "repetition"
Z_SHOR = "zshor"
X_SHOR = "xshor"
Z_STACKED = "zstacked"


@dataclass(frozen=True)
class FamilySpec:
    """Analytic family selector: repetition(l), zshor/xshor(d_x, d_z), zstacked(l, h)."""

    kind: str
    l: int | None = None
    d_x: int | None = None
    d_z: int | None = None
    h: int | None = None
    recovery: str = MIN_WEIGHT

    def __post_init__(self):
        _check_recovery(self.recovery)
        if self.kind == REPETITION:
            _require_odd("l", self.l)
        elif self.kind in (Z_SHOR, X_SHOR):
            if self.d_x is None or self.d_x < 1:
                raise ValueError(f"{self.kind} needs d_x >= 1")
            _require_odd("d_z", self.d_z)
        elif self.kind == Z_STACKED:
            _require_odd("l", self.l)
            if self.h is None or not 1 <= self.h <= self.l:
                raise ValueError(f"zstacked needs 1 <= h <= l, got h={self.h}")
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")


def _require_odd(name: str, value) -> None:
    if value is None or value < 1 or value % 2 == 0:
        raise ValueError(f"{name} must be an odd positive integer, got {value}")


@dataclass(frozen=True, eq=False)
class AngleDistribution:
    """Aggregated (probability, logical angle) classes of an analytic channel."""

    theta: float
    p: np.ndarray
    theta_s: np.ndarray


def _rep_classes(l: int, theta: float, recovery: str):
    """Log-domain class data for the repetition code at a reduced angle.

    Returns (log_prob, theta_w, log_eps_terms, delta_sign, log_delta_terms)
    over the min-weight classes w = 0..(l-1)/2 including multiplicity.
    """
    sgn_theta = 1.0 if theta >= 0 else -1.0
    a = abs(theta)
    c, s = math.cos(a / 2.0), math.sin(a / 2.0)
    w = np.arange((l + 1) // 2)
    with np.errstate(divide="ignore"):
        ln_c, ln_s = np.log(c), np.log(s)
    lnC = np.array([math.lgamma(l + 1) - math.lgamma(k + 1) - math.lgamma(l - k + 1)
                    for k in w])
    with np.errstate(invalid="ignore"):
        ln0 = (l - w) * ln_c + w * ln_s
        ln1 = w * ln_c + (l - w) * ln_s
    ln0 = np.where(np.isnan(ln0), -np.inf, ln0)
    ln1 = np.where(np.isnan(ln1), -np.inf, ln1)
    sg0 = (-1.0) ** (w // 2)
    sg1 = (-1.0) ** ((l - w) // 2)
    parity = w & 1

    if recovery == ML:
        swap = ln1 > ln0
        ln0, ln1 = np.where(swap, ln1, ln0), np.where(swap, ln0, ln1)
        sg0, sg1 = np.where(swap, sg1, sg0), np.where(swap, sg0, sg1)
        parity = parity ^ swap

    # class probability C * (S0^2 + S1^2), stable pairwise logaddexp
    ln_p = lnC + np.logaddexp(2 * ln0, 2 * ln1)

    sign = 1.0 - 2.0 * parity
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = sg0 * sg1 * np.exp(ln1 - ln0)  # nan on zero-probability classes
    theta_w = np.where(np.isneginf(ln0), math.pi, sign * 2.0 * np.arctan(ratio))
    theta_w = sgn_theta * theta_w

    ln_eps = lnC + math.log(2.0) + 2 * ln1
    ln_del = lnC + math.log(2.0) + ln0 + ln1
    del_sign = sgn_theta * sign * sg0 * sg1
    return ln_p, theta_w, ln_eps, del_sign, ln_del


def _signed_logsumexp(log_terms: np.ndarray, signs=None) -> float:
    finite = log_terms > -np.inf
    if not np.any(finite):
        return 0.0
    m = float(np.max(log_terms[finite]))
    scaled = np.exp(log_terms[finite] - m)
    if signs is not None:
        scaled = scaled * np.asarray(signs)[finite]
    return math.exp(m) * float(np.sum(scaled)) if m > -np.inf else 0.0


def repetition_exact(l: int, theta: float, recovery: str = MIN_WEIGHT) -> LogicalPTM:
    """Exact repetition-code logical channel from the class sums."""
    _require_odd("l", l)
    _check_recovery(recovery)
    theta = reduce_angle(theta)
    _, _, ln_eps, del_sign, ln_del = _rep_classes(l, theta, recovery)
    eps = _signed_logsumexp(ln_eps)
    delta = _signed_logsumexp(ln_del, del_sign)
    return LogicalPTM(eps, delta)


def repetition_distribution(l: int, theta: float,
                            recovery: str = MIN_WEIGHT) -> AngleDistribution:
    """Class-aggregated angle distribution of the repetition channel."""
    _require_odd("l", l)
    _check_recovery(recovery)
    theta = reduce_angle(theta)
    ln_p, theta_w, *_ = _rep_classes(l, theta, recovery)
    keep = ln_p > -np.inf
    return AngleDistribution(theta=theta, p=np.exp(ln_p[keep]), theta_s=theta_w[keep])


def repetition_stirling(l: int, theta: float) -> LogicalPTM:
    """Stirling-formula approximation of the repetition channel.

    Valid for |theta| < pi/2 (rejected outside); the O(1/l) error can leave
    the contractive regime at small l near the edge, which raises.
    """
    _require_odd("l", l)
    theta = reduce_angle(theta)
    if abs(theta) >= math.pi / 2:
        raise ValueError(f"Stirling form requires |theta| < pi/2, got {theta}")
    if theta == 0.0:
        return IDENTITY
    eps = math.sqrt(2.0 / (math.pi * l)) * math.sin(theta) ** (l + 1) / math.cos(theta)
    delta = math.cos(theta) / math.sin(theta) * eps
    return LogicalPTM(eps, delta)


def z_shor_channel(d_x: int, d_z: int, theta: float,
                   recovery: str = MIN_WEIGHT) -> LogicalPTM:
    """Z-Shor channel: weight-2 ZZ stabilizers zip the rotation column-wise,
    giving the length-d_z repetition channel at angle d_x * theta."""
    if d_x < 1:
        raise ValueError(f"d_x must be >= 1, got {d_x}")
    return repetition_exact(d_z, d_x * theta, recovery)


def z_shor_distribution(d_x: int, d_z: int, theta: float,
                        recovery: str = MIN_WEIGHT) -> AngleDistribution:
    if d_x < 1:
        raise ValueError(f"d_x must be >= 1, got {d_x}")
    return repetition_distribution(d_z, d_x * theta, recovery)


def x_shor_channel(d_x: int, d_z: int, theta: float) -> LogicalPTM:
    """X-Shor channel: d_x repetition-row channels composed (PTM power)."""
    if d_x < 1:
        raise ValueError(f"d_x must be >= 1, got {d_x}")
    return power(repetition_exact(d_z, theta, MIN_WEIGHT), d_x)


def z_stacked_channel(l: int, h: int, theta: float) -> LogicalPTM:
    """Z-stacked Shor channel C_{l,h}: floor(l/h) block channels at h*theta
    composed with (l mod h) single-row channels at theta."""
    _require_odd("l", l)
    if not 1 <= h <= l:
        raise ValueError(f"need 1 <= h <= l, got h={h}")
    l_h, t_h = divmod(l, h)
    blocks = power(repetition_exact(l, h * theta, MIN_WEIGHT), l_h)
    rows = power(repetition_exact(l, theta, MIN_WEIGHT), t_h)
    return compose(blocks, rows)


def product_distribution(parts: list[AngleDistribution],
                         max_classes: int = 200_000) -> AngleDistribution:
    """Convolve independent angle distributions (angles add, probs multiply).

    Supports the exact diamond metric for product-form families at small
    sizes; rejects upfront when the merged class count must exceed
    ``max_classes`` (multiset bound: identical parts commute).
    """
    bound = 1
    for part, reps in _group_parts(parts):
        k = len(part.p)
        bound *= math.comb(reps + k - 1, k - 1)
        if bound > max_classes:
            raise ValueError("product distribution too large for exact convolution")
    acc: dict[float, float] = {0.0: 1.0}
    for part in parts:
        nxt: dict[float, float] = {}
        for ang, pr in acc.items():
            for a2, p2 in zip(part.theta_s, part.p):
                key = round(ang + float(a2), 12)
                nxt[key] = nxt.get(key, 0.0) + pr * float(p2)
            if len(nxt) > max_classes:
                raise ValueError("product distribution too large for exact convolution")
        acc = nxt
    angles = np.array(sorted(acc))
    probs = np.array([acc[a] for a in angles])
    wrapped = np.arctan2(np.sin(angles), np.cos(angles))
    return AngleDistribution(theta=math.nan, p=probs, theta_s=wrapped)


def _group_parts(parts):
    groups: list[tuple[AngleDistribution, int]] = []
    for part in parts:
        if groups and groups[-1][0] is part:
            groups[-1] = (part, groups[-1][1] + 1)
        else:
            groups.append((part, 1))
    return groups


def x_shor_distribution(d_x: int, d_z: int, theta: float,
                        max_classes: int = 200_000) -> AngleDistribution:
    part = repetition_distribution(d_z, theta, MIN_WEIGHT)
    return product_distribution([part] * d_x, max_classes)


def z_stacked_distribution(l: int, h: int, theta: float,
                           max_classes: int = 200_000) -> AngleDistribution:
    l_h, t_h = divmod(l, h)
    parts = ([repetition_distribution(l, h * theta, MIN_WEIGHT)] * l_h
             + [repetition_distribution(l, theta, MIN_WEIGHT)] * t_h)
    return product_distribution(parts, max_classes)


@dataclass(frozen=True)
class Thresholds:
    theta_th: float
    theta_th_r1: float


def closed_form_threshold(spec: FamilySpec) -> Thresholds:
    """Coherence / infidelity thresholds of the analytic families.

    Repetition and X-Shor sit at pi/2, Z-Shor at pi/(2 d_x), the Z-stacked
    family C_{l,h} at pi/(2h); suppression below threshold is exponential
    in the growing code dimension.
    """
    if spec.kind == REPETITION:
        th = math.pi / 2
    elif spec.kind == Z_SHOR:
        th = math.pi / (2 * spec.d_x)
    elif spec.kind == X_SHOR:
        th = math.pi / 2
    elif spec.kind == Z_STACKED:
        th = math.pi / (2 * spec.h)
    else:  # pragma: no cover - FamilySpec already validates
        raise ValueError(f"unsupported family {spec.kind!r}")
    return Thresholds(theta_th=th, theta_th_r1=th)
