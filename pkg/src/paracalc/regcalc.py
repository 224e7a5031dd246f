"""Regularity bookkeeping on the (s, p) plane for -Delta u + u d_1 u = f.

Parameter domains (all conditions strict):

    D(A)   : s > 1/p                                   (trace is defined)
    D(N)   : s > 1/2 + (n/p - n/2)_+  and  s > n/p - 1 (product is defined)
    D(L_u) : s + s0 > 1 + (n/p0 + n/p - n)_+           (u in H^{s0}_{p0})

Each R L_u factor gains 2 - omega derivatives with
omega = 1 + (n/p0 - s0)_+ (+ eps on the line s0 = n/p0).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ConfigurationError, PreconditionError

DEFAULT_EPSILON = 0.01
DEFAULT_MAX_N = 64
EQUALITY_TOL = 1e-12

FLAG_A = 1
FLAG_N = 2
FLAG_LU = 4
FLAG_DU = 8
FLAG_NAMES = {FLAG_A: "in_A", FLAG_N: "in_N", FLAG_LU: "in_Lu", FLAG_DU: "in_Du"}


@dataclass(frozen=True)
class SmoothnessPoint:
    s: float
    p: float
    n: int = 1

    def __post_init__(self):
        if not (1.0 < self.p < math.inf):
            raise ConfigurationError(f"p={self.p} outside (1, inf)")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"dimension n={self.n} must be a positive integer")
        if not math.isfinite(self.s):
            raise ConfigurationError(f"s={self.s} must be finite")

    def shifted(self, ds):
        return SmoothnessPoint(self.s + ds, self.p, self.n)


def _pos(x):
    return np.maximum(x, 0.0)


def _cond_A(s, p):
    return s > 1.0 / p


def _cond_N(s, p, n):
    return (s > 0.5 + _pos(n / p - n / 2.0)) & (s > n / p - 1.0)


def _cond_Lu(s, p, s0, p0, n):
    return s + s0 > 1.0 + _pos(n / p0 + n / p - n)


def _same_dim(a, b):
    if a.n != b.n:
        raise ConfigurationError(f"dimension mismatch: n={a.n} vs n={b.n}")


def in_domain_A(pt):
    return bool(_cond_A(pt.s, pt.p))


def in_domain_N(pt):
    return bool(_cond_N(pt.s, pt.p, pt.n))


def in_domain_Lu(pt, apriori):
    _same_dim(pt, apriori)
    return bool(_cond_Lu(pt.s, pt.p, apriori.s, apriori.p, pt.n))


def in_domain_u(pt, apriori):
    """Membership in D_u = D(A) and D(L_u)."""
    return in_domain_A(pt) and in_domain_Lu(pt, apriori)


@dataclass(frozen=True)
class OperatorOrder:
    omega: float
    epsilon: float = 0.0

    @property
    def gain(self):
        """Derivatives gained per R L_u factor."""
        return 2.0 - self.omega


def order_omega(apriori, epsilon=DEFAULT_EPSILON):
    if epsilon < 0:
        raise ConfigurationError(f"epsilon={epsilon} must be >= 0")
    critical = apriori.n / apriori.p
    on_line = abs(apriori.s - critical) <= EQUALITY_TOL
    eps = float(epsilon) if on_line else 0.0
    return OperatorOrder(1.0 + max(0.0, critical - apriori.s) + eps, eps)


def embeds(src, dst):
    """H^{src.s}_{src.p} -> H^{dst.s}_{dst.p} on a bounded domain."""
    _same_dim(src, dst)
    if dst.s > src.s:
        return False
    if dst.p <= src.p:
        return True
    n = src.n
    return src.s - n / src.p >= dst.s - n / dst.p


@dataclass(frozen=True)
class PathStep:
    s: float
    p: float
    move: str       # "start", "gain" or "embed"


@dataclass(frozen=True)
class MinimalNResult:
    """Outcome of the minimal-N search.

    ``N`` is None when no N <= max_N lands.  ``bootstrap_N`` is the same
    search restricted to D(A) and D(N) for every state and the target.
    """

    N: int
    path: tuple
    omega: OperatorOrder
    bootstrap_N: int = None
    bootstrap_path: tuple = field(default=())
    policy: str = "gain-then-embed"

    @property
    def reachable(self):
        return self.N is not None

    @property
    def beyond_bootstrap(self):
        return self.N is not None and self.bootstrap_N is None


def _require(cond, message, inequality):
    if not cond:
        raise PreconditionError(message, inequality)


def check_apriori(apriori):
    n = apriori.n
    _require(in_domain_A(apriori),
             f"a priori point not in D(A): s0={apriori.s} <= 1/p0={1 / apriori.p:.6g}",
             "s0 > 1/p0")
    lower = 0.5 + max(0.0, n / apriori.p - n / 2.0)
    _require(apriori.s > lower,
             f"a priori point not in D(N): s0={apriori.s} <= {lower:.6g}",
             "s0 > 1/2 + (n/p0 - n/2)_+")
    _require(apriori.s > n / apriori.p - 1.0,
             f"a priori point not in D(N): s0={apriori.s} <= n/p0 - 1 = {n / apriori.p - 1:.6g}",
             "s0 > n/p0 - 1")


def check_target(target, apriori):
    _require(in_domain_A(target),
             f"target not in D(A): t={target.s} <= 1/r={1 / target.p:.6g}",
             "t > 1/r")
    n = target.n
    bound = 1.0 + max(0.0, n / apriori.p + n / target.p - n)
    _require(target.s + apriori.s > bound,
             f"target not in D(L_u): t + s0 = {target.s + apriori.s:.6g} <= {bound:.6g}",
             "t + s0 > 1 + (n/p0 + n/r - n)_+")


def _state(apriori, k, gain):
    return SmoothnessPoint(apriori.s + k * gain, apriori.p, apriori.n)


def _lands(apriori, target, gain, N, admissible):
    if not embeds(_state(apriori, N, gain), target):
        return False
    return all(admissible(_state(apriori, k, gain)) for k in range(N + 1))


def _search(apriori, target, gain, max_N, admissible):
    # closed-form start, then settle on the exact predicate
    need = target.s
    if target.p > apriori.p:
        n = apriori.n
        need = max(need, target.s - n / target.p + n / apriori.p)
    guess = max(0, math.ceil((need - apriori.s) / gain)) if gain > 0 else 0
    guess = min(guess, max_N + 1)
    while guess > 0 and _lands(apriori, target, gain, guess - 1, admissible):
        guess -= 1
    while guess <= max_N and not _lands(apriori, target, gain, guess, admissible):
        guess += 1
    return guess if guess <= max_N else None


def _path(apriori, target, gain, N):
    steps = [PathStep(apriori.s, apriori.p, "start")]
    for k in range(1, N + 1):
        st = _state(apriori, k, gain)
        steps.append(PathStep(st.s, st.p, "gain"))
    steps.append(PathStep(target.s, target.p, "embed"))
    return tuple(steps)


def minimal_N(apriori, target, epsilon=DEFAULT_EPSILON, max_N=DEFAULT_MAX_N):
    """Smallest N with (R L_u)^N : H^{s0}_{p0} -> H^t_r under gain-then-embed."""
    _same_dim(apriori, target)
    if not 0 <= max_N <= 10_000:
        raise ConfigurationError(f"max_N={max_N} outside [0, 10000]")
    check_apriori(apriori)
    check_target(target, apriori)
    omega = order_omega(apriori, epsilon)
    gain = omega.gain

    N = _search(apriori, target, gain, max_N, lambda st: in_domain_u(st, apriori))
    path = _path(apriori, target, gain, N) if N is not None else ()

    def in_bootstrap(st):
        return in_domain_A(st) and in_domain_N(st)

    boot = None
    if in_bootstrap(target):
        boot = _search(apriori, target, gain, max_N, in_bootstrap)
    boot_path = _path(apriori, target, gain, boot) if boot is not None else ()
    return MinimalNResult(N, path, omega, boot, boot_path)


def sample_apriori(rng, n, s_range=(0.0, 4.0)):
    """Draw an a priori point from D(A) and D(N) by rejection."""
    while True:
        p = 1.0 / rng.uniform(0.02, 0.98)
        s = rng.uniform(*s_range)
        pt = SmoothnessPoint(s, p, n)
        if in_domain_A(pt) and in_domain_N(pt):
            return pt


def search_beyond_bootstrap(samples, seed, n=1, epsilon=DEFAULT_EPSILON,
                            max_N=DEFAULT_MAX_N):
    """Random (apriori, target) pairs with target in D_u but outside D(N).

    Returns the (apriori, target, result) triples where a witness path
    exists while no bootstrap path inside D(N) does.
    """
    rng = np.random.default_rng(seed)
    found = []
    for _ in range(samples):
        apriori = sample_apriori(rng, n)
        target = SmoothnessPoint(rng.uniform(-1.0, 4.0), 1.0 / rng.uniform(0.02, 0.98), n)
        if not in_domain_u(target, apriori) or in_domain_N(target):
            continue
        res = minimal_N(apriori, target, epsilon, max_N)
        if res.beyond_bootstrap:
            found.append((apriori, target, res))
    return found


@dataclass(frozen=True)
class MembershipGrid:
    """Per-pixel domain flags over the (1/p, s) plane.

    Row i holds s = s_values[i] (increasing), column k holds
    1/p = invp_values[k] (increasing).
    """

    apriori: SmoothnessPoint
    window: tuple
    s_values: np.ndarray
    invp_values: np.ndarray
    flags: np.ndarray

    def layer(self, flag):
        return (self.flags & flag) != 0


def _resolution(resolution):
    if np.ndim(resolution) == 0:
        rs = rp = resolution
    else:
        rs, rp = resolution
    for r in (rs, rp):
        if int(r) != r or not 1 <= r <= 2000:
            raise ConfigurationError(f"resolution {r} outside [1, 2000]")
    return int(rs), int(rp)


def rasterize_domains(apriori, window, resolution):
    s_min, s_max, invp_min, invp_max = map(float, window)
    if not s_max > s_min:
        raise ConfigurationError(f"degenerate s-range [{s_min}, {s_max}]")
    if not (0.0 <= invp_min < invp_max <= 1.0):
        raise ConfigurationError(
            f"1/p-range [{invp_min}, {invp_max}] must be a nondegenerate part of [0, 1]")
    rs, rp = _resolution(resolution)
    s = s_min + (np.arange(rs) + 0.5) * (s_max - s_min) / rs
    invp = invp_min + (np.arange(rp) + 0.5) * (invp_max - invp_min) / rp
    S, IP = np.meshgrid(s, invp, indexing="ij")
    P = 1.0 / IP
    n = apriori.n
    a = _cond_A(S, P)
    nn = _cond_N(S, P, n)
    lu = _cond_Lu(S, P, apriori.s, apriori.p, n)
    flags = (a * FLAG_A | nn * FLAG_N | lu * FLAG_LU | (a & lu) * FLAG_DU).astype(np.uint8)
    return MembershipGrid(apriori, (s_min, s_max, invp_min, invp_max), s, invp, flags)
