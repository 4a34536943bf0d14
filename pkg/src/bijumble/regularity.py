"""(eps,p)- and (eps,d,p)-regularity of bipartite pair views.

A pair is (eps,p)-regular when every subset pair (U',W') with
|U'| >= eps|U| and |W'| >= eps|W| has p-density within eps of the base
pair's; the (eps,d,p) variant adds the floor d_p(U,W) >= d - eps.  Subset
size thresholds use ceil(eps * side), matching the ">=" in the definition.

The exact decision enumerates subsets of the smaller side only: at a fixed
|W'| the extremal W' is a prefix of the other side sorted by degree into U',
by monotonicity of the edge sum.  No shortcut assuming deviation
monotonicity in |U'| is taken (it is not monotone).  The sampled decision
draws seeded uniform subsets plus, per trial, the same degree-sorted prefix
refinement against the drawn U'; a sampled "regular" verdict only means no
violation was found, while a sampled witness is a sound refutation.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._numeric import leq
from .errors import CapacityError, ParameterError
from .graphs import BipartitePairView, VertexSet, bool_matrix, p_density

DEFAULT_ENUM_CAP = 1 << 22


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    epsilon: float
    p: float
    base_p_density: float
    deviation: float
    method: str  # "exact" | "sampled"
    worst_witness: Optional[tuple[VertexSet, VertexSet, float]]
    failure_reason: str | None = None  # "irregularity witness" | "density floor"
    d: float | None = None

    def to_record(self) -> dict:
        return {
            "regular": self.regular,
            "epsilon": self.epsilon,
            "p": self.p,
            "base_p_density": self.base_p_density,
            "deviation": self.deviation,
            "method": self.method,
            "witness_left": list(self.worst_witness[0].indices) if self.worst_witness else None,
            "witness_right": list(self.worst_witness[1].indices) if self.worst_witness else None,
            "witness_p_density": self.worst_witness[2] if self.worst_witness else None,
            "failure_reason": self.failure_reason,
            "d": self.d,
        }


def _validate(pair: BipartitePairView, epsilon: float, p: float):
    if not 0 < epsilon < 1:
        raise ParameterError("epsilon must lie in (0,1)")
    if p <= 0:
        raise ParameterError("p must be positive")
    if not pair.left.indices or not pair.right.indices:
        raise ParameterError("both sides must be nonempty")


def _min_size(epsilon: float, n: int) -> int:
    return max(1, math.ceil(epsilon * n - 1e-12))


def exact_regularity(
    pair: BipartitePairView, epsilon: float, p: float, max_subsets: int = DEFAULT_ENUM_CAP
) -> RegularityVerdict:
    """Certified verdict with the maximum-deviation witness."""
    _validate(pair, epsilon, p)
    base = p_density(pair, p)
    swap = len(pair.left) > len(pair.right)
    view = pair.swapped() if swap else pair
    enum_side, other_side = view.left.indices, view.right.indices
    n, n_other = len(enum_side), len(other_side)
    smin = _min_size(epsilon, n)
    tmin = _min_size(epsilon, n_other)
    budget = sum(math.comb(n, s) for s in range(smin, n + 1))
    if budget > max_subsets:
        raise CapacityError(
            f"exact regularity would enumerate {budget} subsets of a {n}-vertex side "
            f"(capacity {max_subsets})"
        )

    rows = view.graph.rows
    worst = -1.0
    worst_key = None
    worst_witness = None

    def consider(dev: float, dens: float, combo, chosen):
        nonlocal worst, worst_key, worst_witness
        key = (combo, tuple(sorted(chosen)))
        if dev > worst + 1e-15 or (abs(dev - worst) <= 1e-15 and (worst_key is None or key < worst_key)):
            worst = dev
            worst_key = key
            uset, wset = VertexSet.of(combo), VertexSet.of(chosen)
            worst_witness = (wset, uset, dens) if swap else (uset, wset, dens)

    for size in range(smin, n + 1):
        for combo in itertools.combinations(enum_side, size):
            smask = 0
            for v in combo:
                smask |= 1 << v
            degs = sorted(
                (((rows[w] & smask).bit_count(), w) for w in other_side),
                key=lambda dw: (-dw[0], dw[1]),
            )
            desc = [d for d, _ in degs]
            top_sum = sum(desc[:tmin])
            bot_sum = sum(desc[n_other - tmin:])
            best_here = None  # (dev, dens, t, take_top)
            for t in range(tmin, n_other + 1):
                if t > tmin:
                    top_sum += desc[t - 1]
                    bot_sum += desc[n_other - t]
                scale = p * size * t
                d_top = top_sum / scale
                d_bot = bot_sum / scale
                for dens, take_top in ((d_top, True), (d_bot, False)):
                    dev = abs(dens - base)
                    if best_here is None or dev > best_here[0]:
                        best_here = (dev, dens, t, take_top)
            dev, dens, t, take_top = best_here
            consider(dev, dens, combo, [w for _, w in (degs[:t] if take_top else degs[n_other - t:])])

    regular = leq(worst, epsilon)
    return RegularityVerdict(
        regular=regular,
        epsilon=epsilon,
        p=p,
        base_p_density=base,
        deviation=max(worst, 0.0),
        method="exact",
        worst_witness=worst_witness,
        failure_reason=None if regular else "irregularity witness",
    )


def naive_regularity_deviation(pair: BipartitePairView, epsilon: float, p: float) -> float:
    """All-subset-pairs reference maximum deviation; for cross-checks only."""
    base = p_density(pair, p)
    rows = pair.graph.rows
    left, right = pair.left.indices, pair.right.indices
    smin, tmin = _min_size(epsilon, len(left)), _min_size(epsilon, len(right))
    worst = 0.0
    for s in range(smin, len(left) + 1):
        for cu in itertools.combinations(left, s):
            umask = sum(1 << v for v in cu)
            for t in range(tmin, len(right) + 1):
                for cv in itertools.combinations(right, t):
                    e = sum((rows[w] & umask).bit_count() for w in cv)
                    worst = max(worst, abs(e / (p * s * t) - base))
    return worst


def sampled_regularity(
    pair: BipartitePairView, epsilon: float, p: float, trials: int, seed: int
) -> RegularityVerdict:
    """Randomised violation search; deterministic given the seed."""
    _validate(pair, epsilon, p)
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    base = p_density(pair, p)
    left_idx = np.array(pair.left.indices, dtype=np.int64)
    right_idx = np.array(pair.right.indices, dtype=np.int64)
    sub = bool_matrix(pair.graph)[np.ix_(left_idx, right_idx)]
    n_u, n_w = len(left_idx), len(right_idx)
    su = _min_size(epsilon, n_u)
    sw = _min_size(epsilon, n_w)
    rng = random.Random(seed)
    t_range = np.arange(sw, n_w + 1)
    positions = np.arange(n_w)

    worst = -1.0
    worst_witness = None

    def consider(dev: float, dens: float, upos, wpos):
        nonlocal worst, worst_witness
        if dev > worst:
            worst = dev
            worst_witness = (
                VertexSet.of(int(v) for v in left_idx[upos]),
                VertexSet.of(int(v) for v in right_idx[wpos]),
                dens,
            )

    for _ in range(trials):
        upos = sorted(rng.sample(range(n_u), su))
        wpos = sorted(rng.sample(range(n_w), sw))
        dens = sub[np.ix_(upos, wpos)].sum(dtype=np.int64) / (p * su * sw)
        consider(abs(dens - base), dens, upos, wpos)

        degs = sub[upos].sum(axis=0, dtype=np.int64)
        order_desc = np.lexsort((positions, -degs))
        order_asc = np.lexsort((positions, degs))
        dens_top = np.cumsum(degs[order_desc])[t_range - 1] / (p * su * t_range)
        dens_bot = np.cumsum(degs[order_asc])[t_range - 1] / (p * su * t_range)
        dev_top = np.abs(dens_top - base)
        dev_bot = np.abs(dens_bot - base)
        it = int(np.argmax(dev_top))
        ib = int(np.argmax(dev_bot))
        if dev_top[it] >= dev_bot[ib]:
            t = sw + it
            consider(float(dev_top[it]), float(dens_top[it]), upos, order_desc[:t])
        else:
            t = sw + ib
            consider(float(dev_bot[ib]), float(dens_bot[ib]), upos, order_asc[:t])

    regular = leq(worst, epsilon)
    return RegularityVerdict(
        regular=regular,
        epsilon=epsilon,
        p=p,
        base_p_density=base,
        deviation=max(worst, 0.0),
        method="sampled",
        worst_witness=worst_witness,
        failure_reason=None if regular else "irregularity witness",
    )


def check_eps_d_p(
    pair: BipartitePairView,
    epsilon: float,
    d: float,
    p: float,
    method: str = "exact",
    trials: int = 50,
    seed: int = 0,
    max_subsets: int = DEFAULT_ENUM_CAP,
) -> RegularityVerdict:
    """Regularity verdict plus the density floor d_p(U,W) >= d - eps."""
    if method == "exact":
        verdict = exact_regularity(pair, epsilon, p, max_subsets=max_subsets)
    elif method == "sampled":
        verdict = sampled_regularity(pair, epsilon, p, trials=trials, seed=seed)
    else:
        raise ParameterError(f"unknown method {method!r}")
    floor_ok = verdict.base_p_density >= d - epsilon - 1e-12
    if not floor_ok:
        return RegularityVerdict(
            regular=False,
            epsilon=epsilon,
            p=p,
            base_p_density=verdict.base_p_density,
            deviation=verdict.deviation,
            method=verdict.method,
            worst_witness=verdict.worst_witness,
            failure_reason="density floor",
            d=d,
        )
    return RegularityVerdict(
        regular=verdict.regular,
        epsilon=epsilon,
        p=p,
        base_p_density=verdict.base_p_density,
        deviation=verdict.deviation,
        method=verdict.method,
        worst_witness=verdict.worst_witness,
        failure_reason=verdict.failure_reason,
        d=d,
    )


def slice_and_check(
    pair: BipartitePairView,
    u_slice: VertexSet,
    w_slice: VertexSet,
    epsilon: float,
    gamma: float,
    p: float,
    method: str = "exact",
    trials: int = 50,
    seed: int = 0,
    max_subsets: int = DEFAULT_ENUM_CAP,
) -> RegularityVerdict:
    """Audit the slicing conclusion on (u_slice, w_slice).

    Preconditions |U'| >= gamma|U|, |W'| >= gamma|W| and eps < gamma; the
    slice is then checked for (eps/gamma, p)-regularity and for p-density
    within eps of the base pair's.
    """
    if not 0 < epsilon < gamma:
        raise ParameterError("need 0 < epsilon < gamma")
    if not u_slice.issubset(pair.left) or not w_slice.issubset(pair.right):
        raise ParameterError("slices must be subsets of the pair's sides")
    if len(u_slice) < gamma * len(pair.left) - 1e-12 or len(w_slice) < gamma * len(pair.right) - 1e-12:
        raise ParameterError("slice sizes below the gamma fraction precondition")
    base = p_density(pair, p)
    slice_pair = BipartitePairView(pair.graph, u_slice, w_slice)
    verdict = (
        exact_regularity(slice_pair, epsilon / gamma, p, max_subsets=max_subsets)
        if method == "exact"
        else sampled_regularity(slice_pair, epsilon / gamma, p, trials=trials, seed=seed)
    )
    density_ok = abs(verdict.base_p_density - base) <= epsilon + 1e-12
    ok = verdict.regular and density_ok
    return RegularityVerdict(
        regular=ok,
        epsilon=epsilon / gamma,
        p=p,
        base_p_density=verdict.base_p_density,
        deviation=verdict.deviation,
        method=verdict.method,
        worst_witness=verdict.worst_witness,
        failure_reason=None if ok else ("irregularity witness" if not verdict.regular else "density drift"),
    )


@dataclass(frozen=True)
class ExtensionCheck:
    """Hypothesis checks and conclusion of the small-extension audit."""

    hypotheses_met: bool
    hypothesis_details: dict
    base_verdict: RegularityVerdict
    conclusion: RegularityVerdict

    @property
    def passed(self) -> bool:
        return self.conclusion.regular


def extend_and_check(
    base: BipartitePairView,
    extended: BipartitePairView,
    epsilon: float,
    d: float,
    p: float,
    c: float,
    jumble_gamma: float | None = None,
    method: str = "exact",
    trials: int = 50,
    seed: int = 0,
    max_subsets: int = DEFAULT_ENUM_CAP,
) -> ExtensionCheck:
    """Audit that growing each side by at most eps^3/10 keeps regularity.

    Checks the size-growth hypotheses (raising on violation), verifies the
    base pair (eps,d,p)-regular, compares the extended pair's bijumbledness
    parameter against c p sqrt(|U||V|) (measured spectrally when not
    supplied), then evaluates (2 eps, d, p)-regularity of the extended pair.
    """
    if not 0 < epsilon < 0.1:
        raise ParameterError("epsilon must lie in (0, 1/10)")
    if c > epsilon**3 / 10 + 1e-15:
        raise ParameterError("need c <= epsilon^3 / 10")
    if not base.left.issubset(extended.left) or not base.right.issubset(extended.right):
        raise ParameterError("base sides must be subsets of extended sides")
    growth = 1 + epsilon**3 / 10
    if len(extended.left) > growth * len(base.left) + 1e-9:
        raise ParameterError("hypothesis violated: |U'| <= (1 + eps^3/10)|U|")
    if len(extended.right) > growth * len(base.right) + 1e-9:
        raise ParameterError("hypothesis violated: |V'| <= (1 + eps^3/10)|V|")

    base_verdict = check_eps_d_p(
        base, epsilon, d, p, method=method, trials=trials, seed=seed, max_subsets=max_subsets
    )
    if jumble_gamma is None:
        from .jumbled import spectral_jumble_bound

        jumble_gamma = spectral_jumble_bound(extended, p, seed=seed).gamma
    gamma_budget = c * p * math.sqrt(len(base.left) * len(base.right))
    jumble_ok = jumble_gamma <= gamma_budget + 1e-12
    details = {
        "base_regular": base_verdict.regular,
        "jumble_gamma": jumble_gamma,
        "jumble_budget": gamma_budget,
        "jumble_ok": jumble_ok,
        "left_growth": len(extended.left) / len(base.left),
        "right_growth": len(extended.right) / len(base.right),
    }
    conclusion = check_eps_d_p(
        extended, 2 * epsilon, d, p, method=method, trials=trials, seed=seed, max_subsets=max_subsets
    )
    return ExtensionCheck(
        hypotheses_met=base_verdict.regular and jumble_ok,
        hypothesis_details=details,
        base_verdict=base_verdict,
        conclusion=conclusion,
    )
