"""Exact partite embedding counts and counting-window audits.

``count_partite_copies`` counts labelled copies of a pattern H in a host,
vertex i landing in its own part V_i: the map is globally injective and
sends every pattern edge to a host edge; host edges between images of
pattern non-edges are permitted, and parts of non-adjacent pattern vertices
may overlap (injectivity then does real work).  Counting backtracks in the
pattern's embedding order, intersecting host bit rows of already-embedded
neighbours; the order affects only speed, never the count.

``suffix_count`` restricts to the pattern vertices at positions >= x with
per-vertex window sets W_y, and ``suffix_bound_audit`` compares it against
(4p)^{e(H`>=x`)} prod |W_y| under the hypotheses p < 1/10, the W-set size
floors |W_y| >= eps p^{|N^{<x}(y)|} |V_y|, and a bijumbledness budget on
beta.  ``optialpha_check`` evaluates the exact sum behind that bound's
optimisation step against (50q)^q p^(1-C); the enumeration uses logarithms
base 2 (forced by the powers of 2 in the sum).
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

from ._numeric import geq, leq, within
from .errors import CapacityError, ParameterError
from .graphs import BipartitePairView, Graph, VertexSet, iter_bits, p_density
from .patterns import Pattern, d_tilde
from .reports import AuditReport, HypothesisRecord, make_report

OPTIALPHA_CAP = 10**8


@dataclass(frozen=True)
class PartiteInstance:
    """Pattern, host, and one part per pattern vertex (indexed by vertex)."""

    pattern: Pattern
    host: Graph
    parts: tuple[VertexSet, ...]

    def __post_init__(self):
        if len(self.parts) != self.pattern.graph.vertex_count:
            raise ParameterError("need exactly one part per pattern vertex")
        for part in self.parts:
            if part.indices and part.indices[-1] >= self.host.vertex_count:
                raise ParameterError("part references vertices outside the host")
        for u, v in self.pattern.graph.edges():
            if self.parts[u].mask & self.parts[v].mask:
                raise ParameterError(f"parts of adjacent pattern vertices {u},{v} overlap")


@dataclass(frozen=True)
class SuffixInstance:
    """A partite instance restricted to pattern positions >= pos(x).

    ``w_sets[y]`` must be a subset of the base part of y for every pattern
    vertex y at position >= pos(x).
    """

    base: PartiteInstance
    x: int
    w_sets: Mapping[int, VertexSet]

    def __post_init__(self):
        for y in self.suffix_vertices():
            if y not in self.w_sets:
                raise ParameterError(f"missing W-set for suffix vertex {y}")
            if not self.w_sets[y].issubset(self.base.parts[y]):
                raise ParameterError(f"W-set of vertex {y} is not inside its part")

    def suffix_vertices(self) -> tuple[int, ...]:
        seq = self.base.pattern.sequence
        start = seq.index(self.x)
        return seq[start:]


def count_partite_copies(instance: PartiteInstance) -> int:
    """Exact labelled partite copy count by ordered backtracking."""
    pattern, host = instance.pattern, instance.host
    seq = pattern.sequence
    m = len(seq)
    if m == 0:
        return 1
    rows = host.rows
    prows = pattern.graph.rows
    part_masks = [instance.parts[v].mask for v in seq]
    earlier: list[list[int]] = []  # indices into images[] of already-embedded neighbours
    for i, v in enumerate(seq):
        earlier.append([j for j in range(i) if prows[v] & (1 << seq[j])])

    images = [0] * m

    def rec(level: int, used: int) -> int:
        cand = part_masks[level] & ~used
        for j in earlier[level]:
            cand &= rows[images[j]]
            if not cand:
                return 0
        if level == m - 1:
            return cand.bit_count()
        total = 0
        for w in iter_bits(cand):
            images[level] = w
            total += rec(level + 1, used | (1 << w))
        return total

    return rec(0, 0)


def brute_force_partite_copies(instance: PartiteInstance, cap: int = 10**6) -> int:
    """Product-enumeration reference; for cross-checks only."""
    sizes = [len(p) for p in instance.parts]
    space = math.prod(sizes)
    if space > cap:
        raise CapacityError(f"brute force space {space} exceeds {cap}")
    edges = list(instance.pattern.graph.edges())
    g = instance.host
    total = 0
    for assignment in itertools.product(*[p.indices for p in instance.parts]):
        if len(set(assignment)) != len(assignment):
            continue
        if all(g.has_edge(assignment[u], assignment[v]) for u, v in edges):
            total += 1
    return total


def predicted_count(instance: PartiteInstance, p: float) -> tuple[float, float]:
    """(density product d(H;G), d(H;G) p^e(H) prod |V_i|)."""
    if p <= 0:
        raise ParameterError("p must be positive")
    if any(not part.indices for part in instance.parts):
        raise ParameterError("all parts must be nonempty")
    dh = 1.0
    for u, v in instance.pattern.graph.edges():
        dh *= p_density(BipartitePairView(instance.host, instance.parts[u], instance.parts[v]), p)
    e = instance.pattern.graph.edge_count()
    pred = dh * p**e * math.prod(len(part) for part in instance.parts)
    return dh, pred


def counting_window_audit(
    instance: PartiteInstance,
    p: float,
    gamma: float,
    side: str = "two_sided",
    evidence: Sequence[HypothesisRecord] = (),
    mode: str = "relaxed",
    seed: int = 0,
) -> AuditReport:
    """Compare the exact count against the counting-lemma floor or window.

    ``evidence`` carries the caller's regularity / bijumbledness records and
    is embedded verbatim in the report.
    """
    started = time.perf_counter()
    if side not in ("lower", "two_sided"):
        raise ParameterError(f"unknown side {side!r}")
    dh, _ = predicted_count(instance, p)
    e = instance.pattern.graph.edge_count()
    scale = p**e * math.prod(len(part) for part in instance.parts)
    count = count_partite_copies(instance)
    lo = (dh - gamma) * scale
    if side == "lower":
        ok = geq(count, lo)
        bound = lo
        kind = "lower"
        margin = count - lo
    else:
        hi = (dh + gamma) * scale
        ok = within(count, lo, hi)
        bound = [lo, hi]
        kind = "window"
        margin = min(count - lo, hi - count)
    return make_report(
        "counting_window_" + ("one_sided" if side == "lower" else "two_sided"),
        mode,
        list(evidence),
        ok,
        measured=count,
        bound=bound,
        bound_kind=kind,
        parameters={"p": p, "gamma": gamma, "density_product": dh, "edge_count": e},
        seed=seed,
        margin=margin,
        started=started,
    )


def _suffix_pattern(instance: SuffixInstance) -> tuple[Pattern, tuple[VertexSet, ...]]:
    suffix = instance.suffix_vertices()
    relabel = {v: i for i, v in enumerate(suffix)}
    edges = [
        (relabel[u], relabel[v])
        for u, v in instance.base.pattern.graph.edges()
        if u in relabel and v in relabel
    ]
    graph = Graph.from_edges(len(suffix), edges)
    parts = tuple(instance.w_sets[v] for v in suffix)
    return Pattern.identity(graph), parts


def suffix_count(instance: SuffixInstance) -> int:
    """Copies of the induced suffix pattern with each y inside w_sets[y]."""
    pattern, parts = _suffix_pattern(instance)
    return count_partite_copies(PartiteInstance(pattern, instance.base.host, parts))


def suffix_bound_audit(
    instance: SuffixInstance,
    p: float,
    eps: float,
    beta: float | None = None,
    mode: str = "strict",
    seed: int = 0,
) -> AuditReport:
    """Compare the suffix count against (4p)^(e(H>=x)) prod |W_y|.

    The beta hypothesis beta <= eps/2 (50 D)^-D p^(1/2 + d~/2) is checked
    against the supplied value or a spectral measurement over every pattern
    edge; the W-set floors and p < 1/10 are checked directly.
    """
    started = time.perf_counter()
    base = instance.base
    pattern = base.pattern
    suffix = instance.suffix_vertices()
    pos = {v: i for i, v in enumerate(pattern.sequence)}
    x_pos = pos[instance.x]

    hyp_p = HypothesisRecord("p_range", p < 0.1, True, {"p": p})

    floors_ok = True
    floor_detail = {}
    for y in suffix:
        back = sum(
            1 for w in iter_bits(pattern.graph.rows[y]) if pos[w] < x_pos
        )  # |N^{<x}(y)|
        required = eps * p**back * len(base.parts[y])
        ok = len(instance.w_sets[y]) >= required - 1e-12
        floors_ok &= ok
        floor_detail[str(y)] = {"size": len(instance.w_sets[y]), "required": required}
    hyp_floors = HypothesisRecord("w_set_floors", floors_ok, True, floor_detail)

    beta_certified = beta is None  # spectrally measured = sound; supplied = assumed
    if beta is None:
        from .jumbled import spectral_jumble_bound

        beta = 0.0
        for u, v in pattern.graph.edges():
            pr = BipartitePairView(base.host, base.parts[u], base.parts[v])
            cert = spectral_jumble_bound(pr, p, seed=seed)
            beta = max(beta, cert.gamma / math.sqrt(len(base.parts[u]) * len(base.parts[v])))
    dmax = pattern.graph.max_degree()
    dt = d_tilde(pattern)
    budget = 0.5 * eps * (50.0 * dmax) ** -dmax * p ** (0.5 + 0.5 * dt) if dmax else 0.5 * eps
    hyp_beta = HypothesisRecord(
        "beta_budget", beta <= budget + 1e-15, beta_certified, {"beta": beta, "budget": budget}
    )

    count = suffix_count(instance)
    e_suffix = sum(
        1 for u, v in pattern.graph.edges() if pos[u] >= x_pos and pos[v] >= x_pos
    )
    bound = (4 * p) ** e_suffix * math.prod(len(instance.w_sets[y]) for y in suffix)
    ok = leq(count, bound)
    return make_report(
        "suffix_count_bound",
        mode,
        [hyp_p, hyp_floors, hyp_beta],
        ok,
        measured=count,
        bound=bound,
        bound_kind="upper",
        parameters={
            "p": p,
            "eps": eps,
            "x": instance.x,
            "suffix_edges": e_suffix,
            "d_tilde": dt,
            "max_degree": dmax,
        },
        seed=seed,
        margin=bound - count,
        started=started,
    )


@dataclass(frozen=True)
class OptialphaResult:
    lhs_sum: float
    bound: float
    holds: bool
    cap_p: int  # P = floor(log2(1/p))
    c_exponent: int  # C = max_i (b_i + i), 1-based i
    p_hypothesis_met: bool


def optialpha_check(
    p: float, b: Sequence[int], cap: int = OPTIALPHA_CAP
) -> OptialphaResult:
    """Exactly evaluate the alpha-vector sum and compare with (50q)^q p^(1-C).

    A = [0,P]^q minus the zero vector with P = floor(log2(1/p)); each term is
    2^(sum alpha) / max_{i: alpha_i != 0} 2^(2 alpha_i) p^(b_i).  The stated
    guarantee needs p <= 1/10 and b nonincreasing; larger p still gets
    evaluated, with the hypothesis flag cleared.
    """
    if not 0 < p < 1:
        raise ParameterError("p must lie in (0,1)")
    q = len(b)
    if q < 1:
        raise ParameterError("b must be nonempty")
    if any(bi < 0 or int(bi) != bi for bi in b):
        raise ParameterError("b entries must be nonnegative integers")
    if any(b[i] < b[i + 1] for i in range(q - 1)):
        raise ParameterError("b must be sorted nonincreasing")
    cap_p = int(math.floor(math.log2(1.0 / p) + 1e-9))
    if (cap_p + 1) ** q > cap:
        raise CapacityError(f"optialpha enumeration ({(cap_p + 1) ** q} vectors) exceeds capacity {cap}")
    c_exp = max(bi + i for i, bi in enumerate(b, start=1))
    total = 0.0
    for alpha in itertools.product(range(cap_p + 1), repeat=q):
        if not any(alpha):
            continue
        num = 2.0 ** sum(alpha)
        den = max(2.0 ** (2 * a) * p ** bi for a, bi in zip(alpha, b) if a != 0)
        total += num / den
    bound = (50.0 * q) ** q * p ** (1 - c_exp)
    return OptialphaResult(
        lhs_sum=total,
        bound=bound,
        holds=leq(total, bound),
        cap_p=cap_p,
        c_exponent=c_exp,
        p_hypothesis_met=p <= 0.1 + 1e-12,
    )
