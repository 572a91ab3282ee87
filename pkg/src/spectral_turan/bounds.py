"""Inequality checkers and the Motzkin-Straus replicator optimiser.

Every checker returns a :class:`BoundReport` holding both sides of one
inequality ``lhs <= rhs`` and the constants that went into it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .counting import (
    chromatic_number,
    clique_profile,
    codegree_matrix,
    find_clique,
    is_f_free,
)
from .graph import Graph, GraphError
from .spectral import PerronData, perron, walk_table

NUMERIC_TOL = 1e-8
EQUALITY_TOL = 1e-6


class BoundPreconditionError(GraphError):
    """Input violates a bound's hypothesis (e.g. contains a forbidden clique)."""

    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    params: dict = field(default_factory=dict)
    numeric_tol: float = NUMERIC_TOL
    equality_tol: float = EQUALITY_TOL
    hypothesis_met: bool = True

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -self.numeric_tol

    @property
    def violated(self) -> bool:
        """Hypothesis met but inequality fails; a vacuous report never violates."""
        return self.hypothesis_met and not self.holds

    @property
    def equality_flag(self) -> bool:
        return abs(self.slack) <= self.equality_tol

    def as_row(self) -> dict:
        row = {
            "bound": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "violated": self.violated,
            "equality": self.equality_flag,
            "hypothesis_met": self.hypothesis_met,
            "numeric_tol": self.numeric_tol,
            "equality_tol": self.equality_tol,
        }
        row.update({f"param_{k}": v for k, v in sorted(self.params.items())})
        return row


def _report(name, lhs, rhs, params, tol, eq_tol, hypothesis_met=True) -> BoundReport:
    params = dict(params)
    return BoundReport(name, float(lhs), float(rhs), params, tol, eq_tol, hypothesis_met)


def _require_clique_free(g: Graph, k: int) -> None:
    hit = find_clique(g, k)
    if hit is not None:
        raise BoundPreconditionError(f"graph contains K_{k} on {hit}", witness=hit)


def _require_f_free(g: Graph, f: Graph) -> None:
    free, emb = is_f_free(g, f)
    if not free:
        raise BoundPreconditionError("graph contains the forbidden subgraph", witness=emb)


def _perron(g: Graph, p: PerronData | None) -> PerronData:
    return p if p is not None else perron(g)


def check_nikiforov_edge(g: Graph, r: int, p: PerronData | None = None,
                         tol: float = NUMERIC_TOL, eq_tol: float = EQUALITY_TOL) -> BoundReport:
    """lambda <= sqrt((1 - 1/r) 2m) for K_{r+1}-free g."""
    if r < 2:
        raise ValueError("r must be at least 2")
    _require_clique_free(g, r + 1)
    lam = _perron(g, p).lam if g.m else 0.0
    rhs = math.sqrt((1 - 1 / r) * 2 * g.m)
    return _report("nikiforov_edge", lam, rhs, {"r": r}, tol, eq_tol)


def check_edge_spectral_ess(g: Graph, f: Graph, eps: float, p: PerronData | None = None,
                            tol: float = NUMERIC_TOL, eq_tol: float = EQUALITY_TOL,
                            assume_free: bool = False) -> BoundReport:
    """lambda^2 <= (1 - 1/r + eps) 2m for F-free g, chi(F) = r + 1 >= 3."""
    chi = chromatic_number(f)
    if chi < 3:
        raise BoundPreconditionError("forbidden graph is bipartite; the edge bound needs chi(F) >= 3")
    r = chi - 1
    if not assume_free:
        _require_f_free(g, f)
    lam = _perron(g, p).lam if g.m else 0.0
    return _report("edge_spectral_ess", lam**2, (1 - 1 / r + eps) * 2 * g.m,
                   {"r": r, "eps": eps}, tol, eq_tol)


def check_walk_bound(g: Graph, r: int, ell: int, eps: float = 0.0, f: Graph | None = None,
                     p: PerronData | None = None, tol: float = NUMERIC_TOL,
                     eq_tol: float = EQUALITY_TOL) -> BoundReport:
    """lambda^ell <= (1 - 1/r + eps) w_ell(g).

    With eps = 0 g must be K_{r+1}-free.  With eps > 0 a forbidden graph f of
    chromatic number r + 1 may be given instead, and g must be f-free.
    """
    if not 1 <= ell <= 8:
        raise ValueError("ell must lie in 1..8")
    if eps > 0 and f is not None:
        if chromatic_number(f) != r + 1:
            raise ValueError("chi(f) must equal r + 1")
        _require_f_free(g, f)
    else:
        _require_clique_free(g, r + 1)
    lam = _perron(g, p).lam if g.m else 0.0
    w = walk_table(g, ell).total
    return _report("walk_bound", lam**ell, (1 - 1 / r + eps) * w,
                   {"r": r, "ell": ell, "eps": eps, "w_ell": w}, tol, eq_tol)


def check_stanley(g: Graph, p: PerronData | None = None, tol: float = NUMERIC_TOL,
                  eq_tol: float = EQUALITY_TOL) -> BoundReport:
    if g.m < 1:
        raise ValueError("needs at least one edge")
    lam = _perron(g, p).lam
    return _report("stanley", lam, 0.5 * (math.sqrt(8 * g.m + 1) - 1), {}, tol, eq_tol)


def check_clique_poly(g: Graph, ell: int, p: PerronData | None = None,
                      tol: float = NUMERIC_TOL, eq_tol: float = EQUALITY_TOL) -> BoundReport:
    """lambda^ell <= sum_{i=2}^{ell} (i-1) k_i lambda^(ell-i) for K_{ell+1}-free g."""
    if ell < 2:
        raise ValueError("ell must be at least 2")
    _require_clique_free(g, ell + 1)
    lam = _perron(g, p).lam if g.m else 0.0
    k = clique_profile(g, min(ell, 8)) if ell <= 8 else None
    if k is None:
        raise ValueError("ell is capped at 8")
    rhs = sum((i - 1) * k.k(i) * lam ** (ell - i) for i in range(2, ell + 1))
    return _report("clique_poly", lam**ell, rhs,
                   {"ell": ell, "k": list(k.counts)}, tol, eq_tol)


def sos_straus_chain(counts, ell: int) -> list[float]:
    """Terms (k_i / C(ell, i))^(1/i) for i = ell..1, skipping k_i = 0."""
    out = []
    for i in range(ell, 0, -1):
        ki = counts[i - 1] if i <= len(counts) else 0
        if ki:
            out.append((ki / math.comb(ell, i)) ** (1.0 / i))
    return out


def check_sos_straus(g: Graph, ell: int, tol: float = NUMERIC_TOL,
                     eq_tol: float = EQUALITY_TOL) -> BoundReport:
    """Monotone chain of normalised clique counts for K_{ell+1}-free g.

    lhs/rhs are the adjacent pair with the smallest gap.
    """
    if not 1 <= ell <= 8:
        raise ValueError("ell must lie in 1..8")
    _require_clique_free(g, ell + 1)
    prof = clique_profile(g, ell)
    chain = sos_straus_chain(prof.counts, ell)
    if len(chain) < 2:
        lo = hi = chain[0] if chain else 0.0
    else:
        gaps = [(b - a, a, b) for a, b in zip(chain, chain[1:])]
        _, lo, hi = min(gaps)
    return _report("sos_straus", lo, hi, {"ell": ell, "chain": chain}, tol, eq_tol)


def check_codegree_lower(g: Graph, p: PerronData | None = None, tol: float = NUMERIC_TOL,
                         eq_tol: float = EQUALITY_TOL) -> BoundReport:
    """lambda^3 / (2m) <= sum_{i,j} C_ij x_i^2 x_j^2 (diagonal C_ii = d_i included)."""
    if g.m < 1:
        raise ValueError("needs at least one edge")
    pd = _perron(g, p)
    x2 = pd.x**2
    s = float(x2 @ codegree_matrix(g).astype(float) @ x2)
    return _report("codegree_lower", pd.lam**3 / (2 * g.m), s, {}, tol, eq_tol)


def check_k3_stability(g: Graph, beta: float, delta: float | None = None,
                       p: PerronData | None = None, tol: float = NUMERIC_TOL,
                       eq_tol: float = EQUALITY_TOL) -> BoundReport:
    """If lambda >= (1 - delta) sqrt(4m/3) then k_3 >= (1 - beta)(m/3)^(3/2).

    The report is lhs = (1 - beta)(m/3)^(3/2), rhs = k_3; when the spectral
    hypothesis fails ``hypothesis_met`` is False and the report is still
    filled in.  The hypothesis is tested with the numeric tolerance since
    delta = beta^10 sits far below double precision.
    """
    if not 0 < beta < 0.01:
        raise ValueError("beta must lie in (0, 0.01)")
    _require_clique_free(g, 4)
    if delta is None:
        delta = beta**10
    lam = _perron(g, p).lam if g.m else 0.0
    thresh = (1 - delta) * math.sqrt(4 * g.m / 3)
    hyp = lam >= thresh - tol * max(1.0, thresh)
    k3 = clique_profile(g, 3).k(3)
    return _report("k3_stability", (1 - beta) * (g.m / 3) ** 1.5, k3,
                   {"beta": beta, "delta": delta, "lambda": lam, "threshold": thresh},
                   tol, eq_tol, hyp)


def check_max_degree(g: Graph, p: PerronData | None = None, tol: float = NUMERIC_TOL,
                     eq_tol: float = EQUALITY_TOL) -> BoundReport:
    """Delta(G) <= m/2 + m^0.99 under lambda > sqrt(m)."""
    if g.m < 1:
        raise ValueError("needs at least one edge")
    lam = _perron(g, p).lam
    hyp = lam > math.sqrt(g.m) + tol
    return _report("max_degree", g.max_degree, g.m / 2 + g.m**0.99, {"lambda": lam},
                   tol, eq_tol, hyp)


def check_nosal(g: Graph, p: PerronData | None = None, tol: float = NUMERIC_TOL,
                eq_tol: float = EQUALITY_TOL) -> BoundReport:
    """Triangle-free g has lambda <= sqrt(m)."""
    _require_clique_free(g, 3)
    lam = _perron(g, p).lam if g.m else 0.0
    return _report("nosal", lam, math.sqrt(g.m), {}, tol, eq_tol)


def check_rayleigh_range(g: Graph, p: PerronData | None = None, tol: float = NUMERIC_TOL,
                         eq_tol: float = EQUALITY_TOL) -> tuple[BoundReport, BoundReport]:
    """2m/n <= lambda and lambda <= sqrt(2m)."""
    lam = _perron(g, p).lam
    lo = _report("rayleigh_lower", 2 * g.m / g.n, lam, {}, tol, eq_tol)
    hi = _report("trace_upper", lam, math.sqrt(2 * g.m), {}, tol, eq_tol)
    return lo, hi


# --- Motzkin-Straus ---------------------------------------------------------


@dataclass(frozen=True)
class SimplexVector:
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")

    @property
    def support(self) -> list[int]:
        return np.flatnonzero(self.weights > 0).tolist()


def ms_objective(g: Graph, w) -> float:
    """sum over edges of w_i w_j."""
    if g.m == 0:
        return 0.0
    w = np.asarray(w, dtype=float)
    e = np.asarray(g.edges)
    return float(np.sum(w[e[:, 0]] * w[e[:, 1]]))


def motzkin_straus_opt(g: Graph, iters: int = 2000, seed: int = 0, jitter: float = 0.1,
                       trace: bool = False):
    """Replicator ascent w_i <- w_i (Aw)_i / (w^T A w) from a jittered uniform start.

    Returns ``(value, SimplexVector)`` or, with ``trace=True``,
    ``(value, SimplexVector, objective_per_step)``.
    """
    if iters < 1:
        raise ValueError("iters must be at least 1")
    n = g.n
    rng = np.random.default_rng(seed)
    w = np.full(n, 1.0 / n) * (1.0 + jitter * rng.uniform(-1.0, 1.0, n))
    w /= w.sum()
    hist = []
    if g.m == 0:
        sv = SimplexVector(w)
        return (0.0, sv, [0.0]) if trace else (0.0, sv)
    a = g.csr
    hist.append(ms_objective(g, w))
    for _ in range(iters):
        aw = a @ w
        q = float(w @ aw)
        if q <= 0:
            break
        w = w * aw / q
        w /= w.sum()
        if trace:
            hist.append(ms_objective(g, w))
    val = ms_objective(g, w)
    sv = SimplexVector(w)
    return (val, sv, hist) if trace else (val, sv)


def motzkin_straus_bound(r: int) -> float:
    return 0.5 * (1 - 1 / r)
