"""Random point sampling from a unital and the checks on the sampled space."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._random import derive_seed, keyed_uniform
from .errors import RetriesExhausted
from .unital import PartialLinearSpace, classify_crossing, count_fans_on_pair

PAIR_EXHAUSTIVE_LIMIT = 10 ** 6
PAIR_SAMPLE_SIZE = 10 ** 5


@dataclass(frozen=True)
class SampleParams:
    """Parameters of the point-sampling step.

    ``pi`` overrides the sampling probability; by default it is
    ``a*log(q)/(q+1)`` clamped to 1.
    """

    a: float
    q: int
    s: int
    seed: int = 0
    max_retries: int = 10
    pi: Optional[float] = None

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be positive")
        if self.s < 3:
            raise ValueError("s must be at least 3")
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def probability(self) -> float:
        if self.pi is not None:
            return float(self.pi)
        return min(1.0, self.a * self.log_q / (self.q + 1))

    @property
    def k(self) -> float:
        return (2 * self.a * self.log_q) ** self.s

    def regime(self) -> dict:
        """Which hypotheses of the sampling lemma hold for these parameters."""
        raw_pi = self.a * self.log_q / (self.q + 1)
        return {
            "a_at_least_128": self.a >= 128,
            "q_at_least_a_log_q": self.q >= self.a * self.log_q,
            "pi_clamped": self.pi is None and raw_pi > 1,
            "desk_scale": not (self.a >= 128 and self.q >= self.a * self.log_q),
        }


def sample_points(U: PartialLinearSpace, pi: float, seed: int) -> PartialLinearSpace:
    """Keep each point independently with probability ``pi``.

    Every line of ``U`` is kept as its trace on the sampled points, empty
    traces included, so the line count never changes.  Surviving points are
    renumbered ``0..|P|-1``; ``parent_points`` maps them back.
    """
    if not 0 <= pi <= 1:
        raise ValueError(f"probability {pi} outside [0, 1]")
    u = keyed_uniform(seed, np.arange(U.n_points))
    keep = np.flatnonzero(u < pi)
    new_id = np.full(U.n_points, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep))
    lines = [tuple(int(new_id[x]) for x in l if new_id[x] >= 0) for l in U.lines]
    coords = [U.coords[i] for i in keep] if U.coords is not None else None
    return PartialLinearSpace(len(keep), lines, coords=coords, parent_points=tuple(int(i) for i in keep))


# -- fan counting over many pairs ------------------------------------------

def intersecting_pairs(H: PartialLinearSpace):
    """All pairs of lines sharing a point, as arrays ``(u, v, meet)`` with u < v."""
    us, vs, ps = [], [], []
    for p, pencil in enumerate(H.point_to_lines):
        if len(pencil) < 2:
            continue
        ls = np.array(pencil, dtype=np.int64)
        i, j = np.triu_indices(len(ls), 1)
        us.append(ls[i])
        vs.append(ls[j])
        ps.append(np.full(len(i), p, dtype=np.int64))
    if not us:
        e = np.zeros(0, dtype=np.int64)
        return e, e, e
    u, v, p = np.concatenate(us), np.concatenate(vs), np.concatenate(ps)
    order = np.lexsort((v, u))
    return u[order], v[order], p[order]


def _is_linear_space(H: PartialLinearSpace) -> bool:
    n = H.n_points
    return H.is_linear() and len(H._pair_line) == n * (n - 1) // 2


def fan_counts(H: PartialLinearSpace, s: int, u, v, p, chunk: int = 20000) -> np.ndarray:
    """(s+1)-fan counts for many intersecting pairs at once.

    Vectorized when every two points of H are collinear (true for any point
    sample of a unital); otherwise falls back to :func:`count_fans_on_pair`.
    """
    u, v, p = (np.asarray(a, dtype=np.int64) for a in (u, v, p))
    if not _is_linear_space(H):
        return np.array([count_fans_on_pair(H, int(a), int(b), s + 1) for a, b in zip(u, v)], dtype=np.int64)
    sizes = H.line_sizes
    width = max(int(sizes.max(initial=0)), 1)
    comb_tab = np.array([math.comb(m, s - 2) for m in range(width + 1)], dtype=np.int64)
    comb_tab2 = np.array([math.comb(m, s - 1) for m in range(width + 1)], dtype=np.int64)

    n = H.n_points
    W = np.zeros((n + 1, n + 1), dtype=np.int64)  # row/col n is padding
    for l, pts in enumerate(H.lines):
        if len(pts) < 2:
            continue
        idx = np.array(pts)
        W[np.ix_(idx, idx)] = comb_tab[len(pts) - 2]
    np.fill_diagonal(W, 0)

    padded = np.full((H.n_lines, width), n, dtype=np.int64)
    for l, pts in enumerate(H.lines):
        padded[l, :len(pts)] = pts

    out = np.empty(len(u), dtype=np.int64)
    for start in range(0, len(u), chunk):
        sl = slice(start, start + chunk)
        xs = padded[u[sl]]
        ys = padded[v[sl]]
        pp = p[sl][:, None]
        xs = np.where(xs == pp, n, xs)
        ys = np.where(ys == pp, n, ys)
        case1 = W[xs[:, :, None], ys[:, None, :]].sum(axis=(1, 2))
        su, sv = sizes[u[sl]], sizes[v[sl]]
        case2 = (su - 1) * comb_tab2[sv - 1] + (sv - 1) * comb_tab2[su - 1]
        out[sl] = case1 + case2
    return out


# -- the sampling lemma report ---------------------------------------------

@dataclass
class Lemma5Report:
    q: int
    s: int
    a: float
    pi: float
    n_points: int
    n_lines: int
    line_count_ok: bool
    point_bounds: tuple[float, float]
    min_line_size: int
    line_size_threshold: float
    max_fans_on_pair: int
    k: float
    fan_mode: str
    pairs_checked: int
    onan_free_parent: bool
    spot_checks: int
    spot_violations: int
    regime: dict = field(default_factory=dict)

    @property
    def point_count_ok(self) -> bool:
        lo, hi = self.point_bounds
        return lo <= self.n_points <= hi

    @property
    def line_size_ok(self) -> bool:
        return self.min_line_size >= self.line_size_threshold

    @property
    def fans_ok(self) -> bool:
        return self.max_fans_on_pair <= self.k

    @property
    def fans_ok_four_k(self) -> bool:
        return self.max_fans_on_pair <= 4 * self.k

    @property
    def item_v(self) -> bool:
        return self.onan_free_parent and self.spot_violations == 0

    @property
    def passes(self) -> bool:
        """Items (ii)-(iv), the ones that can fail for an unlucky sample."""
        return self.point_count_ok and self.line_size_ok and self.fans_ok

    def to_dict(self) -> dict:
        return {
            "i": self.line_count_ok,
            "ii": {"points": self.n_points, "lower": self.point_bounds[0],
                   "upper": self.point_bounds[1], "ok": self.point_count_ok},
            "iii": {"min_line_size": self.min_line_size,
                    "threshold": self.line_size_threshold, "ok": self.line_size_ok},
            "iv": {"max_fans_on_pair": self.max_fans_on_pair, "k": self.k,
                   "four_k": 4 * self.k, "ok": self.fans_ok, "ok_four_k": self.fans_ok_four_k,
                   "mode": self.fan_mode, "pairs_checked": self.pairs_checked},
            "v": self.item_v,
            "v_detail": {"onan_free_parent": self.onan_free_parent,
                         "spot_checks": self.spot_checks, "violations": self.spot_violations},
            "stats": {"q": self.q, "s": self.s, "a": self.a, "pi": self.pi,
                      "n_points": self.n_points, "n_lines": self.n_lines},
            "regime": dict(self.regime),
            "passes": self.passes,
        }


def _spot_check_crossings(H: PartialLinearSpace, size: int, n_checks: int, seed: int) -> tuple[int, int]:
    """Classify random pairwise-crossing line sets; return (checked, violations)."""
    rng = np.random.default_rng(seed)
    nonempty = [l for l in range(H.n_lines) if len(H.lines[l]) > 0]
    if not nonempty:
        return 0, 0

    def nbrs(l):
        out = set()
        for x in H.lines[l]:
            out.update(H.point_to_lines[x])
        out.discard(l)
        return out

    checked = violations = 0
    for _ in range(n_checks):
        chosen = [int(rng.choice(nonempty))]
        cands = nbrs(chosen[0])
        while len(chosen) < size and cands:
            nxt = int(rng.choice(sorted(cands)))
            chosen.append(nxt)
            cands &= nbrs(nxt)
            cands.discard(nxt)
        if len(chosen) < size:
            continue
        checked += 1
        if classify_crossing(H, chosen).tag == "invalid":
            violations += 1
    return checked, violations


def verify_lemma5(H: PartialLinearSpace, params: SampleParams, *, parent_onan_free: bool = True,
                  spot_checks: int = 200) -> Lemma5Report:
    """Evaluate the five items of the sampling lemma on a sampled space ``H``.

    ``parent_onan_free`` records whether the unital H was sampled from is
    known to have no O'Nan configuration (true for every Hermitian unital).
    """
    q, s, a = params.q, params.s, params.a
    lq = params.log_q
    u, v, p = intersecting_pairs(H)
    mode = "exhaustive"
    if len(u) > PAIR_EXHAUSTIVE_LIMIT:
        rng = np.random.default_rng(derive_seed(params.seed, "fan-pairs"))
        pick = np.sort(rng.choice(len(u), PAIR_SAMPLE_SIZE, replace=False))
        u, v, p = u[pick], v[pick], p[pick]
        mode = "sampled"
    counts = fan_counts(H, s, u, v, p)
    checked, bad = _spot_check_crossings(H, s + 1, spot_checks, derive_seed(params.seed, "spot-checks"))
    return Lemma5Report(
        q=q, s=s, a=a, pi=params.probability,
        n_points=H.n_points, n_lines=H.n_lines,
        line_count_ok=H.n_lines == q * q * (q * q - q + 1),
        point_bounds=(a * q * q * lq / 2, 2 * a * q * q * lq),
        min_line_size=int(H.line_sizes.min()) if H.n_lines else 0,
        line_size_threshold=a * lq / 2,
        max_fans_on_pair=int(counts.max(initial=0)),
        k=params.k,
        fan_mode=mode,
        pairs_checked=int(len(u)),
        onan_free_parent=parent_onan_free,
        spot_checks=checked,
        spot_violations=bad,
        regime=params.regime(),
    )


def sample_until_good(U: PartialLinearSpace, params: SampleParams, *, spot_checks: int = 50):
    """Resample until items (ii)-(iv) hold.  Returns ``(H, report, attempts)``."""
    report = None
    for attempt in range(params.max_retries):
        seed = derive_seed(params.seed, "points", attempt)
        H = sample_points(U, params.probability, seed)
        report = verify_lemma5(H, params, spot_checks=spot_checks)
        if report.passes:
            return H, report, attempt + 1
    raise RetriesExhausted(f"no good sample in {params.max_retries} attempts",
                           report=report, attempts=params.max_retries)


# -- the heavy-point inequality --------------------------------------------

def x_point_counts(H: PartialLinearSpace, X) -> np.ndarray:
    """|X_p| for every point p: how many lines of X pass through p."""
    pts = [x for l in X for x in H.lines[l]]
    return np.bincount(np.array(pts, dtype=np.int64), minlength=H.n_points)


def verify_b_bound(H: PartialLinearSpace, X, a: float, b: int, q: int):
    """Both sides of  sum_{p: |X_p| >= b} |X_p|  >  (a log q)|X|/2 - 2ab q^2 log q.

    Returns ``(lhs, rhs, holds)``; lhs is an exact integer.
    """
    X = sorted(set(int(l) for l in X))
    xp = x_point_counts(H, X)
    lhs = int(xp[xp >= b].sum())
    lq = math.log(q)
    rhs = 0.5 * a * lq * len(X) - 2 * a * b * q * q * lq
    return lhs, rhs, lhs > rhs
