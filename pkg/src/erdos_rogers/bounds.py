"""Overflow-free evaluation of the probabilistic inequality chains.

Quantities such as 2^(40 s^2) or C(q^4, 8 b q^2) are handled through their
natural logarithms.  ``log`` means the natural logarithm everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import EpsilonOutOfRange, RhoExceedsOne

LOG2 = math.log(2)


class LogReal:
    """A real number stored as ``sign * exp(log_mag)``.

    ``sign`` is -1, 0 or 1; zero is ``sign == 0`` with ``log_mag == -inf``.
    """

    __slots__ = ("sign", "log_mag")

    def __init__(self, value=0):
        if isinstance(value, LogReal):
            self.sign, self.log_mag = value.sign, value.log_mag
            return
        if value == 0:
            self.sign, self.log_mag = 0, -math.inf
            return
        self.sign = 1 if value > 0 else -1
        mag = -value if value < 0 else value
        if isinstance(mag, Fraction):
            self.log_mag = math.log(mag.numerator) - math.log(mag.denominator)
        else:
            self.log_mag = math.log(mag)

    @classmethod
    def from_log(cls, log_mag: float, sign: int = 1) -> "LogReal":
        out = cls.__new__(cls)
        if sign == 0 or log_mag == -math.inf:
            out.sign, out.log_mag = 0, -math.inf
        else:
            if math.isnan(log_mag) or log_mag == math.inf:
                raise ValueError(f"invalid log magnitude {log_mag}")
            out.sign, out.log_mag = (1 if sign > 0 else -1), float(log_mag)
        return out

    @classmethod
    def exp(cls, x: float) -> "LogReal":
        return cls.from_log(x, 1)

    @staticmethod
    def _coerce(x) -> "LogReal":
        return x if isinstance(x, LogReal) else LogReal(x)

    def is_zero(self) -> bool:
        return self.sign == 0

    def log(self) -> float:
        if self.sign <= 0:
            raise ValueError("log of a non-positive LogReal")
        return self.log_mag

    def __float__(self):
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_mag)
        except OverflowError:
            return self.sign * math.inf

    def __repr__(self):
        return f"LogReal(sign={self.sign}, log_mag={self.log_mag!r})"

    def __neg__(self):
        return LogReal.from_log(self.log_mag, -self.sign)

    def __abs__(self):
        return LogReal.from_log(self.log_mag, abs(self.sign))

    def __add__(self, other):
        other = self._coerce(other)
        if self.sign == 0:
            return LogReal(other)
        if other.sign == 0:
            return LogReal(self)
        big, small = (self, other) if self.log_mag >= other.log_mag else (other, self)
        d = small.log_mag - big.log_mag
        if big.sign == small.sign:
            return LogReal.from_log(big.log_mag + math.log1p(math.exp(d)), big.sign)
        if d == 0:
            return LogReal(0)
        return LogReal.from_log(big.log_mag + math.log1p(-math.exp(d)), big.sign)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return LogReal.from_log(self.log_mag + other.log_mag, self.sign * other.sign)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        return LogReal.from_log(self.log_mag - other.log_mag, self.sign * other.sign)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        e = float(e) if not isinstance(e, int) else e
        if self.sign == 0:
            if e > 0:
                return LogReal(0)
            if e == 0:
                return LogReal(1)
            raise ZeroDivisionError("0 to a negative power")
        if self.sign < 0:
            if not float(e).is_integer():
                raise ValueError("non-integer power of a negative LogReal")
            sign = -1 if int(e) % 2 else 1
        else:
            sign = 1
        return LogReal.from_log(self.log_mag * e, sign)

    def _key(self):
        # total order: sign first, then magnitude in the sign's direction
        return (self.sign, self.sign * self.log_mag if self.sign else 0.0)

    def __eq__(self, other):
        if not isinstance(other, (LogReal, int, float, Fraction)):
            return NotImplemented
        return self._key() == self._coerce(other)._key()

    def __lt__(self, other):
        return self._key() < self._coerce(other)._key()

    def __le__(self, other):
        return self._key() <= self._coerce(other)._key()

    def __gt__(self, other):
        return self._key() > self._coerce(other)._key()

    def __ge__(self, other):
        return self._key() >= self._coerce(other)._key()

    def __hash__(self):
        return hash(self._key())


def _log(x) -> float:
    """Natural log of a positive int, float, Fraction or LogReal."""
    if isinstance(x, LogReal):
        return x.log()
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def log_binomial(n, k) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@dataclass
class FlaggedBound:
    """A bound value plus the hypotheses it was evaluated under."""

    value: LogReal
    flags: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)


# -- Chernoff ----------------------------------------------------------------

def chernoff_tail_bound(mean: float, eps: float, side: str = "upper") -> LogReal:
    """exp(-eps^2 mean / 4) for the upper tail, exp(-eps^2 mean / 2) for the lower."""
    if not 0 <= eps <= 1:
        raise EpsilonOutOfRange(eps)
    if mean < 0:
        raise ValueError("mean must be nonnegative")
    if side == "upper":
        return LogReal.exp(-eps * eps * mean / 4)
    if side == "lower":
        return LogReal.exp(-eps * eps * mean / 2)
    raise ValueError(f"side must be 'upper' or 'lower', not {side!r}")


# -- Janson ------------------------------------------------------------------

def janson_mu(class_sizes, rho) -> LogReal:
    """Expected number of K_s in the random s-partite graph: rho^C(s,2) prod |Y_i|."""
    s = len(class_sizes)
    out = LogReal(rho) ** math.comb(s, 2)
    for y in class_sizes:
        out = out * y
    return out


def janson_delta(class_sizes, rho) -> LogReal:
    """Sum over S with 2 <= |S| <= s-1 of rho^(2C(s,2)-C(|S|,2)) prod|Y_i| prod_{j not in S}(|Y_j|-1)."""
    s = len(class_sizes)
    r = LogReal(rho)
    base = LogReal(1)
    for y in class_sizes:
        base = base * y
    total = LogReal(0)
    for size in range(2, s):
        for S in combinations(range(s), size):
            term = base * r ** (2 * math.comb(s, 2) - math.comb(size, 2))
            for j in range(s):
                if j not in S:
                    term = term * (class_sizes[j] - 1)
            total = total + term
    return total


def janson_rho(s: int, n) -> LogReal:
    """rho = (8s/n)^(2/s)."""
    return LogReal.exp((2 / s) * (math.log(8 * s) - _log(n)))


def appendix_ratio(s: int, n):
    """Upper bound on Delta/mu at rho = (8s/n)^(2/s) and the terminal constant.

    Returns ``(ratio, report)`` where ratio is
    sum_{i=2}^{s-1} (8s/n)^((s-i)(s+i-1)/s) (n/(s-i))^(s-i) C(s,i).
    """
    if s < 3:
        raise ValueError("s must be at least 3")
    ln = _log(n)
    l8s = math.log(8 * s)
    split = math.floor(s / l8s)
    terms, piece_ok = [], []
    total = LogReal(0)
    for i in range(2, s):
        lt = ((s - i) * (s + i - 1) / s) * (l8s - ln) + (s - i) * (ln - math.log(s - i)) + math.log(math.comb(s, i))
        t = LogReal.exp(lt)
        total = total + t
        terms.append(float(t))
        if i <= split:
            piece_ok.append(t <= LogReal(2.0) ** (-s))
        else:
            piece_ok.append(t <= LogReal(1 / (2 * s)) ** (s - i) * math.comb(s, i))
    terminal = math.sqrt(math.e) - 1 + (s - 2) * 2.0 ** (-s)
    binomial_form = (1 + 1 / (2 * s)) ** s - 1 + (s - 2) * 2.0 ** (-s)
    report = {
        "s": s,
        "log_n": ln,
        "ratio": float(total),
        "log_ratio": total.log_mag,
        "ratio_lt_1": total < 1,
        "terms": terms,
        "split_index": split,
        "piece_bounds_hold": all(piece_ok),
        "binomial_form": binomial_form,
        "terminal_bound": terminal,
        "ratio_le_terminal": float(total) <= terminal,
        "binomial_le_terminal": binomial_form <= terminal,
        "n_at_least_2_40s": ln >= 40 * s * LOG2,
    }
    return total, report


def janson_mu_lower(s: int, n):
    """The smallest mu over colorings with every class >= n/2s, against 2^(2s-3) n.

    Returns ``(mu_min, target, holds)`` with mu_min evaluated at classes
    n/2s (s-1 times) and n - (s-1)n/2s.
    """
    ln = _log(n)
    rho = janson_rho(s, n)
    small = LogReal.exp(ln) / (2 * s)
    big = LogReal.exp(ln) * (1 - Fraction(s - 1, 2 * s))
    mu_min = rho ** math.comb(s, 2) * small ** (s - 1) * big
    target = LogReal.exp((2 * s - 3) * LOG2 + ln)
    return mu_min, target, mu_min > target


def janson_ksfree_bound(s: int, n) -> FlaggedBound:
    """exp(-2^(2s-4) n), the probability bound for no K_s at rho = (8s/n)^(2/s)."""
    if s < 3:
        raise ValueError("s must be at least 3")
    ln = _log(n)
    try:
        expo = -float(2 ** (2 * s - 4) * n) if not isinstance(n, LogReal) else -math.exp((2 * s - 4) * LOG2 + ln)
    except OverflowError:
        expo = -math.inf
    return FlaggedBound(LogReal.exp(expo), {"n_at_least_2_40s": ln >= 40 * s * LOG2},
                        {"exponent": expo, "rho": float(janson_rho(s, n))})


# -- local lemma -------------------------------------------------------------

def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, math.isqrt(q) + 2) if q % d == 0 or d * d > q)
    if q % p:
        return True  # q itself is prime
    while q % p == 0:
        q //= p
    return q == 1


def smallest_prime_power_at_least_alogq(a: float) -> int:
    q = 2
    while True:
        if q >= a * math.log(q) and is_prime_power(q):
            return q
        q += 1


def b_value(s: int, a: float, q: int) -> int:
    """b = 2^(40s) * 2a log q, rounded up to an integer."""
    x = Fraction(2 * a * math.log(q)) * 2 ** (40 * s)
    return math.ceil(x)


@dataclass
class LLLReport:
    s: int
    q: int
    a: float
    log_b: float
    log_k: float
    log_rho: float
    log_gamma: float
    margins: dict
    chain: dict
    checks: dict
    log_binomials: dict
    flags: dict

    @property
    def ok(self) -> bool:
        return all(m >= 0 for m in self.margins.values()) and all(self.checks.values())

    def to_dict(self):
        return {
            "s": self.s, "q": self.q, "a": self.a, "log_b": self.log_b, "log_k": self.log_k,
            "log_rho": self.log_rho, "log_gamma": self.log_gamma, "margins": self.margins,
            "chain": self.chain, "checks": self.checks, "log_binomials": self.log_binomials,
            "flags": self.flags, "ok": self.ok,
        }


def lll_check(s: int, q: int, a: float) -> LLLReport:
    """Evaluate both local-lemma inequalities with delta = 1/(N+1), gamma = 1/(32 s b k).

    Margins (nonnegative means the inequality holds):

    * ``first``: -log(2e Pr(A_K)/gamma) with Pr(A_K) = rho^C(s+1,2)
    * ``log_n_plus_1``: (32 b q^2 log q - 1) - log(N+1), N = C(q^2(q^2-q+1), 8bq^2)
    * ``heavy_sum``: (1/64s) (a log q |X|/2 - 2ab q^2 log q) - 32 b q^2 log q at |X| = 8bq^2
    """
    if s < 3 or q < 2 or a <= 0:
        raise ValueError("need s >= 3, q >= 2, a > 0")
    lq = math.log(q)
    b = b_value(s, a, q)
    if b < 8 * s:
        raise RhoExceedsOne(f"b = {b} < 8s = {8 * s}")
    lb = math.log(b)
    lk = s * math.log(2 * a * lq)
    l8s = math.log(8 * s)
    lrho = (2 / s) * (l8s - lb)
    lgamma = -(math.log(32 * s) + lb + lk)
    c1 = math.comb(s + 1, 2)

    # first inequality and the displayed chain leading to es/8^(s+1)
    v0 = LOG2 + 1 + c1 * lrho - lgamma
    head = math.log(64) + 1 + math.log(s) + lk + (s + 1) * l8s
    v1 = head - s * lb
    v2 = head - (40 * s * s * LOG2 + lk)
    v3 = head - (6 * s * s * LOG2 + lk)
    v4 = 1 + math.log(s) + (s + 1) * (l8s - (s - 1) * math.log(64))
    v5 = 1 + math.log(s) - (s + 1) * math.log(8)
    tol = 1e-9 * max(1.0, abs(v0))
    chain = {"2e_PrAK_over_gamma": v0, "b_power": v1, "two_40s2": v2, "sixty_four_s2": v3,
             "es_ratio_power": v4, "es_over_8_s_plus_1": v5}
    chain_ok = (abs(v0 - v1) <= tol and v1 <= v2 + tol and v2 < v3
                and abs(v3 - v4) <= 1e-9 * max(1.0, abs(v3)) and v4 < v5 and v5 < 0)
    lkappa = math.log(c1) + lk
    checks = {
        "chain_monotone": chain_ok,
        "es_lt_8_pow_s_plus_1": math.e * s < 8 ** (s + 1),
        "sixty_four_pow_s_minus_1_gt_64s": 64 ** (s - 1) > 64 * s,
        "kappa_gamma_lt_half": lkappa + lgamma < -LOG2,
        "gamma_le_half": lgamma <= -LOG2,
        "kappa_le_bk": lkappa <= lb + lk,
    }

    # log(N + 1) against 32 b q^2 log q - 1
    L = q * q * (q * q - q + 1)
    K = 8 * b * q * q
    l_n1 = 0.0 if K > L else _log_n_plus_1(log_binomial(L, K))
    rhs = 32 * b * q * q * lq - 1
    q4 = q ** 4
    maj = log_binomial(q4, K) - 1 if K <= q4 else None
    alt_L = q * q * (q * q + q + 1)
    alt = _log_n_plus_1(log_binomial(alt_L, K)) if K <= alt_L else 0.0
    binoms = {
        "lines": L, "X_size": K, "log_N_plus_1": l_n1,
        "log_binom_q4_minus_1": maj, "log_N_plus_1_with_q2_plus_q_plus_1": alt,
        "rhs_32bq2logq_minus_1": rhs,
        "majorant_le_rhs": None if maj is None else maj <= rhs,
        "lhs_le_majorant": None if maj is None else l_n1 <= maj + 1e-9 * abs(maj),
    }

    # sum of |X_p| over heavy points: coefficient arithmetic in units of b q^2 log q
    fa = Fraction(a)
    lower_coef = fa / 2 * 8 - 2 * fa
    scaled = lower_coef / (64 * s)
    heavy_margin = float(scaled - 32) * b * q * q * lq
    checks["heavy_sum_lower_is_2a"] = lower_coef == 2 * fa
    checks["identity_exact_for_a_1024s"] = Fraction(2 * 1024 * s, 64 * s) == 32
    flags = {
        "a_is_1024s": fa == 1024 * s,
        "a_at_least_128": a >= 128,
        "q_at_least_a_log_q": q >= a * lq,
        "q_prime_power": is_prime_power(q),
        "X_size_le_q4": K <= q4,
        "X_size_le_lines": K <= L,
        "b_at_least_2_40s": b >= 2 ** (40 * s),
    }
    # composing both displayed bounds with gamma = 1/(32 s b k): e Pr(A_X) <= exp(-log(N+1) - 2 gamma lambda)
    # gamma b k = 1/(32s) exactly, so 2 gamma lambda equals sum/(32s) and the exponent cancels
    cancel = 2 * (Fraction(1, 32 * s) * Fraction(1, 2)) - Fraction(1, 32 * s)
    composed = -l_n1 - 1 + float(cancel * lower_coef) * b * q * q * lq
    binoms["composed_second_margin"] = composed

    margins = {
        "first": -v0,
        "log_n_plus_1": rhs - l_n1,
        "heavy_sum": heavy_margin,
    }
    return LLLReport(s, q, a, lb, lk, lrho, lgamma, margins, chain, checks, binoms, flags)


def _log_n_plus_1(log_n: float) -> float:
    if log_n == -math.inf:
        return 0.0
    return log_n + math.log1p(math.exp(-log_n)) if log_n > 0 else math.log1p(math.exp(log_n))


# -- the final constant ------------------------------------------------------

def primes_between(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi] by a sieve of Eratosthenes."""
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, hi + 1, i)))
    return [i for i in range(max(lo, 2), hi + 1) if sieve[i]]


def bertrand_prime(n: int) -> Optional[int]:
    """Smallest prime q with n^(1/4) <= q <= 2 n^(1/4), compared exactly via q^4."""
    if n < 1 or n > 10 ** 12:
        raise ValueError("n must lie in [1, 10^12]")
    lo = 1
    while lo ** 4 < n:
        lo += 1
    hi = lo
    while (hi + 1) ** 4 <= 16 * n:
        hi += 1
    found = primes_between(lo, hi)
    return found[0] if found else None


def final_bound_check(s: int, q: int) -> dict:
    """8bq^2 <= 8 2^(40s) 2^11 s q^2 log q <= 2^(100s) sqrt(n) log n with n = q^2(q^2-q+1).

    b is taken unrounded, b = 2^(40s) 2a log q with a = 2^10 s.
    """
    a = 1024 * s
    lq = math.log(q)
    n = q * q * (q * q - q + 1)
    ln = math.log(n)
    log_b = 40 * s * LOG2 + math.log(2 * a * lq)
    lhs = math.log(8) + log_b + 2 * lq
    mid = math.log(8) + 40 * s * LOG2 + 11 * LOG2 + math.log(s) + 2 * lq + math.log(lq)
    rhs = 100 * s * LOG2 + 0.5 * ln + math.log(ln)
    tol = 1e-12 * abs(mid)
    return {
        "s": s, "q": q, "n": n,
        "log_lhs": lhs, "log_mid": mid, "log_rhs": rhs,
        "lhs_le_mid": lhs <= mid + tol,
        "mid_le_rhs": mid <= rhs,
        "margin": rhs - lhs,
        "holds": lhs <= mid + tol and mid <= rhs,
        "q_at_least_a_log_q": q >= a * lq,
        "b_rounding_log_excess": math.log(b_value(s, a, q)) - log_b if s <= 20 else None,
    }


# -- the badness-event bound -------------------------------------------------

def mainlemma_values(sum_xp: int, b: int, s: int) -> FlaggedBound:
    value = LogReal.exp(-sum_xp / (32 * s))
    details = {
        "color_imbalance": float(LogReal.exp(-b / (8 * s))),
        "janson_union": float(LogReal(s) ** b * LogReal.exp(-(2 ** (2 * s - 4)) * b)),
        "per_block": float(LogReal.exp(-b / (16 * s))),
        "two_imbalance_le_per_block": 2 * math.exp(-b / (8 * s)) <= math.exp(-b / (16 * s)),
        "union_le_exp_minus_b": b * math.log(s) - 2 ** (2 * s - 4) * b <= -b,
    }
    flags = {
        "b_at_least_2_40s": b >= 2 ** (40 * s),
        "b_at_least_16s": b >= 16 * s,
        "s_at_least_3": s >= 3,
    }
    return FlaggedBound(value, flags, details)


def mainlemma_bound(inst, s: int) -> FlaggedBound:
    """exp(-(1/32s) sum_{p heavy} |X_p|) for an A_X instance, with proof-step values."""
    return mainlemma_values(inst.sum_xp, inst.b, s)
