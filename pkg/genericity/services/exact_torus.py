# genericity/services/exact_torus.py
from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Iterator

from genericity.core.errors import InvalidInputError
from genericity.models.torus import (
    GeneratingSet,
    IntMatrix2,
    NTType,
    PrimitiveClass,
    TorusMulticurve,
)

Entries = tuple[int, int, int, int]

_COHN_A = IntMatrix2(1, 1, 1, 2)
_COHN_B = IntMatrix2(2, 1, 1, 1)


# ---------- classification ----------

def dilatation_from_trace(trace: int) -> float:
    t = abs(trace)
    if t <= 2:
        raise InvalidInputError(f"trace {trace} is not hyperbolic")
    try:
        big = float(t)
    except OverflowError:
        return math.inf
    # (t + sqrt(t^2 - 4)) / 2 written to survive huge traces
    return big * (1.0 + math.sqrt(1.0 - float(Fraction(4, t * t)))) / 2.0


def _periodic_order(m: IntMatrix2) -> int:
    identity = IntMatrix2.identity()
    power = m
    for n in range(1, 13):
        if power == identity:
            return n
        power = power @ m
    raise InvalidInputError(f"{m} has |trace| < 2 but no order dividing 12")


def projective_order(m: IntMatrix2) -> int | None:
    """Smallest n with m^n = +-I, the order of the action on curves; None if m has infinite order."""
    if abs(m.trace) >= 2 and not m.is_central():
        return None
    power = m
    for n in range(1, 7):
        if power.is_central():
            return n
        power = power @ m
    return None


def classify_matrix(m: IntMatrix2) -> NTType:
    t = abs(m.trace)
    if t < 2 or m.is_central():
        return NTType.periodic(_periodic_order(m))
    if t == 2:
        return NTType.reducible()
    return NTType.pseudo_anosov(dilatation_from_trace(t))


def trace_kind(a: int, b: int, c: int, d: int) -> str:
    """Classification from raw entries, for enumeration loops: 'periodic', 'reducible' or 'pa'."""
    t = abs(a + d)
    if t < 2 or (b == 0 and c == 0):
        return "periodic"
    if t == 2:
        return "reducible"
    return "pa"


def l1_norm(m: IntMatrix2) -> int:
    return abs(m.a) + abs(m.b) + abs(m.c) + abs(m.d)


# ---------- intersection numbers ----------

def slope_intersection(x: PrimitiveClass, y: PrimitiveClass) -> int:
    return abs(x.p * y.q - x.q * y.p)


def multicurve_intersection(x: TorusMulticurve, y: TorusMulticurve) -> Fraction:
    total = Fraction(0)
    for cx, wx in x:
        for cy, wy in y:
            total += wx * wy * slope_intersection(cx, cy)
    return total


def apply_to_class(m: IntMatrix2, x: PrimitiveClass) -> PrimitiveClass:
    return PrimitiveClass.of(m.a * x.p + m.b * x.q, m.c * x.p + m.d * x.q)


def apply_matrix(m: IntMatrix2, x: TorusMulticurve) -> TorusMulticurve:
    out: dict[PrimitiveClass, Fraction] = {}
    for cx, w in x:
        image = apply_to_class(m, cx)
        out[image] = out.get(image, Fraction(0)) + w
    return TorusMulticurve(out)


def fills(x: TorusMulticurve) -> bool:
    slopes = [cx for cx, _ in x]
    return any(
        slope_intersection(slopes[i], slopes[j]) > 0
        for i in range(len(slopes))
        for j in range(i + 1, len(slopes))
    )


def rho_sigma_eta(sigma: TorusMulticurve, eta: TorusMulticurve, m: IntMatrix2) -> Fraction:
    if not fills(sigma):
        raise InvalidInputError(f"sigma {sigma} does not fill the torus")
    if not fills(eta):
        raise InvalidInputError(f"eta {eta} does not fill the torus")
    return multicurve_intersection(apply_matrix(m, sigma), eta)


def rho_lower_bound(sigma: TorusMulticurve, eta: TorusMulticurve) -> Fraction:
    """Positive c with rho_{sigma,eta}(m) >= c * l1(m) for every m.

    Two transverse slopes s1, s2 of sigma and e1, e2 of eta give four linear forms
    det(m s_i, e_j) whose absolute sum controls the entries of m through the inverses of
    [s1 s2] and [e1 e2]. The best pair on each side is used."""
    if not fills(sigma):
        raise InvalidInputError(f"sigma {sigma} does not fill the torus")
    if not fills(eta):
        raise InvalidInputError(f"eta {eta} does not fill the torus")

    def best(x: TorusMulticurve) -> Fraction:
        parts = list(x)
        out = Fraction(0)
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                (s, ws), (t, wt) = parts[i], parts[j]
                det = slope_intersection(s, t)
                if det:
                    widest = max(abs(s.p) + abs(s.q), abs(t.p) + abs(t.q))
                    out = max(out, min(ws, wt) * det / widest)
        return out

    return best(sigma) * best(eta)


# ---------- word metrics ----------

def _mul(x: Entries, y: Entries) -> Entries:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def word_length(m: IntMatrix2, gens: GeneratingSet, cap: int) -> int | None:
    """Exact word length of m over gens by bidirectional BFS; None when it exceeds cap."""
    if len(gens) == 0:
        raise InvalidInputError("word length needs a non-empty generating set")
    start = (1, 0, 0, 1)
    goal = m.entries()
    if goal == start:
        return 0
    steps = [g.entries() for g in gens.elements]
    forward = {start: 0}
    backward = {goal: 0}
    front_f, front_b = [start], [goal]
    depth_f = depth_b = 0
    while front_f and front_b and depth_f + depth_b < cap:
        if len(front_f) <= len(front_b):
            seen, other, frontier = forward, backward, front_f
            depth_f += 1
            depth = depth_f
        else:
            seen, other, frontier = backward, forward, front_b
            depth_b += 1
            depth = depth_b
        best = None
        nxt = []
        for node in frontier:
            for g in steps:
                child = _mul(node, g)
                if child in seen:
                    continue
                seen[child] = depth
                nxt.append(child)
                if child in other:
                    total = depth + other[child]
                    best = total if best is None else min(best, total)
        if best is not None:
            return best if best <= cap else None
        if frontier is front_f:
            front_f = nxt
        else:
            front_b = nxt
    return None


def positive_monoid_length(m: IntMatrix2) -> int | None:
    """Length of m as a positive word in L=[[1,0],[1,1]], R=[[1,1],[0,1]]; None outside the monoid."""
    a, b, c, d = m.entries()
    if min(a, b, c, d) < 0:
        return None
    n = 0
    while (a, b, c, d) != (1, 0, 0, 1):
        if c == 0:
            return n + b
        if b == 0:
            return n + c
        if a >= c and b >= d:
            k = min(a // c, b // d)
            a, b, n = a - k * c, b - k * d, n + k
        elif c >= a and d >= b:
            k = min(c // a, d // b)
            c, d, n = c - k * a, d - k * b, n + k
        else:
            return None
    return n


# ---------- l1 ball enumeration ----------

def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = abs(a), abs(b)
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    sx = -1 if a < 0 else 1
    sy = -1 if b < 0 else 1
    return old_r, old_x * sx, old_y * sy


def _row_completions(a: int, b: int, budget: int) -> list[tuple[int, int]]:
    """All (c, d) with ad - bc = 1 and |c| + |d| <= budget, sorted."""
    _, x, y = _ext_gcd(a, b)
    c0, d0 = -y, x

    def cost(t: int) -> int:
        return abs(c0 + t * a) + abs(d0 + t * b)

    candidates = []
    for num, den in ((-c0, a), (-d0, b)):
        if den:
            base = num // den
            candidates.extend((base, base + 1))
    t0 = min(candidates, key=lambda t: (cost(t), t))
    if cost(t0) > budget:
        return []
    out = []
    t = t0
    while cost(t) <= budget:
        out.append((c0 + t * a, d0 + t * b))
        t -= 1
    t = t0 + 1
    while cost(t) <= budget:
        out.append((c0 + t * a, d0 + t * b))
        t += 1
    out.sort()
    return out


def iter_l1_ball_entries(radius: int, first_entries: Iterable[int] | None = None) -> Iterator[Entries]:
    """Raw (a, b, c, d) with l1 norm <= radius in lexicographic order, optionally restricted to
    the given values of a (one shard per value)."""
    if radius < 2:
        return
    a_values = range(-radius, radius + 1) if first_entries is None else sorted(first_entries)
    for a in a_values:
        rest = radius - abs(a)
        for b in range(-rest, rest + 1):
            if gcd(a, b) != 1:
                continue
            for c, d in _row_completions(a, b, rest - abs(b)):
                yield (a, b, c, d)


def enumerate_l1_ball(radius: int) -> Iterator[IntMatrix2]:
    for a, b, c, d in iter_l1_ball_entries(radius):
        yield IntMatrix2(a, b, c, d)


# ---------- Farey graph ----------

def _continued_fraction(p: int, q: int) -> list[int]:
    quotients = []
    while q:
        k = p // q
        quotients.append(k)
        p, q = q, p - k * q
    return quotients


def _distance_from_infinity(p: int, q: int) -> int:
    """Farey distance from 1/0 to p/q (q > 0), by shortest path through the convergents."""
    quotients = _continued_fraction(p, q)
    # vertex 0 is 1/0, vertex k+1 is the k-th convergent
    dist = [0]
    for k, a in enumerate(quotients):
        best = dist[k] + 1
        if k >= 1 and a == 1:
            best = min(best, dist[k - 1] + 1)
        dist.append(best)
    return dist[-1]


def farey_distance(x: PrimitiveClass, y: PrimitiveClass) -> int:
    if x == y:
        return 0
    _, u, v = _ext_gcd(x.p, x.q)
    # g = [[u, v], [-q, p]] sends x to (1, 0)
    p2 = u * y.p + v * y.q
    q2 = -x.q * y.p + x.p * y.q
    if q2 < 0:
        p2, q2 = -p2, -q2
    if q2 == 0:
        return 0
    return _distance_from_infinity(p2, q2)


# ---------- centralizers ----------

def centralizer_root(phi0: IntMatrix2) -> IntMatrix2:
    """Primitive element generating the centralizer of phi0 up to sign."""
    if phi0.is_central():
        raise InvalidInputError(f"{phi0} is central")
    a, b, c, d = phi0.entries()
    t = abs(a + d)
    if t < 2:
        return phi0
    g = gcd(gcd(b, c), d - a)
    B, C, D = b // g, c // g, (d - a) // g
    if t == 2:
        return IntMatrix2(1 - D // 2, B, C, 1 + D // 2)
    disc = D * D + 4 * B * C
    for u in range(1, g + 1):
        square = disc * u * u + 4
        s = isqrt(square)
        if s * s == square and (s - D * u) % 2 == 0:
            return IntMatrix2((s - D * u) // 2, B * u, C * u, (s + D * u) // 2)
    raise InvalidInputError(f"no centralizer root found for {phi0}")


def rel_distance_to_centralizer(
    psi: IntMatrix2,
    phi0: IntMatrix2,
    alpha0: PrimitiveClass,
    window: int,
) -> int:
    """Upper bound for d_rel(psi, C(phi0)) over the powers of the centralizer root with |k| <= window."""
    root = centralizer_root(phi0)
    target = apply_to_class(psi, alpha0)
    best = farey_distance(target, alpha0)
    for step in (root, root.inverse()):
        power = IntMatrix2.identity()
        for _ in range(window):
            power = power @ step
            best = min(best, farey_distance(target, apply_to_class(power, alpha0)))
            if best == 0:
                return 0
    return best


# ---------- hyperbolic lengths on the modular torus ----------

def _cohn_matrix(p: int, q: int, a_matrix: IntMatrix2 = _COHN_A) -> IntMatrix2:
    """Matrix of the slope p/q (p, q >= 0) in the group generated by the Cohn pair."""
    if (p, q) == (1, 0):
        return a_matrix
    if (p, q) == (0, 1):
        return _COHN_B
    # Stern-Brocot descent, taking runs of equal turns in one power
    left_pq, left_m = (0, 1), _COHN_B
    right_pq, right_m = (1, 0), a_matrix
    while True:
        mp, mq = left_pq[0] + right_pq[0], left_pq[1] + right_pq[1]
        if (mp, mq) == (p, q):
            return left_m @ right_m
        if p * mq > mp * q:
            # target lies right of the mediant; left moves k times
            k = _run_length(left_pq, right_pq, p, q, toward_right=True)
            left_pq = (left_pq[0] + k * right_pq[0], left_pq[1] + k * right_pq[1])
            left_m = left_m @ right_m.power(k)
        else:
            k = _run_length(right_pq, left_pq, p, q, toward_right=False)
            right_pq = (right_pq[0] + k * left_pq[0], right_pq[1] + k * left_pq[1])
            right_m = left_m.power(k) @ right_m


def _run_length(moving: tuple[int, int], fixed: tuple[int, int], p: int, q: int, toward_right: bool) -> int:
    """Largest k >= 1 such that moving + k*fixed still lies strictly on the same side of p/q
    (or equals it)."""
    k = 1
    while True:
        np_, nq = moving[0] + (k + 1) * fixed[0], moving[1] + (k + 1) * fixed[1]
        side = p * nq - np_ * q
        if (side > 0) if toward_right else (side < 0):
            k += 1
        else:
            return k


def slope_trace(x: PrimitiveClass) -> int:
    if x.p >= 0:
        return abs(_cohn_matrix(x.p, x.q).trace)
    # reflecting the slope replaces A by its inverse
    return abs(_cohn_matrix(-x.p, x.q, _COHN_A.inverse()).trace)


def _length_from_trace(t: int) -> float:
    t = abs(t)
    if t > 2 ** 50:
        return 2.0 * math.log(t)
    return 2.0 * math.acosh(t / 2)


def hyperbolic_length(x: PrimitiveClass) -> float:
    return _length_from_trace(slope_trace(x))


def multicurve_length(x: TorusMulticurve) -> float:
    return sum(float(w) * hyperbolic_length(cx) for cx, w in x)


def translation_length(m: IntMatrix2) -> float:
    if abs(m.trace) <= 2:
        return 0.0
    return _length_from_trace(m.trace)
