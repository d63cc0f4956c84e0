"""Expansions for phases that are sums of signed monomials ``sum_j s_j x_j^p_j``."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .amplitude import AmplitudeND
from .errors import BadDimension, BadParams, DomainPowerMismatch, SignConstraintViolation
from .expansion import Expansion, Term
from .fresnel import coeff_full_line, fresnel_general
from .numerics import parse_sign, sign_str

DOMAINS = ("positive_orthant", "full_space")


@dataclass(frozen=True)
class PhaseND:
    powers: tuple
    signs: tuple
    domain: str = "positive_orthant"

    def __post_init__(self):
        powers = tuple(float(p) for p in self.powers)
        signs = tuple(parse_sign(s) for s in self.signs)
        if not powers:
            raise BadParams("a phase needs at least one variable")
        if len(signs) != len(powers):
            raise BadParams("one sign per power is required")
        if any(not p > 0 for p in powers):
            raise BadParams("powers must be > 0")
        if self.domain not in DOMAINS:
            raise BadParams(f"domain must be one of {DOMAINS}, got {self.domain!r}")
        if self.domain == "full_space" and any(p != int(p) for p in powers):
            raise DomainPowerMismatch("full-space phases need integer powers")
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "signs", signs)

    @property
    def n(self) -> int:
        return len(self.powers)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return sum(s * x[j] ** (int(p) if p == int(p) else p)
                   for j, (p, s) in enumerate(zip(self.powers, self.signs)))


@dataclass(frozen=True)
class IndexSet:
    threshold: float
    members: tuple

    def __contains__(self, alpha):
        return tuple(alpha) in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _rational(p: float):
    """Exact rational for floats that are short decimals, else None."""
    f = Fraction(p).limit_denominator(10 ** 6)
    return f if abs(float(f) - p) <= 1e-15 * max(1.0, abs(p)) else None


def _floor_part(p):
    return p - math.floor(p)


def orthant_threshold(powers, N: int):
    """``(N + 1 - max(p_j - floor(p_j))) / max p_j``, exact when the powers are rational."""
    rats = [_rational(p) for p in powers]
    if all(r is not None for r in rats):
        return (N + 1 - max(r - math.floor(r) for r in rats)) / max(rats)
    return (N + 1 - max(_floor_part(p) for p in powers)) / max(powers)


def _omega(powers, threshold, N):
    rats = [_rational(p) for p in powers]
    exact = all(r is not None for r in rats) and isinstance(threshold, Fraction)
    ps = rats if exact else [float(p) for p in powers]
    thr = threshold if exact else float(threshold)
    bounds = []
    for p in ps:
        # alpha_j + 1 < p_j * threshold
        b = math.ceil(p * thr) - 1
        bounds.append(max(b, 0))
    members = []
    for alpha in itertools.product(*(range(b + 1) for b in bounds)):
        total = sum((Fraction(a + 1) if exact else a + 1.0) / p for a, p in zip(alpha, ps))
        if total < thr:
            members.append(alpha)
    # ascending exponent, ties broken lexicographically
    members.sort(key=lambda a: (float(sum((x + 1) / float(p) for x, p in zip(a, ps))), a))
    return tuple(members)


def omega_set(p, N: int) -> IndexSet:
    """Multi-indices with ``sum_j (alpha_j + 1) / p_j`` strictly below the orthant threshold."""
    powers = [float(v) for v in p]
    if not powers or any(not v > 0 for v in powers):
        raise BadParams("powers must be > 0")
    if int(N) != N or N < 1:
        raise BadParams("N must be a positive integer")
    thr = orthant_threshold(powers, int(N))
    return IndexSet(float(thr), _omega(powers, thr, int(N)))


def full_space_threshold(powers, N: int) -> float:
    return (N + 1) / max(powers)


def expand_nd(phase: PhaseND, a: AmplitudeND, N: int) -> Expansion:
    """Product-coefficient expansion over the index set.

    Full-space expansions keep the orthant index set and use
    ``coeff_full_line`` per axis; their remainder is ``(N + 1) / max m_j``.
    """
    if a.dim != phase.n:
        raise BadParams(f"amplitude dimension {a.dim} does not match phase dimension {phase.n}")
    if a.support_radius is None:
        raise BadParams("amplitude must be compactly supported")
    if int(N) != N or N < 1:
        raise BadParams("N must be a positive integer")
    N = int(N)
    omega = omega_set(phase.powers, N)
    full = phase.domain == "full_space"
    terms = []
    for alpha in omega:
        coeff = complex(a.partial_at_zero(alpha)) / math.prod(math.factorial(k) for k in alpha)
        for k, p, s in zip(alpha, phase.powers, phase.signs):
            coeff *= coeff_full_line(int(p), k, s) if full else fresnel_general(p, k + 1, s)
        exponent = sum((k + 1) / p for k, p in zip(alpha, phase.powers))
        terms.append(Term(exponent, coeff, tuple(alpha)))
    rem = full_space_threshold(phase.powers, N) if full else omega.threshold
    return Expansion(tuple(terms), rem,
                     {"kind": "nd", "domain": phase.domain, "powers": list(phase.powers),
                      "signs": [sign_str(s) for s in phase.signs], "N": N,
                      "amplitude": a.name, "strict_order": False})


def preset_phase(kind: str, n: int, signs, k: int | None = None,
                 domain: str = "full_space") -> PhaseND:
    """Normal forms ``A(k)``, ``E6`` and ``E8`` with quadratic remaining variables.

    ``kind`` may be ``"A"`` with ``k`` given separately or a string such
    as ``"A(2)"`` / ``"A2"``.
    """
    text = str(kind).strip().upper().replace(" ", "")
    if text.startswith("A"):
        rest = text[1:].strip("()")
        if rest:
            k = int(rest)
        if k is None or k < 1:
            raise BadParams("A(k) needs k >= 1")
        head, minimum = [k + 1], 1
    elif text == "E6":
        head, minimum = [3, 4], 2
    elif text == "E8":
        head, minimum = [3, 5], 2
    else:
        raise BadParams(f"unknown normal form {kind!r}")
    if int(n) != n or n < minimum:
        raise BadDimension(f"{text} needs n >= {minimum}, got {n}")
    signs = [parse_sign(s) for s in signs]
    if len(signs) != n:
        raise BadParams(f"expected {n} signs, got {len(signs)}")
    if text == "E6" and signs[0] != 1:
        raise SignConstraintViolation("E6 requires a + sign on x1^3")
    if text == "E8" and (signs[0] != 1 or signs[1] != 1):
        raise SignConstraintViolation("E8 requires + signs on x1^3 and x2^5")
    powers = head + [2] * (n - len(head))
    return PhaseND(tuple(powers), tuple(signs), domain)
