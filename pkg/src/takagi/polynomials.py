"""One-variable complex polynomials, Moebius maps and Blaschke products.

Coefficients are stored in ascending degree order.  The zero polynomial has
degree -1.  Root finding goes through the companion matrix (numpy.roots);
the numeric GCD pairs roots of the two polynomials rather than running a
Euclidean remainder sequence, which is unstable in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TRIM_RTOL = 1e-10


def _trim(coeffs: np.ndarray, rtol: float = TRIM_RTOL) -> np.ndarray:
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if coeffs.size == 0:
        return np.zeros(0, dtype=complex)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        return np.zeros(0, dtype=complex)
    keep = np.nonzero(np.abs(coeffs) > rtol * scale)[0]
    if keep.size == 0:
        return np.zeros(0, dtype=complex)
    return coeffs[: keep[-1] + 1].copy()


@dataclass(frozen=True)
class Poly:
    """Complex polynomial; ``coeffs[k]`` multiplies z**k."""

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))
        self.coeffs.setflags(write=False)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def __call__(self, z):
        if self.coeffs.size == 0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        z = np.asarray(z, dtype=complex)
        out = np.full_like(z, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            out = out * z + c
        return out if out.ndim else complex(out)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, dtype=complex)
        a[: self.coeffs.size] += self.coeffs
        a[: other.coeffs.size] += other.coeffs
        return Poly(a)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (other * (-1.0))

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly()
            return Poly(np.convolve(self.coeffs, other.coeffs))
        return Poly(self.coeffs * complex(other))

    __rmul__ = __mul__

    @staticmethod
    def one() -> "Poly":
        return Poly(np.array([1.0 + 0.0j]))

    @staticmethod
    def from_roots(roots, lead: complex = 1.0) -> "Poly":
        p = Poly(np.array([complex(lead)]))
        for r in roots:
            p = p * Poly(np.array([-complex(r), 1.0]))
        return p


def poly_roots(p: Poly) -> np.ndarray:
    """Roots (with multiplicity) via the companion matrix."""
    if p.is_zero:
        raise ValueError("the zero polynomial has no well-defined roots")
    if p.degree == 0:
        return np.zeros(0, dtype=complex)
    return np.roots(p.coeffs[::-1])


def poly_reflect(p: Poly, d: int) -> Poly:
    """Reflection at declared degree d: coefficient k becomes conj(coeff[d-k]).

    Equals ``z**d * conj(p(1/conj(z)))``; on the unit circle the reflection has
    the same modulus as p.
    """
    if d < p.degree:
        raise ValueError(f"declared degree {d} below actual degree {p.degree}")
    padded = np.zeros(d + 1, dtype=complex)
    padded[: p.coeffs.size] = p.coeffs
    return Poly(np.conj(padded[::-1]))


def poly_gcd_numeric(p: Poly, q: Poly, tol: float = 1e-8) -> tuple[Poly, Poly, Poly]:
    """Cancel near-common roots of p and q.

    Roots of p and q within ``tol`` of each other are paired greedily and
    divided out.  Returns (reduced p, reduced q, common factor); the common
    factor is monic with roots taken from p's side of each pair.
    """
    if p.is_zero or q.is_zero:
        raise ValueError("numeric GCD requires nonzero polynomials")
    rp = list(poly_roots(p))
    rq = list(poly_roots(q))
    common = []
    kept_p = []
    for r in rp:
        if rq:
            dist = [abs(r - s) for s in rq]
            k = int(np.argmin(dist))
            if dist[k] <= tol:
                common.append(0.5 * (r + rq[k]))
                del rq[k]
                continue
        kept_p.append(r)
    lead_p = p.coeffs[-1]
    lead_q = q.coeffs[-1]
    return (
        Poly.from_roots(kept_p, lead_p),
        Poly.from_roots(rq, lead_q),
        Poly.from_roots(common),
    )


@dataclass(frozen=True)
class MoebiusMap:
    """Self-inverse disk automorphism m(z) = (a - z)/(1 - conj(a) z), |a| < 1.

    Swaps 0 and a.
    """

    a: complex

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise ValueError(f"Moebius parameter must satisfy |a|<1, got |a|={abs(self.a)}")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = (self.a - z) / (1.0 - np.conj(self.a) * z)
        return out if out.ndim else complex(out)

    def numerator(self) -> Poly:
        return Poly(np.array([self.a, -1.0]))

    def denominator(self) -> Poly:
        return Poly(np.array([1.0, -np.conj(self.a)]))


def moebius_swap(a: complex) -> MoebiusMap:
    return MoebiusMap(complex(a))


def moebius_compose_poly(m: MoebiusMap, p: Poly, d: int | None = None) -> tuple[Poly, Poly]:
    """Numerator/denominator of p(m(z)) cleared of denominators at degree d.

    Returns (num, den) with ``num = (1 - conj(a) z)**d * p(m(z))`` and
    ``den = (1 - conj(a) z)**d``; d defaults to deg p and must be >= deg p.
    """
    if d is None:
        d = max(p.degree, 0)
    if d < p.degree:
        raise ValueError("clearing degree below deg p")
    num_m = m.numerator()
    den_m = m.denominator()
    num = Poly()
    # p(m) * den_m**d = sum_k p_k * num_m**k * den_m**(d-k)
    num_pow = Poly.one()
    den_pows = [Poly.one()]
    for _ in range(d):
        den_pows.append(den_pows[-1] * den_m)
    for k in range(p.coeffs.size):
        num = num + p.coeffs[k] * (num_pow * den_pows[d - k])
        num_pow = num_pow * num_m
    return num, den_pows[d]


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product with a unimodular front constant.

    Value is ``c * prod (z_k - z) / (1 - conj(z_k) z)`` over the stored zeros.
    """

    zeros: tuple[complex, ...] = ()
    constant: complex = 1.0 + 0.0j

    def __post_init__(self):
        for z in self.zeros:
            if abs(z) >= 1.0:
                raise ValueError("Blaschke zeros must lie strictly inside the disk")
        if abs(abs(self.constant) - 1.0) > 1e-10:
            raise ValueError("front constant must be unimodular")

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full_like(z, self.constant)
        for a in self.zeros:
            out = out * (a - z) / (1.0 - np.conj(a) * z)
        return out if out.ndim else complex(out)

    def as_rational(self) -> tuple[Poly, Poly]:
        num = Poly(np.array([self.constant]))
        den = Poly.one()
        for a in self.zeros:
            num = num * Poly(np.array([a, -1.0]))
            den = den * Poly(np.array([1.0, -np.conj(a)]))
        return num, den
