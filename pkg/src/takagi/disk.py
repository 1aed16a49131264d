"""Unimodular rational interpolation on the disk with indefinite Pick matrices.

Pipeline: a centered solve through a J-unitary colligation (strict at the
origin, weak elsewhere), one Moebius-shifted solve per node, then a real
combination of the shifted denominators into a solution that interpolates
strictly everywhere.  Zero/pole counts inside the disk are certified against
the inertia of the Pick matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .krein import ExtensionError, PartialJIsometry, SignatureMatrix, extend_j_isometry
from .linalg import Inertia
from .pick import DiskProblem, GramDecomposition, gram_decompose, pick_matrix
from .polynomials import (
    BlaschkeProduct,
    MoebiusMap,
    Poly,
    poly_gcd_numeric,
    poly_reflect,
    poly_roots,
)
from .realization import Realization, realization_to_rational

DISK_INTERIOR = 1.0 - 1e-9
WEAK_DENOM_TOL = 1e-8


class SolveError(RuntimeError):
    pass


class ReflectiveStructureError(SolveError):
    """Numerator is not a unimodular multiple of the denominator's reflection."""


class CombinationError(SolveError):
    def __init__(self, residuals):
        self.residuals = residuals
        super().__init__("could not find a real combination avoiding all nodes")


def reflective_constant(num: Poly, den: Poly, d: int) -> tuple[complex, float]:
    """Estimate c with num = c * reflect(den, d); return (c, relative defect)."""
    ref = poly_reflect(den, d)
    rc = np.zeros(d + 1, dtype=complex)
    rc[: ref.coeffs.size] = ref.coeffs
    nc = np.zeros(d + 1, dtype=complex)
    nc[: num.coeffs.size] = num.coeffs
    big = np.abs(rc) > 1e-6 * max(np.max(np.abs(rc)), 1e-300)
    if not np.any(big):
        return 1.0 + 0.0j, np.inf
    ratios = nc[big] / rc[big]
    c = complex(np.median(ratios.real) + 1j * np.median(ratios.imag))
    defect = float(np.max(np.abs(nc - c * rc))) / max(np.max(np.abs(nc)), 1e-300)
    return c, defect


def _rotate_reflective(den: Poly, c: complex) -> Poly:
    """Rotate den by gamma with conj(gamma)/gamma = c, absorbing the constant."""
    gamma = np.exp(-0.5j * np.angle(c))
    return gamma * den


def _ratio_agreement(num0: Poly, den0: Poly, num1: Poly, den1: Poly) -> float:
    """Max relative deviation of the two rational functions on two circles."""
    worst = 0.0
    for radius in (0.53, 0.91):
        z = radius * np.exp(2j * np.pi * (np.arange(24) + 0.37) / 24)
        d0 = den0(z)
        d1 = den1(z)
        ok = (np.abs(d0) > 1e-9 * max(den0.norm(), 1e-300)) & (
            np.abs(d1) > 1e-9 * max(den1.norm(), 1e-300)
        )
        if not np.any(ok):
            continue
        v0 = num0(z[ok]) / d0[ok]
        v1 = num1(z[ok]) / d1[ok]
        worst = max(worst, float(np.max(np.abs(v0 - v1) / (1.0 + np.abs(v0)))))
    return worst


def best_reflective_pair(num: Poly, den: Poly, defect_tol: float = 1e-8) -> tuple[Poly, Poly, int]:
    """Representation of num/den whose numerator is c * reflection of the denominator.

    Tries the pair as given first; if a common factor spoils the reflection
    structure, cancels near-common roots at increasing matching radii until the
    structure appears, verifying that the reduced ratio still agrees with the
    original away from poles.
    """
    d = max(num.degree, den.degree)
    c, defect = reflective_constant(num, den, d)
    if defect <= defect_tol and abs(abs(c) - 1.0) <= 1e-6:
        return num, _rotate_reflective(den, c), d
    for tol in (1e-10, 1e-8, 1e-6, 1e-4):
        try:
            n0, d0, _ = poly_gcd_numeric(num, den, tol)
        except ValueError:
            continue
        if n0.is_zero or d0.is_zero:
            continue
        dd = max(n0.degree, d0.degree)
        c0, defect0 = reflective_constant(n0, d0, dd)
        if defect0 <= 1e-6 and abs(abs(c0) - 1.0) <= 1e-6:
            if _ratio_agreement(num, den, n0, d0) <= 1e-6:
                return n0, _rotate_reflective(d0, c0), dd
    raise ReflectiveStructureError(
        f"no reflective representation found (raw defect {defect:.3e})"
    )


def _vacuous_node_factor(lam: complex) -> Poly:
    """(z - lam)(1 - conj(lam) z): self-reflective at degree 2, vanishing at lam."""
    return Poly(np.array([-lam, 1.0])) * Poly(np.array([1.0, -np.conj(lam)]))


def enforce_weak_interpolation(
    den: Poly, d: int, problem: DiskProblem, tol: float = 1e-7
) -> tuple[Poly, int, list[str]]:
    """Adjoin vacuous self-reflective factors at nodes where the weak identity fails.

    The pair is (reflect(den, d), den); a node where the numerator does not
    match w * denominator gets a factor vanishing there, which makes the weak
    condition hold trivially.  Returns the adjusted (den, d) and per-node
    status before adjustment.
    """
    statuses = []
    extra = []
    num = poly_reflect(den, d)
    scale = max(den.norm(), num.norm())
    for lam, w in zip(problem.nodes, problem.values):
        pv = den(lam)
        qv = num(lam)
        resid = abs(qv - w * pv)
        if abs(pv) > WEAK_DENOM_TOL * scale and resid <= tol * scale * (1.0 + abs(w)):
            statuses.append("strict")
        elif resid <= tol * scale * (1.0 + abs(w)):
            statuses.append("weak")
        else:
            statuses.append("forced-weak")
            extra.append(lam)
    for lam in extra:
        den = den * _vacuous_node_factor(lam)
        d += 2
    return den, d, statuses


@dataclass(frozen=True)
class CenteredSolution:
    """Weak solution phi = reflect(den, refl_degree)/den, strict at the origin."""

    den: Poly
    refl_degree: int
    realization: Realization
    node_status: list[str]
    inertia: Inertia

    def numerator(self) -> Poly:
        return poly_reflect(self.den, self.refl_degree)


def solve_centered(problem: DiskProblem, tol: float = 1e-9) -> CenteredSolution:
    """Step-1 solve for a problem whose first node is the origin."""
    if abs(problem.nodes[0]) > 1e-14:
        raise ValueError("solve_centered requires the first node at the origin")
    N = problem.size
    G = pick_matrix(problem)
    dec: GramDecomposition = gram_decompose(G, tol)
    pi, nu, zeta = dec.inertia.as_tuple()
    # State vectors stack (u_i + y_i) over (v_i + y_i); dimension N + zeta.
    X = np.vstack([dec.u.T, dec.y.T, dec.v.T, dec.y.T])
    kappa = X.shape[0]
    assert kappa == 2 * N - pi - nu
    J1 = SignatureMatrix.blocks((pi + zeta, 1), (nu + zeta, -1))
    J = SignatureMatrix(np.concatenate([[1.0], J1.signs]))
    domain = np.vstack([np.ones((1, N)), problem.nodes[None, :] * X])
    range_ = np.vstack([problem.values[None, :], X])
    V1 = extend_j_isometry(PartialJIsometry(J=J, domain=domain, range_=range_), tol=tol)
    real = Realization.from_colligation(V1, J1)
    num_raw, den_raw = realization_to_rational(real)
    num, den, d = best_reflective_pair(num_raw, den_raw)
    den, d, statuses = enforce_weak_interpolation(den, d, problem)
    if statuses[0] != "strict":
        raise SolveError("lost strict interpolation at the centered node")
    return CenteredSolution(
        den=den, refl_degree=d, realization=real, node_status=statuses, inertia=dec.inertia
    )


def _compose_with_swap(sol: CenteredSolution, m: MoebiusMap) -> tuple[Poly, int]:
    """Pull a centered solution back through the swap map, clearing denominators.

    Returns the denominator polynomial of phi(m(z)) at the same reflection
    degree, rotated so its reflection is again the numerator.
    """
    d = sol.refl_degree
    den = Poly()
    num_m = m.numerator()
    den_m = m.denominator()
    num_pow = Poly.one()
    den_pows = [Poly.one()]
    for _ in range(d):
        den_pows.append(den_pows[-1] * den_m)
    for k in range(sol.den.coeffs.size):
        den = den + sol.den.coeffs[k] * (num_pow * den_pows[d - k])
        num_pow = num_pow * num_m
    # Composition flips the reflection constant by (-1)**d.
    if d % 2 == 1:
        den = 1j * den
    return den, d


@dataclass(frozen=True)
class ShiftedFamily:
    """Per-node shifted denominators, padded to a common reflection degree."""

    dens: list[Poly]
    refl_degree: int
    inertia: Inertia
    realizations: list[Realization]


def _project_weak(den: Poly, d: int, problem: DiskProblem) -> Poly:
    """Minimum-norm coefficient correction making the weak identity exact.

    The constraints reflect(den, d)(lam_i) = w_i den(lam_i) are real-linear in
    the coefficients; the least-squares correction removes the residual left
    by the realization arithmetic.  The original polynomial is kept when the
    correction is large or does not help.
    """
    c = np.zeros(d + 1, dtype=complex)
    c[: den.coeffs.size] = den.coeffs
    lam = problem.nodes
    w = problem.values
    V = np.vander(lam, d + 1, increasing=True)
    A_c = -(w[:, None] * V)
    A_cbar = V[:, ::-1]
    r = A_c @ c + A_cbar @ np.conj(c)
    top = np.hstack([A_c + A_cbar, 1j * (A_c - A_cbar)])
    A_real = np.vstack([top.real, top.imag])
    rhs = np.concatenate([(-r).real, (-r).imag])
    try:
        x, *_ = np.linalg.lstsq(A_real, rhs, rcond=None)
    except np.linalg.LinAlgError:
        return den
    dc = x[: d + 1] + 1j * x[d + 1 :]
    if np.linalg.norm(dc) > 1e-3 * max(1.0, np.linalg.norm(c)):
        return den
    c2 = c + dc
    r2 = A_c @ c2 + A_cbar @ np.conj(c2)
    return Poly(c2) if np.linalg.norm(r2) < np.linalg.norm(r) else den


def solve_all_shifts(problem: DiskProblem, tol: float = 1e-9) -> ShiftedFamily:
    """One centered solve per node, pulled back and padded to equal degree.

    A shift whose centered solve breaks down numerically is dropped; the
    remaining weak solutions still cover every node generically.
    """
    N = problem.size
    dens: list[Poly] = []
    degrees: list[int] = []
    reals: list[Realization] = []
    inertia = None
    errors: list[str] = []
    for j in range(N):
        m = MoebiusMap(problem.nodes[j])
        order = [j] + [i for i in range(N) if i != j]
        shifted = DiskProblem(nodes=m(problem.nodes[order]), values=problem.values[order])
        try:
            sol = solve_centered(shifted, tol)
        except (SolveError, ExtensionError) as exc:
            errors.append(f"node {j}: {exc}")
            continue
        inertia = sol.inertia
        den_j, d_j = _compose_with_swap(sol, m)
        if abs(den_j(problem.nodes[j])) <= 1e-10 * max(den_j.norm(), 1e-300):
            errors.append(f"node {j}: shifted denominator vanishes at its own node")
            continue
        dens.append(den_j)
        degrees.append(d_j)
        reals.append(sol.realization)
    if not dens:
        raise SolveError("every shifted solve failed: " + "; ".join(errors))
    d = max(degrees)
    pad = Poly(np.array([1.0, 1.0]))  # (1 + z), self-reflective, zero-free on the disk
    for j in range(len(dens)):
        for _ in range(d - degrees[j]):
            dens[j] = dens[j] * pad
        dens[j] = _project_weak(dens[j], d, problem)
    return ShiftedFamily(dens=dens, refl_degree=d, inertia=inertia, realizations=reals)


@dataclass(frozen=True)
class RationalInterpolant:
    """Reduced unimodular rational function with per-node interpolation status."""

    numerator: Poly
    denominator: Poly
    node_status: list[str] = field(default_factory=list)
    zeros_in_disk: int = 0
    poles_in_disk: int = 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.numerator(z) / self.denominator(z)
        return out if np.ndim(out) else complex(out)


@dataclass(frozen=True)
class TakagiSolution:
    interpolant: RationalInterpolant
    f: BlaschkeProduct
    g: BlaschkeProduct
    constant: complex
    inertia: Inertia
    unreduced_den: Poly
    refl_degree: int
    certificates: dict = field(default_factory=dict)


def _reduce_reflective(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Cancel reflection-paired common factors of the combined pair."""
    for tol in (1e-9, 1e-7):
        n0, d0, common = poly_gcd_numeric(num, den, tol)
        if common.degree <= 0:
            return num, den
        if _ratio_agreement(num, den, n0, d0) <= 1e-7:
            return n0, d0
    return num, den


def _blaschke_from_roots(roots: np.ndarray) -> BlaschkeProduct:
    inside = [complex(r) for r in roots if abs(r) < DISK_INTERIOR]
    return BlaschkeProduct(zeros=tuple(inside))


def combine(
    family: ShiftedFamily,
    problem: DiskProblem,
    rng: np.random.Generator | None = None,
    retries: int = 64,
) -> TakagiSolution:
    """Real combination of shifted denominators into a strict interpolant."""
    if rng is None:
        rng = np.random.default_rng(0)
    M = len(family.dens)
    d = family.refl_degree
    scale = max(p.norm() for p in family.dens)
    best_q = None
    residual_table = []
    vals = np.array([[p(lam) for p in family.dens] for lam in problem.nodes])
    for trial in range(retries):
        t = np.ones(M) if (trial == 0 and M == 1) else rng.uniform(-1.0, 1.0, size=M)
        node_vals = vals @ t
        floor = 1e-8 * scale * float(np.linalg.norm(t))
        if np.min(np.abs(node_vals)) > floor:
            q = Poly(sum((t[j] * family.dens[j] for j in range(M)), start=Poly()).coeffs)
            best_q = q
            break
        residual_table.append(np.abs(node_vals).tolist())
    if best_q is None:
        raise CombinationError(residual_table)
    q = best_q
    num = poly_reflect(q, d)
    num_r, den_r = _reduce_reflective(num, q)
    c, defect = reflective_constant(num_r, den_r, max(num_r.degree, den_r.degree))
    if defect < 1e-6 and abs(abs(c) - 1.0) < 1e-6:
        den_r = _rotate_reflective(den_r, c)
        num_r = poly_reflect(den_r, max(num_r.degree, den_r.degree))
    statuses = []
    for lam, w in zip(problem.nodes, problem.values):
        pv = den_r(lam)
        if abs(pv) <= WEAK_DENOM_TOL * den_r.norm():
            statuses.append("weak")
        elif abs(num_r(lam) / pv - w) <= 1e-7 * (1.0 + abs(w)):
            statuses.append("strict")
        else:
            statuses.append("fail")
    if any(s != "strict" for s in statuses):
        raise SolveError(f"combination is not strict at all nodes: {statuses}")
    zeros = poly_roots(num_r) if num_r.degree > 0 else np.zeros(0, dtype=complex)
    poles = poly_roots(den_r) if den_r.degree > 0 else np.zeros(0, dtype=complex)
    f = _blaschke_from_roots(zeros)
    g = _blaschke_from_roots(poles)
    interp = RationalInterpolant(
        numerator=num_r,
        denominator=den_r,
        node_status=statuses,
        zeros_in_disk=f.degree,
        poles_in_disk=g.degree,
    )
    # Unimodular constant with phi = c f / g at a pole-free sample point.
    z0 = 0.237 + 0.111j
    fz, gz = f(z0), g(z0)
    c_phi = interp(z0) * gz / fz if abs(fz) > 1e-12 else 1.0 + 0.0j
    if abs(abs(c_phi) - 1.0) > 1e-6:
        c_phi = c_phi / abs(c_phi)
    return TakagiSolution(
        interpolant=interp,
        f=f,
        g=g,
        constant=complex(c_phi),
        inertia=family.inertia,
        unreduced_den=q,
        refl_degree=d,
        certificates={},
    )


def solve_positive(problem: DiskProblem, tol: float = 1e-9) -> TakagiSolution:
    """Classical positive-case solve: pole-free Blaschke of degree rank(Gamma).

    Builds the unitary colligation from the positive Gram factor alone, so the
    transfer function is inner of degree rank(Gamma) even when the matrix is
    singular.  Raises SolveError when the matrix has negative eigenvalues or
    the reduced function misses a node.
    """
    G = pick_matrix(problem)
    dec = gram_decompose(G, tol)
    pi, nu, zeta = dec.inertia.as_tuple()
    if nu:
        raise SolveError("positive-case solve needs a positive semi-definite matrix")
    X = dec.u.T  # pi x N
    J = SignatureMatrix(np.ones(pi + 1))
    domain = np.vstack([np.ones((1, problem.size)), problem.nodes[None, :] * X])
    range_ = np.vstack([problem.values[None, :], X])
    # With a singular matrix the domain columns are dependent; a maximal
    # independent subset determines the isometry and the rest follow from the
    # exact Gram identity.
    keep: list[int] = []
    basis = np.zeros((pi + 1, 0), dtype=complex)
    for j in range(domain.shape[1]):
        col = domain[:, j]
        resid = col - basis @ (basis.conj().T @ col)
        if np.linalg.norm(resid) > 1e-9 * max(1.0, np.linalg.norm(col)):
            keep.append(j)
            basis = np.hstack([basis, (resid / np.linalg.norm(resid))[:, None]])
    V1 = extend_j_isometry(
        PartialJIsometry(J=J, domain=domain[:, keep], range_=range_[:, keep]), tol=tol
    )
    real = Realization.from_colligation(V1, SignatureMatrix(np.ones(pi)))
    num, den = realization_to_rational(real)
    num_r, den_r, _ = poly_gcd_numeric(num, den, 1e-9)
    statuses = []
    for lam, w in zip(problem.nodes, problem.values):
        pv = den_r(lam)
        if abs(pv) <= WEAK_DENOM_TOL * den_r.norm():
            statuses.append("weak")
        elif abs(num_r(lam) / pv - w) <= 1e-7 * (1.0 + abs(w)):
            statuses.append("strict")
        else:
            statuses.append("fail")
    if any(s != "strict" for s in statuses):
        raise SolveError(f"positive-case solve is not strict at all nodes: {statuses}")
    zeros = poly_roots(num_r) if num_r.degree > 0 else np.zeros(0, dtype=complex)
    f = _blaschke_from_roots(zeros)
    if f.degree != pi or num_r.degree != pi:
        raise SolveError("positive-case solve did not reach an inner function of rank degree")
    g = BlaschkeProduct(zeros=())
    interp = RationalInterpolant(
        numerator=num_r,
        denominator=den_r,
        node_status=statuses,
        zeros_in_disk=f.degree,
        poles_in_disk=0,
    )
    z0 = 0.237 + 0.111j
    fz = f(z0)
    c_phi = interp(z0) / fz if abs(fz) > 1e-12 else 1.0 + 0.0j
    if abs(abs(c_phi) - 1.0) > 1e-6:
        c_phi = c_phi / abs(c_phi)
    return TakagiSolution(
        interpolant=interp,
        f=f,
        g=g,
        constant=complex(c_phi),
        inertia=dec.inertia,
        unreduced_den=den,
        refl_degree=max(num_r.degree, den_r.degree),
        certificates={},
    )


def solve(
    problem: DiskProblem,
    tol: float = 1e-9,
    seed: int = 0,
    certify: bool = True,
) -> TakagiSolution:
    """Full pipeline: shifted solves, real combination, certification.

    Positive semi-definite problems go through the classical pole-free solve
    first; anything else (or a breakdown there) uses the general machinery.
    """
    solution = None
    G = pick_matrix(problem)
    if float(np.min(np.linalg.eigvalsh(G))) > -1e-9 * max(1.0, float(np.linalg.norm(G))):
        try:
            solution = solve_positive(problem, tol)
        except (SolveError, ExtensionError):
            solution = None
    if solution is None:
        family = solve_all_shifts(problem, tol)
        solution = combine(family, problem, rng=np.random.default_rng(seed))
    if certify:
        from . import verify

        solution.certificates.update(verify.certify_disk(solution, problem))
    return solution
