"""Unimodular rational interpolation on the bidisk.

Input data come with a two-term decomposition of the interpolation identity:
Hermitian matrices (Gamma1, Gamma2) satisfying

    1 - w_i conj(w_j) = sum_r (1 - lam_i^r conj(lam_j^r)) Gamma^r_ij.

From a Gram split of each term the construction assembles a J-unitary
colligation whose transfer function in two variables,
phi(lam) = A + B E_lam (I - D E_lam)^{-1} C with E_lam block-scalar,
is unimodular on the torus off a finite set and interpolates the data.
Per-node Moebius re-centering in both coordinates plus a real combination
upgrades weak interpolation to strict, as in the one-variable pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .krein import PartialJIsometry, SignatureMatrix, extend_j_isometry, j_unitarity_defect
from .linalg import Inertia, check_hermitian, hermitian_inertia, hermitize, rank_with_tol
from .pick import DiskProblem, pick_matrix
from .polynomials import MoebiusMap, Poly, moebius_compose_poly, poly_gcd_numeric, poly_roots

PAIR_RESIDUAL_TOL = 1e-9


class BidiskError(RuntimeError):
    pass


class PairValidationError(BidiskError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"decomposition identity residual {residual:.3e} beyond tolerance")


class RegularizationError(BidiskError):
    pass


class BirationalExtractionError(BidiskError):
    pass


class RestrictionBreakdown(BidiskError):
    """Restricted denominator identically zero (theoretically excluded)."""


# ---------------------------------------------------------------------------
# Two-variable polynomials


def _trim2(coeffs: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    if coeffs.size == 0:
        return np.zeros((0, 0), dtype=complex)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        return np.zeros((0, 0), dtype=complex)
    keep = np.abs(coeffs) > rtol * scale
    rows = np.nonzero(keep.any(axis=1))[0]
    cols = np.nonzero(keep.any(axis=0))[0]
    if rows.size == 0:
        return np.zeros((0, 0), dtype=complex)
    return coeffs[: rows[-1] + 1, : cols[-1] + 1].copy()


@dataclass(frozen=True)
class Poly2:
    """Two-variable complex polynomial; ``coeffs[k1, k2]`` multiplies z1**k1 z2**k2."""

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), dtype=complex))

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim2(self.coeffs))
        self.coeffs.setflags(write=False)

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def __call__(self, z1, z2):
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        if self.coeffs.size == 0:
            out = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
            return out if out.ndim else complex(out)
        d1, d2 = self.coeffs.shape
        out = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for k1 in range(d1 - 1, -1, -1):
            row = np.full(np.shape(z2) or (), self.coeffs[k1, d2 - 1], dtype=complex)
            for c in self.coeffs[k1, : d2 - 1][::-1]:
                row = row * z2 + c
            out = out * z1 + row
        return out if out.ndim else complex(out)

    def __add__(self, other: "Poly2") -> "Poly2":
        r = max(self.coeffs.shape[0], other.coeffs.shape[0])
        c = max(self.coeffs.shape[1], other.coeffs.shape[1])
        a = np.zeros((r, c), dtype=complex)
        a[: self.coeffs.shape[0], : self.coeffs.shape[1]] += self.coeffs
        a[: other.coeffs.shape[0], : other.coeffs.shape[1]] += other.coeffs
        return Poly2(a)

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + (other * (-1.0))

    def __mul__(self, other):
        if isinstance(other, Poly2):
            if self.is_zero or other.is_zero:
                return Poly2()
            r1, c1 = self.coeffs.shape
            r2, c2 = other.coeffs.shape
            out = np.zeros((r1 + r2 - 1, c1 + c2 - 1), dtype=complex)
            for i in range(r1):
                for j in range(c1):
                    out[i : i + r2, j : j + c2] += self.coeffs[i, j] * other.coeffs
            return Poly2(out)
        return Poly2(self.coeffs * complex(other))

    __rmul__ = __mul__

    @staticmethod
    def one() -> "Poly2":
        return Poly2(np.ones((1, 1), dtype=complex))

    @staticmethod
    def from_one_variable(p: Poly, variable: int) -> "Poly2":
        if p.is_zero:
            return Poly2()
        c = p.coeffs.reshape(-1, 1) if variable == 0 else p.coeffs.reshape(1, -1)
        return Poly2(c)

    def coeff_slices(self, axis: int) -> list[Poly]:
        """One-variable slice polynomials along the given axis."""
        if self.is_zero:
            return []
        if axis == 0:
            return [Poly(self.coeffs[k, :]) for k in range(self.coeffs.shape[0])]
        return [Poly(self.coeffs[:, k]) for k in range(self.coeffs.shape[1])]


def poly2_reflect(p: Poly2, d: tuple[int, int]) -> Poly2:
    """Reflection at declared bidegree: coeff (k1,k2) -> conj(coeff (d1-k1, d2-k2)).

    Equals ``z1**d1 z2**d2 * conj(p(1/conj(z1), 1/conj(z2)))``; on the torus the
    reflection has the same modulus as p.
    """
    d1, d2 = d
    a1, a2 = p.bidegree
    if d1 < a1 or d2 < a2:
        raise ValueError(f"declared bidegree {d} below actual {p.bidegree}")
    padded = np.zeros((d1 + 1, d2 + 1), dtype=complex)
    if not p.is_zero:
        padded[: a1 + 1, : a2 + 1] = p.coeffs
    return Poly2(np.conj(padded[::-1, ::-1]))


# ---------------------------------------------------------------------------
# Problems and decomposition pairs


@dataclass(frozen=True)
class BidiskProblem:
    """Interpolation data on the bidisk: distinct node pairs, arbitrary values."""

    nodes: np.ndarray  # N x 2 complex
    values: np.ndarray  # N complex

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex)
        if nodes.ndim == 1:
            nodes = nodes.reshape(1, -1)
        values = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise ValueError("nodes must be an N x 2 array of bidisk points")
        if nodes.shape[0] == 0:
            raise ValueError("need at least one node")
        if nodes.shape[0] != values.size:
            raise ValueError("nodes and values must have equal length")
        if np.any(np.abs(nodes) >= 1.0):
            raise ValueError("both coordinates of every node must lie strictly inside the disk")
        for i in range(nodes.shape[0]):
            for j in range(i + 1, nodes.shape[0]):
                if np.max(np.abs(nodes[i] - nodes[j])) <= 1e-9:
                    raise ValueError(f"nodes {i} and {j} coincide")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.nodes.shape[0]


@dataclass(frozen=True)
class AglerPair:
    """Hermitian pair splitting 1 - w_i conj(w_j) across the two coordinates.

    Optional positive semi-definite regularizers Y1, Y2 widen the Gram vectors
    when the rank conditions fail for the bare pair.
    """

    gamma1: np.ndarray
    gamma2: np.ndarray
    y1: np.ndarray | None = None
    y2: np.ndarray | None = None

    def __post_init__(self):
        g1 = np.asarray(self.gamma1, dtype=complex)
        g2 = np.asarray(self.gamma2, dtype=complex)
        check_hermitian(g1)
        check_hermitian(g2)
        if g1.shape != g2.shape:
            raise ValueError("the two matrices must have equal shape")
        object.__setattr__(self, "gamma1", hermitize(g1))
        object.__setattr__(self, "gamma2", hermitize(g2))
        for name in ("y1", "y2"):
            y = getattr(self, name)
            if y is not None:
                y = np.asarray(y, dtype=complex)
                check_hermitian(y)
                object.__setattr__(self, name, hermitize(y))

    @property
    def size(self) -> int:
        return self.gamma1.shape[0]

    def gammas(self) -> tuple[np.ndarray, np.ndarray]:
        return self.gamma1, self.gamma2

    def regularizers(self) -> tuple[np.ndarray | None, np.ndarray | None]:
        return self.y1, self.y2


def one_variable_pair(problem: BidiskProblem, variable: int = 0) -> AglerPair:
    """Embedding of the one-variable identity: all weight on one coordinate."""
    disk = DiskProblem(nodes=problem.nodes[:, variable], values=problem.values)
    G = pick_matrix(disk)
    Z = np.zeros_like(G)
    return AglerPair(gamma1=G, gamma2=Z) if variable == 0 else AglerPair(gamma1=Z, gamma2=G)


def pair_residual(problem: BidiskProblem, pair: AglerPair) -> float:
    """Frobenius residual of the two-term decomposition identity."""
    lam = problem.nodes
    w = problem.values
    lhs = 1.0 - np.outer(w, w.conj())
    rhs = np.zeros_like(lhs)
    for r, G in enumerate(pair.gammas()):
        rhs = rhs + (1.0 - np.outer(lam[:, r], lam[:, r].conj())) * G
    return float(np.linalg.norm(lhs - rhs))


def _psd_factor(Y: np.ndarray | None, tol: float = 1e-10) -> np.ndarray:
    """Tall factor L with Y = L L*; columns = rank of the positive part."""
    if Y is None or Y.size == 0:
        n = 0 if Y is None else Y.shape[0]
        return np.zeros((n, 0), dtype=complex)
    evals, evecs = np.linalg.eigh(hermitize(Y))
    cutoff = tol * max(1.0, float(np.max(np.abs(evals))) if evals.size else 0.0)
    if np.any(evals < -cutoff):
        raise ValueError("regularizer is not positive semi-definite")
    keep = evals > cutoff
    return evecs[:, keep] * np.sqrt(evals[keep])


@dataclass(frozen=True)
class PairGram:
    """Per-term Gram vectors, regularizer columns absorbed into both sides."""

    u: tuple[np.ndarray, np.ndarray]  # N x (pi^r + delta^r)
    v: tuple[np.ndarray, np.ndarray]  # N x (nu^r + delta^r)
    inertias: tuple[Inertia, Inertia]
    deltas: tuple[int, int]

    @property
    def kappas(self) -> tuple[int, int]:
        return (self.u[0].shape[1] + self.v[0].shape[1], self.u[1].shape[1] + self.v[1].shape[1])


def pair_gram(pair: AglerPair, tol: float = 1e-9) -> PairGram:
    """Eigen-based split of each term, widened by the regularizer factors.

    Appending the same columns to the positive and negative sides leaves the
    difference of Grams (hence the decomposition identity) unchanged while
    raising the rank of the sum of Grams.
    """
    us, vs, inertias, deltas = [], [], [], []
    for G, Y in zip(pair.gammas(), pair.regularizers()):
        inertia, evals, evecs = hermitian_inertia(G, tol)
        cutoff = tol * max(1.0, float(np.max(np.abs(evals))) if evals.size else 0.0)
        pos = evals > cutoff
        neg = evals < -cutoff
        u = evecs[:, pos] * np.sqrt(evals[pos])
        v = evecs[:, neg] * np.sqrt(-evals[neg])
        L = _psd_factor(Y)
        if L.shape[0] not in (0, G.shape[0]):
            raise ValueError("regularizer dimension mismatch")
        if L.shape[0] == 0:
            L = np.zeros((G.shape[0], 0), dtype=complex)
        us.append(np.hstack([u, L]))
        vs.append(np.hstack([v, L]))
        inertias.append(inertia)
        deltas.append(L.shape[1])
    return PairGram(u=(us[0], us[1]), v=(vs[0], vs[1]), inertias=(inertias[0], inertias[1]),
                    deltas=(deltas[0], deltas[1]))


def _rank_conditions(problem: BidiskProblem, gram: PairGram, tol: float = 1e-8) -> tuple[bool, bool]:
    """Rank-N tests for the value-side and node-side Gram matrices.

    With Delta^r the sum of Grams of the widened vectors, condition (a) asks
    for full rank of W + Delta^1 + Delta^2 (range vectors independent) and (b)
    for full rank of the all-ones matrix plus the node-scaled Deltas (domain
    vectors independent).
    """
    N = problem.size
    lam = problem.nodes
    W = np.outer(problem.values, problem.values.conj())
    ones = np.ones((N, N), dtype=complex)
    a_mat = W.copy()
    b_mat = ones.copy()
    for r in range(2):
        delta = gram.u[r] @ gram.u[r].conj().T + gram.v[r] @ gram.v[r].conj().T
        a_mat = a_mat + delta
        b_mat = b_mat + np.outer(lam[:, r], lam[:, r].conj()) * delta
    ra = rank_with_tol(hermitize(a_mat), tol)
    rb = rank_with_tol(hermitize(b_mat), tol)
    return ra == N, rb == N


@dataclass(frozen=True)
class PairValidation:
    residual: float
    inertias: tuple[Inertia, Inertia]
    deltas: tuple[int, int]
    case: int  # 1 when the bare rank conditions hold, else 2


def validate_pair(problem: BidiskProblem, pair: AglerPair, tol: float = PAIR_RESIDUAL_TOL) -> PairValidation:
    """Check the decomposition identity and classify the rank geometry."""
    if pair.size != problem.size:
        raise ValueError("pair dimension does not match the problem size")
    residual = pair_residual(problem, pair)
    if residual > tol * max(1.0, float(np.max(np.abs(problem.values))) ** 2):
        raise PairValidationError(residual)
    gram = pair_gram(pair)
    ok_a, ok_b = _rank_conditions(problem, gram)
    case = 1 if (ok_a and ok_b and gram.deltas == (0, 0)) else 2
    return PairValidation(residual=residual, inertias=gram.inertias, deltas=gram.deltas, case=case)


def regularize_pair(
    problem: BidiskProblem, pair: AglerPair, seed: int = 7, tol: float = 1e-8
) -> AglerPair:
    """Populate positive semi-definite regularizers until the rank conditions hold.

    Searches rank budgets in increasing total order; each candidate is a seeded
    random Gram factor scaled well below the decomposition matrices so the
    identity (which the regularizers never enter) keeps its meaning.
    """
    gram = pair_gram(pair)
    if all(_rank_conditions(problem, gram, tol)):
        return pair
    N = problem.size
    rho = 1e-2 * max(1.0, float(np.linalg.norm(pair.gamma1) + np.linalg.norm(pair.gamma2)))
    rng = np.random.default_rng(seed)
    budgets = sorted(
        ((d1, d2) for d1 in range(N + 1) for d2 in range(N + 1)),
        key=lambda p: (p[0] + p[1], p),
    )
    for d1, d2 in budgets:
        if d1 == 0 and d2 == 0:
            continue
        for _ in range(4):
            ys = []
            for d in (d1, d2):
                if d == 0:
                    ys.append(None)
                else:
                    G = rng.normal(size=(N, d)) + 1j * rng.normal(size=(N, d))
                    ys.append(rho * (G @ G.conj().T))
            candidate = AglerPair(gamma1=pair.gamma1, gamma2=pair.gamma2, y1=ys[0], y2=ys[1])
            if all(_rank_conditions(problem, pair_gram(candidate), tol)):
                return candidate
    raise RegularizationError("no regularizer up to full rank restored the rank conditions")


# ---------------------------------------------------------------------------
# Realization


@dataclass(frozen=True)
class BidiskRealization:
    """J-unitary colligation with the block-scalar evaluation structure.

    The state space splits as C^{kappa1} (+) C^{kappa2}; E_lam scales the
    blocks by the two coordinates and phi(lam) = A + B E_lam (I - D E_lam)^{-1} C.
    """

    A: complex
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    J1: SignatureMatrix
    kappa1: int
    kappa2: int

    def __post_init__(self):
        object.__setattr__(self, "B", np.asarray(self.B, dtype=complex).reshape(-1))
        object.__setattr__(self, "C", np.asarray(self.C, dtype=complex).reshape(-1))
        object.__setattr__(self, "D", np.asarray(self.D, dtype=complex))
        if self.kappa1 + self.kappa2 != self.B.size:
            raise ValueError("block sizes do not sum to the state dimension")

    @property
    def kappa(self) -> int:
        return self.kappa1 + self.kappa2

    def e_matrix(self, lam) -> np.ndarray:
        lam1, lam2 = complex(lam[0]), complex(lam[1])
        return np.diag(
            np.concatenate([np.full(self.kappa1, lam1), np.full(self.kappa2, lam2)])
        ).astype(complex)

    def colligation(self) -> np.ndarray:
        V = np.zeros((self.kappa + 1, self.kappa + 1), dtype=complex)
        V[0, 0] = self.A
        V[0, 1:] = self.B
        V[1:, 0] = self.C
        V[1:, 1:] = self.D
        return V

    def full_signature(self) -> SignatureMatrix:
        return SignatureMatrix(np.concatenate([[1.0], self.J1.signs]))

    def defect(self) -> float:
        return j_unitarity_defect(self.full_signature(), self.colligation())


def build_bidisk_realization(
    problem: BidiskProblem, pair: AglerPair, tol: float = 1e-9
) -> tuple[BidiskRealization, PairGram]:
    """Extend the prescribed action (1, E_lam x_i) -> (w_i, x_i) to a colligation."""
    validate_pair(problem, pair)
    gram = pair_gram(pair, tol)
    ok_a, ok_b = _rank_conditions(problem, gram)
    if not (ok_a and ok_b):
        raise BidiskError("rank conditions fail; regularize the pair first")
    N = problem.size
    blocks = []
    signs = []
    for r in range(2):
        blocks.append(gram.u[r].T)
        blocks.append(gram.v[r].T)
        signs.append((gram.u[r].shape[1], 1))
        signs.append((gram.v[r].shape[1], -1))
    X = np.vstack(blocks) if blocks else np.zeros((0, N), dtype=complex)
    kappa1 = gram.u[0].shape[1] + gram.v[0].shape[1]
    kappa2 = gram.u[1].shape[1] + gram.v[1].shape[1]
    J1 = SignatureMatrix.blocks(*signs)
    J = SignatureMatrix(np.concatenate([[1.0], J1.signs]))
    EX = np.empty_like(X)
    EX[:kappa1, :] = problem.nodes[:, 0][None, :] * X[:kappa1, :]
    EX[kappa1:, :] = problem.nodes[:, 1][None, :] * X[kappa1:, :]
    domain = np.vstack([np.ones((1, N)), EX])
    range_ = np.vstack([problem.values[None, :], X])
    V1 = extend_j_isometry(PartialJIsometry(J=J, domain=domain, range_=range_), tol=tol)
    real = BidiskRealization(
        A=complex(V1[0, 0]), B=V1[0, 1:], C=V1[1:, 0], D=V1[1:, 1:],
        J1=J1, kappa1=kappa1, kappa2=kappa2,
    )
    return real, gram


class BidiskResolventSingularity(ArithmeticError):
    def __init__(self, lam):
        self.lam = lam
        super().__init__(f"I - D E_lam is singular at lam = {lam}")


def _resolvent_state(r: BidiskRealization, lam, rtol: float = 1e-12) -> np.ndarray:
    """(I - D E_lam)^{-1} C."""
    if r.kappa == 0:
        return np.zeros(0, dtype=complex)
    M = np.eye(r.kappa, dtype=complex) - r.D @ r.e_matrix(lam)
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] <= rtol * max(s[0], 1.0):
        raise BidiskResolventSingularity(tuple(map(complex, lam)))
    return np.linalg.solve(M, r.C)


def eval_bidisk(r: BidiskRealization, lam) -> complex:
    """phi(lam) = A + B E_lam (I - D E_lam)^{-1} C via a linear solve."""
    if r.kappa == 0:
        return complex(r.A)
    x = _resolvent_state(r, lam)
    return complex(r.A + r.e_matrix(lam).diagonal() * r.B @ x)


def gamma_forms(r: BidiskRealization, lam, mu) -> tuple[complex, complex]:
    """Block-projected forms splitting 1 - phi(lam) conj(phi(mu)) across coordinates.

    Returns (G1, G2) with
    1 - phi(lam) conj(phi(mu)) = sum_r (1 - lam^r conj(mu^r)) G^r.
    """
    xl = _resolvent_state(r, lam)
    xm = _resolvent_state(r, mu)
    s = r.J1.signs
    g1 = complex(xm[: r.kappa1].conj() @ (s[: r.kappa1] * xl[: r.kappa1]))
    g2 = complex(xm[r.kappa1 :].conj() @ (s[r.kappa1 :] * xl[r.kappa1 :]))
    return g1, g2


# ---------------------------------------------------------------------------
# Polynomial extraction


@dataclass(frozen=True)
class BiRational:
    """phi = numerator / denominator with denominator = det(I - D E_lam)."""

    numerator: Poly2
    denominator: Poly2

    def __call__(self, z1, z2):
        out = self.numerator(z1, z2) / self.denominator(z1, z2)
        return out if np.ndim(out) else complex(out)


def _bidisk_radii(r: BidiskRealization) -> tuple[float, float]:
    """Grid radii keeping the sampled determinant away from zero."""
    candidates = [1.0, 0.9, 1.1, 0.8, 1.25, 0.7, 1.45, 0.55]
    M1, M2 = r.kappa1 + 1, r.kappa2 + 1
    best = (candidates[0], candidates[0])
    best_gap = -np.inf
    for rad1 in candidates:
        for rad2 in candidates:
            z1 = rad1 * np.exp(2j * np.pi * np.arange(M1) / M1)
            z2 = rad2 * np.exp(2j * np.pi * np.arange(M2) / M2)
            vals = np.empty((M1, M2))
            for a, za in enumerate(z1):
                for b, zb in enumerate(z2):
                    M = np.eye(r.kappa, dtype=complex) - r.D @ r.e_matrix((za, zb))
                    vals[a, b] = abs(np.linalg.det(M))
            gap = float(np.min(vals) / max(np.max(vals), 1e-300))
            if gap > 1e-6:
                return rad1, rad2
            if gap > best_gap:
                best_gap = gap
                best = (rad1, rad2)
    return best


def to_birational(r: BidiskRealization) -> BiRational:
    """Exact numerator/denominator from grid samples and a two-axis inverse DFT."""
    if r.kappa == 0:
        return BiRational(numerator=Poly2(np.array([[r.A]])), denominator=Poly2.one())
    M1, M2 = r.kappa1 + 1, r.kappa2 + 1
    rad1, rad2 = _bidisk_radii(r)
    z1 = rad1 * np.exp(2j * np.pi * np.arange(M1) / M1)
    z2 = rad2 * np.exp(2j * np.pi * np.arange(M2) / M2)
    den_vals = np.empty((M1, M2), dtype=complex)
    num_vals = np.empty((M1, M2), dtype=complex)
    for a, za in enumerate(z1):
        for b, zb in enumerate(z2):
            E = r.e_matrix((za, zb))
            M = np.eye(r.kappa, dtype=complex) - r.D @ E
            den_vals[a, b] = np.linalg.det(M)
            num_vals[a, b] = den_vals[a, b] * (r.A + E.diagonal() * r.B @ np.linalg.solve(M, r.C))
    # Forward DFT recovers ascending coefficients from samples at +2 pi i m / M.
    scale = np.outer(rad1 ** np.arange(M1), rad2 ** np.arange(M2))
    den = Poly2(np.fft.fft2(den_vals) / (M1 * M2) / scale)
    num = Poly2(np.fft.fft2(num_vals) / (M1 * M2) / scale)
    br = BiRational(numerator=num, denominator=den)
    worst = 0.0
    rng = np.random.default_rng(20240)
    checked = 0
    attempts = 0
    while checked < 24 and attempts < 200:
        attempts += 1
        za = rng.uniform(0.2, 1.2) * np.exp(2j * np.pi * rng.uniform())
        zb = rng.uniform(0.2, 1.2) * np.exp(2j * np.pi * rng.uniform())
        try:
            direct = eval_bidisk(r, (za, zb))
        except BidiskResolventSingularity:
            continue
        dv = den(za, zb)
        if abs(dv) < 1e-10 * max(den.norm(), 1.0):
            continue
        worst = max(worst, abs(num(za, zb) / dv - direct) / (1.0 + abs(direct)))
        checked += 1
    if worst > 1e-7:
        raise BirationalExtractionError(
            f"polynomial extraction disagrees with the realization ({worst:.3e})"
        )
    return br


# ---------------------------------------------------------------------------
# Toral and balanced-disk certificates


@dataclass(frozen=True)
class ToralReport:
    grid: int
    q_near_zero_cells: int
    common_near_zero_cells: int
    violations: int
    singular_cells: list[tuple[int, int]]

    @property
    def passed(self) -> bool:
        return self.violations == 0


def toral_check(br: BiRational, grid: int = 256) -> ToralReport:
    """Scan the torus: wherever the denominator nearly vanishes, so must the numerator."""
    theta = 2.0 * np.pi * (np.arange(grid) + 0.5) / grid
    z = np.exp(1j * theta)
    Z1, Z2 = np.meshgrid(z, z, indexing="ij")
    qv = np.abs(br.denominator(Z1, Z2))
    pv = np.abs(br.numerator(Z1, Z2))
    qs = max(float(qv.max()), 1e-300)
    ps = max(float(pv.max()), 1e-300)
    q_small = qv < 1e-6 * qs
    p_small = pv < 1e-6 * ps
    p_large = pv > 1e-3 * ps
    common = q_small & p_small
    violations = int(np.sum(q_small & p_large))
    cells = [tuple(map(int, idx)) for idx in np.argwhere(common)[:64]]
    return ToralReport(
        grid=grid,
        q_near_zero_cells=int(np.sum(q_small)),
        common_near_zero_cells=int(np.sum(common)),
        violations=violations,
        singular_cells=cells,
    )


def restrict_balanced(br: BiRational, m: MoebiusMap) -> tuple[Poly, Poly]:
    """One-variable numerator/denominator of z -> phi(z, m(z)), reduced.

    Clears the Moebius denominator at the common second-variable degree, which
    cancels in the ratio, then divides out near-common roots.
    """
    d2 = max(br.numerator.bidegree[1], br.denominator.bidegree[1], 0)

    def compose(p: Poly2) -> Poly:
        if p.is_zero:
            return Poly()
        out = Poly()
        z_pow = Poly.one()
        zvar = Poly(np.array([0.0, 1.0]))
        for row in p.coeff_slices(0):
            if not row.is_zero:
                comp, _ = moebius_compose_poly(m, row, d2)
                out = out + z_pow * comp
            z_pow = z_pow * zvar
        return out

    num = compose(br.numerator)
    den = compose(br.denominator)
    if den.is_zero or den.norm() <= 1e-12 * max(br.denominator.norm(), 1.0):
        raise RestrictionBreakdown("restricted denominator is numerically zero")
    if num.is_zero:
        return num, den
    for tol in (1e-9, 1e-7):
        n0, d0, common = poly_gcd_numeric(num, den, tol)
        if common.degree <= 0:
            break
        if not d0.is_zero and _restriction_agreement(num, den, n0, d0) <= 1e-7:
            num, den = n0, d0
            break
    return num, den


def _restriction_agreement(num0, den0, num1, den1) -> float:
    worst = 0.0
    for radius in (0.47, 0.88):
        z = radius * np.exp(2j * np.pi * (np.arange(16) + 0.21) / 16)
        d0, d1 = den0(z), den1(z)
        ok = (np.abs(d0) > 1e-9 * max(den0.norm(), 1e-300)) & (
            np.abs(d1) > 1e-9 * max(den1.norm(), 1e-300)
        )
        if not np.any(ok):
            continue
        v0 = num0(z[ok]) / d0[ok]
        v1 = num1(z[ok]) / d1[ok]
        worst = max(worst, float(np.max(np.abs(v0 - v1) / (1.0 + np.abs(v0)))))
    return worst


def count_disk_roots(p: Poly) -> int:
    if p.degree <= 0:
        return 0
    return int(np.sum(np.abs(poly_roots(p)) < 1.0 - 1e-9))


# ---------------------------------------------------------------------------
# Strict solve: per-node re-centering and real combination


def _transport_pair(problem: BidiskProblem, pair: AglerPair, j: int) -> tuple[BidiskProblem, AglerPair, tuple[MoebiusMap, MoebiusMap]]:
    """Moebius-shift both coordinates so node j sits at the origin.

    The identity transports by a diagonal congruence per term, so the shifted
    pair satisfies the decomposition identity for the shifted nodes exactly and
    keeps each term's inertia.
    """
    maps = (MoebiusMap(complex(problem.nodes[j, 0])), MoebiusMap(complex(problem.nodes[j, 1])))
    new_nodes = np.column_stack([maps[0](problem.nodes[:, 0]), maps[1](problem.nodes[:, 1])])
    shifted_problem = BidiskProblem(nodes=new_nodes, values=problem.values)
    new_gammas = []
    for r, G in enumerate(pair.gammas()):
        a = maps[r].a
        d = 1.0 - np.conj(a) * problem.nodes[:, r]
        new_gammas.append(hermitize(np.outer(d, d.conj()) * G / (1.0 - abs(a) ** 2)))
    ys = []
    for r, Y in enumerate(pair.regularizers()):
        if Y is None:
            ys.append(None)
        else:
            a = maps[r].a
            d = 1.0 - np.conj(a) * problem.nodes[:, r]
            ys.append(hermitize(np.outer(d, d.conj()) * Y / (1.0 - abs(a) ** 2)))
    return shifted_problem, AglerPair(gamma1=new_gammas[0], gamma2=new_gammas[1], y1=ys[0], y2=ys[1]), maps


def _reflective_constant2(num: Poly2, den: Poly2, d: tuple[int, int]) -> tuple[complex, float]:
    """Estimate c with num = c * reflect(den, d); return (c, relative defect)."""
    ref = poly2_reflect(den, d)
    rc = np.zeros((d[0] + 1, d[1] + 1), dtype=complex)
    rc[: ref.coeffs.shape[0], : ref.coeffs.shape[1]] = ref.coeffs
    nc = np.zeros_like(rc)
    if not num.is_zero:
        nc[: num.coeffs.shape[0], : num.coeffs.shape[1]] = num.coeffs
    big = np.abs(rc) > 1e-6 * max(float(np.max(np.abs(rc))), 1e-300)
    if not np.any(big):
        return 1.0 + 0.0j, np.inf
    ratios = nc[big] / rc[big]
    c = complex(np.median(ratios.real) + 1j * np.median(ratios.imag))
    defect = float(np.max(np.abs(nc - c * rc))) / max(float(np.max(np.abs(nc))), 1e-300)
    return c, defect


def _compose_poly2_with_maps(p: Poly2, maps: tuple[MoebiusMap, MoebiusMap], d: tuple[int, int]) -> Poly2:
    """Cleared composition prod_r (1 - conj(a_r) z_r)^{d_r} * p(m1(z1), m2(z2))."""
    d1, d2 = d
    # First substitute in variable 2 row by row, then in variable 1.
    rows = p.coeff_slices(0) if not p.is_zero else []
    mid = np.zeros((max(len(rows), 1), d2 + 1), dtype=complex)
    for k, row in enumerate(rows):
        if row.is_zero:
            continue
        comp, _ = moebius_compose_poly(maps[1], row, d2)
        mid[k, : comp.coeffs.size] = comp.coeffs
    mid_poly = Poly2(mid)
    cols = mid_poly.coeff_slices(1)
    out = Poly2()
    for k2, col in enumerate(cols):
        if col.is_zero:
            continue
        comp, _ = moebius_compose_poly(maps[0], col, d1)
        lift = Poly2(comp.coeffs.reshape(-1, 1) if comp.coeffs.size else np.zeros((0, 1)))
        shift = np.zeros((1, k2 + 1), dtype=complex)
        shift[0, k2] = 1.0
        out = out + lift * Poly2(shift)
    return out


def _vacuous_factor2(lam1: complex) -> Poly2:
    """(z1 - lam)(1 - conj(lam) z1): self-reflective at bidegree (2, 0)."""
    p = Poly(np.array([-lam1, 1.0])) * Poly(np.array([1.0, -np.conj(lam1)]))
    return Poly2.from_one_variable(p, 0)


class BidiskSolveError(BidiskError):
    pass


@dataclass(frozen=True)
class ShiftedBidiskFamily:
    dens: list[Poly2]
    bidegree: tuple[int, int]
    inertias: tuple[Inertia, Inertia]
    deltas: tuple[int, int]
    node_status: list[list[str]]


def _shifted_denominator(
    problem: BidiskProblem, pair: AglerPair, j: int, tol: float = 1e-9
) -> tuple[Poly2, tuple[int, int], tuple[Inertia, Inertia], tuple[int, int], list[str]]:
    """Centered solve at node j pulled back to the original coordinates."""
    shifted, shifted_pair, maps = _transport_pair(problem, pair, j)
    # The diagonal congruence can cost the shifted pair its rank conditions;
    # top up the regularizers for this shift when that happens.
    shifted_pair = regularize_pair(shifted, shifted_pair, seed=1234 + j)
    real, gram = build_bidisk_realization(shifted, shifted_pair, tol)
    br = to_birational(real)
    d = (
        max(br.numerator.bidegree[0], br.denominator.bidegree[0], 0),
        max(br.numerator.bidegree[1], br.denominator.bidegree[1], 0),
    )
    c, defect = _reflective_constant2(br.numerator, br.denominator, d)
    if defect > 1e-7 or abs(abs(c) - 1.0) > 1e-6:
        raise BidiskSolveError(
            f"numerator is not a unimodular reflection of the denominator (defect {defect:.3e})"
        )
    den_centered = np.exp(-0.5j * np.angle(c)) * br.denominator
    den = _compose_poly2_with_maps(den_centered, maps, d)
    num = poly2_reflect(den, d)
    c2, defect2 = _reflective_constant2(_compose_poly2_with_maps(
        np.exp(-0.5j * np.angle(c)) * br.numerator, maps, d), den, d)
    # Composition may flip the reflection constant per odd degree; re-rotate.
    if defect2 <= 1e-6 and abs(abs(c2) - 1.0) <= 1e-6:
        den = np.exp(-0.5j * np.angle(c2)) * den
        num = poly2_reflect(den, d)
    statuses = []
    scale = max(den.norm(), num.norm(), 1e-300)
    for i in range(problem.size):
        lam = problem.nodes[i]
        w = problem.values[i]
        pv = den(lam[0], lam[1])
        qv = num(lam[0], lam[1])
        resid = abs(qv - w * pv)
        if abs(pv) > 1e-8 * scale and resid <= 1e-7 * scale * (1.0 + abs(w)):
            statuses.append("strict")
        elif resid <= 1e-7 * scale * (1.0 + abs(w)):
            statuses.append("weak")
        else:
            statuses.append("forced-weak")
    fixes = [i for i, s in enumerate(statuses) if s == "forced-weak"]
    for i in fixes:
        den = den * _vacuous_factor2(complex(problem.nodes[i, 0]))
        d = (d[0] + 2, d[1])
    if statuses[j] != "strict":
        raise BidiskSolveError(f"lost strict interpolation at the re-centered node {j}")
    inertias = (gram.inertias[0], gram.inertias[1])
    return den, d, inertias, gram.deltas, statuses


def solve_bidisk_shifts(problem: BidiskProblem, pair: AglerPair, tol: float = 1e-9) -> ShiftedBidiskFamily:
    """One re-centered solve per node, padded to a common bidegree."""
    dens: list[Poly2] = []
    degrees: list[tuple[int, int]] = []
    statuses: list[list[str]] = []
    inertias = None
    deltas = None
    for j in range(problem.size):
        den, d, inert, delt, st = _shifted_denominator(problem, pair, j, tol)
        if abs(den(problem.nodes[j, 0], problem.nodes[j, 1])) <= 1e-10 * max(den.norm(), 1e-300):
            raise BidiskSolveError(f"shifted denominator vanishes at its own node {j}")
        dens.append(den)
        degrees.append(d)
        statuses.append(st)
        inertias = inert
        deltas = delt if deltas is None else (max(deltas[0], delt[0]), max(deltas[1], delt[1]))
    d1 = max(dd[0] for dd in degrees)
    d2 = max(dd[1] for dd in degrees)
    pad1 = Poly2(np.array([[1.0], [1.0]]))  # 1 + z1
    pad2 = Poly2(np.array([[1.0, 1.0]]))  # 1 + z2
    for j in range(problem.size):
        a, b = degrees[j]
        for _ in range(d1 - a):
            dens[j] = dens[j] * pad1
        for _ in range(d2 - b):
            dens[j] = dens[j] * pad2
    return ShiftedBidiskFamily(
        dens=dens, bidegree=(d1, d2), inertias=inertias, deltas=deltas, node_status=statuses
    )


@dataclass(frozen=True)
class BidiskSolution:
    numerator: Poly2
    denominator: Poly2
    bidegree: tuple[int, int]
    inertias: tuple[Inertia, Inertia]
    deltas: tuple[int, int]
    node_status: list[str]
    weak_solution: "BiRational | None" = None
    certificates: dict = field(default_factory=dict)

    def __call__(self, z1, z2):
        out = self.numerator(z1, z2) / self.denominator(z1, z2)
        return out if np.ndim(out) else complex(out)

    def birational(self) -> BiRational:
        return BiRational(numerator=self.numerator, denominator=self.denominator)


def combine_bidisk(
    family: ShiftedBidiskFamily,
    problem: BidiskProblem,
    rng: np.random.Generator | None = None,
    retries: int = 64,
) -> BidiskSolution:
    """Real combination of the shifted denominators into a strict interpolant."""
    if rng is None:
        rng = np.random.default_rng(0)
    N = problem.size
    d = family.bidegree
    scale = max(p.norm() for p in family.dens)
    vals = np.array(
        [[p(problem.nodes[i, 0], problem.nodes[i, 1]) for p in family.dens] for i in range(N)]
    )
    best_q = None
    for trial in range(retries):
        t = np.ones(N) if (trial == 0 and N == 1) else rng.uniform(-1.0, 1.0, size=N)
        node_vals = vals @ t
        floor = 1e-8 * scale * float(np.linalg.norm(t))
        if np.min(np.abs(node_vals)) > floor:
            q = Poly2()
            for j in range(N):
                q = q + t[j] * family.dens[j]
            best_q = q
            break
    if best_q is None:
        raise BidiskSolveError("could not find a real combination avoiding all nodes")
    q = best_q
    p = poly2_reflect(q, d)
    statuses = []
    for i in range(N):
        lam = problem.nodes[i]
        w = problem.values[i]
        pv = q(lam[0], lam[1])
        if abs(pv) <= 1e-8 * q.norm():
            statuses.append("weak")
        elif abs(p(lam[0], lam[1]) / pv - w) <= 1e-7 * (1.0 + abs(w)):
            statuses.append("strict")
        else:
            statuses.append("fail")
    if any(s != "strict" for s in statuses):
        raise BidiskSolveError(f"combination is not strict at all nodes: {statuses}")
    return BidiskSolution(
        numerator=p,
        denominator=q,
        bidegree=d,
        inertias=family.inertias,
        deltas=family.deltas,
        node_status=statuses,
    )


def solve_bidisk(
    problem: BidiskProblem,
    pair: AglerPair | None = None,
    tol: float = 1e-9,
    seed: int = 0,
    certify: bool = True,
) -> BidiskSolution:
    """Full pipeline: validate/regularize the pair, re-centered solves, combination.

    When no pair is given, the one-variable embedding with all weight on the
    first coordinate is used.
    """
    if pair is None:
        pair = one_variable_pair(problem, 0)
    validate_pair(problem, pair)
    pair = regularize_pair(problem, pair, seed=seed + 7)
    weak_real, _ = build_bidisk_realization(problem, pair, tol)
    weak_br = to_birational(weak_real)
    family = solve_bidisk_shifts(problem, pair, tol)
    combined = combine_bidisk(family, problem, rng=np.random.default_rng(seed))
    solution = BidiskSolution(
        numerator=combined.numerator,
        denominator=combined.denominator,
        bidegree=combined.bidegree,
        inertias=combined.inertias,
        deltas=combined.deltas,
        node_status=combined.node_status,
        weak_solution=weak_br,
    )
    if certify:
        from . import verify

        solution.certificates.update(verify.certify_bidisk(solution, problem))
    return solution
