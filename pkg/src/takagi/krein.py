"""Indefinite inner products: signature matrices and J-isometry extension.

A partially defined map sending domain vectors to range vectors with equal
J-Grams extends to a full J-unitary matrix.  The extension here is
constructive: split off the radical of the common Gram, adjoin hyperbolic
partners to both sides, then match J-orthonormalized bases of the two
J-orthogonal complements sign by sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import hermitize


class ExtensionError(RuntimeError):
    pass


class GramMismatchError(ExtensionError):
    def __init__(self, mismatch: float):
        self.mismatch = mismatch
        super().__init__(f"domain/range J-Grams disagree (norm {mismatch:.3e})")


@dataclass(frozen=True)
class SignatureMatrix:
    """Diagonal matrix of +-1 defining the indefinite inner product <Jx, y>."""

    signs: np.ndarray

    def __post_init__(self):
        signs = np.atleast_1d(np.asarray(self.signs, dtype=float))
        if not np.all(np.abs(signs) == 1.0):
            raise ValueError("signature entries must be +-1")
        object.__setattr__(self, "signs", signs)
        self.signs.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.signs.size

    @property
    def n_positive(self) -> int:
        return int(np.sum(self.signs > 0))

    @property
    def n_negative(self) -> int:
        return int(np.sum(self.signs < 0))

    def matrix(self) -> np.ndarray:
        return np.diag(self.signs).astype(complex)

    def apply(self, X: np.ndarray) -> np.ndarray:
        return self.signs[:, None] * X if X.ndim == 2 else self.signs * X

    @staticmethod
    def blocks(*counts_and_signs: tuple[int, int]) -> "SignatureMatrix":
        parts = [np.full(n, float(s)) for n, s in counts_and_signs]
        return SignatureMatrix(np.concatenate(parts) if parts else np.zeros(0))


def j_gram(J: SignatureMatrix, vectors: np.ndarray) -> np.ndarray:
    """Matrix of pairings G[i, j] = <J v_j, v_i> for the columns of ``vectors``."""
    if vectors.shape[0] != J.dimension:
        raise ValueError("vector dimension does not match signature dimension")
    return vectors.conj().T @ J.apply(vectors)


@dataclass(frozen=True)
class PartialJIsometry:
    """Prescribed action d_i -> r_i (columns) with matching J-Grams."""

    J: SignatureMatrix
    domain: np.ndarray
    range_: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.domain, dtype=complex)
        r = np.asarray(self.range_, dtype=complex)
        if d.shape != r.shape or d.shape[0] != self.J.dimension:
            raise ValueError("domain/range shape mismatch")
        object.__setattr__(self, "domain", d)
        object.__setattr__(self, "range_", r)

    def gram_mismatch(self) -> float:
        Gd = j_gram(self.J, self.domain)
        Gr = j_gram(self.J, self.range_)
        return float(np.linalg.norm(Gd - Gr))


def _hyperbolic_partner(span: np.ndarray, idx: int, signs: np.ndarray) -> np.ndarray:
    """Vector J-orthogonal to every column of span except unit pairing with column idx,
    corrected to be J-isotropic itself."""
    A = span.conj().T * signs[None, :]
    t = np.zeros(A.shape[0], dtype=complex)
    t[idx] = 1.0
    w0, res, *_ = np.linalg.lstsq(A, t, rcond=None)
    if np.linalg.norm(A @ w0 - t) > 1e-7 * max(1.0, np.linalg.norm(t)):
        raise ExtensionError("cannot adjoin hyperbolic partner (inconsistent system)")
    alpha = np.real(np.vdot(w0, signs * w0))
    return w0 - 0.5 * alpha * span[:, idx]


def _j_orthonormal_complement(span: np.ndarray, signs: np.ndarray, tol: float):
    """J-orthonormal basis of the J-orthogonal complement of the span.

    Returns (basis columns, their +-1 J-norms sorted positives first, each
    group by descending Gram eigenvalue magnitude).
    """
    n = span.shape[0]
    A = span.conj().T * signs[None, :]
    if span.shape[1] == 0:
        Q = np.eye(n, dtype=complex)
    else:
        _, s, Vh = np.linalg.svd(A)
        rank = int(np.sum(s > max(s[0], 1.0) * 1e-13)) if s.size else 0
        Q = Vh[rank:].conj().T
    if Q.shape[1] == 0:
        return Q, np.zeros(0)
    Gc = hermitize(Q.conj().T @ (signs[:, None] * Q))
    evals, evecs = np.linalg.eigh(Gc)
    if np.min(np.abs(evals)) <= tol * max(1.0, float(np.max(np.abs(evals)))):
        raise ExtensionError("complement J-Gram is degenerate")
    order = sorted(range(evals.size), key=lambda k: (0 if evals[k] > 0 else 1, -abs(evals[k])))
    basis = (Q @ evecs[:, order]) / np.sqrt(np.abs(evals[order]))[None, :]
    return basis, np.sign(evals[order])


def extend_j_isometry(partial: PartialJIsometry, tol: float = 1e-9) -> np.ndarray:
    """Extend the prescribed action to an n x n J-unitary matrix V1.

    Raises GramMismatchError when the J-Grams of domain and range disagree
    beyond ``tol`` (relative), ExtensionError when the domain columns are
    dependent or the geometry degenerates.
    """
    J, D, R = partial.J, partial.domain, partial.range_
    signs = J.signs
    n, N = D.shape
    if N == 0:
        return np.eye(n, dtype=complex)
    Gd = j_gram(J, D)
    Gr = j_gram(J, R)
    scale = max(1.0, float(np.linalg.norm(Gd)))
    mismatch = float(np.linalg.norm(Gd - Gr))
    if mismatch > tol * scale * N:
        raise GramMismatchError(mismatch)
    if np.linalg.matrix_rank(D, tol=1e-10 * max(1.0, np.linalg.norm(D))) < N:
        raise ExtensionError("domain vectors are linearly dependent")
    if N == n:
        return np.linalg.solve(D.conj().T, R.conj().T).conj().T

    G = hermitize(0.5 * (Gd + Gr))
    evals, evecs = np.linalg.eigh(G)
    cutoff = tol * max(1.0, float(np.max(np.abs(evals))))
    radical = np.abs(evals) <= cutoff
    # Rotate so radical directions sit in designated columns on both sides,
    # then rescale each column pair by a common factor (which preserves the
    # prescribed map) so the Gram is +-1/0 diagonal and well conditioned.
    Sd = D @ evecs
    Sr = R @ evecs
    col_scale = np.where(
        radical,
        1.0 / np.maximum(np.linalg.norm(Sd, axis=0), 1e-300),
        1.0 / np.sqrt(np.maximum(np.abs(evals), 1e-300)),
    )
    Sd = Sd * col_scale[None, :]
    Sr = Sr * col_scale[None, :]
    rad_idx = list(np.nonzero(radical)[0])
    Fd, Fr = Sd.copy(), Sr.copy()
    for i in rad_idx:
        wd = _hyperbolic_partner(Fd, i, signs)
        wr = _hyperbolic_partner(Fr, i, signs)
        Fd = np.hstack([Fd, wd[:, None]])
        Fr = np.hstack([Fr, wr[:, None]])
    Cd, sd = _j_orthonormal_complement(Fd, signs, tol)
    Cr, sr = _j_orthonormal_complement(Fr, signs, tol)
    if Cd.shape[1] != Cr.shape[1] or not np.array_equal(sd, sr):
        raise ExtensionError("complement signatures do not match")
    Bd = np.hstack([Fd, Cd])
    Br = np.hstack([Fr, Cr])
    if Bd.shape[1] != n:
        raise ExtensionError("extended bases do not span the space")
    # Ideal shared Gram of both bases: +-1/0 prescribed part, hyperbolic
    # pairings for the radical columns, +-1 complement.
    S = np.zeros((n, n), dtype=complex)
    n_pre = Sd.shape[1]
    for i in range(n_pre):
        S[i, i] = 0.0 if radical[i] else np.sign(evals[i])
    for pos, i in enumerate(rad_idx):
        j = n_pre + pos
        S[i, j] = S[j, i] = 1.0
    for k, s in enumerate(sd):
        S[n_pre + len(rad_idx) + k, n_pre + len(rad_idx) + k] = s
    # Polishing each basis onto the exact Gram makes V1 = Br S^-1 Bd* J
    # J-unitary up to the individual basis residuals, with no amplification
    # by the conditioning of the base change.
    Sinv = np.linalg.inv(S)
    Bd = _polish_to_gram(Bd, signs, S, Sinv)
    Br = _polish_to_gram(Br, signs, S, Sinv)
    V1 = Br @ Sinv @ (Bd.conj().T * signs[None, :])
    alt = np.linalg.solve(Bd.conj().T, Br.conj().T).conj().T
    alt = _newton_j_unitary(alt, signs)
    if _defect(alt, signs) < _defect(V1, signs):
        V1 = alt
    defect = np.linalg.norm(V1.conj().T @ (signs[:, None] * V1) - J.matrix())
    if defect > 1e-8 * n * scale:
        raise ExtensionError(f"extension failed J-unitarity check (defect {defect:.3e})")
    return V1


def _polish_to_gram(
    B: np.ndarray, signs: np.ndarray, S: np.ndarray, Sinv: np.ndarray, iterations: int = 10
) -> np.ndarray:
    """Newton steps toward B* J B = S, kept only while the residual shrinks."""
    best = B
    best_res = float(np.linalg.norm(best.conj().T @ (signs[:, None] * best) - S))
    for _ in range(iterations):
        F = best.conj().T @ (signs[:, None] * best) - S
        cand = best - 0.5 * best @ (Sinv @ F)
        res = float(np.linalg.norm(cand.conj().T @ (signs[:, None] * cand) - S))
        if res >= best_res:
            break
        best, best_res = cand, res
    return best


def _defect(V: np.ndarray, signs: np.ndarray) -> float:
    return float(np.linalg.norm(V.conj().T @ (signs[:, None] * V) - np.diag(signs)))


def _newton_j_unitary(V: np.ndarray, signs: np.ndarray, iterations: int = 12) -> np.ndarray:
    """Polish toward J-unitarity: V <- (V + J V^-* J)/2, kept only while it helps.

    The action on the prescribed span moves only by the size of the starting
    defect, so the interpolation data are preserved to that accuracy.
    """
    J = np.diag(signs).astype(complex)
    best = V
    for _ in range(iterations):
        try:
            correction = J @ np.linalg.inv(best).conj().T @ J
        except np.linalg.LinAlgError:
            break
        cand = 0.5 * (best + correction)
        if _defect(cand, signs) >= _defect(best, signs):
            break
        best = cand
    return best


def j_unitarity_defect(J: SignatureMatrix, V: np.ndarray) -> float:
    return float(np.linalg.norm(V.conj().T @ (J.signs[:, None] * V) - J.matrix()))
