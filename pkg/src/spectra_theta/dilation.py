"""Explicit matrix-scale dilations and ball membership: spin (CAR) tuples,
the block-diagonal 1/g dilation, the two-variable spin-ball commuting
dilation via the Halmos defect construction, the Choi matrix embedding the
OH ball into the scaled spin ball, and the extreme-point predicate.

All eigenvalue work goes through the symmetric (self-adjoint) solver; no
general nonsymmetric path exists in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError
from .pencil import SymTuple
from .sphere_oracle import DEFAULT_SEED, _generator

SPIN_CONSTRUCTION_CAP = 14  # matrices of size 2^13; int8 storage keeps this ~1 GB
SPIN_NORM_CAP = 8  # the tensor square lives in size 4^(g-1)
CHOI_CAP = 8

_SIGMA0 = np.array([[1, 0], [0, 1]], dtype=np.int8)
_SIGMA1 = np.array([[1, 0], [0, -1]], dtype=np.int8)
_SIGMA2 = np.array([[0, 1], [1, 0]], dtype=np.int8)
_SIGMA3 = np.array([[0, 1], [-1, 0]], dtype=np.int8)  # skew; conjugation flips the spin tuple


@dataclass(frozen=True)
class SpinSystem:
    """A g-tuple of integer symmetric matrices with P_j P_k + P_k P_j = 2 delta_jk I."""

    g: int
    mats: tuple[np.ndarray, ...]

    def float_mats(self) -> tuple[np.ndarray, ...]:
        return tuple(m.astype(float) for m in self.mats)


def spin_matrices(g: int) -> SpinSystem:
    """The canonical spin system of g symmetric matrices of size 2^(g-1).

    P_1 = s1 (x) s0 (x) ... (x) s0, P_j for 1 < j < g carries j-1 leading
    s2 factors, one s1, then s0 padding, and P_g = s2 (x) ... (x) s2.  The
    entries are in {-1, 0, 1} and the anticommutation relations hold in
    exact integer arithmetic.
    """
    if g < 2:
        raise DomainError(f"spin_matrices requires g >= 2, got {g}")
    if g > SPIN_CONSTRUCTION_CAP:
        raise ResourceError(f"spin_matrices capped at g <= {SPIN_CONSTRUCTION_CAP}, got {g}")
    mats = []
    for j in range(1, g + 1):
        if j < g:
            factors = [_SIGMA2] * (j - 1) + [_SIGMA1] + [_SIGMA0] * (g - 1 - j)
        else:
            factors = [_SIGMA2] * (g - 1)
        p = factors[0]
        for f in factors[1:]:
            p = np.kron(p, f)
        mats.append(p)
    return SpinSystem(g=g, mats=tuple(mats))


def spin_tensor_norm(g: int) -> float:
    """Operator norm of sum_j P_j (x) P_j, computed by the symmetric
    eigensolver on the 4^(g-1)-dimensional tensor square; equals g."""
    if g < 2:
        raise DomainError(f"spin_tensor_norm requires g >= 2, got {g}")
    if g > SPIN_NORM_CAP:
        raise ResourceError(f"spin_tensor_norm capped at g <= {SPIN_NORM_CAP}, got {g}")
    mats = spin_matrices(g).float_mats()
    size = mats[0].shape[0] ** 2
    total = np.zeros((size, size))
    for p in mats:
        total += np.kron(p, p)
    eigs = np.linalg.eigvalsh(total)
    return float(max(-eigs[0], eigs[-1]))


def _spin_pencil_matrix(X: SymTuple) -> np.ndarray:
    mats = spin_matrices(X.g).float_mats()
    size = X.n * mats[0].shape[0]
    total = np.zeros((size, size))
    for x, p in zip(X.mats, mats):
        total += np.kron(x, p)
    return total


def ball_membership(
    X: SymTuple,
    ball: str,
    tol: float = 1e-9,
    samples: int | None = None,
    seed: int = DEFAULT_SEED,
) -> bool:
    """Membership of X in one of the matrix balls over R^g.

    * ``oh``:   lambda_max(sum X_j^2) <= 1 + tol;
    * ``spin``: lambda_min(I - sum X_j (x) P_j) >= -tol;
    * ``min_sampled``: max over sampled unit vectors v of the Euclidean
      norm of (v^T X_1 v, ..., v^T X_g v) is <= 1 + tol.  The sampled test
      is one-sided: it can accept a tuple just outside the min ball but
      never rejects a member.

    g = 1 degenerates for all three balls to the operator-norm ball.
    """
    if ball == "oh":
        total = np.zeros((X.n, X.n))
        for m in X.mats:
            total += m @ m
        return float(np.linalg.eigvalsh(total)[-1]) <= 1.0 + tol
    if ball == "spin":
        if X.g == 1:
            eigs = np.linalg.eigvalsh(X.mats[0])
            return max(-eigs[0], eigs[-1]) <= 1.0 + tol
        lam = _spin_pencil_matrix(X)
        pencil_matrix = np.eye(lam.shape[0]) - lam
        return float(np.linalg.eigvalsh(pencil_matrix)[0]) >= -tol
    if ball == "min_sampled":
        return _min_ball_sampled(X, tol, samples or 2048, seed)
    raise DomainError(f"unknown ball {ball!r}; expected oh, spin, or min_sampled")


def _min_ball_sampled(X: SymTuple, tol: float, samples: int, seed: int) -> bool:
    rng = _generator(seed)
    v = rng.standard_normal((samples, X.n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    quad = np.stack([np.einsum("ni,ij,nj->n", v, m, v) for m in X.mats], axis=1)
    norms = np.linalg.norm(quad, axis=1)
    best = float(norms.max())
    # Local ascent from the most promising samples: power-iteration-style
    # steps on the direction matrix sum_j c_j X_j with c the current profile.
    order = np.argsort(norms)[-8:]
    for idx in order:
        w = v[idx]
        for _ in range(25):
            c = np.array([w @ m @ w for m in X.mats])
            nc = np.linalg.norm(c)
            if nc == 0.0:
                break
            direction = sum(cj * m for cj, m in zip(c / nc, X.mats))
            w_new = direction @ w
            nw = np.linalg.norm(w_new)
            if nw == 0.0:
                break
            w = w_new / nw
        best = max(best, float(np.linalg.norm([w @ m @ w for m in X.mats])))
    return best <= 1.0 + tol


@dataclass(frozen=True)
class DilationResult:
    """A commuting dilation T of some tuple X: V is an isometry with
    V^T T_j V = scale * X_j."""

    T: SymTuple
    V: np.ndarray
    scale: float

    def __post_init__(self) -> None:
        v = np.asarray(self.V, dtype=float)
        if v.ndim != 2 or v.shape[0] != self.T.n:
            raise DomainError(f"V must map into the dilation space, got shape {v.shape}")
        if np.max(np.abs(v.T @ v - np.eye(v.shape[1]))) > 1e-12:
            raise DomainError("V is not an isometry within 1e-12")
        if self.scale <= 0.0:
            raise DomainError(f"scale must be positive, got {self.scale}")
        for j in range(self.T.g):
            for k in range(j + 1, self.T.g):
                comm = self.T.mats[j] @ self.T.mats[k] - self.T.mats[k] @ self.T.mats[j]
                if np.max(np.abs(comm)) > 1e-10:
                    raise DomainError(f"dilation tuple does not commute: blocks {j}, {k}")
        object.__setattr__(self, "V", v)

    def compression(self) -> tuple[np.ndarray, ...]:
        """The compressed tuple (1/scale) V^T T_j V, which should equal X."""
        return tuple(self.V.T @ m @ self.V / self.scale for m in self.T.mats)

    def reconstruction_residual(self, X: SymTuple) -> float:
        return max(
            float(np.max(np.abs(c - x))) for c, x in zip(self.compression(), X.mats)
        )


def blockdiag_dilation(X: SymTuple) -> DilationResult:
    """Dilation of X to an exactly commuting tuple at scale 1/g.

    T_j is gn x gn with X_j in the j-th diagonal block and zeros elsewhere;
    the blocks are disjoint so T_j T_k = 0 = T_k T_j for j != k.  The
    isometry stacks 1/sqrt(g) copies of the identity, giving
    V^T T_j V = (1/g) X_j exactly.
    """
    g, n = X.g, X.n
    mats = []
    for j in range(g):
        t = np.zeros((g * n, g * n))
        t[j * n : (j + 1) * n, j * n : (j + 1) * n] = X.mats[j]
        mats.append(t)
    v = np.vstack([np.eye(n)] * g) / math.sqrt(g)
    return DilationResult(T=SymTuple(tuple(mats)), V=v, scale=1.0 / g)


def defect_sqrt(S: np.ndarray) -> np.ndarray:
    """The defect (I - S^2)^(1/2) of a symmetric contraction S.

    Computed through the eigendecomposition of S; eigenvalues of I - S^2
    that dip below zero by rounding are clamped to 0 so boundary inputs
    (S^2 = I) do not error, while a genuine norm excess past 1 + 1e-12
    raises DomainError.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {S.shape}")
    if np.max(np.abs(S - S.T), initial=0.0) > 1e-12:
        raise DomainError("defect_sqrt requires a symmetric matrix")
    lam, q = np.linalg.eigh(S)
    if float(np.max(np.abs(lam))) > 1.0 + 1e-12:
        raise DomainError(f"not a contraction: ||S|| = {float(np.max(np.abs(lam)))}")
    gaps = np.clip(1.0 - lam * lam, 0.0, None)
    d = (q * np.sqrt(gaps)) @ q.T
    return 0.5 * (d + d.T)


def spin2_dilation(X: SymTuple) -> DilationResult:
    """Commuting dilation (at scale 1) of a 2-tuple in the spin ball.

    Follows the Halmos-defect route: with S = [[X1, X2], [X2, -X1]] a
    contraction and D = (I - S^2)^(1/2) = [[d, e], [-e, d]] (e skew), the
    pair

        T1 = [[X1, e], [-e, X1]],   T2 = [[X2, d], [d, -X2]]

    commutes and satisfies T1^2 + T2^2 = I, so the joint spectrum sits on
    the unit circle.  Compressing to the first n coordinates recovers X
    exactly.
    """
    if X.g != 2:
        raise DomainError(f"spin2_dilation requires a 2-tuple, got g={X.g}")
    if not ball_membership(X, "spin", tol=1e-10):
        raise DomainError("tuple is not in the spin ball within 1e-10")
    n = X.n
    x1, x2 = X.mats
    s = np.block([[x1, x2], [x2, -x1]])
    defect = defect_sqrt(s)
    dd = 0.5 * (defect[:n, :n] + defect[n:, n:])
    dd = 0.5 * (dd + dd.T)
    e = 0.5 * (defect[:n, n:] - defect[n:, :n])
    e = 0.5 * (e - e.T)
    t1 = np.block([[x1, e], [-e, x1]])
    t2 = np.block([[x2, dd], [dd, -x2]])
    v = np.vstack([np.eye(n), np.zeros((n, n))])
    return DilationResult(T=SymTuple((t1, t2)), V=v, scale=1.0)


def oh_to_spin_choi(g: int) -> np.ndarray:
    """Choi matrix of the unital map sending the OH-ball coefficients into
    the 1/sqrt(g)-scaled spin tuple.

    Block layout over (g+1) blocks of size 2^(g-1): top-left I/2, first
    block row (1/(2 sqrt g)) P_j, and lower-right block
    S = (1/(2g)) col(P) col(P)^T.  The Schur complement of the top-left
    block vanishes, so the matrix is positive semidefinite (and singular);
    the diagonal blocks sum to the identity, which is unitality.
    """
    if g < 2:
        raise DomainError(f"oh_to_spin_choi requires g >= 2, got {g}")
    if g > CHOI_CAP:
        raise ResourceError(f"oh_to_spin_choi capped at g <= {CHOI_CAP}, got {g}")
    mats = spin_matrices(g).float_mats()
    m = mats[0].shape[0]
    col = np.vstack(mats)  # (g*m) x m
    size = (g + 1) * m
    choi = np.zeros((size, size))
    choi[:m, :m] = 0.5 * np.eye(m)
    row = col.T / (2.0 * math.sqrt(g))  # m x (g*m)
    choi[:m, m:] = row
    choi[m:, :m] = row.T
    choi[m:, m:] = col @ col.T / (2.0 * g)
    return choi


def spin2_extreme(X: SymTuple, tol: float = 1e-10) -> bool:
    """Extreme-point predicate for the two-variable spin ball: X must
    commute and Lambda(X) = [[X1, X2], [X2, -X1]] must square to I."""
    if X.g != 2:
        raise DomainError(f"spin2_extreme requires a 2-tuple, got g={X.g}")
    x1, x2 = X.mats
    comm = x1 @ x2 - x2 @ x1
    lam = np.block([[x1, x2], [x2, -x1]])
    unitary_defect = lam @ lam - np.eye(2 * X.n)
    return (
        float(np.linalg.norm(comm, 2)) <= tol
        and float(np.linalg.norm(unitary_defect, 2)) <= tol
    )


def sign_flip_conjugator() -> np.ndarray:
    """The g = 2 witness u with (I (x) u)^T (sum X_j (x) P_j) (I (x) u)
    = -(sum X_j (x) P_j); a skew-symmetric orthogonal 2 x 2 matrix."""
    return _SIGMA3.astype(float)
