"""Sparse symmetric generalized eigenproblems shared by all discretizations.

Two operations cover everything the discretization modules need:

* ``smallest_eigenpairs`` — the k lowest eigenvalues of K v = E M v with
  certified residuals.  Three paths, picked by matrix shape:
  dense LAPACK for small problems, Sturm-sequence bisection for
  tridiagonal pencils (exact counts, O(dim) per probe), and shift-invert
  ARPACK for general sparse pairs.
* ``count_below`` — the number of eigenvalues strictly below a threshold,
  via the inertia of K - t M (Sylvester's law).  The LDL^T passes run in
  the compiled kernels (see ``_kernels``); a symmetric diagonal
  equilibration is applied first so that pivot/zero decisions are scale
  invariant on strongly graded meshes.

Both operations are deterministic: the ARPACK start vector is a fixed
seeded vector, bisection and factorizations have no randomness.

Counting convention: strictly below the threshold.  A pivot that is
numerically zero means the threshold (or shift) sits on an eigenvalue; the
count is then re-evaluated just below the tie and flagged ambiguous rather
than silently resolved.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ._kernels import banded_inertia, tridiag_inertia

DEFAULT_TOL = 1e-10
MAX_ITER_PER_EIGENVALUE = 500
_DENSE_CUTOFF = 400           # below this, dense LAPACK beats everything
_SEED = 20240824              # fixed ARPACK start vector seed
_EPS = np.finfo(float).eps


class EigenSolveError(RuntimeError):
    """Solver did not converge; carries whatever was computed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ShiftHitsSpectrumError(RuntimeError):
    """Factorization at the requested shift broke down (shift on an eigenvalue)."""


class AmbiguousCountWarning(UserWarning):
    """Threshold numerically coincides with an eigenvalue."""


@dataclass(frozen=True)
class SymSparsePair:
    """Symmetric stiffness + positive-definite mass defining K v = E M v.

    ``bandwidth_hint`` is the true half bandwidth of both matrices
    (1 = tridiagonal); the factories compute it from the sparsity pattern.
    """

    stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    dim: int
    bandwidth_hint: int

    @classmethod
    def from_matrices(cls, stiffness, mass, bandwidth_hint=None):
        K = sp.csr_matrix(stiffness)
        M = sp.csr_matrix(mass)
        if K.shape[0] != K.shape[1] or K.shape != M.shape:
            raise ValueError("stiffness and mass must be square and same shape")
        n = K.shape[0]
        if n < 1:
            raise ValueError("dim must be >= 1")
        for name, A in (("stiffness", K), ("mass", M)):
            scale = max(abs(A).max() if A.nnz else 0.0, 1.0)
            asym = abs(A - A.T).max() if A.nnz else 0.0
            if asym > 100 * _EPS * scale:
                raise ValueError(f"{name} is not symmetric (defect {asym:.3e})")
        if (M.diagonal() <= 0).any():
            raise ValueError("mass has a nonpositive diagonal entry")
        if bandwidth_hint is None:
            bandwidth_hint = max(_half_bandwidth(K), _half_bandwidth(M))
        return cls(stiffness=K, mass=M, dim=n, bandwidth_hint=int(bandwidth_hint))

    @property
    def is_tridiagonal(self):
        return self.bandwidth_hint <= 1


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with per-pair residuals and grid provenance."""

    values: tuple
    residual_norms: tuple
    count_requested: int
    grid_descriptor: str = ""

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.size > 1 and (np.diff(v) < 0).any():
            raise ValueError("eigenvalues must be nondecreasing")


@dataclass(frozen=True)
class InertiaInfo:
    """Result of one inertia probe: count strictly below, tie diagnostics."""

    count: int
    ambiguous: bool
    zero_hits: int
    threshold: float


def _half_bandwidth(A) -> int:
    C = A.tocoo()
    if C.nnz == 0:
        return 0
    return int(np.max(np.abs(C.row - C.col)))


def _to_lower_band(A, bw: int) -> np.ndarray:
    """LAPACK lower band storage ab[i, j] = A[j+i, j] from a sparse matrix."""
    C = sp.coo_matrix(A)
    n = C.shape[0]
    ab = np.zeros((bw + 1, n))
    r, c, v = C.row, C.col, C.data
    keep = r >= c
    np.add.at(ab, (r[keep] - c[keep], c[keep]), v[keep])
    return ab


def gershgorin_lower_bound(pair: SymSparsePair) -> float:
    """A certified lower bound for the pencil spectrum, from Gershgorin rows.

    Requires the mass matrix to be strictly diagonally dominant (true for
    the 1D P1 mass used here); returns -inf when it is not, since row
    bounds then certify nothing.
    """
    K, M = pair.stiffness, pair.mass
    radK = np.asarray(abs(K).sum(axis=1)).ravel() - np.abs(K.diagonal())
    radM = np.asarray(abs(M).sum(axis=1)).ravel() - np.abs(M.diagonal())
    m = M.diagonal() - radM
    if (m <= 0).any():
        return -np.inf
    # E < 0 requires |E| (M_ii - radM_i) <= radK_i - K_ii for some row i
    upper = np.maximum(radK - K.diagonal(), 0.0) / m
    return -float(np.max(upper)) if upper.size else 0.0


def _equilibrated_shifted(pair, t):
    """Diagonal-congruence scaled A = D (K - t M) D with unit-ish diagonal.

    Congruence preserves inertia; the scaling makes one global pivot
    threshold meaningful on meshes whose element sizes span many decades.
    """
    A = (pair.stiffness - t * pair.mass).tocsr()
    d = np.abs(A.diagonal())
    # rows with zero diagonal: fall back to the row's largest entry
    if (d == 0).any():
        rowmax = np.asarray(abs(A).max(axis=1).todense()).ravel()
        d = np.where(d > 0, d, np.where(rowmax > 0, rowmax, 1.0))
    s = 1.0 / np.sqrt(d)
    D = sp.diags(s)
    return (D @ A @ D).tocsr()


def inertia(pair: SymSparsePair, threshold: float) -> InertiaInfo:
    """Number of generalized eigenvalues strictly below ``threshold``.

    A numerically-zero pivot flags the threshold as (close to) an
    eigenvalue; the probe is then repeated at threshold - 10 eps ||K||
    (just below the tie, honoring the strict convention) and marked
    ambiguous.
    """
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    count, zeros = _inertia_raw(pair, threshold)
    if zeros == 0:
        return InertiaInfo(count=count, ambiguous=False, zero_hits=0,
                           threshold=threshold)
    bump = 10.0 * _EPS * max(_norm_inf(pair.stiffness), 1.0)
    below, zb = _inertia_raw(pair, threshold - bump)
    above, za = _inertia_raw(pair, threshold + bump)
    ambiguous = above != below
    if ambiguous:
        warnings.warn(
            f"threshold {threshold!r} sits on an eigenvalue "
            f"(count {below} just below vs {above} just above)",
            AmbiguousCountWarning, stacklevel=2)
    return InertiaInfo(count=below, ambiguous=ambiguous,
                       zero_hits=zeros + zb + za, threshold=threshold)


def count_below(pair: SymSparsePair, threshold: float) -> int:
    """Inertia count of eigenvalues strictly below ``threshold``."""
    return inertia(pair, threshold).count


def _norm_inf(A) -> float:
    return float(abs(A).sum(axis=1).max()) if A.nnz else 0.0


def _inertia_raw(pair, t):
    A = _equilibrated_shifted(pair, t)
    pivmin = 100.0 * _EPS  # diagonal is O(1) after equilibration
    if pair.is_tridiagonal:
        d = A.diagonal().copy()
        e = A.diagonal(k=1).copy() if pair.dim > 1 else np.zeros(0)
        return tridiag_inertia(np.ascontiguousarray(d),
                               np.ascontiguousarray(e), pivmin)
    bw = pair.bandwidth_hint
    if bw <= max(64, pair.dim // 4):
        ab = _to_lower_band(A, bw)
        return banded_inertia(ab, pivmin)
    # wide bandwidth: dense Bunch-Kaufman LDL^T
    L, D, perm = scipy.linalg.ldl(A.toarray(), lower=True)
    return _inertia_of_block_diag(D, pivmin)


def _inertia_of_block_diag(D, pivmin):
    """Inertia of the (1x1 / 2x2 block) diagonal factor from Bunch-Kaufman."""
    n = D.shape[0]
    neg = 0
    zeros = 0
    i = 0
    while i < n:
        off = D[i + 1, i] if i + 1 < n else 0.0
        if off != 0.0:
            a, b, c = D[i, i], off, D[i + 1, i + 1]
            tr, det = a + c, a * c - b * b
            disc = np.sqrt(max(tr * tr / 4 - det, 0.0))
            for lam in (tr / 2 - disc, tr / 2 + disc):
                if abs(lam) < pivmin:
                    zeros += 1
                elif lam < 0:
                    neg += 1
            i += 2
        else:
            p = D[i, i]
            if abs(p) < pivmin:
                zeros += 1
            elif p < 0:
                neg += 1
            i += 1
    return neg, zeros


def smallest_eigenpairs(pair: SymSparsePair, k: int, shift="auto",
                        tol: float = DEFAULT_TOL,
                        grid_descriptor: str = "") -> Spectrum:
    """The k smallest eigenvalues of K v = E M v, ascending.

    Parameters
    ----------
    pair : the discrete pencil.
    k : number of eigenvalues, 1 <= k <= dim.
    shift : "auto" (inertia-guided probe strictly below the spectrum) or an
        explicit real strictly below the eigenvalues of interest.
    tol : certified bound on every relative residual
        ||K v - E M v|| / (||K v|| + |E| ||M v||).

    Raises
    ------
    ShiftHitsSpectrumError : factorization broke down at an explicit shift.
    EigenSolveError : no convergence; ``.partial`` holds what was computed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > pair.dim:
        raise ValueError(f"k={k} exceeds problem dimension {pair.dim}")
    if not (tol > 0):
        raise ValueError("tol must be positive")

    if pair.dim <= _DENSE_CUTOFF:
        values, vectors = _dense_solve(pair, k)
    elif pair.is_tridiagonal:
        values, vectors = _tridiag_solve(pair, k)
    else:
        values, vectors = _arpack_solve(pair, k, shift, tol)

    residuals = _residual_norms(pair, values, vectors)
    bad = residuals > tol
    if bad.any():
        partial = Spectrum(values=tuple(values), residual_norms=tuple(residuals),
                           count_requested=k, grid_descriptor=grid_descriptor)
        raise EigenSolveError(
            f"{int(bad.sum())} of {k} residuals exceed tol={tol:g} "
            f"(worst {residuals.max():.3e})", partial=partial)
    return Spectrum(values=tuple(float(v) for v in values),
                    residual_norms=tuple(float(r) for r in residuals),
                    count_requested=k, grid_descriptor=grid_descriptor)


def _residual_norms(pair, values, vectors):
    K, M = pair.stiffness, pair.mass
    out = np.empty(len(values))
    for j, (E, v) in enumerate(zip(values, vectors.T)):
        Kv = K @ v
        Mv = M @ v
        out[j] = np.linalg.norm(Kv - E * Mv) / (
            np.linalg.norm(Kv) + abs(E) * np.linalg.norm(Mv) + _EPS)
    return out


def _dense_solve(pair, k):
    w, V = scipy.linalg.eigh(pair.stiffness.toarray(), pair.mass.toarray())
    return w[:k], V[:, :k]


def _tridiag_solve(pair, k):
    """Bisection on the Sturm count, then inverse iteration per eigenvalue."""
    lo = gershgorin_lower_bound(pair)
    hi = _gershgorin_upper_bound(pair)
    if not np.isfinite(lo) or not np.isfinite(hi):
        lo, hi = _expand_bracket(pair, k)
    values = np.empty(k)
    for j in range(1, k + 1):
        values[j - 1] = _bisect_count(pair, j, lo, hi)
        lo = values[j - 1]  # counts are monotone; reuse as next lower edge
    vectors = np.column_stack([_inverse_iteration(pair, E) for E in values])
    return values, vectors


def _gershgorin_upper_bound(pair):
    K, M = pair.stiffness, pair.mass
    radK = np.asarray(abs(K).sum(axis=1)).ravel() - np.abs(K.diagonal())
    radM = np.asarray(abs(M).sum(axis=1)).ravel() - np.abs(M.diagonal())
    m = M.diagonal() - radM
    if (m <= 0).any():
        return np.inf
    return float(np.max((K.diagonal() + radK) / m))


def _expand_bracket(pair, k):
    scale = max(_norm_inf(pair.stiffness), 1.0) / min(pair.mass.diagonal())
    lo, hi = -scale, scale
    for _ in range(200):
        if count_below(pair, lo) == 0:
            break
        lo *= 4.0
    for _ in range(200):
        if count_below(pair, hi) >= k:
            break
        hi *= 4.0
    return lo, hi


def _bisect_count(pair, j, lo, hi):
    """Smallest t with count_below(t) >= j, to near machine precision."""
    flo = count_below(pair, lo)
    if flo >= j:
        return lo
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:      # interval collapsed to adjacent floats
            break
        if count_below(pair, mid) >= j:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * max(abs(lo), abs(hi)):
            break
    return hi


def _inverse_iteration(pair, E, iters=3):
    n = pair.dim
    A = pair.stiffness - E * pair.mass
    ab = np.zeros((3, n))
    ab[0, 1:] = A.diagonal(k=1)
    ab[1, :] = A.diagonal()
    ab[2, :-1] = A.diagonal(k=-1)
    rng = np.random.RandomState(_SEED)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(iters):
        try:
            w = scipy.linalg.solve_banded((1, 1), ab, pair.mass @ v)
        except scipy.linalg.LinAlgError:
            # exactly singular: nudge off the eigenvalue by one ulp-scale step
            A2 = pair.stiffness - (E * (1 + 1e-13) + 1e-300) * pair.mass
            ab[0, 1:] = A2.diagonal(k=1)
            ab[1, :] = A2.diagonal()
            ab[2, :-1] = A2.diagonal(k=-1)
            w = scipy.linalg.solve_banded((1, 1), ab, pair.mass @ v)
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0:
            break
        v = w / nw
    return v


def _arpack_solve(pair, k, shift, tol):
    K, M = pair.stiffness.tocsc(), pair.mass.tocsc()
    if shift == "auto":
        sigma = _auto_shift(pair, k)
    else:
        sigma = float(shift)
    rng = np.random.RandomState(_SEED)
    v0 = rng.standard_normal(pair.dim)
    ncv = min(pair.dim - 1, max(2 * k + 20, 40))
    attempts = 3 if shift == "auto" else 1
    last_exc = None
    for attempt in range(attempts):
        try:
            w, V = spla.eigsh(K, k=k, M=M, sigma=sigma, which="LM", v0=v0,
                              ncv=ncv, maxiter=MAX_ITER_PER_EIGENVALUE * k,
                              tol=0)
        except RuntimeError as exc:  # singular factorization at sigma
            last_exc = exc
            if attempts == 1:
                raise ShiftHitsSpectrumError(
                    f"factorization failed at shift {sigma!r}: {exc}") from exc
            sigma = sigma * (1 + 1e-3) - 1e-12
            continue
        except spla.ArpackNoConvergence as exc:
            partial = None
            if exc.eigenvalues is not None and len(exc.eigenvalues):
                vals = np.sort(exc.eigenvalues)
                partial = Spectrum(values=tuple(vals),
                                   residual_norms=(np.nan,) * len(vals),
                                   count_requested=k)
            raise EigenSolveError(str(exc), partial=partial) from exc
        order = np.argsort(w)
        return w[order], V[:, order]
    raise ShiftHitsSpectrumError(
        f"factorization failed after {attempts} shift perturbations: {last_exc}")


def _auto_shift(pair, k):
    """Inertia-guided shift: strictly below E_1 but within ~10% of it.

    A Gershgorin bound (or magnitude expansion) gives a certified floor;
    bisection on count_below then tightens it so ARPACK's shift-invert
    spectrum is well separated.
    """
    lo = gershgorin_lower_bound(pair)
    if not np.isfinite(lo):
        lo, _ = _expand_bracket(pair, k)
    if count_below(pair, lo) != 0:       # roundoff at the certified bound
        lo *= 4.0
    hi = 0.0
    if count_below(pair, hi) == 0:       # nonnegative spectrum: probe upward
        scale = max(_norm_inf(pair.stiffness), 1.0) / min(pair.mass.diagonal())
        hi = scale
        for _ in range(200):
            if count_below(pair, hi) > 0:
                break
            hi *= 4.0
    # shrink [lo, hi) with count(lo)=0 < count(hi) until lo is near E_1
    for _ in range(60):
        if hi - lo <= 0.1 * max(abs(lo), abs(hi), 1e-300):
            break
        mid = 0.5 * (lo + hi)
        if count_below(pair, mid) == 0:
            lo = mid
        else:
            hi = mid
    return lo - 0.05 * (abs(lo) + abs(hi - lo))
