"""Machine descriptions: Gram matrices, affine Bloch maps and isometries.

A machine that copies one input qubit A into two output qubits B and C
(with a leftover qubit D) is an isometry V from A into B (x) E, where
E = C (x) D.  Expanding V|a> = sum_l (sigma_l |a>) (x) |e_l> over the Pauli
basis, the machine is fully described by the 4 x 4 Gram matrix
E_lm = <e_l|e_m> of the four expansion vectors.  Any single output qubit
then sees an affine map of the Bloch ball,

    r  |->  s = delta + linear^T r,

whose image is an ellipsoid with displacement delta and semi-axes given by
the singular values of the linear part.

Conventions used throughout: |0> and |1> are the spin up/down basis states,
three-qubit amplitudes are ordered |bcd> with the B bit most significant,
and the E-space computational basis is |cd> (index 2c + d).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotHermitianError, NotIsometricError, NotNormalizedError, NotPhysicalError
from .linalg import hermiticity_error
from .pauli import CYCLIC, SIGMA, l_table

__all__ = [
    "DEFAULT_TOL",
    "E_HAT",
    "AffineBlochMap",
    "ConstraintReport",
    "DiagonalForm",
    "density_from_bloch",
    "bloch_vector",
    "transfer_from_gram",
    "gram_from_transfer",
    "b_from_e",
    "e_from_b",
    "isometry_residuals",
    "check_physical",
    "diagonalize",
    "tetrahedron_check",
    "tetrahedron_violations",
    "isometry_from_beta",
    "isometry_from_e_vectors",
    "extract_e_vectors",
    "gram_matrix",
    "realize_e_vectors",
    "affine_map_from_isometry",
    "map_bloch",
    "complex_matrix_to_json",
    "complex_matrix_from_json",
]

DEFAULT_TOL = 1e-9

_RT2 = 1.0 / np.sqrt(2.0)

# Orthonormal magic basis of the 4-dimensional E space, rows indexed like the
# Pauli label they pair with, components in the |cd> basis.
E_HAT = _RT2 * np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, -1j, 1j, 0],
        [1, 0, 0, -1],
    ],
    dtype=complex,
)
E_HAT.setflags(write=False)


# ---------------------------------------------------------------------------
# Bloch ball basics


def density_from_bloch(r) -> np.ndarray:
    """2 x 2 density matrix (1/2)(I + r . sigma) for a Bloch vector r."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError("Bloch vector must have three components")
    return 0.5 * (SIGMA[0] + r[0] * SIGMA[1] + r[1] * SIGMA[2] + r[2] * SIGMA[3])


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """Bloch vector of a 2 x 2 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("density matrix must be 2 x 2")
    return np.array([np.trace(rho @ SIGMA[q]).real for q in (1, 2, 3)])


@dataclass(frozen=True, eq=False)
class AffineBlochMap:
    """Affine map of the Bloch ball, r |-> delta + linear^T r."""

    delta: np.ndarray
    linear: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "delta", np.asarray(self.delta, dtype=float).reshape(3))
        object.__setattr__(self, "linear", np.asarray(self.linear, dtype=float).reshape(3, 3))

    @classmethod
    def identity(cls) -> "AffineBlochMap":
        return cls(np.zeros(3), np.eye(3))

    @classmethod
    def diagonal(cls, axes, delta=None) -> "AffineBlochMap":
        """Centered (or displaced) map with a diagonal linear part."""
        d = np.zeros(3) if delta is None else delta
        return cls(d, np.diag(np.asarray(axes, dtype=float)))

    def as_matrix(self) -> np.ndarray:
        """4 x 4 form: first row (1, delta), first column (1, 0, 0, 0)^T."""
        m = np.zeros((4, 4))
        m[0, 0] = 1.0
        m[0, 1:] = self.delta
        m[1:, 1:] = self.linear
        return m

    @classmethod
    def from_matrix(cls, m) -> "AffineBlochMap":
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("expected a 4 x 4 matrix")
        if abs(m[0, 0] - 1.0) > 1e-12 or np.max(np.abs(m[1:, 0])) > 1e-12:
            raise ValueError("first column must be (1, 0, 0, 0)")
        return cls(m[0, 1:], m[1:, 1:])

    def to_json(self) -> dict:
        return {
            "delta": [float(x) for x in self.delta],
            "linear": [[float(x) for x in row] for row in self.linear],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AffineBlochMap":
        return cls(obj["delta"], obj["linear"])


def map_bloch(bmap: AffineBlochMap, r) -> np.ndarray:
    """Apply the affine map to an input Bloch vector."""
    r = np.asarray(r, dtype=float)
    return bmap.delta + bmap.linear.T @ r


# ---------------------------------------------------------------------------
# Gram matrix <-> transfer matrix


def transfer_from_gram(e_gram: np.ndarray) -> np.ndarray:
    """Contract a Hermitian Gram matrix to the full 4 x 4 real transfer matrix.

    T_lm = sum_jk L(lm;jk) E_jk.  For a Hermitian input the result is real;
    the imaginary residue is checked against a fixed 1e-9 bound.
    """
    e_gram = np.asarray(e_gram, dtype=complex)
    if e_gram.shape != (4, 4):
        raise ValueError("Gram matrix must be 4 x 4")
    herm = hermiticity_error(e_gram)
    if herm > DEFAULT_TOL:
        raise NotHermitianError(f"Gram matrix deviates from Hermitian by {herm:.3e}")
    full = np.einsum("lmjk,jk->lm", l_table(), e_gram)
    return full.real


def gram_from_transfer(transfer: np.ndarray) -> np.ndarray:
    """Inverse contraction: E_jk = (1/4) sum_lm L(jk;lm) T_lm."""
    transfer = np.asarray(transfer, dtype=float)
    if transfer.shape != (4, 4):
        raise ValueError("transfer matrix must be 4 x 4")
    return 0.25 * np.einsum("jklm,lm->jk", l_table(), transfer)


def isometry_residuals(e_gram: np.ndarray) -> tuple[float, float]:
    """Residuals of the two isometry conditions on a Gram matrix.

    Returns (trace residual |sum_l E_ll - 1|, largest residual of
    Re E_0q = Im E_q'q'' over the cyclic triples).
    """
    e_gram = np.asarray(e_gram, dtype=complex)
    trace_err = abs(np.trace(e_gram) - 1.0)
    reim = max(abs(e_gram[0, q].real - e_gram[qp, qpp].imag) for q, qp, qpp in CYCLIC)
    return float(trace_err), float(reim)


def b_from_e(e_gram: np.ndarray, check: bool = True, tol: float = DEFAULT_TOL) -> AffineBlochMap:
    """Affine Bloch map of the B output from the machine Gram matrix.

    Args:
        e_gram: Hermitian 4 x 4 Gram matrix of the expansion vectors.
        check: verify the isometry conditions before converting.  Unchecked
            mode drops the first column of the transfer matrix, which is
            only meaningful input when those conditions hold.
        tol: tolerance for the isometry check.
    """
    full = transfer_from_gram(e_gram)
    if check:
        trace_err, reim = isometry_residuals(e_gram)
        if max(trace_err, reim) > tol:
            raise NotIsometricError(
                f"isometry conditions violated (trace {trace_err:.3e}, re/im {reim:.3e})"
            )
    return AffineBlochMap(full[0, 1:], full[1:, 1:])


def e_from_b(bmap: AffineBlochMap) -> np.ndarray:
    """Gram matrix whose B output realizes the given affine map."""
    return gram_from_transfer(bmap.as_matrix())


@dataclass(frozen=True)
class ConstraintReport:
    """Numerical summary of the physicality checks on a Gram matrix."""

    hermiticity_error: float
    trace_error: float
    isometry_error: float
    min_eigenvalue: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "hermiticity_error": self.hermiticity_error,
            "trace_error": self.trace_error,
            "isometry_error": self.isometry_error,
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def check_physical(e_gram: np.ndarray, tol: float = DEFAULT_TOL) -> ConstraintReport:
    """Check Hermiticity, positivity and the isometry conditions of a Gram matrix."""
    e_gram = np.asarray(e_gram, dtype=complex)
    if e_gram.shape != (4, 4):
        raise ValueError("Gram matrix must be 4 x 4")
    herm = hermiticity_error(e_gram)
    trace_err, reim = isometry_residuals(e_gram)
    sym = 0.5 * (e_gram + np.conj(e_gram).T)
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    passed = herm <= tol and trace_err <= tol and reim <= tol and min_eig >= -tol
    return ConstraintReport(
        hermiticity_error=herm,
        trace_error=trace_err,
        isometry_error=max(trace_err, reim),
        min_eigenvalue=min_eig,
        tolerance=tol,
        passed=bool(passed),
    )


# ---------------------------------------------------------------------------
# Diagonal form of the linear part


class DiagonalForm(NamedTuple):
    """Result of diagonalize: linear = rot_out @ diag(axes) @ rot_in."""

    axes: np.ndarray
    delta: np.ndarray
    rot_in: np.ndarray
    rot_out: np.ndarray


def diagonalize(bmap: AffineBlochMap) -> DiagonalForm:
    """Rotate an affine map into diagonal form with proper rotations.

    The linear part is factored as rot_out @ diag(axes) @ rot_in where both
    factors are rotations with determinant +1.  Determinant bookkeeping
    leaves at most one negative axis, and the axes are sorted by increasing
    magnitude.  The returned delta is the displacement expressed in the
    rotated output frame, rot_in @ bmap.delta: writing r' = rot_out^T r and
    s' = rot_in s, the map reads s' = delta' + diag(axes) r'.
    """
    u, s, vh = np.linalg.svd(bmap.linear)
    s = s.copy()
    neg_u = np.linalg.det(u) < 0
    neg_v = np.linalg.det(vh) < 0
    # Flip the smallest singular value's column/row so both factors become
    # proper rotations; a sign lands on the axes only when exactly one
    # factor was improper, so at most one axis can come out negative.
    if neg_u and neg_v:
        u[:, 2] *= -1.0
        vh[2, :] *= -1.0
    elif neg_u:
        u[:, 2] *= -1.0
        s[2] *= -1.0
    elif neg_v:
        vh[2, :] *= -1.0
        s[2] *= -1.0

    order = np.argsort(np.abs(s), kind="stable")
    perm = np.zeros((3, 3))
    perm[np.arange(3), order] = 1.0
    if np.linalg.det(perm) < 0:
        perm[0, :] *= -1.0  # signed permutation, keeps both factors proper
    rot_out = u @ perm.T
    rot_in = perm @ vh
    axes = s[order]
    return DiagonalForm(axes=axes, delta=rot_in @ bmap.delta, rot_in=rot_in, rot_out=rot_out)


# ---------------------------------------------------------------------------
# Centered machines: attainable axes and explicit isometries


def tetrahedron_violations(b, tol: float = 1e-12) -> list[str]:
    """Names of the attainability inequalities violated by semi-axes b."""
    b = np.asarray(b, dtype=float)
    if b.shape != (3,):
        raise ValueError("semi-axes must have three components")
    bad = []
    if b.sum() < -1.0 - tol:
        bad.append("b1+b2+b3 < -1")
    for q, qp, qpp in CYCLIC:
        if b[q - 1] + b[qp - 1] > 1.0 + b[qpp - 1] + tol:
            bad.append(f"b{q}+b{qp} > 1+b{qpp}")
    return bad


def tetrahedron_check(b, tol: float = 1e-12) -> bool:
    """True when b lies in the tetrahedron of attainable centered semi-axes.

    The vertices are (1,1,1) and the three permutations of (1,-1,-1).
    """
    return not tetrahedron_violations(b, tol=tol)


def isometry_from_beta(beta, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Explicit 8 x 2 copying isometry for machine coefficients beta.

    beta weights the four Pauli error channels; sum of squares must be 1.
    Rows are ordered |bcd> with the B bit most significant.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (4,):
        raise ValueError("beta must have four components")
    if abs(beta @ beta - 1.0) > tol:
        raise NotNormalizedError(f"coefficients have squared norm {beta @ beta:.12f}")
    b0, b1, b2, b3 = beta
    v = np.zeros((8, 2), dtype=complex)
    v[0, 0] = (b0 + b3) * _RT2  # |000>
    v[3, 0] = (b0 - b3) * _RT2  # |011>
    v[5, 0] = (b1 + b2) * _RT2  # |101>
    v[6, 0] = (b1 - b2) * _RT2  # |110>
    v[1, 1] = (b1 - b2) * _RT2  # |001>
    v[2, 1] = (b1 + b2) * _RT2  # |010>
    v[4, 1] = (b0 - b3) * _RT2  # |100>
    v[7, 1] = (b0 + b3) * _RT2  # |111>
    return v


def isometry_from_e_vectors(e_vectors: np.ndarray) -> np.ndarray:
    """Assemble V = sum_l sigma_l (x) |e_l> from four expansion vectors.

    e_vectors has shape (4, d); the result has shape (2 d, 2) with row index
    d * b + e.
    """
    e_vectors = np.asarray(e_vectors, dtype=complex)
    if e_vectors.ndim != 2 or e_vectors.shape[0] != 4:
        raise ValueError("expected four expansion vectors as rows")
    v3 = np.einsum("lba,ld->bda", SIGMA, e_vectors)
    return v3.reshape(2 * e_vectors.shape[1], 2)


def extract_e_vectors(v: np.ndarray) -> np.ndarray:
    """Recover the four expansion vectors from an isometry into B (x) E.

    Inverts isometry_from_e_vectors via e_l[d] = (1/2) sum_ba conj(sigma_l[b,a]) V[(b,d),a].
    Accepts any even number of rows; the E dimension is rows / 2.
    """
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] % 2:
        raise ValueError("expected a (2 d) x 2 isometry matrix")
    d = v.shape[0] // 2
    v3 = v.reshape(2, d, 2)
    return 0.5 * np.einsum("lba,bda->ld", SIGMA.conj(), v3)


def gram_matrix(e_vectors: np.ndarray) -> np.ndarray:
    """Gram matrix E_lm = <e_l|e_m> of the expansion vectors."""
    e_vectors = np.asarray(e_vectors, dtype=complex)
    return e_vectors.conj() @ e_vectors.T


def realize_e_vectors(e_gram: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Concrete expansion vectors in the 4-dimensional E space with the given Gram matrix.

    The realization is fixed by the eigendecomposition of the Gram matrix
    and is unique up to a unitary on E.  Eigenvalues in [-tol, 0) are
    clipped to zero; anything lower raises NotPhysicalError.
    """
    e_gram = np.asarray(e_gram, dtype=complex)
    if e_gram.shape != (4, 4):
        raise ValueError("Gram matrix must be 4 x 4")
    w, u = np.linalg.eigh(0.5 * (e_gram + np.conj(e_gram).T))
    if w[0] < -tol:
        raise NotPhysicalError(f"Gram matrix has negative eigenvalue {w[0]:.3e}")
    w = np.maximum(w, 0.0)
    return u.conj() * np.sqrt(w)[None, :]


def affine_map_from_isometry(v: np.ndarray, subsystem: str = "B") -> AffineBlochMap:
    """Affine Bloch map of one output qubit of an isometry, via state pushes.

    subsystem "B" works for any E dimension; "C" requires the standard
    4-dimensional E = C (x) D split.
    """
    from .linalg import partial_trace  # local import keeps module load light

    v = np.asarray(v, dtype=complex)
    d = v.shape[0] // 2
    sub = subsystem.upper()
    if sub == "B":
        dims, keep = (2, d), (0,)
    elif sub == "C":
        if d != 4:
            raise ValueError("C output requires a 4-dimensional E space")
        dims, keep = (2, 2, 2), (1,)
    else:
        raise ValueError("subsystem must be 'B' or 'C'")

    plus = np.zeros((3, 3))
    minus = np.zeros((3, 3))
    for q in range(3):
        for sign, store in ((1.0, plus), (-1.0, minus)):
            r = np.zeros(3)
            r[q] = sign
            rho_out = v @ density_from_bloch(r) @ np.conj(v).T
            store[q] = bloch_vector(partial_trace(rho_out, dims, keep))
    linear = 0.5 * (plus - minus)  # row q of the linear part
    delta = 0.5 * (plus + minus).mean(axis=0)
    return AffineBlochMap(delta, linear)


# ---------------------------------------------------------------------------
# JSON helpers for complex matrices


def complex_matrix_to_json(m: np.ndarray) -> list:
    """Encode a complex matrix as nested [re, im] pairs, row-major."""
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def complex_matrix_from_json(obj) -> np.ndarray:
    """Inverse of complex_matrix_to_json."""
    rows = []
    for row in obj:
        rows.append([complex(re, im) for re, im in row])
    return np.array(rows, dtype=complex)
